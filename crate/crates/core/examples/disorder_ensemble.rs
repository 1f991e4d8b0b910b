//! Junction-energy disorder on the two-qubit device: coupling statistics over
//! the flux sweep and how many samples can be retuned.

use paritysim::circuit::{disorder_ensemble, ghz_to_rad, CircuitParams, DisorderOptions};

fn main() -> paritysim::Result<()> {
    let samples = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(50);
    let opts = DisorderOptions { samples, seed: 11, ..DisorderOptions::default() };
    let res = disorder_ensemble(&CircuitParams::two_qubit_reference(), &opts)?;
    println!("flux   g1 mean/std [MHz]   g2 mean/std [MHz]   (ideal g1, g2)");
    for (s, ideal) in res.summary.iter().zip(&res.ideal) {
        let m = |x: f64| x * 1e3 / std::f64::consts::TAU;
        println!(
            "{:<6} {:8.2} {:6.2}     {:8.2} {:6.2}     ({:.2}, {:.2})",
            s.flux,
            m(s.mean_g[0]),
            m(s.std_g[0]),
            m(s.mean_g[1]),
            m(s.std_g[1]),
            m(ideal.coupling[0]),
            m(ideal.coupling[1])
        );
    }
    println!(
        "{} samples, {} redraws, retunable below 1 MHz: {:.1}%",
        res.samples.len(),
        res.total_redraws(),
        100.0 * res.retunable_fraction(ghz_to_rad(1e-3))
    );
    Ok(())
}
