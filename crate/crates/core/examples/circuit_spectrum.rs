//! Effective parameters of the two-qubit reference device at several flux
//! points, with all three spectrum methods.

use paritysim::circuit::{device_params, CircuitParams, Method, SpectrumOptions, Truncation};

fn main() -> paritysim::Result<()> {
    let opts = SpectrumOptions::default();
    println!("flux    method  w1[GHz]  w2[GHz]  wP[GHz]  g1[MHz]   g2[MHz]  g12[MHz]  theta[GHz]");
    for flux in [0.0, 0.03, 0.06, 0.09] {
        let p = CircuitParams::two_qubit_reference().with_flux(&[flux, 0.0]);
        for method in [Method::Rwa, Method::Sw2, Method::Exact] {
            let e = device_params(&p, method, Truncation::default(), &opts)?.to_ghz();
            println!(
                "{flux:<7} {method:<7} {:8.4} {:8.4} {:8.4} {:9.2} {:9.2} {:8.3}  {:8.3}",
                e.qubit_freq[0],
                e.qubit_freq[1],
                e.ancilla_freq,
                e.coupling[0] * 1e3,
                e.coupling[1] * 1e3,
                e.zz[0][1] * 1e3,
                e.theta_freq[0],
            );
        }
    }
    Ok(())
}
