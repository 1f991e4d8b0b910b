//! Four-qubit flip driven by two tones, scored against the flip with the
//! residual phase `chi` of the advanced scheme. Each channel takes a few
//! seconds; pass gate times in ns as arguments to change the sweep.

use std::f64::consts::TAU;

use paritysim::dynamics::{pcf_gate, Device, Noise};
use paritysim::effective::EffectiveModel;
use paritysim::pulses::{Envelope, Scheme};

fn main() -> paritysim::Result<()> {
    let mut times: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    if times.is_empty() {
        times = vec![30.0, 40.0];
    }
    let dev = Device::new(EffectiveModel::rotating(4, -TAU * 0.2, -TAU * 0.1), Noise::new(40_000.0, 40_000.0));
    for t in times {
        let env = Envelope::pi_pulse(t, 0.5)?;
        for scheme in [Scheme::Basic, Scheme::Advanced] {
            let r = pcf_gate(&dev, &env, 0.0, scheme, 0.01)?;
            println!("T = {t} ns, {scheme}: F = {:.5}, chi = {:.4}, leakage = {:.2e}", r.process_fidelity, r.chi, r.leakage);
        }
    }
    Ok(())
}
