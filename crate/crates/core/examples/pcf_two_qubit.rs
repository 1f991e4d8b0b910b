//! Process fidelity of the two-qubit parity-controlled flip versus gate
//! time, for both drive schemes, with and without decoherence.

use std::f64::consts::TAU;

use paritysim::dynamics::{pcf_gate, Device, Noise};
use paritysim::effective::EffectiveModel;
use paritysim::pulses::{Envelope, Scheme};

fn main() -> paritysim::Result<()> {
    let model = EffectiveModel::rotating(2, -TAU * 0.25, -TAU * 0.1);
    let noisy = Device::new(model.clone(), Noise::new(40_000.0, 40_000.0));
    let clean = Device::new(model, Noise::none());
    println!("T[ns]  scheme    F(noise)  F(no noise)  leakage");
    for t in [15.0, 20.0, 25.0, 30.0, 40.0] {
        let env = Envelope::pi_pulse(t, 0.5)?;
        for scheme in [Scheme::Basic, Scheme::Advanced] {
            let a = pcf_gate(&noisy, &env, 0.0, scheme, 0.01)?;
            let b = pcf_gate(&clean, &env, 0.0, scheme, 0.01)?;
            println!("{t:<6} {scheme:<9} {:.5}   {:.5}      {:.2e}", a.process_fidelity, b.process_fidelity, a.leakage);
        }
    }
    Ok(())
}
