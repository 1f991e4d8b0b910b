//! GHZ preparation: two four-qubit flips make a parity phase gate that maps
//! `|+>^4` onto the GHZ state.

use std::f64::consts::TAU;

use paritysim::dynamics::{ghz_factory, Device, Noise};
use paritysim::effective::EffectiveModel;
use paritysim::pulses::{Envelope, Scheme};

fn main() -> paritysim::Result<()> {
    let dev = Device::new(EffectiveModel::rotating(4, -TAU * 0.2, -TAU * 0.1), Noise::new(40_000.0, 40_000.0));
    println!("total[ns]  basic    advanced");
    for t in [25.0, 30.0, 37.5, 45.0] {
        let env = Envelope::pi_pulse(t, 0.5)?;
        let b = ghz_factory(&dev, &env, Scheme::Basic, 0.01)?;
        let a = ghz_factory(&dev, &env, Scheme::Advanced, 0.01)?;
        println!("{:<10} {:.5}  {:.5}", a.total_time, b.fidelity, a.fidelity);
    }
    Ok(())
}
