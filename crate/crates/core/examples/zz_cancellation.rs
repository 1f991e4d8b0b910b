//! Cancels the residual `Z_1 Z_2` coupling of the flux-tuned two-qubit device
//! with a continuous tone half way between the even-register transitions.

use paritysim::circuit::{optimize_flux, rad_to_ghz, CircuitParams, FluxOptions};
use paritysim::dynamics::{zz_phase_rate, CancellationTone, Device, Noise, ProbeOptions};
use paritysim::effective::EffectiveModel;
use paritysim::pulses::cancellation_tone;

fn main() -> paritysim::Result<()> {
    let r = optimize_flux(&CircuitParams::two_qubit_reference(), &FluxOptions::default())?;
    let mut dev = Device::new(EffectiveModel::rotating(2, r.params.mean_coupling(), r.params.ancilla_anharmonicity), Noise::none());
    dev.zz = r.params.zz[0][1];
    let mhz = |w: f64| rad_to_ghz(w) * 1e3;
    let probe = ProbeOptions::default();
    let best = cancellation_tone(&dev, &probe)?;
    println!("g = {:.2} MHz, g12 = {:.4} MHz", mhz(dev.model.coupling), mhz(best.undriven));
    println!("tone at {:+.2} MHz (mirrored: {})", mhz(best.tone.detuning), best.mirrored);
    for k in 0..=6 {
        let amplitude = best.tone.amplitude * k as f64 / 4.0;
        let p = zz_phase_rate(&dev, Some(&CancellationTone { amplitude, ..best.tone }), &probe)?;
        println!("  Omega = {:7.3} MHz  ->  g12_eff = {:+.5} MHz", mhz(amplitude), mhz(p.rate));
    }
    println!("optimum {:.4} MHz leaves {:.2e} MHz", mhz(best.tone.amplitude), mhz(best.residual));
    Ok(())
}
