//! Flux bias that equalizes the qubit-ancilla couplings of both reference
//! devices.

use paritysim::circuit::{optimize_flux, CircuitParams, FluxOptions};

fn main() -> paritysim::Result<()> {
    for (name, params) in [("two-qubit", CircuitParams::two_qubit_reference()), ("four-qubit", CircuitParams::four_qubit_reference())] {
        let r = optimize_flux(&params, &FluxOptions::default())?;
        let p = r.params.to_ghz();
        println!("{name}: flux = {:.4?} (ring {} pinned), {} evaluations", r.flux, r.pinned.map_or(0, |k| k + 1), r.evaluations);
        println!("  g [MHz]      = {:.3?}", p.coupling.iter().map(|g| g * 1e3).collect::<Vec<_>>());
        println!("  spread [kHz] = {:.3}", p.coupling_spread() * 1e6);
        println!("  qubits [GHz] = {:.4?}, ancilla = {:.4} GHz", p.qubit_freq, p.ancilla_freq);
    }
    Ok(())
}
