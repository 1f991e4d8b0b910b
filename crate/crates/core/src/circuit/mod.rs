//! Circuit quantization of the ring-modulator star and extraction of the
//! effective spin model.

pub mod disorder;
pub mod extract;
pub mod flux;
pub mod params;
pub mod potential;
pub mod quantize;
pub mod spectrum;

pub use disorder::{disorder_ensemble, DisorderOptions, DisorderResult};
pub use extract::{effective_params, EffectiveParams};
pub use flux::{optimize_flux, FluxOptions, FluxResult};
pub use params::{charging_energies, ghz_to_rad, rad_to_ghz, ChargingEnergies, CircuitParams};
pub use potential::{potential_minimum, potential_series, Polynomial};
pub use quantize::{quantize, quantize_at, QuarticHamiltonian, Truncation};
pub use spectrum::{retained_labels, spectrum, Label, Method, SpectrumOptions, SpectrumResult};

use crate::error::Result;

/// Quantize, diagonalize with `method`, and extract the spin model.
pub fn device_params(params: &CircuitParams, method: Method, truncation: Truncation, opts: &SpectrumOptions) -> Result<EffectiveParams> {
    let h = quantize(params, truncation)?;
    let s = spectrum(&h, method, &retained_labels(params.n_qubits()), opts)?;
    effective_params(&s)
}
