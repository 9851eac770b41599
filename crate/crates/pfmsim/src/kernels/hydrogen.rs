//! Hydrogen transport with hydrostatic-stress drift, and the coverage-based
//! toughness degradation.

use super::{diag3, KernelInput, KernelResponse};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct HydrogenParams {
    /// Hydrogen diffusivity.
    pub d_h: f64,
    /// Partial molar volume of hydrogen.
    pub v_h: f64,
    /// Gas constant in the working unit system.
    pub r_gas: f64,
    /// Absolute temperature.
    pub t_k: f64,
    /// Gibbs free-energy difference of the decohering interface.
    pub delta_g_b0: f64,
    /// Damage coefficient, in [0, 1].
    pub chi_h: f64,
}

/// `dc_H/dt + div(-D_H grad c_H + D_H/(R T) c_H V_H grad sigma_h) = 0`.
///
/// The drift term floors `c_H` at zero so a small transport overshoot cannot
/// reverse its sign; the derivative block is consistent with that choice.
pub fn hydrogen_kernel(
    input: &KernelInput,
    params: &HydrogenParams,
    _sigma_h: f64,
    grad_sigma_h: &[f64; 3],
) -> KernelResponse {
    let drift = params.d_h * params.v_h / (params.r_gas * params.t_k);
    let c = input.s.max(0.0);
    let dc_ds = if input.s >= 0.0 { 1.0 } else { 0.0 };
    let mut r = KernelResponse::zero();
    r.u_new = input.u_old + (input.s - input.s_old);
    r.du_ds = 1.0;
    for i in 0..3 {
        r.flux[i] = -params.d_h * input.grad_s[i] + drift * c * grad_sigma_h[i];
        r.dflux_ds[i] = drift * dc_ds * grad_sigma_h[i];
    }
    r.dflux_dgrad = diag3(-params.d_h);
    r
}

/// Coverage from the Langmuir-McLean isotherm and the linear toughness
/// degradation `G_c = (1 - chi_H theta) G_c0`.
///
/// `c_h` must be in impurity mole fraction units (see
/// [`wppm_to_mole_fraction`]).
pub fn hydrogen_toughness(c_h: f64, params: &HydrogenParams, g_c0: f64) -> Result<f64> {
    if c_h < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "hydrogen concentration must be non-negative, got {c_h}"
        )));
    }
    let k = (-params.delta_g_b0 / (params.r_gas * params.t_k)).exp();
    let theta = c_h / (c_h + k);
    Ok((1.0 - params.chi_h * theta) * g_c0)
}

/// Converts weight parts-per-million of hydrogen in an iron-base metal to
/// impurity mole fraction: `x = wppm * 1e-6 * M_Fe / M_H`.
pub fn wppm_to_mole_fraction(wppm: f64) -> f64 {
    const M_FE: f64 = 55.847;
    const M_H: f64 = 1.00794;
    wppm * 1e-6 * (M_FE / M_H)
}
