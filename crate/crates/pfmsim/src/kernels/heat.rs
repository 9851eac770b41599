//! Heat conduction with optionally damage-degraded conductivity.

use super::{diag3, KernelInput, KernelResponse};
use crate::mechanics::degradation_at2;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct HeatParams {
    /// Mass density.
    pub rho: f64,
    /// Specific heat.
    pub c_t: f64,
    /// Pristine thermal conductivity.
    pub k0: f64,
    /// Use `k_T(phi) = g(phi) k0` instead of `k_T = k0`.
    pub degrade_conductivity: bool,
}

/// `rho c_T dT/dt - div(k_T(phi) grad T) = q_T`.
pub fn heat_kernel(input: &KernelInput, params: &HeatParams, phi: f64) -> KernelResponse {
    let k_t = if params.degrade_conductivity {
        degradation_at2(phi.clamp(0.0, 1.0)).0 * params.k0
    } else {
        params.k0
    };
    let mut r = KernelResponse::zero();
    r.rho = params.rho;
    r.u_new = input.u_old + params.c_t * (input.s - input.s_old);
    r.du_ds = params.c_t;
    for i in 0..3 {
        r.flux[i] = -k_t * input.grad_s[i];
    }
    r.dflux_dgrad = diag3(-k_t);
    r.source = input.source;
    r
}
