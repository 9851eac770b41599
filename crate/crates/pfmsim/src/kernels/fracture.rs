//! Phase-field fracture (AT2) as a diffusion kernel.
//!
//! The evolution law `G_c (phi/ell - ell lap(phi)) + g'(phi) H = 0` is divided
//! by `G_c ell`, giving a rate `phi/ell^2 + g'(phi) H / (G_c ell)` and flux
//! `-grad(phi)`. The equation has no own time derivative, so the increment is
//! scaled by `dt` and the assembled backward-Euler rate is step-size free.

use super::{diag3, KernelInput, KernelResponse};
use crate::mechanics::degradation_at2;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FractureParams {
    /// Critical energy release rate (possibly already degraded by hydrogen).
    pub g_c: f64,
    /// Phase-field length scale.
    pub ell: f64,
}

/// `h` is the committed history-field value at the point, `h >= 0`.
pub fn fracture_kernel(input: &KernelInput, params: &FractureParams, h: f64) -> KernelResponse {
    let phi = input.s;
    let (_, gp, gpp) = degradation_at2(phi);
    let ell2 = params.ell * params.ell;
    let drive = h / (params.g_c * params.ell);
    let mut r = KernelResponse::zero();
    r.u_new = input.u_old + (phi / ell2 + gp * drive) * input.dt;
    r.du_ds = (1.0 / ell2 + gpp * drive) * input.dt;
    for i in 0..3 {
        r.flux[i] = -input.grad_s[i];
    }
    r.dflux_dgrad = diag3(-1.0);
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn undamaged_state_is_stationary() {
        let p = FractureParams { g_c: 2700.0, ell: 4e-3 };
        let input = KernelInput::new(0.0, 0.0, [0.0; 3], 1.0);
        let r = fracture_kernel(&input, &p, 0.0);
        assert_eq!(r.u_new, 0.0);
        assert_eq!(r.flux, [0.0; 3]);
    }

    #[test]
    fn rate_at_half_damage_with_critical_history() {
        // H = G_c / ell makes the drive 1/ell^2; with g' = -1 the rate is -0.5/ell^2
        let p = FractureParams { g_c: 10.0, ell: 0.2 };
        let input = KernelInput::new(0.5, 0.5, [0.0; 3], 1.0);
        let r = fracture_kernel(&input, &p, p.g_c / p.ell);
        let ell2 = p.ell * p.ell;
        assert_relative_eq!(r.u_new, -0.5 / ell2, max_relative = 1e-14);
    }
}
