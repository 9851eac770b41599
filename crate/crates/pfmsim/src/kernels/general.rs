//! General relaxation-form phase-field kernel.
//!
//! `eta dphi/dt = kappa lap(phi) - w'(phi) - g'(phi) (f_b1 - f_b2)` recast as
//! an internal-energy rate `-eta dphi/dt - w' - g' (f_b1 - f_b2)` with flux
//! `+kappa grad(phi)`.

use super::{diag3, KernelInput, KernelResponse};

/// `w` and `g` return `(value, first, second)` derivatives; `f_b1`/`f_b2` are
/// the bulk free-energy densities of the two phases at the point.
#[allow(clippy::too_many_arguments)]
pub fn allen_cahn_kernel(
    input: &KernelInput,
    w: impl Fn(f64) -> (f64, f64, f64),
    g: impl Fn(f64) -> (f64, f64, f64),
    f_b1: f64,
    f_b2: f64,
    kappa: f64,
    eta: f64,
) -> KernelResponse {
    let phi = input.s;
    let d_phi = phi - input.s_old;
    let (_, wp, wpp) = w(phi);
    let (_, gp, gpp) = g(phi);
    let df = f_b1 - f_b2;
    let mut r = KernelResponse::zero();
    r.u_new = input.u_old - eta * d_phi - (wp + gp * df) * input.dt;
    r.du_ds = -eta - (wpp + gpp * df) * input.dt;
    for i in 0..3 {
        r.flux[i] = kappa * input.grad_s[i];
    }
    r.dflux_dgrad = diag3(kappa);
    r
}
