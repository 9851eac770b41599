//! Two weak-form arrangements of a pure-diffusion law with spatially varying
//! mobility, used to verify that they coincide for constant mobility and
//! diverge when the mobility varies in space.
//!
//! Form (a), rate-scaled (the arrangement the dissolution kernel uses):
//! `(1/L(x)) dphi/dt + div(-grad phi) = 0`.
//! Form (c), flux-scaled:
//! `dphi/dt + div(-L(x) grad phi) = 0`.

use super::{diag3, KernelInput, KernelResponse};

pub fn rate_scaled_mobility_kernel(input: &KernelInput, l_at_point: f64) -> KernelResponse {
    let mut r = KernelResponse::zero();
    r.u_new = input.u_old + (input.s - input.s_old) / l_at_point;
    r.du_ds = 1.0 / l_at_point;
    for i in 0..3 {
        r.flux[i] = -input.grad_s[i];
    }
    r.dflux_dgrad = diag3(-1.0);
    r
}

pub fn flux_scaled_mobility_kernel(input: &KernelInput, l_at_point: f64) -> KernelResponse {
    let mut r = KernelResponse::zero();
    r.u_new = input.u_old + (input.s - input.s_old);
    r.du_ds = 1.0;
    for i in 0..3 {
        r.flux[i] = -l_at_point * input.grad_s[i];
    }
    r.dflux_dgrad = diag3(-l_at_point);
    r
}
