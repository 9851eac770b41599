//! Porous fluid flow across reservoir, transition and fracture domains.
//!
//! The mass balance
//! `rho_fl (S dp/dt + alpha_b chi_r d(eps_vol)/dt) + div(-rho_fl K/mu grad p) = q_m`
//! is divided through by the (constant) fluid density, so the kernel carries
//! `rho = 1`, the flux loses its `rho_fl` factor and the source becomes
//! `q_m / rho_fl`. Configured sources therefore keep the mass-rate units of
//! the balance above and are converted here.

use super::{diag3, KernelInput, KernelResponse};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FluidParams {
    /// Fluid mass density.
    pub rho_fl: f64,
    /// Dynamic viscosity.
    pub mu_fl: f64,
    /// Fluid compressibility.
    pub c_fl: f64,
    /// Biot coefficient of the reservoir domain.
    pub alpha_r: f64,
    /// Porosity of the reservoir domain.
    pub n_pr: f64,
    /// Reservoir permeability (isotropic).
    pub k_r: f64,
    /// Fracture permeability (isotropic).
    pub k_f: f64,
    /// Lower domain-indicator threshold.
    pub c1: f64,
    /// Upper domain-indicator threshold.
    pub c2: f64,
    /// Transient exponent on phi in the fracture permeability.
    pub b_exp: f64,
    /// Solid bulk modulus (storage term).
    pub k_bulk: f64,
}

/// Piecewise-linear reservoir/fracture indicator fields; they partition unity
/// for every phi.
pub fn domain_indicators(phi: f64, c1: f64, c2: f64) -> (f64, f64) {
    if phi <= c1 {
        (1.0, 0.0)
    } else if phi >= c2 {
        (0.0, 1.0)
    } else {
        let chi_f = (phi - c1) / (c2 - c1);
        (1.0 - chi_f, chi_f)
    }
}

/// `eps_vol_rate` is the volumetric strain rate from the mechanics state at
/// the point; `phi` selects the flow regime.
pub fn fluid_kernel(
    input: &KernelInput,
    params: &FluidParams,
    phi: f64,
    eps_vol_rate: f64,
) -> KernelResponse {
    let (chi_r, chi_f) = domain_indicators(phi, params.c1, params.c2);
    let alpha_b = chi_r * params.alpha_r + chi_f;
    let n_p = chi_r * params.n_pr + chi_f;
    let k_fl = chi_r * params.k_r + phi.max(0.0).powf(params.b_exp) * chi_f * params.k_f;
    let storage = (1.0 - alpha_b) * (alpha_b - n_p) / params.k_bulk + n_p * params.c_fl;
    let k_over_mu = k_fl / params.mu_fl;

    let mut r = KernelResponse::zero();
    r.u_new = input.u_old
        + storage * (input.s - input.s_old)
        + alpha_b * chi_r * eps_vol_rate * input.dt;
    r.du_ds = storage;
    for i in 0..3 {
        r.flux[i] = -k_over_mu * input.grad_s[i];
    }
    r.dflux_dgrad = diag3(-k_over_mu);
    r.source = input.source / params.rho_fl;
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params() -> FluidParams {
        FluidParams {
            rho_fl: 1000.0,
            mu_fl: 1e-3,
            c_fl: 1e-8,
            alpha_r: 2e-3,
            n_pr: 2e-3,
            k_r: 1e-15,
            k_f: 1.333e-6,
            c1: 0.4,
            c2: 1.0,
            b_exp: 1.0,
            k_bulk: 175e9,
        }
    }

    #[test]
    fn indicators_partition_unity() {
        for i in -10..=110 {
            let phi = i as f64 / 100.0;
            let (r, f) = domain_indicators(phi, 0.4, 1.0);
            assert_relative_eq!(r + f, 1.0);
        }
        assert_eq!(domain_indicators(0.0, 0.4, 1.0), (1.0, 0.0));
        assert_eq!(domain_indicators(1.0, 0.4, 1.0), (0.0, 1.0));
        assert_eq!(domain_indicators(0.7, 0.4, 1.0), (0.5, 0.5));
    }

    #[test]
    fn reservoir_storage_value() {
        // phi = 0: alpha_b = n_p = 2e-3, first term vanishes, S = n_p C_fl
        let p = params();
        let input = KernelInput::new(1.0, 0.0, [0.0; 3], 1.0);
        let r = fluid_kernel(&input, &p, 0.0, 0.0);
        assert_relative_eq!(r.du_ds, 2e-11, max_relative = 1e-12);
    }

    #[test]
    fn fracture_storage_is_fluid_compressibility() {
        let p = params();
        let input = KernelInput::new(1.0, 0.0, [0.0; 3], 1.0);
        let r = fluid_kernel(&input, &p, 1.0, 0.0);
        assert_relative_eq!(r.du_ds, p.c_fl, max_relative = 1e-12);
        // the volumetric coupling is gated by chi_r and vanishes in the crack
        let r2 = fluid_kernel(&input, &p, 1.0, 5.0);
        assert_relative_eq!(r2.u_new, r.u_new);
    }

    #[test]
    fn source_divided_by_density() {
        let p = params();
        let mut input = KernelInput::new(0.0, 0.0, [0.0; 3], 1.0);
        input.source = 4000.0;
        let r = fluid_kernel(&input, &p, 1.0, 0.0);
        assert_relative_eq!(r.source, 4.0);
    }
}
