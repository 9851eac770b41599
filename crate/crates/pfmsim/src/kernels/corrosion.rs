//! Dissolution (short range) and metal-ion transport (long range).
//!
//! The chemical free energy is
//! `psi_ch(c, phi) = A (c - g(phi) (c_Se - c_Le) - c_Le)^2 + omega phi^2 (1-phi)^2`
//! with the cubic interpolation `g(phi) = -2 phi^3 + 3 phi^2`. The interface
//! energy and thickness follow from the double-well height and gradient
//! coefficient: `gamma = sqrt(kappa omega / 18)`, `ell_m = sqrt(8 kappa / omega)`.

use super::{diag3, KernelInput, KernelResponse};
use crate::error::{Error, Result};
use crate::mechanics::{degradation_corrosion, MaterialPointState};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CorrosionParams {
    /// Curvature of the chemical free energy density.
    pub a_curv: f64,
    /// Double-well height.
    pub omega: f64,
    /// Gradient energy coefficient.
    pub kappa: f64,
    /// Normalised solid equilibrium concentration (1 by definition).
    pub c_se: f64,
    /// Normalised liquid equilibrium concentration `c_sat / c_solid`.
    pub c_le: f64,
    /// Metal-ion diffusivity.
    pub d_m: f64,
    /// Reference interface mobility.
    pub l0: f64,
    /// Molar volume (mechanochemical exponent scale).
    pub v_m: f64,
    /// Film stability coefficient (0 disables repassivation decay).
    pub k_film: f64,
    /// Time before decay starts within a film cycle.
    pub t0_film: f64,
    /// Critical film-rupture strain ending a cycle.
    pub eps_f: f64,
    /// Absolute temperature.
    pub t_k: f64,
    /// Gas constant in the working unit system.
    pub r_gas: f64,
}

impl CorrosionParams {
    /// Interface energy `sqrt(kappa omega / 18)`.
    pub fn interface_energy(&self) -> f64 {
        (self.kappa * self.omega / 18.0).sqrt()
    }

    /// Interface thickness `sqrt(8 kappa / omega)`.
    pub fn interface_thickness(&self) -> f64 {
        (8.0 * self.kappa / self.omega).sqrt()
    }
}

/// Value and the derivatives of the chemical free energy density.
#[derive(Clone, Copy, Debug)]
pub struct ChemicalFreeEnergy {
    pub psi: f64,
    pub dpsi_dphi: f64,
    pub d2psi_dphi2: f64,
    pub dpsi_dc: f64,
}

pub fn chemical_free_energy(c: f64, phi: f64, p: &CorrosionParams) -> ChemicalFreeEnergy {
    let dc = p.c_se - p.c_le;
    let (g, gp, gpp) = degradation_corrosion(phi);
    let q = c - g * dc - p.c_le;
    let w = p.omega * phi * phi * (1.0 - phi) * (1.0 - phi);
    let wp = 2.0 * p.omega * phi * (1.0 - phi) * (1.0 - 2.0 * phi);
    let wpp = 2.0 * p.omega * (1.0 - 6.0 * phi + 6.0 * phi * phi);
    ChemicalFreeEnergy {
        psi: p.a_curv * q * q + w,
        dpsi_dphi: -2.0 * p.a_curv * q * gp * dc + wp,
        d2psi_dphi2: 2.0 * p.a_curv * (gp * dc) * (gp * dc) - 2.0 * p.a_curv * q * gpp * dc + wpp,
        dpsi_dc: 2.0 * p.a_curv * q,
    }
}

/// Dissolution phase-field kernel:
/// `(1/L) dphi/dt = kappa lap(phi) - d(psi_ch)/d(phi)`.
///
/// `c` is the metal-ion concentration at the point (auxiliary input).
pub fn corrosion_phase_kernel(
    input: &KernelInput,
    params: &CorrosionParams,
    l_effective: f64,
    c: f64,
) -> Result<KernelResponse> {
    if !(l_effective > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "interface mobility must be positive, got {l_effective}"
        )));
    }
    let phi = input.s;
    let chem = chemical_free_energy(c, phi, params);
    let mut r = KernelResponse::zero();
    r.u_new = input.u_old - (phi - input.s_old) / l_effective - chem.dpsi_dphi * input.dt;
    r.du_ds = -1.0 / l_effective - chem.d2psi_dphi2 * input.dt;
    for i in 0..3 {
        r.flux[i] = params.kappa * input.grad_s[i];
    }
    r.dflux_dgrad = diag3(params.kappa);
    Ok(r)
}

/// Metal-ion transport:
/// `dc/dt - div(D_m grad(c - g(phi)(c_Se - c_Le) - c_Le)) = 0`.
///
/// `phi`/`grad_phi` are auxiliary; `phi` is clamped before the interpolation.
pub fn ion_transport_kernel(
    input: &KernelInput,
    params: &CorrosionParams,
    phi: f64,
    grad_phi: &[f64; 3],
) -> KernelResponse {
    let dc = p_dc(params);
    let (_, gp, _) = degradation_corrosion(phi.clamp(0.0, 1.0));
    let mut r = KernelResponse::zero();
    r.u_new = input.u_old + (input.s - input.s_old);
    r.du_ds = 1.0;
    for i in 0..3 {
        r.flux[i] = -params.d_m * input.grad_s[i] + params.d_m * dc * gp * grad_phi[i];
    }
    r.dflux_dgrad = diag3(-params.d_m);
    r
}

fn p_dc(p: &CorrosionParams) -> f64 {
    p.c_se - p.c_le
}

/// Mechanochemically enhanced interface mobility with film-rupture decay.
///
/// `k_m = (eps_p_eq / eps_y + 1) exp(sigma_h V_m / (R T))`; within a film
/// cycle the mobility decays exponentially once `t_cycle` passes the onset
/// time. The cycle clock itself is advanced (and reset on rupture) by the
/// solver at increment commit.
pub fn mobility(state: &MaterialPointState, params: &CorrosionParams, yield_strain: f64) -> f64 {
    let strain_factor = if yield_strain > 0.0 { state.eps_p_eq / yield_strain + 1.0 } else { 1.0 };
    let k_m = strain_factor * (state.sigma_h * params.v_m / (params.r_gas * params.t_k)).exp();
    let base = k_m * params.l0;
    if params.k_film > 0.0 && state.t_cycle > params.t0_film {
        base * (-params.k_film * (state.t_cycle - params.t0_film)).exp()
    } else {
        base
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params() -> CorrosionParams {
        // Table-style values in mm-N-s units
        CorrosionParams {
            a_curv: 53.5,
            omega: 35.3,
            kappa: 5.1e-5,
            c_se: 1.0,
            c_le: 5.1 / 143.0,
            d_m: 8.5e-4,
            l0: 2e6,
            v_m: 2000.0,
            k_film: 0.0,
            t0_film: 0.0,
            eps_f: 3e-3,
            t_k: 300.0,
            r_gas: 8314.0,
        }
    }

    #[test]
    fn equilibria_have_zero_energy() {
        let p = params();
        let solid = chemical_free_energy(1.0, 1.0, &p);
        assert_relative_eq!(solid.psi, 0.0, epsilon = 1e-12);
        let liquid = chemical_free_energy(p.c_le, 0.0, &p);
        assert_relative_eq!(liquid.psi, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn concentration_curvature_is_2a() {
        let p = params();
        for (c, phi) in [(0.3, 0.2), (0.9, 0.8), (0.5, 0.5)] {
            let h = 1e-6;
            let up = chemical_free_energy(c + h, phi, &p);
            let dn = chemical_free_energy(c - h, phi, &p);
            let second = (up.dpsi_dc - dn.dpsi_dc) / (2.0 * h);
            assert_relative_eq!(second, 2.0 * p.a_curv, max_relative = 1e-8);
        }
    }

    #[test]
    fn phase_kernel_stationary_at_equilibrium() {
        let p = params();
        let input = KernelInput::new(1.0, 1.0, [0.0; 3], 0.1);
        let r = corrosion_phase_kernel(&input, &p, p.l0, 1.0).unwrap();
        assert_relative_eq!(r.u_new, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn rate_term_scales_inversely_with_mobility() {
        let p = params();
        let mut input = KernelInput::new(0.6, 0.5, [0.0; 3], 0.1);
        input.u_old = 0.0;
        let r1 = corrosion_phase_kernel(&input, &p, 1.0, 0.7).unwrap();
        let r2 = corrosion_phase_kernel(&input, &p, 2.0, 0.7).unwrap();
        let chem = chemical_free_energy(0.7, 0.6, &p);
        let rate1 = r1.u_new + chem.dpsi_dphi * input.dt;
        let rate2 = r2.u_new + chem.dpsi_dphi * input.dt;
        assert_relative_eq!(rate1, 2.0 * rate2, max_relative = 1e-12);
        assert!(corrosion_phase_kernel(&input, &p, 0.0, 0.7).is_err());
    }

    #[test]
    fn interface_identities_table_values() {
        let p = params();
        // gamma ~ 10 J/m^2 = 0.01 N/mm, ell_m ~ 3.4 um
        assert_relative_eq!(p.interface_energy(), 0.010, max_relative = 2e-3);
        assert_relative_eq!(p.interface_thickness(), 3.40e-3, max_relative = 1e-2);
        assert_relative_eq!(p.c_le, 0.03566, max_relative = 1e-3);
    }

    #[test]
    fn ion_flux_terms() {
        let p = params();
        // uniform c and phi: no flux
        let input = KernelInput::new(0.4, 0.4, [0.0; 3], 0.1);
        let r = ion_transport_kernel(&input, &p, 0.5, &[0.0; 3]);
        assert_eq!(r.flux, [0.0; 3]);
        // uniform phi, unit concentration gradient
        let input = KernelInput::new(0.4, 0.4, [1.0, 0.0, 0.0], 0.1);
        let r = ion_transport_kernel(&input, &p, 0.5, &[0.0; 3]);
        assert_relative_eq!(r.flux[0], -p.d_m);
    }

    #[test]
    fn mobility_baseline_and_scalings() {
        let p = params();
        let state = MaterialPointState::default();
        assert_relative_eq!(mobility(&state, &p, 2.7e-3), p.l0);
        // hydrostatic stress chosen so the exponent is ln 2 doubles L
        let mut s2 = state.clone();
        s2.sigma_h = (p.r_gas * p.t_k / p.v_m) * 2f64.ln();
        assert_relative_eq!(mobility(&s2, &p, 2.7e-3), 2.0 * p.l0, max_relative = 1e-12);
        // k_film = 0: no decay however long the cycle
        let mut s3 = state.clone();
        s3.t_cycle = 1e9;
        assert_relative_eq!(mobility(&s3, &p, 2.7e-3), p.l0);
        // with film decay active
        let mut pf = p;
        pf.k_film = 5e-4;
        pf.t0_film = 10.0;
        let mut s4 = state;
        s4.t_cycle = 5.0;
        assert_relative_eq!(mobility(&s4, &pf, 2.7e-3), p.l0);
        s4.t_cycle = 2010.0;
        assert_relative_eq!(mobility(&s4, &pf, 2.7e-3), p.l0 * (-1.0f64).exp(), max_relative = 1e-12);
    }
}
