//! Material-point constitutive laws.
//!
//! Linear isotropic elasticity with optional thermal strain and Biot
//! effective stress, strain-energy splits (none / no-tension), J2 plasticity
//! with power-law hardening, the two degradation functions and the fracture
//! history field. Everything here is a pure function of (inputs, state-in);
//! per-point state is only committed by the solver at increment acceptance.

mod plasticity;
mod split;

pub use plasticity::{j2_return_map, J2Outcome};
pub use split::{isotropic_split_none, no_tension_split, SplitKind, SplitResult};

use crate::tensor::{SymTensor, Tangent};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ElasticProps {
    /// Young's modulus.
    pub e: f64,
    /// Poisson's ratio.
    pub nu: f64,
    /// Thermal expansion coefficient (0 when thermal strain is unused).
    pub alpha_t: f64,
    /// Reference (stress-free) temperature.
    pub t0: f64,
}

impl ElasticProps {
    pub fn new(e: f64, nu: f64) -> Self {
        ElasticProps { e, nu, alpha_t: 0.0, t0: 0.0 }
    }

    pub fn lambda(&self) -> f64 {
        self.e * self.nu / ((1.0 + self.nu) * (1.0 - 2.0 * self.nu))
    }

    pub fn mu(&self) -> f64 {
        self.e / (2.0 * (1.0 + self.nu))
    }

    pub fn bulk(&self) -> f64 {
        self.e / (3.0 * (1.0 - 2.0 * self.nu))
    }

    pub fn validate(&self) -> crate::Result<()> {
        if !(self.e > 0.0) {
            return Err(crate::Error::config("material.elastic.E", "E must be > 0"));
        }
        if !(self.nu > -1.0 && self.nu < 0.5) {
            return Err(crate::Error::config("material.elastic.nu", "nu must be in (-1, 0.5)"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PlasticProps {
    /// Initial yield stress.
    pub sigma_y: f64,
    /// Strain hardening exponent in `sigma_f = sigma_y (1 + E eps_p / sigma_y)^N`.
    pub n_hard: f64,
}

impl PlasticProps {
    /// Power-law flow stress at equivalent plastic strain `ep`.
    pub fn flow_stress(&self, e: f64, ep: f64) -> f64 {
        self.sigma_y * (1.0 + e * ep / self.sigma_y).powf(self.n_hard)
    }

    /// d(flow stress)/d(ep).
    pub fn hardening_modulus(&self, e: f64, ep: f64) -> f64 {
        e * self.n_hard * (1.0 + e * ep / self.sigma_y).powf(self.n_hard - 1.0)
    }

    pub fn validate(&self) -> crate::Result<()> {
        if !(self.sigma_y > 0.0) {
            return Err(crate::Error::config("material.plastic.sigma_y", "sigma_y must be > 0"));
        }
        if !(0.0..=1.0).contains(&self.n_hard) {
            return Err(crate::Error::config("material.plastic.N_hard", "N must be in [0, 1]"));
        }
        Ok(())
    }
}

/// Per-integration-point memory.
///
/// `h` and `eps_p_eq` are non-decreasing in time; strain tensors are
/// symmetric by representation. The FRDR clock (`t_cycle`, `eps_p_cycle`)
/// lives per point: film rupture is a localized event.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MaterialPointState {
    /// Total strain at last commit.
    pub eps: SymTensor,
    /// Plastic strain tensor.
    pub eps_p: SymTensor,
    /// Equivalent plastic strain.
    pub eps_p_eq: f64,
    /// Accumulated plastic work density.
    pub psi_p: f64,
    /// Fracture history field (running max of the driving force).
    pub h: f64,
    /// Plastic strain accumulated in the current film-rupture cycle.
    pub eps_p_cycle: f64,
    /// Time spent in the current film-rupture cycle.
    pub t_cycle: f64,
    /// Volumetric strain rate over the current increment.
    pub eps_vol_rate: f64,
    /// Hydrostatic stress (of the undamaged configuration).
    pub sigma_h: f64,
}

/// AT2 degradation `g(phi) = (1 - phi)^2`; returns `(g, g', g'')`.
pub fn degradation_at2(phi: f64) -> (f64, f64, f64) {
    let one = 1.0 - phi;
    (one * one, -2.0 * one, 2.0)
}

/// Dissolution interpolation `g(phi) = -2 phi^3 + 3 phi^2`; returns `(g, g', g'')`.
pub fn degradation_corrosion(phi: f64) -> (f64, f64, f64) {
    (
        phi * phi * (3.0 - 2.0 * phi),
        6.0 * phi * (1.0 - phi),
        6.0 - 12.0 * phi,
    )
}

/// Which degradation function scales the first-phase contribution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Degradation {
    At2,
    Corrosion,
}

impl Degradation {
    /// Evaluates on phi clamped to [0, 1] (module policy: the phase field may
    /// overshoot slightly under AT2 or staggered transport).
    pub fn eval(self, phi: f64) -> (f64, f64, f64) {
        let p = phi.clamp(0.0, 1.0);
        match self {
            Degradation::At2 => degradation_at2(p),
            Degradation::Corrosion => degradation_corrosion(p),
        }
    }
}

/// Isotropic Hooke tensor. The 6x6 Voigt form serves both plane strain
/// (out-of-plane strain rows simply stay zero) and 3D.
pub fn elastic_tangent(props: &ElasticProps) -> Tangent {
    Tangent::isotropic(props.lambda(), props.mu())
}

/// Thermal strain `alpha_T (T - T0) I`.
pub fn thermal_strain(t: f64, props: &ElasticProps) -> SymTensor {
    SymTensor::spherical(props.alpha_t * (t - props.t0))
}

/// Total stress: degraded split stress minus Biot pore pressure.
///
/// `sigma = g(phi) d(psi1)/d(eps) + (1 - g) d(psi2)/d(eps) - alpha_b p I`.
pub fn total_stress(
    split: &SplitResult,
    phi: f64,
    degradation: Degradation,
    alpha_b: f64,
    p: f64,
) -> SymTensor {
    let (g, _, _) = degradation.eval(phi);
    let mut s = split.stress1.scale(g).add(&split.stress2.scale(1.0 - g));
    s.v[0] -= alpha_b * p;
    s.v[1] -= alpha_b * p;
    s.v[2] -= alpha_b * p;
    s
}

/// Degraded tangent `g C1 + (1 - g) C2` at the given phase value.
pub fn degraded_tangent(split: &SplitResult, phi: f64, degradation: Degradation) -> Tangent {
    let (g, _, _) = degradation.eval(phi);
    split.c1.scale(g).add(&split.c2.scale(1.0 - g))
}

/// History field update: `H = max(H_old, psi1 - psi2)`.
pub fn history_update(h_old: f64, psi1: f64, psi2: f64) -> f64 {
    h_old.max(psi1 - psi2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn degradation_at2_values() {
        assert_eq!(degradation_at2(0.0), (1.0, -2.0, 2.0));
        assert_eq!(degradation_at2(1.0), (0.0, 0.0, 2.0));
        assert_eq!(degradation_at2(0.5), (0.25, -1.0, 2.0));
    }

    #[test]
    fn degradation_corrosion_values() {
        assert_eq!(degradation_corrosion(0.0), (0.0, 0.0, 6.0));
        let (g, gp, gpp) = degradation_corrosion(1.0);
        assert_relative_eq!(g, 1.0);
        assert_relative_eq!(gp, 0.0);
        assert_relative_eq!(gpp, -6.0);
        assert_relative_eq!(degradation_corrosion(0.5).0, 0.5);
        // monotone increasing on [0,1]
        for i in 0..100 {
            let gp = degradation_corrosion(i as f64 / 100.0).1;
            assert!(gp >= 0.0);
        }
    }

    #[test]
    fn elastic_tangent_nu_zero_gives_half_shear() {
        let c = elastic_tangent(&ElasticProps::new(1.0, 0.0));
        assert_relative_eq!(c.m[3][3], 0.5);
        assert_relative_eq!(c.m[0][0], 1.0);
        assert_relative_eq!(c.m[0][1], 0.0);
    }

    #[test]
    fn elastic_tangent_plane_strain_value() {
        let c = elastic_tangent(&ElasticProps::new(210e9, 0.3));
        let expected = 210e9 * 0.7 / (1.3 * 0.4);
        assert_relative_eq!(c.m[0][0], expected, max_relative = 1e-12);
        assert_relative_eq!(expected, 282.7e9, max_relative = 1e-3);
    }

    #[test]
    fn elastic_tangent_grows_toward_incompressible() {
        let mut last = 0.0;
        for nu in [0.3, 0.4, 0.45, 0.49, 0.499] {
            let c = elastic_tangent(&ElasticProps::new(1.0, nu));
            assert!(c.m[0][0] > last);
            last = c.m[0][0];
        }
    }

    #[test]
    fn thermal_strain_values() {
        let props = ElasticProps { e: 1.0, nu: 0.0, alpha_t: 7.5e-6, t0: 300.0 };
        assert_eq!(thermal_strain(300.0, &props), SymTensor::ZERO);
        let et = thermal_strain(20.0, &props); // dT = -280 K
        assert_relative_eq!(et.v[0], -2.1e-3, max_relative = 1e-12);
        let et2 = thermal_strain(-260.0, &props); // dT doubled
        assert_relative_eq!(et2.v[0], 2.0 * et.v[0], max_relative = 1e-12);
    }

    #[test]
    fn history_is_a_running_max() {
        assert_eq!(history_update(5.0, 3.0, 0.0), 5.0);
        assert_eq!(history_update(0.0, 7.0, 0.0), 7.0);
        // unloading after a peak freezes H
        let mut h = 0.0;
        for psi in [1.0, 4.0, 9.0, 2.0, 0.5] {
            h = history_update(h, psi, 0.0);
        }
        assert_eq!(h, 9.0);
    }

    #[test]
    fn total_stress_biot_term() {
        let props = ElasticProps::new(210e9, 0.3);
        let split = isotropic_split_none(&SymTensor::ZERO, &props);
        let s = total_stress(&split, 0.0, Degradation::At2, 1.0, 10e6);
        assert_relative_eq!(s.v[0], -10e6);
        assert_relative_eq!(s.v[1], -10e6);
        assert_relative_eq!(s.v[2], -10e6);
        assert_relative_eq!(s.v[3], 0.0);
    }
}
