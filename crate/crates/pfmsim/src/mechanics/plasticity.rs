//! J2 plasticity, implicit radial return with isotropic power-law hardening.

use super::{ElasticProps, MaterialPointState, PlasticProps};
use crate::error::{Error, Result};
use crate::tensor::{SymTensor, Tangent};

/// Result of one radial-return stress update.
#[derive(Clone, Debug)]
pub struct J2Outcome {
    /// Stress of the undamaged configuration.
    pub sigma0: SymTensor,
    /// Consistent tangent d(sigma0)/d(eps).
    pub c_ep: Tangent,
    /// Elastic strain energy density.
    pub psi_e: f64,
    /// Updated accumulated plastic work density.
    pub psi_p: f64,
    /// Updated plastic strain tensor.
    pub eps_p: SymTensor,
    /// Updated equivalent plastic strain.
    pub eps_p_eq: f64,
    /// Equivalent plastic strain increment of this update.
    pub d_eps_p_eq: f64,
}

/// Radial-return update driven by the mechanical strain (total strain with
/// any thermal part already removed). Rate-independent, small strain.
///
/// On exit `sigma0` lies on or inside the yield surface to `1e-12 sigma_y`;
/// plastic work grows by `sigma0 : d(eps_p)`.
pub fn j2_return_map(
    eps_mech: &SymTensor,
    state: &MaterialPointState,
    elastic: &ElasticProps,
    plastic: &PlasticProps,
) -> Result<J2Outcome> {
    let (lambda, mu) = (elastic.lambda(), elastic.mu());
    let c0 = Tangent::isotropic(lambda, mu);
    let eps_e_trial = eps_mech.sub(&state.eps_p);
    let sigma_trial = c0.apply(&eps_e_trial);
    let s_trial = sigma_trial.deviator();
    let q_trial = (1.5 * s_trial.ddot(&s_trial)).sqrt();

    let yield_now = plastic.flow_stress(elastic.e, state.eps_p_eq);
    if q_trial <= yield_now {
        let psi_e = 0.5 * sigma_trial.ddot(&eps_e_trial);
        return Ok(J2Outcome {
            sigma0: sigma_trial,
            c_ep: c0,
            psi_e,
            psi_p: state.psi_p,
            eps_p: state.eps_p,
            eps_p_eq: state.eps_p_eq,
            d_eps_p_eq: 0.0,
        });
    }

    // scalar Newton for the plastic multiplier
    let mut dp = 0.0f64;
    let tol = 1e-12 * plastic.sigma_y;
    let mut residual = f64::INFINITY;
    for _ in 0..100 {
        let f = q_trial - 3.0 * mu * dp - plastic.flow_stress(elastic.e, state.eps_p_eq + dp);
        residual = f.abs();
        if residual <= tol {
            break;
        }
        let hprime = plastic.hardening_modulus(elastic.e, state.eps_p_eq + dp);
        let step = f / (3.0 * mu + hprime);
        dp += step;
        if dp < 0.0 {
            dp = 0.0;
        }
    }
    if residual > 1e-9 * plastic.sigma_y {
        return Err(Error::ReturnMap { residual });
    }

    let n = s_trial.scale(1.5 / q_trial); // flow direction, eq-norm one
    let d_eps_p = n.scale(dp);
    let eps_p = state.eps_p.add(&d_eps_p);
    let eps_p_eq = state.eps_p_eq + dp;
    let sigma0 = sigma_trial.sub(&n.scale(2.0 * mu * dp));
    let eps_e = eps_mech.sub(&eps_p);
    let psi_e = 0.5 * sigma0.ddot(&eps_e);
    let psi_p = state.psi_p + sigma0.ddot(&d_eps_p);

    // consistent tangent
    let hprime = plastic.hardening_modulus(elastic.e, eps_p_eq);
    let mut c_ep = c0;
    c_ep.add_dyad(-4.0 * mu * mu / (3.0 * mu + hprime), &n, &n);
    let k = 4.0 * mu * mu * dp / q_trial;
    // -(k) * [ (3/2) I_dev - n (x) n ]
    c_ep.add_dyad(k, &n, &n);
    // (3/2) I_dev in Voigt: 3/2 (I_sym - 1/3 I (x) I)
    for i in 0..3 {
        for j in 0..3 {
            c_ep.m[i][j] += k * 0.5;
        }
        c_ep.m[i][i] -= k * 1.5;
        c_ep.m[i + 3][i + 3] -= k * 0.75;
    }

    Ok(J2Outcome { sigma0, c_ep, psi_e, psi_p, eps_p, eps_p_eq, d_eps_p_eq: dp })
}
