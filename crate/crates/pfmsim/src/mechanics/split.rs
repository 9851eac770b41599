//! Strain-energy splits.
//!
//! The no-tension decomposition assigns to the second (fully damaged) phase
//! only the part of the energy that survives when the material cannot carry
//! tension. Branch selection follows the published if/else-if chain on the
//! ordered principal strains (`e3 >= e2 >= e1`); ties go to the first
//! satisfied branch. The second-phase tangent is assembled spectrally so it
//! is the consistent derivative of the second-phase stress, including the
//! eigenprojector terms that the compact normal-block formula omits; at
//! repeated eigenvalues the standard limit is used, which yields one valid
//! subgradient.

use super::ElasticProps;
use crate::tensor::{SymTensor, Tangent};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitKind {
    None,
    NoTension,
}

/// Outcome of a strain-energy split at one material point.
///
/// `stress1`/`c1` belong to the pristine phase (full isotropic response of
/// the given strain), `stress2`/`c2` to the fully damaged phase. The damaged
/// stress and tangent at phase value `phi` are `g * (.)1 + (1 - g) * (.)2`.
#[derive(Clone, Debug)]
pub struct SplitResult {
    pub psi1: f64,
    pub psi2: f64,
    pub stress1: SymTensor,
    pub stress2: SymTensor,
    pub c1: Tangent,
    pub c2: Tangent,
}

impl SplitResult {
    /// Fracture driving force `psi1 - psi2`.
    pub fn driving_force(&self) -> f64 {
        self.psi1 - self.psi2
    }
}

fn isotropic_energy(eps: &SymTensor, lambda: f64, mu: f64) -> f64 {
    let tr = eps.trace();
    0.5 * lambda * tr * tr + mu * eps.ddot(eps)
}

/// No decomposition: the whole energy drives damage, the damaged phase is
/// stress-free.
pub fn isotropic_split_none(eps: &SymTensor, props: &ElasticProps) -> SplitResult {
    let c0 = Tangent::isotropic(props.lambda(), props.mu());
    SplitResult {
        psi1: isotropic_energy(eps, props.lambda(), props.mu()),
        psi2: 0.0,
        stress1: c0.apply(eps),
        stress2: SymTensor::ZERO,
        c1: c0,
        c2: Tangent::ZERO,
    }
}

/// No-tension decomposition.
///
/// The four branches on ordered principal strains (`e1 <= e2 <= e3`):
/// 1. `e1 > 0`                          second phase carries nothing;
/// 2. `e2 + nu e1 > 0`                  uniaxial compression survives;
/// 3. `(1-nu) e3 + nu (e1+e2) > 0`      biaxial compression survives;
/// 4. otherwise                          full stiffness survives.
pub fn no_tension_split(eps: &SymTensor, props: &ElasticProps) -> SplitResult {
    let (e_mod, nu) = (props.e, props.nu);
    let (lambda, mu) = (props.lambda(), props.mu());
    let c0 = Tangent::isotropic(lambda, mu);
    let psi1 = isotropic_energy(eps, lambda, mu);
    let stress1 = c0.apply(eps);

    let (vals, vecs) = eps.eigen();
    let (e1, e2, e3) = (vals[0], vals[1], vals[2]);

    // principal second-phase values: psi2, sigma2' and the normal tangent block
    let (psi2, sig_p, c_norm): (f64, [f64; 3], [[f64; 3]; 3]) = if e1 > 0.0 {
        (0.0, [0.0; 3], [[0.0; 3]; 3])
    } else if e2 + nu * e1 > 0.0 {
        let psi2 = 0.5 * e_mod * e1 * e1;
        let mut c = [[0.0; 3]; 3];
        c[0][0] = e_mod;
        (psi2, [e_mod * e1, 0.0, 0.0], c)
    } else if (1.0 - nu) * e3 + nu * (e1 + e2) > 0.0 {
        let f = e_mod / (1.0 - nu * nu);
        let psi2 = 0.5 * f * (e1 * e1 + e2 * e2 + 2.0 * nu * e1 * e2);
        let mut c = [[0.0; 3]; 3];
        c[0][0] = f;
        c[1][1] = f;
        c[0][1] = nu * f;
        c[1][0] = nu * f;
        (psi2, [f * (e1 + nu * e2), f * (e2 + nu * e1), 0.0], c)
    } else {
        // pure compression: second phase keeps the full stiffness
        return SplitResult {
            psi1,
            psi2: psi1,
            stress1,
            stress2: stress1,
            c1: c0,
            c2: c0,
        };
    };

    // spectral assembly of stress2 and its consistent tangent
    let projs = [
        SymTensor::sym_dyad(&vecs[0], &vecs[0]),
        SymTensor::sym_dyad(&vecs[1], &vecs[1]),
        SymTensor::sym_dyad(&vecs[2], &vecs[2]),
    ];
    let mut stress2 = SymTensor::ZERO;
    for a in 0..3 {
        stress2 = stress2.add(&projs[a].scale(sig_p[a]));
    }
    let mut c2 = Tangent::ZERO;
    for a in 0..3 {
        for b in 0..3 {
            if c_norm[a][b] != 0.0 {
                c2.add_dyad(c_norm[a][b], &projs[a], &projs[b]);
            }
        }
    }
    let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    for a in 0..3 {
        for b in (a + 1)..3 {
            let de = vals[a] - vals[b];
            let g_ab = if de.abs() > 1e-9 * scale {
                (sig_p[a] - sig_p[b]) / de
            } else {
                0.5 * (c_norm[a][a] + c_norm[b][b]) - 0.5 * (c_norm[a][b] + c_norm[b][a])
            };
            if g_ab != 0.0 {
                let m_ab = SymTensor::sym_dyad(&vecs[a], &vecs[b]);
                c2.add_dyad(2.0 * g_ab, &m_ab, &m_ab);
            }
        }
    }

    SplitResult { psi1, psi2, stress1, stress2, c1: c0, c2 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mechanics::{degraded_tangent, total_stress, Degradation};
    use approx::assert_relative_eq;
    use nalgebra::{Matrix3, Vector3};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const PROPS: ElasticProps = ElasticProps { e: 210e9, nu: 0.3, alpha_t: 0.0, t0: 0.0 };

    fn random_strain(rng: &mut impl Rng, scale: f64) -> SymTensor {
        SymTensor::new(
            rng.random_range(-scale..scale),
            rng.random_range(-scale..scale),
            rng.random_range(-scale..scale),
            rng.random_range(-scale..scale),
            rng.random_range(-scale..scale),
            rng.random_range(-scale..scale),
        )
    }

    fn random_rotation(rng: &mut impl Rng) -> Matrix3<f64> {
        // QR of a random matrix, sign-fixed
        let m = Matrix3::from_fn(|_, _| rng.random_range(-1.0..1.0));
        let qr = m.qr();
        let mut q = qr.q();
        if q.determinant() < 0.0 {
            let col: Vector3<f64> = -q.column(0);
            q.set_column(0, &col);
        }
        q
    }

    fn branch(eps: &SymTensor, nu: f64) -> usize {
        let (v, _) = eps.eigen();
        if v[0] > 0.0 {
            1
        } else if v[1] + nu * v[0] > 0.0 {
            2
        } else if (1.0 - nu) * v[2] + nu * (v[0] + v[1]) > 0.0 {
            3
        } else {
            4
        }
    }

    #[test]
    fn hydrostatic_tension_first_branch() {
        let eps = SymTensor::spherical(1e-3);
        let r = no_tension_split(&eps, &PROPS);
        assert_eq!(r.psi2, 0.0);
        assert_eq!(r.c2.max_abs(), 0.0);
        assert!(r.psi1 > 0.0);
    }

    #[test]
    fn hydrostatic_compression_keeps_full_stiffness() {
        let eps = SymTensor::spherical(-1e-3);
        let r = no_tension_split(&eps, &PROPS);
        assert_relative_eq!(r.psi2, r.psi1, max_relative = 1e-14);
        for i in 0..6 {
            for j in 0..6 {
                assert_relative_eq!(r.c2.m[i][j], r.c1.m[i][j], epsilon = 1e-3);
            }
        }
        // fully damaged material still transmits hydrostatic compression
        let s = total_stress(&r, 1.0, Degradation::At2, 0.0, 0.0);
        assert_relative_eq!(s.v[0], r.stress1.v[0], max_relative = 1e-14);
    }

    #[test]
    fn second_branch_energy_is_uniaxial() {
        // e1 = -a < 0 with e2 + nu e1 > 0
        let a = 1e-3;
        let eps = SymTensor::new(-a, 0.8 * a, 0.9 * a, 0.0, 0.0, 0.0);
        assert_eq!(branch(&eps, PROPS.nu), 2);
        let r = no_tension_split(&eps, &PROPS);
        assert_relative_eq!(r.psi2, 0.5 * PROPS.e * a * a, max_relative = 1e-12);
    }

    #[test]
    fn psi1_dominates_psi2() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let eps = random_strain(&mut rng, 1e-3);
            let r = no_tension_split(&eps, &PROPS);
            assert!(r.psi2 >= -1e-12 * r.psi1.abs());
            assert!(r.psi1 >= r.psi2 - 1e-9 * r.psi1.abs().max(1e-30));
        }
    }

    #[test]
    fn frame_indifference() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let eps = random_strain(&mut rng, 1e-3);
            let q = random_rotation(&mut rng);
            let r = no_tension_split(&eps, &PROPS);
            let rq = no_tension_split(&eps.rotate(&q), &PROPS);
            let scale = r.psi1.abs().max(1e-30);
            assert!((rq.psi2 - r.psi2).abs() <= 1e-9 * scale.max(r.psi2.abs()));
            let rotated = r.stress2.rotate(&q);
            let sscale = r.stress1.norm().max(1e-30);
            for i in 0..6 {
                assert!(
                    (rq.stress2.v[i] - rotated.v[i]).abs() <= 1e-9 * sscale,
                    "stress2 not objective"
                );
            }
        }
    }

    #[test]
    fn tangent_matches_finite_differences_inside_branches() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut seen = [0usize; 4];
        let mut tried = 0;
        while seen.iter().any(|&c| c < 30) && tried < 100_000 {
            tried += 1;
            let eps = random_strain(&mut rng, 1e-3);
            let b = branch(&eps, PROPS.nu);
            // stay strictly inside the branch: re-check after perturbation size
            let h = 1e-9;
            let mut inside = true;
            for k in 0..6 {
                for s in [-1.0, 1.0] {
                    let mut ep = eps;
                    ep.v[k] += s * h * if k < 3 { 1.0 } else { 0.5 };
                    if branch(&ep, PROPS.nu) != b {
                        inside = false;
                    }
                }
            }
            if !inside {
                continue;
            }
            // also avoid nearly repeated eigenvalues where the quotient
            // formula loses digits against FD
            let (v, _) = eps.eigen();
            if (v[1] - v[0]).abs() < 5e-5 || (v[2] - v[1]).abs() < 5e-5 {
                continue;
            }
            seen[b - 1] += 1;
            let phi = rng.random_range(0.0..1.0);
            let r = no_tension_split(&eps, &PROPS);
            let c = degraded_tangent(&r, phi, Degradation::At2);
            // FD of the degraded stress w.r.t. engineering strain entries
            let mut fd = [[0.0f64; 6]; 6];
            for k in 0..6 {
                let dt = if k < 3 { h } else { 0.5 * h }; // tensor perturbation for eng step h
                let mut ep = eps;
                ep.v[k] += dt;
                let mut em = eps;
                em.v[k] -= dt;
                let sp = total_stress(&no_tension_split(&ep, &PROPS), phi, Degradation::At2, 0.0, 0.0);
                let sm = total_stress(&no_tension_split(&em, &PROPS), phi, Degradation::At2, 0.0, 0.0);
                for i in 0..6 {
                    fd[i][k] = (sp.v[i] - sm.v[i]) / (2.0 * h);
                }
            }
            let scale = c.max_abs();
            for i in 0..6 {
                for j in 0..6 {
                    assert!(
                        (c.m[i][j] - fd[i][j]).abs() <= 1e-5 * scale,
                        "branch {b} entry ({i},{j}): {} vs fd {}",
                        c.m[i][j],
                        fd[i][j]
                    );
                }
            }
        }
        assert!(seen.iter().all(|&c| c >= 30), "branch coverage: {seen:?}");
    }

    #[test]
    fn energy_consistency_stress_is_energy_gradient() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut checked = 0;
        while checked < 200 {
            let eps = random_strain(&mut rng, 1e-3);
            let b = branch(&eps, PROPS.nu);
            let h = 1e-9;
            let phi = rng.random_range(0.0..1.0);
            let (g, _, _) = Degradation::At2.eval(phi);
            let r = no_tension_split(&eps, &PROPS);
            let sigma = total_stress(&r, phi, Degradation::At2, 0.0, 0.0);
            let mut ok_point = true;
            let mut fd = [0.0f64; 6];
            for k in 0..6 {
                let dt = if k < 3 { h } else { 0.5 * h };
                let mut ep = eps;
                ep.v[k] += dt;
                let mut em = eps;
                em.v[k] -= dt;
                if branch(&ep, PROPS.nu) != b || branch(&em, PROPS.nu) != b {
                    ok_point = false;
                    break;
                }
                let rp = no_tension_split(&ep, &PROPS);
                let rm = no_tension_split(&em, &PROPS);
                let wp = g * rp.psi1 + (1.0 - g) * rp.psi2;
                let wm = g * rm.psi1 + (1.0 - g) * rm.psi2;
                fd[k] = (wp - wm) / (2.0 * h);
            }
            if !ok_point {
                continue;
            }
            checked += 1;
            let scale = sigma.norm().max(1e-6 * PROPS.e);
            for k in 0..6 {
                assert!(
                    (sigma.v[k] - fd[k]).abs() <= 1e-5 * scale,
                    "component {k}: {} vs {}",
                    sigma.v[k],
                    fd[k]
                );
            }
        }
    }

    #[test]
    fn split_none_pure_shear_energy() {
        let gamma = 1e-3;
        let eps = SymTensor::new(0.0, 0.0, 0.0, 0.5 * gamma, 0.0, 0.0);
        let r = isotropic_split_none(&eps, &PROPS);
        assert_relative_eq!(r.psi1, 0.5 * PROPS.mu() * gamma * gamma, max_relative = 1e-12);
        assert_eq!(r.psi2, 0.0);
        // sign flip leaves the quadratic form unchanged
        let rm = isotropic_split_none(&eps.scale(-1.0), &PROPS);
        assert_relative_eq!(rm.psi1, r.psi1, max_relative = 1e-14);
        assert_eq!(isotropic_split_none(&SymTensor::ZERO, &PROPS).psi1, 0.0);
    }
}
