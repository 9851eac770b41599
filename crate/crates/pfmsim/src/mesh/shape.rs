//! Shape-function evaluation and isoparametric mapping.

use super::ElementKind;
use crate::error::{Error, Result};

/// Shape functions and their local-coordinate gradients at one point.
#[derive(Clone, Debug)]
pub struct ShapeEval {
    /// N_i, one per node.
    pub n: Vec<f64>,
    /// dN_i/dxi, row-major (node-major): `dn[i * dim + a]`.
    pub dn_dxi: Vec<f64>,
    pub dim: usize,
}

/// Evaluates shape functions at a local point.
///
/// Partition of unity holds for every kind; the local gradients sum to zero
/// componentwise.
pub fn shape_eval(kind: ElementKind, xi: &[f64]) -> ShapeEval {
    match kind {
        ElementKind::Tri3 => {
            let (r, s) = (xi[0], xi[1]);
            ShapeEval {
                n: vec![1.0 - r - s, r, s],
                dn_dxi: vec![-1.0, -1.0, 1.0, 0.0, 0.0, 1.0],
                dim: 2,
            }
        }
        ElementKind::Quad4 => {
            let (r, s) = (xi[0], xi[1]);
            let signs = [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)];
            let mut n = Vec::with_capacity(4);
            let mut dn = Vec::with_capacity(8);
            for &(a, b) in &signs {
                n.push(0.25 * (1.0 + a * r) * (1.0 + b * s));
                dn.push(0.25 * a * (1.0 + b * s));
                dn.push(0.25 * b * (1.0 + a * r));
            }
            ShapeEval { n, dn_dxi: dn, dim: 2 }
        }
        ElementKind::Quad8 => {
            let (r, s) = (xi[0], xi[1]);
            let corners = [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)];
            let mut n = vec![0.0; 8];
            let mut dn = vec![0.0; 16];
            for (i, &(a, b)) in corners.iter().enumerate() {
                n[i] = 0.25 * (1.0 + a * r) * (1.0 + b * s) * (a * r + b * s - 1.0);
                dn[2 * i] = 0.25 * a * (1.0 + b * s) * (2.0 * a * r + b * s);
                dn[2 * i + 1] = 0.25 * b * (1.0 + a * r) * (a * r + 2.0 * b * s);
            }
            // mid-side nodes: 4 bottom, 5 right, 6 top, 7 left
            let mids = [(0.0, -1.0), (1.0, 0.0), (0.0, 1.0), (-1.0, 0.0)];
            for (k, &(a, b)) in mids.iter().enumerate() {
                let i = 4 + k;
                if a == 0.0 {
                    n[i] = 0.5 * (1.0 - r * r) * (1.0 + b * s);
                    dn[2 * i] = -r * (1.0 + b * s);
                    dn[2 * i + 1] = 0.5 * b * (1.0 - r * r);
                } else {
                    n[i] = 0.5 * (1.0 + a * r) * (1.0 - s * s);
                    dn[2 * i] = 0.5 * a * (1.0 - s * s);
                    dn[2 * i + 1] = -s * (1.0 + a * r);
                }
            }
            ShapeEval { n, dn_dxi: dn, dim: 2 }
        }
        ElementKind::Hex8 => {
            let (r, s, t) = (xi[0], xi[1], xi[2]);
            let signs = [
                (-1.0, -1.0, -1.0),
                (1.0, -1.0, -1.0),
                (1.0, 1.0, -1.0),
                (-1.0, 1.0, -1.0),
                (-1.0, -1.0, 1.0),
                (1.0, -1.0, 1.0),
                (1.0, 1.0, 1.0),
                (-1.0, 1.0, 1.0),
            ];
            let mut n = Vec::with_capacity(8);
            let mut dn = Vec::with_capacity(24);
            for &(a, b, c) in &signs {
                n.push(0.125 * (1.0 + a * r) * (1.0 + b * s) * (1.0 + c * t));
                dn.push(0.125 * a * (1.0 + b * s) * (1.0 + c * t));
                dn.push(0.125 * b * (1.0 + a * r) * (1.0 + c * t));
                dn.push(0.125 * c * (1.0 + a * r) * (1.0 + b * s));
            }
            ShapeEval { n, dn_dxi: dn, dim: 3 }
        }
    }
}

/// Maps local gradients to physical space.
///
/// Returns `(det J, dN/dx)` with `dN/dx` node-major like `dn_dxi`. Fails on a
/// non-positive or non-finite Jacobian determinant.
pub fn map_gradients(dim: usize, coords: &[f64], se: &ShapeEval) -> Result<(f64, Vec<f64>)> {
    let (det_j, dn_dx) = map_gradients_impl(dim, coords, se);
    if !(det_j.is_finite() && det_j > 0.0) {
        return Err(Error::InvertedElement { element: usize::MAX, gp: 0, det_j });
    }
    Ok((det_j, dn_dx))
}

pub(crate) fn map_gradients_impl(dim: usize, coords: &[f64], se: &ShapeEval) -> (f64, Vec<f64>) {
    let n_nodes = se.n.len();
    debug_assert_eq!(coords.len(), n_nodes * dim);
    // J_ab = d x_a / d xi_b = sum_i x_i[a] dN_i/dxi_b
    let mut j = [[0.0f64; 3]; 3];
    for i in 0..n_nodes {
        for a in 0..dim {
            let xa = coords[i * dim + a];
            for b in 0..dim {
                j[a][b] += xa * se.dn_dxi[i * dim + b];
            }
        }
    }
    let (det_j, jinv) = invert(dim, &j);
    // dN/dx_a = sum_b dN/dxi_b * (J^{-1})_ba
    let mut dn_dx = vec![0.0; n_nodes * dim];
    for i in 0..n_nodes {
        for a in 0..dim {
            let mut acc = 0.0;
            for b in 0..dim {
                acc += se.dn_dxi[i * dim + b] * jinv[b][a];
            }
            dn_dx[i * dim + a] = acc;
        }
    }
    (det_j, dn_dx)
}

fn invert(dim: usize, j: &[[f64; 3]; 3]) -> (f64, [[f64; 3]; 3]) {
    let mut inv = [[0.0f64; 3]; 3];
    if dim == 2 {
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        let d = 1.0 / det;
        inv[0][0] = j[1][1] * d;
        inv[0][1] = -j[0][1] * d;
        inv[1][0] = -j[1][0] * d;
        inv[1][1] = j[0][0] * d;
        (det, inv)
    } else {
        let det = j[0][0] * (j[1][1] * j[2][2] - j[1][2] * j[2][1])
            - j[0][1] * (j[1][0] * j[2][2] - j[1][2] * j[2][0])
            + j[0][2] * (j[1][0] * j[2][1] - j[1][1] * j[2][0]);
        let d = 1.0 / det;
        inv[0][0] = (j[1][1] * j[2][2] - j[1][2] * j[2][1]) * d;
        inv[0][1] = (j[0][2] * j[2][1] - j[0][1] * j[2][2]) * d;
        inv[0][2] = (j[0][1] * j[1][2] - j[0][2] * j[1][1]) * d;
        inv[1][0] = (j[1][2] * j[2][0] - j[1][0] * j[2][2]) * d;
        inv[1][1] = (j[0][0] * j[2][2] - j[0][2] * j[2][0]) * d;
        inv[1][2] = (j[0][2] * j[1][0] - j[0][0] * j[1][2]) * d;
        inv[2][0] = (j[1][0] * j[2][1] - j[1][1] * j[2][0]) * d;
        inv[2][1] = (j[0][1] * j[2][0] - j[0][0] * j[2][1]) * d;
        inv[2][2] = (j[0][0] * j[1][1] - j[0][1] * j[1][0]) * d;
        (det, inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::Rng;
    use rand::SeedableRng;

    fn random_interior(kind: ElementKind, rng: &mut impl Rng) -> Vec<f64> {
        match kind {
            ElementKind::Tri3 => loop {
                let r = rng.random_range(0.0..1.0);
                let s = rng.random_range(0.0..1.0);
                if r + s < 1.0 {
                    return vec![r, s];
                }
            },
            ElementKind::Quad4 | ElementKind::Quad8 => {
                vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]
            }
            ElementKind::Hex8 => vec![
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ],
        }
    }

    #[test]
    fn partition_of_unity_and_gradient_sum() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for kind in [
            ElementKind::Tri3,
            ElementKind::Quad4,
            ElementKind::Quad8,
            ElementKind::Hex8,
        ] {
            for _ in 0..100 {
                let xi = random_interior(kind, &mut rng);
                let se = shape_eval(kind, &xi);
                let sum: f64 = se.n.iter().sum();
                assert!((sum - 1.0).abs() < 1e-12, "{kind:?}");
                for a in 0..se.dim {
                    let gsum: f64 = (0..se.n.len()).map(|i| se.dn_dxi[i * se.dim + a]).sum();
                    assert!(gsum.abs() < 1e-12, "{kind:?}");
                }
            }
        }
    }

    #[test]
    fn quad4_values_at_named_points() {
        let se = shape_eval(ElementKind::Quad4, &[0.0, 0.0]);
        for v in &se.n {
            assert_relative_eq!(*v, 0.25);
        }
        let se = shape_eval(ElementKind::Quad4, &[-1.0, -1.0]);
        assert_relative_eq!(se.n[0], 1.0);
        assert_relative_eq!(se.n[1], 0.0);
        assert_relative_eq!(se.n[2], 0.0);
        assert_relative_eq!(se.n[3], 0.0);
    }

    #[test]
    fn quad8_centre_values() {
        let se = shape_eval(ElementKind::Quad8, &[0.0, 0.0]);
        for i in 0..4 {
            assert_relative_eq!(se.n[i], -0.25);
        }
        for i in 4..8 {
            assert_relative_eq!(se.n[i], 0.5);
        }
    }

    #[test]
    fn unit_quad_jacobian() {
        // axis-aligned square of side 1: det J = 1/4 and dN/dx = 2 dN/dxi
        let coords = [0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0];
        let se = shape_eval(ElementKind::Quad4, &[0.0, 0.0]);
        let (det_j, dn_dx) = map_gradients(2, &coords, &se).unwrap();
        assert_relative_eq!(det_j, 0.25);
        for i in 0..8 {
            assert_relative_eq!(dn_dx[i], 2.0 * se.dn_dxi[i], epsilon = 1e-14);
        }
        // side-2 square: identity map
        let coords2: Vec<f64> = coords.iter().map(|c| 2.0 * c - 1.0).collect();
        let (det_j, dn_dx) = map_gradients(2, &coords2, &se).unwrap();
        assert_relative_eq!(det_j, 1.0);
        for i in 0..8 {
            assert_relative_eq!(dn_dx[i], se.dn_dxi[i], epsilon = 1e-14);
        }
    }

    #[test]
    fn rotation_preserves_det_j() {
        let (c, s) = (0.5f64.sqrt(), 0.5f64.sqrt());
        let base = [0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0];
        let mut rot = [0.0; 8];
        for i in 0..4 {
            rot[2 * i] = c * base[2 * i] - s * base[2 * i + 1];
            rot[2 * i + 1] = s * base[2 * i] + c * base[2 * i + 1];
        }
        let se = shape_eval(ElementKind::Quad4, &[0.3, -0.4]);
        let (d0, _) = map_gradients(2, &base, &se).unwrap();
        let (d1, _) = map_gradients(2, &rot, &se).unwrap();
        assert_relative_eq!(d0, d1, epsilon = 1e-14);
    }

    #[test]
    fn singular_jacobian_reported() {
        // two coincident nodes collapse the element
        let coords = [0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 1.0];
        let se = shape_eval(ElementKind::Quad4, &[0.577, 0.577]);
        let r = map_gradients(2, &coords, &se);
        assert!(r.is_err() || r.unwrap().0 > 0.0);
    }

    #[test]
    fn linear_field_reproduction_at_quadrature_points() {
        // interpolating f(x) = a . x at the nodes reproduces f at the
        // quadrature points for every kind (patch test at interpolation level)
        use super::super::{generate_structured, QuadratureRule};
        for kind in [
            ElementKind::Tri3,
            ElementKind::Quad4,
            ElementKind::Quad8,
            ElementKind::Hex8,
        ] {
            let dim = kind.dim();
            let bounds = if dim == 2 {
                vec![[0.0, 1.3], [0.0, 0.7]]
            } else {
                vec![[0.0, 1.3], [0.0, 0.7], [0.0, 0.9]]
            };
            let m = generate_structured(&bounds, &vec![2; dim], kind).unwrap();
            let a = [1.25, -0.5, 2.0];
            let nodal: Vec<f64> = m
                .nodes
                .iter()
                .map(|n| n.coords.iter().zip(a.iter()).map(|(x, ai)| x * ai).sum())
                .collect();
            for e in &m.elements {
                let coords = m.element_coords(e);
                let rule = QuadratureRule::for_kind(kind);
                for pt in &rule.points {
                    let se = shape_eval(kind, pt);
                    let mut x = vec![0.0; dim];
                    let mut f = 0.0;
                    for (i, &nid) in e.node_ids.iter().enumerate() {
                        f += se.n[i] * nodal[nid];
                        for d in 0..dim {
                            x[d] += se.n[i] * coords[i * dim + d];
                        }
                    }
                    let exact: f64 = x.iter().zip(a.iter()).map(|(xi, ai)| xi * ai).sum();
                    assert!((f - exact).abs() < 1e-12, "kind {kind:?}");
                }
            }
        }
    }
}
