//! Gauss quadrature rules.
//!
//! Full integration by default: 2x2 for quad4, 3x3 for quad8, 2x2x2 for hex8
//! and a single point for tri3. Reduced 1-point variants exist behind
//! [`QuadratureRule::reduced`] but are not used by the shipped drivers.

use super::ElementKind;

const G2: f64 = 0.577_350_269_189_625_8; // 1/sqrt(3)
const G3: f64 = 0.774_596_669_241_483_4; // sqrt(3/5)
const W3A: f64 = 5.0 / 9.0;
const W3B: f64 = 8.0 / 9.0;

#[derive(Clone, Debug)]
pub struct QuadratureRule {
    /// Local coordinates, one entry per point.
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn for_kind(kind: ElementKind) -> QuadratureRule {
        match kind {
            ElementKind::Tri3 => QuadratureRule {
                points: vec![vec![1.0 / 3.0, 1.0 / 3.0]],
                weights: vec![0.5],
            },
            ElementKind::Quad4 => {
                let mut points = Vec::with_capacity(4);
                let mut weights = Vec::with_capacity(4);
                for &eta in &[-G2, G2] {
                    for &xi in &[-G2, G2] {
                        points.push(vec![xi, eta]);
                        weights.push(1.0);
                    }
                }
                QuadratureRule { points, weights }
            }
            ElementKind::Quad8 => {
                let xs = [-G3, 0.0, G3];
                let ws = [W3A, W3B, W3A];
                let mut points = Vec::with_capacity(9);
                let mut weights = Vec::with_capacity(9);
                for j in 0..3 {
                    for i in 0..3 {
                        points.push(vec![xs[i], xs[j]]);
                        weights.push(ws[i] * ws[j]);
                    }
                }
                QuadratureRule { points, weights }
            }
            ElementKind::Hex8 => {
                let mut points = Vec::with_capacity(8);
                let mut weights = Vec::with_capacity(8);
                for &zeta in &[-G2, G2] {
                    for &eta in &[-G2, G2] {
                        for &xi in &[-G2, G2] {
                            points.push(vec![xi, eta, zeta]);
                            weights.push(1.0);
                        }
                    }
                }
                QuadratureRule { points, weights }
            }
        }
    }

    /// Single-point reduced rule (config flag, default off).
    pub fn reduced(kind: ElementKind) -> QuadratureRule {
        match kind {
            ElementKind::Tri3 => QuadratureRule::for_kind(kind),
            ElementKind::Quad4 | ElementKind::Quad8 => QuadratureRule {
                points: vec![vec![0.0, 0.0]],
                weights: vec![4.0],
            },
            ElementKind::Hex8 => QuadratureRule {
                points: vec![vec![0.0, 0.0, 0.0]],
                weights: vec![8.0],
            },
        }
    }

    /// Rule for a boundary facet of the parent kind (line in 2D, quad in 3D).
    pub fn facet(kind: ElementKind) -> QuadratureRule {
        match kind {
            ElementKind::Tri3 | ElementKind::Quad4 => QuadratureRule {
                points: vec![vec![-G2], vec![G2]],
                weights: vec![1.0, 1.0],
            },
            ElementKind::Quad8 => QuadratureRule {
                points: vec![vec![-G3], vec![0.0], vec![G3]],
                weights: vec![W3A, W3B, W3A],
            },
            ElementKind::Hex8 => {
                let mut points = Vec::with_capacity(4);
                let mut weights = Vec::with_capacity(4);
                for &eta in &[-G2, G2] {
                    for &xi in &[-G2, G2] {
                        points.push(vec![xi, eta]);
                        weights.push(1.0);
                    }
                }
                QuadratureRule { points, weights }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_reference_volume() {
        for kind in [
            ElementKind::Tri3,
            ElementKind::Quad4,
            ElementKind::Quad8,
            ElementKind::Hex8,
        ] {
            let rule = QuadratureRule::for_kind(kind);
            let sum: f64 = rule.weights.iter().sum();
            assert!(
                (sum - kind.reference_volume()).abs() < 1e-12,
                "kind {kind:?}: {sum}"
            );
        }
    }
}
