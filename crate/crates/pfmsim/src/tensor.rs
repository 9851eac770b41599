//! Small symmetric-tensor algebra in Voigt notation.
//!
//! Conventions used throughout the crate:
//! - Symmetric second-order tensors store the six tensor components in the
//!   order `[xx, yy, zz, xy, yz, zx]` (tensor shear, not engineering shear).
//! - Strain vectors exchanged with B-matrices use engineering shear
//!   (`gamma = 2 eps_xy`); see [`SymTensor::to_strain_voigt`].
//! - Fourth-order tangents are 6x6 matrices acting on engineering-strain
//!   vectors and returning stress vectors. With that convention the matrix
//!   entry `(I, J)` equals the tensor component `C_ijkl` for every index
//!   pair, including shear rows/columns.

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use serde::{Deserialize, Serialize};

/// Symmetric second-order tensor, components `[xx, yy, zz, xy, yz, zx]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SymTensor {
    pub v: [f64; 6],
}

impl SymTensor {
    pub const ZERO: SymTensor = SymTensor { v: [0.0; 6] };

    pub fn new(xx: f64, yy: f64, zz: f64, xy: f64, yz: f64, zx: f64) -> Self {
        SymTensor { v: [xx, yy, zz, xy, yz, zx] }
    }

    /// Spherical tensor `s * I`.
    pub fn spherical(s: f64) -> Self {
        SymTensor::new(s, s, s, 0.0, 0.0, 0.0)
    }

    /// Build from an engineering-shear strain vector `[xx, yy, zz, gxy, gyz, gzx]`.
    pub fn from_strain_voigt(e: &[f64; 6]) -> Self {
        SymTensor::new(e[0], e[1], e[2], 0.5 * e[3], 0.5 * e[4], 0.5 * e[5])
    }

    /// Engineering-shear strain vector (doubles the shear components).
    pub fn to_strain_voigt(&self) -> [f64; 6] {
        let v = &self.v;
        [v[0], v[1], v[2], 2.0 * v[3], 2.0 * v[4], 2.0 * v[5]]
    }

    /// Stress-style Voigt vector (components as stored).
    pub fn to_stress_voigt(&self) -> [f64; 6] {
        self.v
    }

    pub fn from_stress_voigt(s: &[f64; 6]) -> Self {
        SymTensor { v: *s }
    }

    pub fn trace(&self) -> f64 {
        self.v[0] + self.v[1] + self.v[2]
    }

    pub fn deviator(&self) -> SymTensor {
        let m = self.trace() / 3.0;
        let mut d = *self;
        d.v[0] -= m;
        d.v[1] -= m;
        d.v[2] -= m;
        d
    }

    /// Full double contraction `a : b` (counts shear components twice).
    pub fn ddot(&self, other: &SymTensor) -> f64 {
        let a = &self.v;
        let b = &other.v;
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + 2.0 * (a[3] * b[3] + a[4] * b[4] + a[5] * b[5])
    }

    pub fn norm(&self) -> f64 {
        self.ddot(self).sqrt()
    }

    pub fn scale(&self, s: f64) -> SymTensor {
        let mut r = *self;
        for x in r.v.iter_mut() {
            *x *= s;
        }
        r
    }

    pub fn add(&self, other: &SymTensor) -> SymTensor {
        let mut r = *self;
        for (x, y) in r.v.iter_mut().zip(other.v.iter()) {
            *x += *y;
        }
        r
    }

    pub fn sub(&self, other: &SymTensor) -> SymTensor {
        let mut r = *self;
        for (x, y) in r.v.iter_mut().zip(other.v.iter()) {
            *x -= *y;
        }
        r
    }

    pub fn to_matrix(&self) -> Matrix3<f64> {
        let v = &self.v;
        Matrix3::new(v[0], v[3], v[5], v[3], v[1], v[4], v[5], v[4], v[2])
    }

    pub fn from_matrix(m: &Matrix3<f64>) -> Self {
        SymTensor::new(
            m[(0, 0)],
            m[(1, 1)],
            m[(2, 2)],
            0.5 * (m[(0, 1)] + m[(1, 0)]),
            0.5 * (m[(1, 2)] + m[(2, 1)]),
            0.5 * (m[(0, 2)] + m[(2, 0)]),
        )
    }

    /// Symmetric dyad `sym(a ⊗ b)`.
    pub fn sym_dyad(a: &Vector3<f64>, b: &Vector3<f64>) -> SymTensor {
        SymTensor::new(
            a[0] * b[0],
            a[1] * b[1],
            a[2] * b[2],
            0.5 * (a[0] * b[1] + a[1] * b[0]),
            0.5 * (a[1] * b[2] + a[2] * b[1]),
            0.5 * (a[0] * b[2] + a[2] * b[0]),
        )
    }

    /// Eigenvalues (ascending) and matching unit eigenvectors.
    pub fn eigen(&self) -> ([f64; 3], [Vector3<f64>; 3]) {
        let eig = SymmetricEigen::new(self.to_matrix());
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
        let vals = [
            eig.eigenvalues[idx[0]],
            eig.eigenvalues[idx[1]],
            eig.eigenvalues[idx[2]],
        ];
        let vecs = [
            eig.eigenvectors.column(idx[0]).into_owned(),
            eig.eigenvectors.column(idx[1]).into_owned(),
            eig.eigenvectors.column(idx[2]).into_owned(),
        ];
        (vals, vecs)
    }

    /// Rotate: `Q a Qᵀ`.
    pub fn rotate(&self, q: &Matrix3<f64>) -> SymTensor {
        SymTensor::from_matrix(&(q * self.to_matrix() * q.transpose()))
    }
}

/// Fourth-order tangent with minor and (usually) major symmetry, stored as a
/// 6x6 matrix in the convention described in the module docs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tangent {
    pub m: [[f64; 6]; 6],
}

impl Tangent {
    pub const ZERO: Tangent = Tangent { m: [[0.0; 6]; 6] };

    /// Isotropic Hooke tensor from Lamé constants.
    pub fn isotropic(lambda: f64, mu: f64) -> Tangent {
        let mut t = Tangent::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                t.m[i][j] = lambda;
            }
            t.m[i][i] += 2.0 * mu;
            t.m[i + 3][i + 3] = mu;
        }
        t
    }

    /// Apply to a strain tensor: `sigma = C : eps`.
    pub fn apply(&self, eps: &SymTensor) -> SymTensor {
        let e = eps.to_strain_voigt();
        let mut s = [0.0; 6];
        for (i, row) in self.m.iter().enumerate() {
            let mut acc = 0.0;
            for (j, c) in row.iter().enumerate() {
                acc += c * e[j];
            }
            s[i] = acc;
        }
        SymTensor::from_stress_voigt(&s)
    }

    pub fn scale(&self, s: f64) -> Tangent {
        let mut r = *self;
        for row in r.m.iter_mut() {
            for x in row.iter_mut() {
                *x *= s;
            }
        }
        r
    }

    pub fn add(&self, other: &Tangent) -> Tangent {
        let mut r = *self;
        for (row, orow) in r.m.iter_mut().zip(other.m.iter()) {
            for (x, y) in row.iter_mut().zip(orow.iter()) {
                *x += *y;
            }
        }
        r
    }

    /// Rank-one update `C += s * (a ⊗ b)` of two symmetric tensors.
    ///
    /// `a` and `b` are contracted against engineering strain, so their shear
    /// entries enter as tensor components on both sides.
    pub fn add_dyad(&mut self, s: f64, a: &SymTensor, b: &SymTensor) {
        for i in 0..6 {
            for j in 0..6 {
                self.m[i][j] += s * a.v[i] * b.v[j];
            }
        }
    }

    /// Maximum absolute asymmetry `max |C_IJ - C_JI|`.
    pub fn asymmetry(&self) -> f64 {
        let mut a: f64 = 0.0;
        for i in 0..6 {
            for j in (i + 1)..6 {
                a = a.max((self.m[i][j] - self.m[j][i]).abs());
            }
        }
        a
    }

    pub fn max_abs(&self) -> f64 {
        let mut a: f64 = 0.0;
        for row in self.m.iter() {
            for x in row.iter() {
                a = a.max(x.abs());
            }
        }
        a
    }
}
