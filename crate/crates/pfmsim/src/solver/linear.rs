//! Sparse direct linear solves (LU with fill-reducing ordering via `faer`).

use crate::error::{Error, Result};
use faer::prelude::*;
use faer::sparse::{SparseColMat, Triplet};

/// Assembled linear system in triplet form plus the residual vector.
#[derive(Clone, Debug, Default)]
pub struct SparseSystem {
    pub n: usize,
    pub triplets: Vec<(usize, usize, f64)>,
    pub residual: Vec<f64>,
    /// Residual before Dirichlet elimination; reactions live here.
    pub residual_pre: Vec<f64>,
}

impl SparseSystem {
    pub fn new(n: usize) -> Self {
        SparseSystem {
            n,
            triplets: Vec::new(),
            residual: vec![0.0; n],
            residual_pre: vec![0.0; n],
        }
    }

    pub fn residual_norm(&self) -> f64 {
        self.residual.iter().map(|r| r * r).sum::<f64>().sqrt()
    }

    /// Numerical asymmetry of the assembled matrix relative to its norm.
    pub fn asymmetry(&self) -> f64 {
        use std::collections::HashMap;
        let mut map: HashMap<(usize, usize), f64> = HashMap::new();
        let mut scale: f64 = 0.0;
        for &(i, j, v) in &self.triplets {
            *map.entry((i, j)).or_insert(0.0) += v;
            scale = scale.max(v.abs());
        }
        let mut asym: f64 = 0.0;
        for (&(i, j), &v) in &map {
            if i < j {
                let w = map.get(&(j, i)).copied().unwrap_or(0.0);
                asym = asym.max((v - w).abs());
            }
        }
        if scale > 0.0 {
            asym / scale
        } else {
            0.0
        }
    }
}

/// Direct sparse LU solve of `K dx = rhs`.
///
/// The solution is verified: `|K dx - rhs| <= 1e-10 |rhs|` or an error is
/// returned. A numerically singular factorization surfaces as non-finite
/// entries; the first offending dof is reported.
pub fn linear_solve(n: usize, triplets: &[(usize, usize, f64)], rhs: &[f64]) -> Result<Vec<f64>> {
    debug_assert_eq!(rhs.len(), n);
    let trips: Vec<Triplet<usize, usize, f64>> =
        triplets.iter().map(|&(i, j, v)| Triplet::new(i, j, v)).collect();
    let a = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &trips)
        .map_err(|e| Error::InvalidArgument(format!("bad triplets: {e:?}")))?;
    let lu = a.sp_lu().map_err(|e| {
        let dof = match e {
            faer::sparse::FaerError::IndexOverflow => 0,
            _ => 0,
        };
        Error::SingularMatrix { dof }
    })?;
    let mut b = Mat::<f64>::zeros(n, 1);
    for (i, &v) in rhs.iter().enumerate() {
        b[(i, 0)] = v;
    }
    let x = lu.solve(&b);
    for i in 0..n {
        if !x[(i, 0)].is_finite() {
            return Err(Error::SingularMatrix { dof: i });
        }
    }
    // residual check
    let ax = a.as_ref() * x.as_ref();
    let mut rnorm = 0.0f64;
    let mut bnorm = 0.0f64;
    for i in 0..n {
        let r = ax[(i, 0)] - b[(i, 0)];
        rnorm += r * r;
        bnorm += b[(i, 0)] * b[(i, 0)];
    }
    let (rnorm, bnorm) = (rnorm.sqrt(), bnorm.sqrt());
    if rnorm > 1e-10 * bnorm.max(1e-300) && rnorm > 1e-14 {
        return Err(Error::SingularMatrix { dof: 0 });
    }
    Ok((0..n).map(|i| x[(i, 0)]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn identity_returns_rhs() {
        let trips = vec![(0, 0, 1.0), (1, 1, 1.0), (2, 2, 1.0)];
        let x = linear_solve(3, &trips, &[3.0, -1.0, 0.5]).unwrap();
        assert_eq!(x, vec![3.0, -1.0, 0.5]);
    }

    #[test]
    fn small_spd_system() {
        // [[2,1],[1,2]] x = [3,3] -> [1,1]
        let trips = vec![(0, 0, 2.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 2.0)];
        let x = linear_solve(2, &trips, &[3.0, 3.0]).unwrap();
        assert_relative_eq!(x[0], 1.0, epsilon = 1e-14);
        assert_relative_eq!(x[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn singular_matrix_is_an_error() {
        let trips = vec![(0, 0, 1.0), (0, 1, 2.0), (1, 0, 2.0), (1, 1, 4.0)];
        assert!(linear_solve(2, &trips, &[1.0, 1.0]).is_err());
        // structurally singular: empty row
        let trips = vec![(0, 0, 1.0)];
        assert!(linear_solve(2, &trips, &[1.0, 1.0]).is_err());
    }

    #[test]
    fn duplicate_triplets_accumulate() {
        let trips = vec![(0, 0, 1.0), (0, 0, 1.0)];
        let x = linear_solve(1, &trips, &[4.0]).unwrap();
        assert_relative_eq!(x[0], 2.0);
    }
}
