//! Boundary conditions and time functions.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Scalar value as a function of time.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum TimeFunction {
    Constant { value: f64 },
    /// Linear ramp from `from` to `to` over [t0, t1], clamped outside.
    Ramp { from: f64, to: f64, t0: f64, t1: f64 },
    /// Piecewise-linear table of (time, value) pairs, clamped outside.
    Table { points: Vec<(f64, f64)> },
}

impl TimeFunction {
    pub fn constant(v: f64) -> Self {
        TimeFunction::Constant { value: v }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            TimeFunction::Constant { value } => *value,
            TimeFunction::Ramp { from, to, t0, t1 } => {
                if t <= *t0 {
                    *from
                } else if t >= *t1 {
                    *to
                } else {
                    from + (to - from) * (t - t0) / (t1 - t0)
                }
            }
            TimeFunction::Table { points } => {
                if points.is_empty() {
                    return 0.0;
                }
                if t <= points[0].0 {
                    return points[0].1;
                }
                for w in points.windows(2) {
                    if t <= w[1].0 {
                        let f = (t - w[0].0) / (w[1].0 - w[0].0);
                        return w[0].1 + f * (w[1].1 - w[0].1);
                    }
                }
                points.last().unwrap().1
            }
        }
    }
}

/// Prescribed value on a set of nodes, one field component.
#[derive(Clone, Debug)]
pub struct DirichletBc {
    pub nodes: Vec<usize>,
    pub component: usize,
    pub value: TimeFunction,
}

/// Prescribed outward normal flux (scalar fields) or traction component
/// (displacement) on the boundary facets spanned by a node set.
#[derive(Clone, Debug)]
pub struct NeumannBc {
    pub nodes: Vec<usize>,
    pub component: usize,
    /// Outward flux `f . n` for scalars; traction component for mechanics.
    pub value: TimeFunction,
}

/// Row/column elimination with unit diagonal.
///
/// Constrained dofs get the equation `dx_d = target - x_d`; their couplings
/// move to the right-hand side. The pre-elimination residual is kept in
/// `system.residual_pre`, from which reaction forces are read.
///
/// Duplicate constraints on one dof are allowed only if they agree.
pub fn apply_dirichlet(
    system: &mut super::linear::SparseSystem,
    constrained: &[(usize, f64)], // (dof, increment dx to reach the target)
) -> Result<()> {
    let n = system.n;
    let mut delta = vec![f64::NAN; n];
    for &(dof, dx) in constrained {
        if dof >= n {
            return Err(Error::InvalidArgument(format!("constraint on missing dof {dof}")));
        }
        if !delta[dof].is_nan() && (delta[dof] - dx).abs() > 1e-12 * dx.abs().max(1.0) {
            return Err(Error::InvalidArgument(format!(
                "conflicting duplicate constraints on dof {dof}"
            )));
        }
        delta[dof] = dx;
    }
    system.residual_pre = system.residual.clone();
    let triplets = std::mem::take(&mut system.triplets);
    let mut kept = Vec::with_capacity(triplets.len());
    for (i, j, v) in triplets {
        let i_c = !delta[i].is_nan();
        let j_c = !delta[j].is_nan();
        if i_c {
            continue; // row replaced by identity below
        }
        if j_c {
            // move K_ij * dx_j to the right-hand side: solving K dx = -R,
            // so R_i += K_ij * delta_j
            system.residual[i] += v * delta[j];
            continue;
        }
        kept.push((i, j, v));
    }
    for (dof, d) in delta.iter().enumerate() {
        if !d.is_nan() {
            kept.push((dof, dof, 1.0));
            system.residual[dof] = -d;
        }
    }
    system.triplets = kept;
    Ok(())
}
