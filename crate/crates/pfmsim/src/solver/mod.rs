//! Finite element assembly, Newton iteration, transient stepping and the
//! coupling orchestrator.
//!
//! A [`Problem`] owns the mesh, the coupled physics model, the nodal field
//! states and the per-integration-point material memory. Assembly follows
//! the discretised residual/stiffness forms of the unified diffusion
//! contract: off-diagonal field-coupling blocks are zero by construction and
//! the coupling is supplied by the solve ordering (staggered passes or the
//! block-iterated monolithic pair).
//!
//! State discipline: constitutive evaluations write a per-point *working*
//! state (a pure function of the committed state and the current nodal
//! fields); the committed state advances only when an increment is accepted,
//! so a failed or repeated increment cannot leak irreversibility.

mod assemble;
mod bc;
mod checkpoint;
mod linear;
mod model;
mod newton;
mod recovery;
mod schedule;

pub use bc::{apply_dirichlet, DirichletBc, NeumannBc, TimeFunction};
pub use checkpoint::{load_checkpoint, save_checkpoint, Checkpoint};
pub use linear::{linear_solve, SparseSystem};
pub use model::{CoupledModel, MechResponse, MobilityField, PhasePhysics, PointAux, ScalarPhysics};
pub use newton::{newton_solve, ConvergenceReport, NewtonParams};
pub use recovery::{ip_gradients, recover_nodal};
pub use schedule::{CouplingSchedule, SchemeKind, StepReport};

use crate::error::{Error, Result};
use crate::mechanics::MaterialPointState;
use crate::mesh::{Mesh, QuadratureRule};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldId {
    Displacement,
    Phase,
    Scalar,
}

/// Nodal unknowns of one field plus its boundary data.
#[derive(Clone, Debug)]
pub struct FieldState {
    pub id: FieldId,
    pub components: usize,
    pub values: Vec<f64>,
    /// Values at the last committed increment.
    pub old: Vec<f64>,
    pub dirichlet: Vec<DirichletBc>,
    pub neumann: Vec<NeumannBc>,
    /// Volumetric source over an element set.
    pub source: Option<(Vec<usize>, TimeFunction)>,
}

impl FieldState {
    pub fn new(id: FieldId, components: usize, n_nodes: usize) -> Self {
        FieldState {
            id,
            components,
            values: vec![0.0; components * n_nodes],
            old: vec![0.0; components * n_nodes],
            dirichlet: Vec::new(),
            neumann: Vec::new(),
            source: None,
        }
    }

    pub fn fill(&mut self, v: f64) {
        self.values.iter_mut().for_each(|x| *x = v);
        self.old.iter_mut().for_each(|x| *x = v);
    }

    pub fn l2_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Committed and working per-integration-point state.
#[derive(Clone, Debug)]
pub struct StateStore {
    pub committed: Vec<MaterialPointState>,
    pub working: Vec<MaterialPointState>,
}

pub struct Problem {
    pub mesh: Mesh,
    pub model: CoupledModel,
    pub fields: BTreeMap<FieldId, FieldState>,
    pub states: StateStore,
    /// Recovered hydrostatic-stress gradient per integration point.
    pub grad_sigma_h: Vec<[f64; 3]>,
    pub time: f64,
    /// First integration-point index of each element.
    ip_offsets: Vec<usize>,
    n_ip_total: usize,
}

impl Problem {
    pub fn new(mesh: Mesh, model: CoupledModel, fields: Vec<FieldState>) -> Result<Self> {
        mesh.validate()?;
        let mut ip_offsets = Vec::with_capacity(mesh.n_elements() + 1);
        let mut n = 0usize;
        for e in &mesh.elements {
            ip_offsets.push(n);
            n += QuadratureRule::for_kind(e.kind).len();
        }
        ip_offsets.push(n);
        let mut map = BTreeMap::new();
        for f in fields {
            let expect = f.components * mesh.n_nodes();
            if f.values.len() != expect {
                return Err(Error::InvalidArgument(format!(
                    "field {:?} has {} values, expected {expect}",
                    f.id,
                    f.values.len()
                )));
            }
            map.insert(f.id, f);
        }
        Ok(Problem {
            states: StateStore {
                committed: vec![MaterialPointState::default(); n],
                working: vec![MaterialPointState::default(); n],
            },
            grad_sigma_h: vec![[0.0; 3]; n],
            mesh,
            model,
            fields: map,
            time: 0.0,
            ip_offsets,
            n_ip_total: n,
        })
    }

    pub fn n_ip(&self) -> usize {
        self.n_ip_total
    }

    pub fn ip_offset(&self, elem: usize) -> usize {
        self.ip_offsets[elem]
    }

    pub fn field(&self, id: FieldId) -> &FieldState {
        &self.fields[&id]
    }

    pub fn field_mut(&mut self, id: FieldId) -> &mut FieldState {
        self.fields.get_mut(&id).expect("field present")
    }

    pub fn has_field(&self, id: FieldId) -> bool {
        self.fields.contains_key(&id)
    }

    pub fn ndof(&self, id: FieldId) -> usize {
        self.fields[&id].components * self.mesh.n_nodes()
    }

    /// Dirichlet increments `(dof, target - current)` for a field at time t.
    pub fn dirichlet_increments(&self, id: FieldId, t: f64) -> Vec<(usize, f64)> {
        let f = &self.fields[&id];
        let mut out = Vec::new();
        for bc in &f.dirichlet {
            let target = bc.value.eval(t);
            for &n in &bc.nodes {
                let dof = n * f.components + bc.component;
                out.push((dof, target - f.values[dof]));
            }
        }
        out
    }

    /// Commits the increment: nodal `old` catches up, material state
    /// advances, film-rupture clocks tick and reset.
    pub fn commit_increment(&mut self, dt: f64) {
        for f in self.fields.values_mut() {
            f.old.copy_from_slice(&f.values);
        }
        let eps_f = match &self.model.phase {
            model::PhasePhysics::Corrosion(p) => Some(p.eps_f),
            _ => None,
        };
        for (c, w) in self.states.committed.iter_mut().zip(self.states.working.iter()) {
            let d_ep = (w.eps_p_eq - c.eps_p_eq).max(0.0);
            let mut next = w.clone();
            next.eps_p_cycle = c.eps_p_cycle + d_ep;
            next.t_cycle = c.t_cycle + dt;
            if let Some(eps_f) = eps_f {
                if next.eps_p_cycle >= eps_f {
                    next.eps_p_cycle = 0.0;
                    next.t_cycle = 0.0;
                }
            }
            *c = next;
        }
        for (w, c) in self.states.working.iter_mut().zip(self.states.committed.iter()) {
            *w = c.clone();
        }
    }

    /// Restores nodal values and working state to the last commit.
    pub fn restore_increment(&mut self) {
        for f in self.fields.values_mut() {
            f.values.copy_from_slice(&f.old);
        }
        for (w, c) in self.states.working.iter_mut().zip(self.states.committed.iter()) {
            *w = c.clone();
        }
    }

    /// Refreshes the recovered hydrostatic-stress gradient from the working
    /// states (used by the hydrogen drift term).
    pub fn refresh_stress_gradient(&mut self) {
        let sigma_h: Vec<f64> = self.states.working.iter().map(|s| s.sigma_h).collect();
        let nodal = recovery::recover_nodal(&self.mesh, &self.ip_offsets, &sigma_h);
        self.grad_sigma_h = recovery::ip_gradients(&self.mesh, &self.ip_offsets, &nodal);
    }
}
