//! Residual and stiffness assembly.
//!
//! Mechanics: `R_i = int B_i^T sigma dV - int N_i t dS`,
//! `K_ij = int B_i^T C B_j dV`.
//!
//! Scalars:   `R_i = int [(rho (U - U_old)/dt - r) N_i - B_i . f] dV
//!             + int N_i f_out dS`,
//! with the stiffness built from the kernel's four derivative blocks
//! (`dU/ds`, `dU/d grad s`, `df/ds`, `df/d grad s`). Element contributions
//! accumulate in ascending element order so assembly is run-to-run
//! deterministic.

use super::linear::SparseSystem;
use super::model::PointAux;
use super::{FieldId, Problem};
use crate::error::{Error, Result};
use crate::kernels::KernelInput;
use crate::mesh::{map_gradients, shape_eval, ElementKind, QuadratureRule};
use crate::tensor::SymTensor;

/// Values of one field gathered on an element.
struct ElemField<'a> {
    values: &'a [f64],
    old: &'a [f64],
    components: usize,
}

impl Problem {
    fn gather<'a>(&'a self, id: FieldId) -> Option<ElemField<'a>> {
        self.fields.get(&id).map(|f| ElemField {
            values: &f.values,
            old: &f.old,
            components: f.components,
        })
    }

    /// Interpolates auxiliary fields at one integration point.
    #[allow(clippy::too_many_arguments)]
    fn point_aux(
        &self,
        elem_nodes: &[usize],
        n: &[f64],
        dn_dx: &[f64],
        dim: usize,
        coords: &[f64],
        ip_index: usize,
        source: f64,
    ) -> PointAux {
        let mut aux = PointAux { grad_sigma_h: self.grad_sigma_h[ip_index], source, ..Default::default() };
        for (i, _) in elem_nodes.iter().enumerate() {
            for d in 0..dim {
                aux.x[d] += n[i] * coords[i * dim + d];
            }
        }
        if let Some(phase) = self.fields.get(&FieldId::Phase) {
            for (i, &node) in elem_nodes.iter().enumerate() {
                let v = phase.values[node];
                aux.phi += n[i] * v;
                for d in 0..dim {
                    aux.grad_phi[d] += dn_dx[i * dim + d] * v;
                }
            }
        }
        if let Some(scalar) = self.fields.get(&FieldId::Scalar) {
            for (i, &node) in elem_nodes.iter().enumerate() {
                let v = scalar.values[node];
                aux.scalar += n[i] * v;
                for d in 0..dim {
                    aux.grad_scalar[d] += dn_dx[i * dim + d] * v;
                }
            }
        }
        aux
    }

    /// Assembles the mechanics residual and stiffness at the current nodal
    /// values, refreshing the per-point working states.
    pub fn assemble_mechanics(&mut self, t: f64, dt: f64) -> Result<SparseSystem> {
        let dim = self.mesh.dim;
        let ndof = self.ndof(FieldId::Displacement);
        let mut sys = SparseSystem::new(ndof);
        let disp = self.fields[&FieldId::Displacement].values.clone();

        for e_idx in 0..self.mesh.n_elements() {
            let elem = &self.mesh.elements[e_idx];
            let kind = elem.kind;
            let nn = kind.node_count();
            let coords = self.mesh.element_coords(elem);
            let node_ids = elem.node_ids.clone();
            let rule = QuadratureRule::for_kind(kind);
            let ne = nn * dim;
            let mut r_e = vec![0.0; ne];
            let mut k_e = vec![0.0; ne * ne];

            for (gp, (pt, wq)) in rule.points.iter().zip(rule.weights.iter()).enumerate() {
                let se = shape_eval(kind, pt);
                let (det_j, dn_dx) = map_gradients(dim, &coords, &se).map_err(|_| {
                    Error::InvertedElement { element: e_idx, gp, det_j: 0.0 }
                })?;
                let w = wq * det_j;
                let ip_index = self.ip_offset(e_idx) + gp;
                let aux = self.point_aux(&node_ids, &se.n, &dn_dx, dim, &coords, ip_index, 0.0);

                // strain from nodal displacements
                let mut eps = SymTensor::ZERO;
                for (i, &node) in node_ids.iter().enumerate() {
                    for a in 0..dim {
                        let u = disp[node * dim + a];
                        for b in 0..dim {
                            let grad = dn_dx[i * dim + b];
                            // eps_ab += 1/2 (u_a,b + u_b,a)
                            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                            let idx = match (lo, hi) {
                                (0, 0) => 0,
                                (1, 1) => 1,
                                (2, 2) => 2,
                                (0, 1) => 3,
                                (1, 2) => 4,
                                (0, 2) => 5,
                                _ => unreachable!(),
                            };
                            let val = if a == b { u * grad } else { 0.5 * u * grad };
                            if a == b && b == lo && a == hi {
                                // diagonal handled once below
                            }
                            let _ = val;
                            let _ = idx;
                        }
                    }
                }
                // (the loop above is replaced by the direct construction:)
                eps = strain_at_point(&disp, &node_ids, &dn_dx, dim);

                let committed = &self.states.committed[ip_index];
                let mech = self
                    .model
                    .mechanics_at_point(&eps, committed, &aux, dt)
                    .map_err(|e| Error::Increment {
                        time: t,
                        msg: format!("material failure at element {e_idx}, ip {gp}: {e}"),
                    })?;
                self.states.working[ip_index] = mech.state;

                let b = build_b_matrix(&dn_dx, nn, dim);
                let sv = mech.stress.to_stress_voigt();
                for col in 0..ne {
                    let mut acc = 0.0;
                    for row in 0..6 {
                        acc += b[row][col] * sv[row];
                    }
                    r_e[col] += w * acc;
                }
                // K_e += w * B^T C B
                let mut cb = [[0.0f64; 24]; 6];
                for row in 0..6 {
                    for col in 0..ne {
                        let mut acc = 0.0;
                        for k in 0..6 {
                            acc += mech.tangent.m[row][k] * b[k][col];
                        }
                        cb[row][col] = acc;
                    }
                }
                for i in 0..ne {
                    for j in 0..ne {
                        let mut acc = 0.0;
                        for row in 0..6 {
                            acc += b[row][i] * cb[row][j];
                        }
                        k_e[i * ne + j] += w * acc;
                    }
                }
            }

            for (i, &ni) in node_ids.iter().enumerate() {
                for a in 0..dim {
                    let gi = ni * dim + a;
                    sys.residual[gi] += r_e[i * dim + a];
                    for (j, &nj) in node_ids.iter().enumerate() {
                        for bcomp in 0..dim {
                            let gj = nj * dim + bcomp;
                            let v = k_e[(i * dim + a) * ne + (j * dim + bcomp)];
                            if v != 0.0 {
                                sys.triplets.push((gi, gj, v));
                            }
                        }
                    }
                }
            }
        }

        // traction terms
        let neumann = self.fields[&FieldId::Displacement].neumann.clone();
        for bc in &neumann {
            let value = bc.value.eval(t);
            self.integrate_facets(&bc.nodes, |node, n_i, w| {
                sys.residual[node * dim + bc.component] -= w * n_i * value;
            })?;
        }
        sys.residual_pre = sys.residual.clone();
        Ok(sys)
    }

    /// Assembles a scalar field (phase or extra scalar) with its bound kernel.
    pub fn assemble_scalar(&mut self, id: FieldId, t: f64, dt: f64) -> Result<SparseSystem> {
        if id == FieldId::Displacement {
            return Err(Error::InvalidArgument("assemble_scalar on displacement".into()));
        }
        let dim = self.mesh.dim;
        let ndof = self.ndof(id);
        let mut sys = SparseSystem::new(ndof);
        let fld = &self.fields[&id];
        let values = fld.values.clone();
        let old = fld.old.clone();
        let source_spec = fld.source.clone();

        // element-set source marks
        let mut src_mark: Vec<f64> = vec![0.0; self.mesh.n_elements()];
        if let Some((elems, tf)) = &source_spec {
            let v = tf.eval(t);
            for &e in elems {
                src_mark[e] = v;
            }
        }

        for e_idx in 0..self.mesh.n_elements() {
            let elem = &self.mesh.elements[e_idx];
            let kind = elem.kind;
            let nn = kind.node_count();
            let coords = self.mesh.element_coords(elem);
            let node_ids = elem.node_ids.clone();
            let rule = QuadratureRule::for_kind(kind);
            let mut r_e = vec![0.0; nn];
            let mut k_e = vec![0.0; nn * nn];

            for (gp, (pt, wq)) in rule.points.iter().zip(rule.weights.iter()).enumerate() {
                let se = shape_eval(kind, pt);
                let (det_j, dn_dx) = map_gradients(dim, &coords, &se).map_err(|_| {
                    Error::InvertedElement { element: e_idx, gp, det_j: 0.0 }
                })?;
                let w = wq * det_j;
                let ip_index = self.ip_offset(e_idx) + gp;
                let aux =
                    self.point_aux(&node_ids, &se.n, &dn_dx, dim, &coords, ip_index, src_mark[e_idx]);

                let mut s = 0.0;
                let mut s_old = 0.0;
                let mut grad_s = [0.0f64; 3];
                for (i, &node) in node_ids.iter().enumerate() {
                    s += se.n[i] * values[node];
                    s_old += se.n[i] * old[node];
                    for d in 0..dim {
                        grad_s[d] += dn_dx[i * dim + d] * values[node];
                    }
                }
                let input = KernelInput {
                    s,
                    s_old,
                    grad_s,
                    dt,
                    t_total: t,
                    u_old: 0.0,
                    source: aux.source,
                };
                let working = &self.states.working[ip_index];
                let resp = match id {
                    FieldId::Phase => self.model.phase_kernel_at_point(&input, working, &aux),
                    _ => self.model.scalar_kernel_at_point(&input, working, &aux),
                }
                .map_err(|e| Error::Increment {
                    time: t,
                    msg: format!("kernel failure at element {e_idx}, ip {gp}: {e}"),
                })?;
                if !resp.is_finite() {
                    return Err(Error::Increment {
                        time: t,
                        msg: format!("non-finite kernel response at element {e_idx}, ip {gp}"),
                    });
                }

                let rate = resp.rho * (resp.u_new - input.u_old) / dt - resp.source;
                for i in 0..nn {
                    let mut flux_dot_b = 0.0;
                    for d in 0..dim {
                        flux_dot_b += dn_dx[i * dim + d] * resp.flux[d];
                    }
                    r_e[i] += w * (rate * se.n[i] - flux_dot_b);
                    for j in 0..nn {
                        let mut k = resp.rho / dt * se.n[i] * resp.du_ds * se.n[j];
                        let mut du_dgrad_dot_b = 0.0;
                        let mut dflux_ds_dot_b = 0.0;
                        for d in 0..dim {
                            du_dgrad_dot_b += resp.du_dgrad[d] * dn_dx[j * dim + d];
                            dflux_ds_dot_b += dn_dx[i * dim + d] * resp.dflux_ds[d];
                        }
                        k += resp.rho / dt * se.n[i] * du_dgrad_dot_b;
                        k -= dflux_ds_dot_b * se.n[j];
                        for a in 0..dim {
                            for bdir in 0..dim {
                                k -= dn_dx[i * dim + a]
                                    * resp.dflux_dgrad[a][bdir]
                                    * dn_dx[j * dim + bdir];
                            }
                        }
                        k_e[i * nn + j] += w * k;
                    }
                }
            }

            for (i, &ni) in node_ids.iter().enumerate() {
                sys.residual[ni] += r_e[i];
                for (j, &nj) in node_ids.iter().enumerate() {
                    let v = k_e[i * nn + j];
                    if v != 0.0 {
                        sys.triplets.push((ni, nj, v));
                    }
                }
            }
        }

        // prescribed outward boundary flux
        let neumann = self.fields[&id].neumann.clone();
        for bc in &neumann {
            let value = bc.value.eval(t);
            self.integrate_facets(&bc.nodes, |node, n_i, w| {
                sys.residual[node] += w * n_i * value;
            })?;
        }
        sys.residual_pre = sys.residual.clone();
        Ok(sys)
    }

    /// Integrates `callback(node, N_i, w dS)` over the boundary facets whose
    /// nodes all belong to `nodes`.
    pub fn integrate_facets(
        &self,
        nodes: &[usize],
        mut callback: impl FnMut(usize, f64, f64),
    ) -> Result<()> {
        let dim = self.mesh.dim;
        let facets = self.mesh.facets_in_node_set(nodes);
        for (owner, fnodes) in facets {
            let kind = self.mesh.elements[owner].kind;
            let rule = QuadratureRule::facet(kind);
            for (pt, wq) in rule.points.iter().zip(rule.weights.iter()) {
                let (n, metric) = facet_shape(&fnodes, &self.mesh, dim, pt)?;
                for (i, &node) in fnodes.iter().enumerate() {
                    callback(node, n[i], wq * metric);
                }
            }
        }
        Ok(())
    }
}

/// Small-strain tensor at a point from nodal displacements.
pub(crate) fn strain_at_point(
    disp: &[f64],
    node_ids: &[usize],
    dn_dx: &[f64],
    dim: usize,
) -> SymTensor {
    let mut g = [[0.0f64; 3]; 3]; // displacement gradient
    for (i, &node) in node_ids.iter().enumerate() {
        for a in 0..dim {
            let u = disp[node * dim + a];
            for b in 0..dim {
                g[a][b] += u * dn_dx[i * dim + b];
            }
        }
    }
    SymTensor::new(
        g[0][0],
        g[1][1],
        g[2][2],
        0.5 * (g[0][1] + g[1][0]),
        0.5 * (g[1][2] + g[2][1]),
        0.5 * (g[0][2] + g[2][0]),
    )
}

/// Strain-displacement matrix in Voigt rows [xx, yy, zz, xy, yz, zx] with
/// engineering shear; columns are node-major (node, component).
pub(crate) fn build_b_matrix(dn_dx: &[f64], nn: usize, dim: usize) -> [[f64; 24]; 6] {
    let mut b = [[0.0f64; 24]; 6];
    for i in 0..nn {
        if dim == 2 {
            let (dx, dy) = (dn_dx[i * 2], dn_dx[i * 2 + 1]);
            b[0][i * 2] = dx;
            b[1][i * 2 + 1] = dy;
            b[3][i * 2] = dy;
            b[3][i * 2 + 1] = dx;
        } else {
            let (dx, dy, dz) = (dn_dx[i * 3], dn_dx[i * 3 + 1], dn_dx[i * 3 + 2]);
            b[0][i * 3] = dx;
            b[1][i * 3 + 1] = dy;
            b[2][i * 3 + 2] = dz;
            b[3][i * 3] = dy;
            b[3][i * 3 + 1] = dx;
            b[4][i * 3 + 1] = dz;
            b[4][i * 3 + 2] = dy;
            b[5][i * 3] = dz;
            b[5][i * 3 + 2] = dx;
        }
    }
    b
}

/// Facet shape functions and surface metric at a facet-local point.
fn facet_shape(
    fnodes: &[usize],
    mesh: &crate::mesh::Mesh,
    dim: usize,
    pt: &[f64],
) -> Result<(Vec<f64>, f64)> {
    match (dim, fnodes.len()) {
        (2, 2) => {
            let xi = pt[0];
            let n = vec![0.5 * (1.0 - xi), 0.5 * (1.0 + xi)];
            let dn = [-0.5, 0.5];
            let mut tangent = [0.0f64; 2];
            for (i, &node) in fnodes.iter().enumerate() {
                let c = mesh.coords(node);
                tangent[0] += dn[i] * c[0];
                tangent[1] += dn[i] * c[1];
            }
            Ok((n, (tangent[0] * tangent[0] + tangent[1] * tangent[1]).sqrt()))
        }
        (2, 3) => {
            // corner, corner, midside
            let xi = pt[0];
            let n = vec![0.5 * xi * (xi - 1.0), 0.5 * xi * (xi + 1.0), 1.0 - xi * xi];
            let dn = [xi - 0.5, xi + 0.5, -2.0 * xi];
            let mut tangent = [0.0f64; 2];
            for (i, &node) in fnodes.iter().enumerate() {
                let c = mesh.coords(node);
                tangent[0] += dn[i] * c[0];
                tangent[1] += dn[i] * c[1];
            }
            Ok((n, (tangent[0] * tangent[0] + tangent[1] * tangent[1]).sqrt()))
        }
        (3, 4) => {
            let (xi, eta) = (pt[0], pt[1]);
            let signs = [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)];
            let mut n = Vec::with_capacity(4);
            let mut t1 = [0.0f64; 3];
            let mut t2 = [0.0f64; 3];
            for (i, &(a, bq)) in signs.iter().enumerate() {
                n.push(0.25 * (1.0 + a * xi) * (1.0 + bq * eta));
                let dxi = 0.25 * a * (1.0 + bq * eta);
                let deta = 0.25 * bq * (1.0 + a * xi);
                let c = mesh.coords(fnodes[i]);
                for d in 0..3 {
                    t1[d] += dxi * c[d];
                    t2[d] += deta * c[d];
                }
            }
            let cx = t1[1] * t2[2] - t1[2] * t2[1];
            let cy = t1[2] * t2[0] - t1[0] * t2[2];
            let cz = t1[0] * t2[1] - t1[1] * t2[0];
            Ok((n, (cx * cx + cy * cy + cz * cz).sqrt()))
        }
        (d, m) => Err(Error::UnsupportedElement(format!("facet with {m} nodes in {d}D"))),
    }
}
