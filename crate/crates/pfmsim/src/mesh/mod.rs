//! Geometry, connectivity, shape functions and quadrature.
//!
//! Supported elements: 3-node triangles, 4/8-node quadrilaterals (2D) and
//! 8-node hexahedra (3D). Node ordering is counter-clockwise for 2D elements
//! (corners first for quad8, then mid-side nodes bottom/right/top/left); hex8
//! lists the bottom face counter-clockwise, then the top face. All elements
//! are isoparametric and must have a positive Jacobian determinant at every
//! quadrature point.

mod format;
mod generate;
mod quadrature;
mod shape;

pub use format::{read_mesh, read_mesh_str, write_mesh};
pub use generate::{generate_graded, generate_structured};
pub use quadrature::QuadratureRule;
pub use shape::{map_gradients, shape_eval, ShapeEval};

use crate::error::{Error, Result};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementKind {
    Tri3,
    Quad4,
    Quad8,
    Hex8,
}

impl ElementKind {
    pub fn node_count(self) -> usize {
        match self {
            ElementKind::Tri3 => 3,
            ElementKind::Quad4 => 4,
            ElementKind::Quad8 => 8,
            ElementKind::Hex8 => 8,
        }
    }

    pub fn dim(self) -> usize {
        match self {
            ElementKind::Hex8 => 3,
            _ => 2,
        }
    }

    /// Reference-element volume (area for 2D kinds).
    pub fn reference_volume(self) -> f64 {
        match self {
            ElementKind::Tri3 => 0.5,
            ElementKind::Quad4 | ElementKind::Quad8 => 4.0,
            ElementKind::Hex8 => 8.0,
        }
    }

    /// Corner facets (edges in 2D, faces in 3D) as local node index lists.
    pub fn facets(self) -> &'static [&'static [usize]] {
        match self {
            ElementKind::Tri3 => &[&[0, 1], &[1, 2], &[2, 0]],
            ElementKind::Quad4 => &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
            ElementKind::Quad8 => &[&[0, 1, 4], &[1, 2, 5], &[2, 3, 6], &[3, 0, 7]],
            ElementKind::Hex8 => &[
                &[0, 3, 2, 1],
                &[4, 5, 6, 7],
                &[0, 1, 5, 4],
                &[1, 2, 6, 5],
                &[2, 3, 7, 6],
                &[3, 0, 4, 7],
            ],
        }
    }
}

#[derive(Clone, Debug)]
pub struct Node {
    pub id: usize,
    pub coords: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct Element {
    pub id: usize,
    pub kind: ElementKind,
    pub node_ids: Vec<usize>,
}

#[derive(Clone, Debug, Default)]
pub struct Mesh {
    pub dim: usize,
    pub nodes: Vec<Node>,
    pub elements: Vec<Element>,
    pub node_sets: BTreeMap<String, Vec<usize>>,
    pub element_sets: BTreeMap<String, Vec<usize>>,
}

impl Mesh {
    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn coords(&self, node: usize) -> &[f64] {
        &self.nodes[node].coords
    }

    /// Gathers the coordinate matrix (n_nodes x dim, row-major) of an element.
    pub fn element_coords(&self, elem: &Element) -> Vec<f64> {
        let mut xs = Vec::with_capacity(elem.node_ids.len() * self.dim);
        for &n in &elem.node_ids {
            xs.extend_from_slice(self.coords(n));
        }
        xs
    }

    pub fn node_set(&self, name: &str) -> Result<&[usize]> {
        self.node_sets
            .get(name)
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown node set `{name}`")))
    }

    pub fn element_set(&self, name: &str) -> Result<&[usize]> {
        self.element_sets
            .get(name)
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown element set `{name}`")))
    }

    /// Checks ids, set references and Jacobians at the elements' quadrature points.
    pub fn validate(&self) -> Result<()> {
        for (i, n) in self.nodes.iter().enumerate() {
            if n.id != i {
                return Err(Error::InvalidArgument(format!(
                    "node ids must be contiguous from 0, found {} at position {i}",
                    n.id
                )));
            }
            if n.coords.len() != self.dim {
                return Err(Error::InvalidArgument(format!(
                    "node {} has {} coordinates in a {}-d mesh",
                    n.id,
                    n.coords.len(),
                    self.dim
                )));
            }
        }
        for (i, e) in self.elements.iter().enumerate() {
            if e.id != i {
                return Err(Error::InvalidArgument(format!(
                    "element ids must be contiguous from 0, found {} at position {i}",
                    e.id
                )));
            }
            if e.node_ids.len() != e.kind.node_count() {
                return Err(Error::UnsupportedElement(format!(
                    "element {} has {} nodes for kind {:?}",
                    e.id,
                    e.node_ids.len(),
                    e.kind
                )));
            }
            if e.kind.dim() != self.dim {
                return Err(Error::UnsupportedElement(format!(
                    "element {} of kind {:?} in a {}-d mesh",
                    e.id, e.kind, self.dim
                )));
            }
            for &n in &e.node_ids {
                if n >= self.nodes.len() {
                    return Err(Error::DanglingNode { element: e.id, node: n });
                }
            }
            let coords = self.element_coords(e);
            let rule = QuadratureRule::for_kind(e.kind);
            for (gp, pt) in rule.points.iter().enumerate() {
                let se = shape_eval(e.kind, pt);
                let (det_j, _) = map_gradients_unchecked(self.dim, &coords, &se);
                if det_j <= 0.0 || !det_j.is_finite() {
                    return Err(Error::InvertedElement { element: e.id, gp, det_j });
                }
            }
        }
        for (name, ids) in &self.node_sets {
            for &n in ids {
                if n >= self.nodes.len() {
                    return Err(Error::InvalidArgument(format!(
                        "node set `{name}` references missing node {n}"
                    )));
                }
            }
        }
        for (name, ids) in &self.element_sets {
            for &e in ids {
                if e >= self.elements.len() {
                    return Err(Error::InvalidArgument(format!(
                        "element set `{name}` references missing element {e}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Domain volume by quadrature.
    pub fn volume(&self) -> f64 {
        let mut vol = 0.0;
        for e in &self.elements {
            let coords = self.element_coords(e);
            let rule = QuadratureRule::for_kind(e.kind);
            for (pt, w) in rule.points.iter().zip(rule.weights.iter()) {
                let se = shape_eval(e.kind, pt);
                let (det_j, _) = map_gradients_unchecked(self.dim, &coords, &se);
                vol += w * det_j;
            }
        }
        vol
    }

    /// Boundary facets (as sorted global node id lists) that lie entirely in
    /// the given node set, together with the owning element. Used to turn
    /// node sets into integration surfaces for flux/traction terms.
    pub fn facets_in_node_set(&self, set: &[usize]) -> Vec<(usize, Vec<usize>)> {
        let mark: std::collections::BTreeSet<usize> = set.iter().copied().collect();
        // facet -> (count, owner, ordered nodes)
        let mut all: BTreeMap<Vec<usize>, (usize, usize, Vec<usize>)> = BTreeMap::new();
        for e in &self.elements {
            for facet in e.kind.facets() {
                let nodes: Vec<usize> = facet.iter().map(|&l| e.node_ids[l]).collect();
                let mut key = nodes.clone();
                key.sort_unstable();
                let entry = all.entry(key).or_insert((0, e.id, nodes));
                entry.0 += 1;
            }
        }
        let mut out = Vec::new();
        for (_, (count, owner, nodes)) in all {
            if count == 1 && nodes.iter().all(|n| mark.contains(n)) {
                out.push((owner, nodes));
            }
        }
        out
    }
}

/// `map_gradients` without the positive-Jacobian check, for internal loops
/// that have already validated the mesh.
pub(crate) fn map_gradients_unchecked(dim: usize, coords: &[f64], se: &ShapeEval) -> (f64, Vec<f64>) {
    shape::map_gradients_impl(dim, coords, se)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structured_counts_match() {
        // unit square, 2x2, quad4 -> 9 nodes, 4 elements
        let m = generate_structured(&[[0.0, 1.0], [0.0, 1.0]], &[2, 2], ElementKind::Quad4).unwrap();
        assert_eq!(m.n_nodes(), 9);
        assert_eq!(m.n_elements(), 4);
        m.validate().unwrap();

        // unit square, 1x1, quad8 -> 8 nodes (serendipity: no centre node)
        let m = generate_structured(&[[0.0, 1.0], [0.0, 1.0]], &[1, 1], ElementKind::Quad8).unwrap();
        assert_eq!(m.n_nodes(), 8);
        assert_eq!(m.n_elements(), 1);
        m.validate().unwrap();

        // unit cube, 2x2x2, hex8 -> 27 nodes, 8 elements
        let m = generate_structured(
            &[[0.0, 1.0], [0.0, 1.0], [0.0, 1.0]],
            &[2, 2, 2],
            ElementKind::Hex8,
        )
        .unwrap();
        assert_eq!(m.n_nodes(), 27);
        assert_eq!(m.n_elements(), 8);
        m.validate().unwrap();
    }

    #[test]
    fn boundary_sets_are_generated() {
        let m = generate_structured(&[[0.0, 2.0], [0.0, 1.0]], &[4, 2], ElementKind::Quad4).unwrap();
        assert_eq!(m.node_set("left").unwrap().len(), 3);
        assert_eq!(m.node_set("right").unwrap().len(), 3);
        assert_eq!(m.node_set("bottom").unwrap().len(), 5);
        assert_eq!(m.node_set("top").unwrap().len(), 5);
    }

    #[test]
    fn volume_by_quadrature_matches_analytic() {
        for kind in [ElementKind::Tri3, ElementKind::Quad4, ElementKind::Quad8] {
            let m = generate_structured(&[[0.0, 3.0], [0.0, 2.0]], &[5, 4], kind).unwrap();
            assert!((m.volume() - 6.0).abs() < 1e-10 * 6.0, "kind {kind:?}");
        }
        let m = generate_structured(
            &[[0.0, 1.0], [0.0, 2.0], [0.0, 3.0]],
            &[3, 2, 4],
            ElementKind::Hex8,
        )
        .unwrap();
        assert!((m.volume() - 6.0).abs() < 1e-10 * 6.0);
    }

    #[test]
    fn degenerate_divisions_rejected() {
        assert!(generate_structured(&[[0.0, 1.0], [0.0, 1.0]], &[0, 2], ElementKind::Quad4).is_err());
        assert!(generate_structured(&[[0.0, 0.0], [0.0, 1.0]], &[2, 2], ElementKind::Quad4).is_err());
    }

    #[test]
    fn tri3_unsupported_in_3d() {
        assert!(generate_structured(
            &[[0.0, 1.0], [0.0, 1.0], [0.0, 1.0]],
            &[1, 1, 1],
            ElementKind::Tri3
        )
        .is_err());
    }

    #[test]
    fn facets_extraction_on_boundary() {
        let m = generate_structured(&[[0.0, 1.0], [0.0, 1.0]], &[2, 2], ElementKind::Quad4).unwrap();
        let left = m.node_set("left").unwrap().to_vec();
        let facets = m.facets_in_node_set(&left);
        assert_eq!(facets.len(), 2);
        for (_, nodes) in facets {
            assert_eq!(nodes.len(), 2);
        }
    }
}
