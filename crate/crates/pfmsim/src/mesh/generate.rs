//! Structured mesh generation on axis-aligned boxes.

use super::{Element, ElementKind, Mesh, Node};
use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// Conforming structured grid with uniform spacing per axis.
///
/// Boundary node sets are auto-named `left`/`right` (x), `bottom`/`top` (y)
/// and `front`/`back` (z, 3D only).
pub fn generate_structured(
    bounds: &[[f64; 2]],
    divisions: &[usize],
    kind: ElementKind,
) -> Result<Mesh> {
    let dim = kind.dim();
    if bounds.len() != dim || divisions.len() != dim {
        return Err(Error::UnsupportedElement(format!(
            "{kind:?} needs {dim} bounds/divisions, got {}/{}",
            bounds.len(),
            divisions.len()
        )));
    }
    let mut ticks = Vec::with_capacity(dim);
    for (axis, (b, &n)) in bounds.iter().zip(divisions.iter()).enumerate() {
        if n < 1 {
            return Err(Error::InvalidArgument(format!(
                "divisions must be >= 1 per axis (axis {axis})"
            )));
        }
        if !(b[1] > b[0]) {
            return Err(Error::InvalidArgument(format!(
                "degenerate bounds on axis {axis}: [{}, {}]",
                b[0], b[1]
            )));
        }
        let h = (b[1] - b[0]) / n as f64;
        ticks.push((0..=n).map(|i| b[0] + i as f64 * h).collect::<Vec<_>>());
    }
    generate_graded(&ticks, kind)
}

/// Structured grid with explicit axis coordinates (graded spacing).
///
/// Tick arrays must be strictly increasing with at least two entries per axis.
pub fn generate_graded(ticks: &[Vec<f64>], kind: ElementKind) -> Result<Mesh> {
    let dim = kind.dim();
    if ticks.len() != dim {
        return Err(Error::UnsupportedElement(format!(
            "{kind:?} needs {dim} tick arrays, got {}",
            ticks.len()
        )));
    }
    for (axis, t) in ticks.iter().enumerate() {
        if t.len() < 2 || t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(format!(
                "axis {axis} ticks must be strictly increasing with >= 2 entries"
            )));
        }
    }
    match kind {
        ElementKind::Quad4 => Ok(quad4_grid(ticks)),
        ElementKind::Tri3 => Ok(tri3_grid(ticks)),
        ElementKind::Quad8 => Ok(quad8_grid(ticks)),
        ElementKind::Hex8 => Ok(hex8_grid(ticks)),
    }
}

fn push_boundary_sets_2d(mesh: &mut Mesh, xs: &[f64], ys: &[f64]) {
    let (x0, x1) = (xs[0], *xs.last().unwrap());
    let (y0, y1) = (ys[0], *ys.last().unwrap());
    let mut sets: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for n in &mesh.nodes {
        let (x, y) = (n.coords[0], n.coords[1]);
        if x == x0 {
            sets.entry("left").or_default().push(n.id);
        }
        if x == x1 {
            sets.entry("right").or_default().push(n.id);
        }
        if y == y0 {
            sets.entry("bottom").or_default().push(n.id);
        }
        if y == y1 {
            sets.entry("top").or_default().push(n.id);
        }
    }
    for (k, v) in sets {
        mesh.node_sets.insert(k.to_string(), v);
    }
}

fn quad4_grid(ticks: &[Vec<f64>]) -> Mesh {
    let (xs, ys) = (&ticks[0], &ticks[1]);
    let (nx, ny) = (xs.len() - 1, ys.len() - 1);
    let mut mesh = Mesh { dim: 2, ..Default::default() };
    for j in 0..=ny {
        for i in 0..=nx {
            mesh.nodes.push(Node {
                id: mesh.nodes.len(),
                coords: vec![xs[i], ys[j]],
            });
        }
    }
    let nid = |i: usize, j: usize| j * (nx + 1) + i;
    for j in 0..ny {
        for i in 0..nx {
            mesh.elements.push(Element {
                id: mesh.elements.len(),
                kind: ElementKind::Quad4,
                node_ids: vec![nid(i, j), nid(i + 1, j), nid(i + 1, j + 1), nid(i, j + 1)],
            });
        }
    }
    push_boundary_sets_2d(&mut mesh, xs, ys);
    mesh
}

fn tri3_grid(ticks: &[Vec<f64>]) -> Mesh {
    let mut mesh = quad4_grid(ticks);
    let quads = std::mem::take(&mut mesh.elements);
    for q in quads {
        let n = &q.node_ids;
        mesh.elements.push(Element {
            id: mesh.elements.len(),
            kind: ElementKind::Tri3,
            node_ids: vec![n[0], n[1], n[2]],
        });
        mesh.elements.push(Element {
            id: mesh.elements.len(),
            kind: ElementKind::Tri3,
            node_ids: vec![n[0], n[2], n[3]],
        });
    }
    mesh
}

fn quad8_grid(ticks: &[Vec<f64>]) -> Mesh {
    let (xs, ys) = (&ticks[0], &ticks[1]);
    let (nx, ny) = (xs.len() - 1, ys.len() - 1);
    let mut mesh = Mesh { dim: 2, ..Default::default() };
    // corner grid
    for j in 0..=ny {
        for i in 0..=nx {
            mesh.nodes.push(Node {
                id: mesh.nodes.len(),
                coords: vec![xs[i], ys[j]],
            });
        }
    }
    let corner = |i: usize, j: usize| j * (nx + 1) + i;
    // horizontal mid-edge nodes (between (i,j) and (i+1,j))
    let h_base = mesh.nodes.len();
    for j in 0..=ny {
        for i in 0..nx {
            mesh.nodes.push(Node {
                id: mesh.nodes.len(),
                coords: vec![0.5 * (xs[i] + xs[i + 1]), ys[j]],
            });
        }
    }
    let hmid = |i: usize, j: usize| h_base + j * nx + i;
    // vertical mid-edge nodes (between (i,j) and (i,j+1))
    let v_base = mesh.nodes.len();
    for j in 0..ny {
        for i in 0..=nx {
            mesh.nodes.push(Node {
                id: mesh.nodes.len(),
                coords: vec![xs[i], 0.5 * (ys[j] + ys[j + 1])],
            });
        }
    }
    let vmid = |i: usize, j: usize| v_base + j * (nx + 1) + i;
    for j in 0..ny {
        for i in 0..nx {
            mesh.elements.push(Element {
                id: mesh.elements.len(),
                kind: ElementKind::Quad8,
                node_ids: vec![
                    corner(i, j),
                    corner(i + 1, j),
                    corner(i + 1, j + 1),
                    corner(i, j + 1),
                    hmid(i, j),
                    vmid(i + 1, j),
                    hmid(i, j + 1),
                    vmid(i, j),
                ],
            });
        }
    }
    push_boundary_sets_2d(&mut mesh, xs, ys);
    mesh
}

fn hex8_grid(ticks: &[Vec<f64>]) -> Mesh {
    let (xs, ys, zs) = (&ticks[0], &ticks[1], &ticks[2]);
    let (nx, ny, nz) = (xs.len() - 1, ys.len() - 1, zs.len() - 1);
    let mut mesh = Mesh { dim: 3, ..Default::default() };
    for k in 0..=nz {
        for j in 0..=ny {
            for i in 0..=nx {
                mesh.nodes.push(Node {
                    id: mesh.nodes.len(),
                    coords: vec![xs[i], ys[j], zs[k]],
                });
            }
        }
    }
    let nid = |i: usize, j: usize, k: usize| (k * (ny + 1) + j) * (nx + 1) + i;
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                mesh.elements.push(Element {
                    id: mesh.elements.len(),
                    kind: ElementKind::Hex8,
                    node_ids: vec![
                        nid(i, j, k),
                        nid(i + 1, j, k),
                        nid(i + 1, j + 1, k),
                        nid(i, j + 1, k),
                        nid(i, j, k + 1),
                        nid(i + 1, j, k + 1),
                        nid(i + 1, j + 1, k + 1),
                        nid(i, j + 1, k + 1),
                    ],
                });
            }
        }
    }
    let (x0, x1) = (xs[0], *xs.last().unwrap());
    let (y0, y1) = (ys[0], *ys.last().unwrap());
    let (z0, z1) = (zs[0], *zs.last().unwrap());
    let mut sets: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for n in &mesh.nodes {
        let (x, y, z) = (n.coords[0], n.coords[1], n.coords[2]);
        if x == x0 {
            sets.entry("left").or_default().push(n.id);
        }
        if x == x1 {
            sets.entry("right").or_default().push(n.id);
        }
        if y == y0 {
            sets.entry("bottom").or_default().push(n.id);
        }
        if y == y1 {
            sets.entry("top").or_default().push(n.id);
        }
        if z == z0 {
            sets.entry("front").or_default().push(n.id);
        }
        if z == z1 {
            sets.entry("back").or_default().push(n.id);
        }
    }
    for (k, v) in sets {
        mesh.node_sets.insert(k.to_string(), v);
    }
    mesh
}

/// Geometric grading helper: ticks from `a` to `b` starting at spacing `h0`,
/// each following interval stretched by `ratio` (capped so the last tick
/// lands exactly on `b`).
pub fn graded_ticks(a: f64, b: f64, h0: f64, ratio: f64) -> Vec<f64> {
    assert!(b > a && h0 > 0.0 && ratio >= 1.0);
    let mut ticks = vec![a];
    let mut x = a;
    let mut h = h0;
    while x + h < b - 1e-12 * (b - a) {
        x += h;
        ticks.push(x);
        h *= ratio;
    }
    // stretch the tail so the final tick is exactly b
    let last = *ticks.last().unwrap();
    if ticks.len() > 1 && (b - last) < 0.5 * (last - ticks[ticks.len() - 2]) {
        ticks.pop();
    }
    ticks.push(b);
    ticks
}

/// Uniform ticks from `a` to `b` with `n` intervals.
pub fn uniform_ticks(a: f64, b: f64, n: usize) -> Vec<f64> {
    let h = (b - a) / n as f64;
    (0..=n).map(|i| if i == n { b } else { a + i as f64 * h }).collect()
}
