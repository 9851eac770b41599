//! ASCII mesh reader/writer.
//!
//! The format is a subset of the Gmsh v2.2 text format plus a `$Sets`
//! extension block for named node/element sets. Grammar (line oriented,
//! whitespace separated, ids 1-based in the file):
//!
//! ```text
//! $MeshFormat            (optional block)
//! 2.2 0 8
//! $EndMeshFormat
//! $Nodes
//! <count>
//! <id> <x> <y> <z>       (one line per node)
//! $EndNodes
//! $Elements
//! <count>
//! <id> <type> <ntags> <tag...> <node-id...>
//! $EndElements
//! $Sets                  (extension block, optional)
//! <count>
//! <name> <node|element> <n>
//! <id...>                (n ids, any number per line)
//! $EndSets
//! ```
//!
//! Supported element type codes: 2 = tri3, 3 = quad4, 16 = quad8, 5 = hex8.
//! Tags are accepted and ignored. Node ids must form a contiguous range
//! starting at 1; the in-memory mesh is 0-based.

use super::{Element, ElementKind, Mesh, Node};
use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

fn kind_code(kind: ElementKind) -> usize {
    match kind {
        ElementKind::Tri3 => 2,
        ElementKind::Quad4 => 3,
        ElementKind::Hex8 => 5,
        ElementKind::Quad8 => 16,
    }
}

fn code_kind(code: usize) -> Option<ElementKind> {
    match code {
        2 => Some(ElementKind::Tri3),
        3 => Some(ElementKind::Quad4),
        5 => Some(ElementKind::Hex8),
        16 => Some(ElementKind::Quad8),
        _ => None,
    }
}

pub fn read_mesh(path: impl AsRef<Path>) -> Result<Mesh> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    read_mesh_str(&text)
}

struct Lines<'a> {
    iter: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    /// Next non-empty line with its 1-based number.
    fn next_line(&mut self) -> Option<(usize, &'a str)> {
        for (i, l) in self.iter.by_ref() {
            let t = l.trim();
            if !t.is_empty() {
                return Some((i + 1, t));
            }
        }
        None
    }
}

fn parse<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse().map_err(|_| Error::MeshFormat {
        line,
        msg: format!("cannot parse {what} from `{tok}`"),
    })
}

pub fn read_mesh_str(text: &str) -> Result<Mesh> {
    let mut lines = Lines { iter: text.lines().enumerate() };
    let mut raw_nodes: Vec<(usize, [f64; 3])> = Vec::new();
    let mut raw_elems: Vec<(usize, ElementKind, Vec<usize>)> = Vec::new();
    let mut raw_sets: Vec<(String, bool, Vec<usize>)> = Vec::new(); // (name, is_node, ids)

    while let Some((ln, l)) = lines.next_line() {
        match l {
            "$MeshFormat" => {
                let (vln, v) = lines
                    .next_line()
                    .ok_or(Error::MeshFormat { line: ln, msg: "unterminated $MeshFormat".into() })?;
                let ver = v.split_whitespace().next().unwrap_or("");
                if ver != "2.2" {
                    return Err(Error::MeshFormat {
                        line: vln,
                        msg: format!("unsupported mesh format version `{ver}` (expected 2.2)"),
                    });
                }
                expect_end(&mut lines, "$EndMeshFormat")?;
            }
            "$Nodes" => {
                let (cln, c) = lines
                    .next_line()
                    .ok_or(Error::MeshFormat { line: ln, msg: "missing node count".into() })?;
                let count: usize = parse(c, cln, "node count")?;
                for _ in 0..count {
                    let (nln, nl) = lines
                        .next_line()
                        .ok_or(Error::MeshFormat { line: cln, msg: "truncated $Nodes block".into() })?;
                    let toks: Vec<&str> = nl.split_whitespace().collect();
                    if toks.len() < 4 {
                        return Err(Error::MeshFormat {
                            line: nln,
                            msg: "node line needs `id x y z`".into(),
                        });
                    }
                    let id: usize = parse(toks[0], nln, "node id")?;
                    let x: f64 = parse(toks[1], nln, "x coordinate")?;
                    let y: f64 = parse(toks[2], nln, "y coordinate")?;
                    let z: f64 = parse(toks[3], nln, "z coordinate")?;
                    raw_nodes.push((id, [x, y, z]));
                }
                expect_end(&mut lines, "$EndNodes")?;
            }
            "$Elements" => {
                let (cln, c) = lines
                    .next_line()
                    .ok_or(Error::MeshFormat { line: ln, msg: "missing element count".into() })?;
                let count: usize = parse(c, cln, "element count")?;
                for _ in 0..count {
                    let (eln, el) = lines.next_line().ok_or(Error::MeshFormat {
                        line: cln,
                        msg: "truncated $Elements block".into(),
                    })?;
                    let toks: Vec<&str> = el.split_whitespace().collect();
                    if toks.len() < 3 {
                        return Err(Error::MeshFormat {
                            line: eln,
                            msg: "element line needs `id type ntags ...`".into(),
                        });
                    }
                    let id: usize = parse(toks[0], eln, "element id")?;
                    let code: usize = parse(toks[1], eln, "element type")?;
                    let kind = code_kind(code).ok_or(Error::MeshFormat {
                        line: eln,
                        msg: format!("unsupported element type code {code}"),
                    })?;
                    let ntags: usize = parse(toks[2], eln, "tag count")?;
                    let need = 3 + ntags + kind.node_count();
                    if toks.len() != need {
                        return Err(Error::MeshFormat {
                            line: eln,
                            msg: format!(
                                "element of type {code} needs {} node ids after {ntags} tags",
                                kind.node_count()
                            ),
                        });
                    }
                    let mut nodes = Vec::with_capacity(kind.node_count());
                    for t in &toks[3 + ntags..] {
                        nodes.push(parse::<usize>(t, eln, "element node id")?);
                    }
                    raw_elems.push((id, kind, nodes));
                }
                expect_end(&mut lines, "$EndElements")?;
            }
            "$Sets" => {
                let (cln, c) = lines
                    .next_line()
                    .ok_or(Error::MeshFormat { line: ln, msg: "missing set count".into() })?;
                let count: usize = parse(c, cln, "set count")?;
                for _ in 0..count {
                    let (hln, h) = lines
                        .next_line()
                        .ok_or(Error::MeshFormat { line: cln, msg: "truncated $Sets block".into() })?;
                    let toks: Vec<&str> = h.split_whitespace().collect();
                    if toks.len() != 3 {
                        return Err(Error::MeshFormat {
                            line: hln,
                            msg: "set header needs `name node|element count`".into(),
                        });
                    }
                    let is_node = match toks[1] {
                        "node" => true,
                        "element" => false,
                        other => {
                            return Err(Error::MeshFormat {
                                line: hln,
                                msg: format!("set kind must be `node` or `element`, got `{other}`"),
                            })
                        }
                    };
                    let n: usize = parse(toks[2], hln, "set size")?;
                    let mut ids = Vec::with_capacity(n);
                    while ids.len() < n {
                        let (iln, il) = lines.next_line().ok_or(Error::MeshFormat {
                            line: hln,
                            msg: "truncated set id list".into(),
                        })?;
                        for t in il.split_whitespace() {
                            ids.push(parse::<usize>(t, iln, "set id")?);
                        }
                    }
                    if ids.len() != n {
                        return Err(Error::MeshFormat {
                            line: hln,
                            msg: format!("set `{}` lists {} ids, declared {n}", toks[0], ids.len()),
                        });
                    }
                    raw_sets.push((toks[0].to_string(), is_node, ids));
                }
                expect_end(&mut lines, "$EndSets")?;
            }
            other => {
                return Err(Error::MeshFormat {
                    line: ln,
                    msg: format!("unexpected content `{other}`"),
                })
            }
        }
    }

    // ids must be 1..=n contiguous
    raw_nodes.sort_by_key(|(id, _)| *id);
    for (i, (id, _)) in raw_nodes.iter().enumerate() {
        if *id != i + 1 {
            return Err(Error::MeshFormat {
                line: 0,
                msg: format!("node ids must be contiguous from 1, missing id {}", i + 1),
            });
        }
    }
    raw_elems.sort_by_key(|(id, _, _)| *id);

    let dim = if raw_elems.iter().any(|(_, k, _)| *k == ElementKind::Hex8) { 3 } else { 2 };
    if dim == 3 && raw_elems.iter().any(|(_, k, _)| *k != ElementKind::Hex8) {
        return Err(Error::MeshFormat {
            line: 0,
            msg: "mixed 2D/3D element kinds in one mesh".into(),
        });
    }

    let mut mesh = Mesh { dim, ..Default::default() };
    for (i, (_, xyz)) in raw_nodes.iter().enumerate() {
        mesh.nodes.push(Node { id: i, coords: xyz[..dim].to_vec() });
    }
    let n_nodes = mesh.nodes.len();
    for (i, (_, kind, nodes)) in raw_elems.iter().enumerate() {
        let mut ids = Vec::with_capacity(nodes.len());
        for &n in nodes {
            if n == 0 || n > n_nodes {
                return Err(Error::DanglingNode { element: i, node: n });
            }
            ids.push(n - 1);
        }
        mesh.elements.push(Element { id: i, kind: *kind, node_ids: ids });
    }
    for (name, is_node, ids) in raw_sets {
        let limit = if is_node { n_nodes } else { mesh.elements.len() };
        let mut zeroed = Vec::with_capacity(ids.len());
        for id in ids {
            if id == 0 || id > limit {
                return Err(Error::MeshFormat {
                    line: 0,
                    msg: format!("set `{name}` references missing id {id}"),
                });
            }
            zeroed.push(id - 1);
        }
        if is_node {
            mesh.node_sets.insert(name, zeroed);
        } else {
            mesh.element_sets.insert(name, zeroed);
        }
    }

    mesh.validate()?;
    Ok(mesh)
}

fn expect_end(lines: &mut Lines, tag: &str) -> Result<()> {
    match lines.next_line() {
        Some((_, l)) if l == tag => Ok(()),
        Some((ln, l)) => Err(Error::MeshFormat {
            line: ln,
            msg: format!("expected `{tag}`, found `{l}`"),
        }),
        None => Err(Error::MeshFormat { line: 0, msg: format!("missing `{tag}`") }),
    }
}

pub fn write_mesh(mesh: &Mesh, path: impl AsRef<Path>) -> Result<()> {
    let mut out = String::new();
    out.push_str("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n");
    let _ = writeln!(out, "{}", mesh.nodes.len());
    for n in &mesh.nodes {
        let x = n.coords[0];
        let y = n.coords.get(1).copied().unwrap_or(0.0);
        let z = n.coords.get(2).copied().unwrap_or(0.0);
        let _ = writeln!(out, "{} {} {} {}", n.id + 1, x, y, z);
    }
    out.push_str("$EndNodes\n$Elements\n");
    let _ = writeln!(out, "{}", mesh.elements.len());
    for e in &mesh.elements {
        let _ = write!(out, "{} {} 0", e.id + 1, kind_code(e.kind));
        for &n in &e.node_ids {
            let _ = write!(out, " {}", n + 1);
        }
        out.push('\n');
    }
    out.push_str("$EndElements\n");
    if !mesh.node_sets.is_empty() || !mesh.element_sets.is_empty() {
        out.push_str("$Sets\n");
        let _ = writeln!(out, "{}", mesh.node_sets.len() + mesh.element_sets.len());
        for (name, ids) in &mesh.node_sets {
            let _ = writeln!(out, "{name} node {}", ids.len());
            write_id_lines(&mut out, ids);
        }
        for (name, ids) in &mesh.element_sets {
            let _ = writeln!(out, "{name} element {}", ids.len());
            write_id_lines(&mut out, ids);
        }
        out.push_str("$EndSets\n");
    }
    let path = path.as_ref();
    std::fs::write(path, out).map_err(|e| Error::io(path.display().to_string(), e))
}

fn write_id_lines(out: &mut String, ids: &[usize]) {
    for chunk in ids.chunks(16) {
        let line: Vec<String> = chunk.iter().map(|i| (i + 1).to_string()).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE_QUAD: &str = "$Nodes\n4\n1 0 0 0\n2 1 0 0\n3 1 1 0\n4 0 1 0\n$EndNodes\n\
$Elements\n1\n1 3 2 0 0 1 2 3 4\n$EndElements\n";

    #[test]
    fn single_quad_parses() {
        let m = read_mesh_str(ONE_QUAD).unwrap();
        assert_eq!(m.n_nodes(), 4);
        assert_eq!(m.n_elements(), 1);
        assert_eq!(m.elements[0].kind, ElementKind::Quad4);
    }

    #[test]
    fn dangling_node_reference() {
        let bad = ONE_QUAD.replace("1 2 3 4", "1 2 3 99");
        match read_mesh_str(&bad) {
            Err(Error::DanglingNode { node: 99, .. }) => {}
            other => panic!("expected dangling-node error, got {other:?}"),
        }
    }

    #[test]
    fn collapsed_element_is_inverted() {
        // node 3 collapses onto node 1: det J <= 0 at some quadrature point
        let bad = ONE_QUAD.replace("3 1 1 0", "3 0 0 0");
        match read_mesh_str(&bad) {
            Err(Error::InvertedElement { .. }) => {}
            other => panic!("expected inverted-element error, got {other:?}"),
        }
    }

    #[test]
    fn parse_error_carries_line_number() {
        let bad = ONE_QUAD.replace("2 1 0 0", "2 X 0 0");
        match read_mesh_str(&bad) {
            Err(Error::MeshFormat { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn roundtrip_with_sets() {
        let mut m = read_mesh_str(ONE_QUAD).unwrap();
        m.node_sets.insert("corner".into(), vec![0, 2]);
        m.element_sets.insert("all".into(), vec![0]);
        let dir = std::env::temp_dir().join("pfmsim_mesh_roundtrip.msh");
        write_mesh(&m, &dir).unwrap();
        let m2 = read_mesh(&dir).unwrap();
        assert_eq!(m2.node_set("corner").unwrap(), &[0, 2]);
        assert_eq!(m2.element_set("all").unwrap(), &[0]);
        assert_eq!(m2.n_nodes(), m.n_nodes());
        let _ = std::fs::remove_file(&dir);
    }
}
