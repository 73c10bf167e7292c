//! Plain-text mesh files.
//!
//! ```text
//! nv ne nc
//! x y boundary_flag          (nv lines)
//! v0 v1 boundary_flag        (ne lines)
//! k v_0 ... v_{k-1}          (nc lines, counterclockwise)
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Coordinates are
//! written in shortest round-trip form, so `load(save(m)) == m`.

use std::fmt::Write as _;
use std::path::Path;

use super::PolygonalMesh;
use crate::error::MeshError;

pub fn save_mesh(mesh: &PolygonalMesh, path: impl AsRef<Path>) -> Result<(), MeshError> {
    std::fs::write(path, write_mesh(mesh))?;
    Ok(())
}

pub fn load_mesh(path: impl AsRef<Path>) -> Result<PolygonalMesh, MeshError> {
    let text = std::fs::read_to_string(path)?;
    parse_mesh(&text)
}

pub fn write_mesh(mesh: &PolygonalMesh) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {} {}", mesh.num_vertices(), mesh.num_edges(), mesh.num_cells());
    for v in &mesh.vertices {
        let _ = writeln!(s, "{} {} {}", v.x, v.y, v.on_boundary as u8);
    }
    for e in &mesh.edges {
        let _ = writeln!(s, "{} {} {}", e.vertices[0], e.vertices[1], e.on_boundary as u8);
    }
    for c in &mesh.cells {
        let _ = write!(s, "{}", c.vertices.len());
        for v in &c.vertices {
            let _ = write!(s, " {v}");
        }
        s.push('\n');
    }
    s
}

fn parse_flag(tok: &str, line: usize) -> Result<bool, MeshError> {
    match tok {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(MeshError::Parse {
            line,
            msg: format!("boundary flag must be 0 or 1, got {tok:?}"),
        }),
    }
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, MeshError> {
    tok.parse().map_err(|_| MeshError::Parse {
        line,
        msg: format!("invalid {what} {tok:?}"),
    })
}

pub fn parse_mesh(text: &str) -> Result<PolygonalMesh, MeshError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(MeshError::MalformedCounts {
        line: 0,
        msg: "empty file".into(),
    })?;
    let counts: Vec<&str> = header.split_whitespace().collect();
    if counts.len() != 3 {
        return Err(MeshError::MalformedCounts {
            line: hline,
            msg: format!("expected \"nv ne nc\", got {header:?}"),
        });
    }
    let count = |t: &str| {
        t.parse::<usize>().map_err(|_| MeshError::MalformedCounts {
            line: hline,
            msg: format!("invalid count {t:?}"),
        })
    };
    let (nv, ne, nc) = (count(counts[0])?, count(counts[1])?, count(counts[2])?);
    // Every record takes at least one line, which bounds the counts.
    let budget = text.len();
    if nv > budget || ne > budget || nc > budget {
        return Err(MeshError::MalformedCounts {
            line: hline,
            msg: "counts exceed the file size".into(),
        });
    }

    let mut next = |what: &str| {
        lines.next().ok_or_else(|| MeshError::MalformedCounts {
            line: hline,
            msg: format!("file ends before all {what} records were read"),
        })
    };

    let mut points = Vec::with_capacity(nv);
    let mut vflags = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (ln, l) = next("vertex")?;
        let t: Vec<&str> = l.split_whitespace().collect();
        if t.len() != 3 {
            return Err(MeshError::Parse {
                line: ln,
                msg: "vertex record needs \"x y boundary_flag\"".into(),
            });
        }
        points.push([parse_num::<f64>(t[0], ln, "coordinate")?, parse_num::<f64>(t[1], ln, "coordinate")?]);
        vflags.push(parse_flag(t[2], ln)?);
    }

    let mut edges = Vec::with_capacity(ne);
    let mut eflags = Vec::with_capacity(ne);
    for i in 0..ne {
        let (ln, l) = next("edge")?;
        let t: Vec<&str> = l.split_whitespace().collect();
        if t.len() != 3 {
            return Err(MeshError::Parse {
                line: ln,
                msg: "edge record needs \"v0 v1 boundary_flag\"".into(),
            });
        }
        let (a, b) = (parse_num::<usize>(t[0], ln, "vertex index")?, parse_num::<usize>(t[1], ln, "vertex index")?);
        for v in [a, b] {
            if v >= nv {
                return Err(MeshError::DanglingIndex {
                    what: format!("edge {i}"),
                    index: v,
                    count: nv,
                });
            }
        }
        edges.push([a, b]);
        eflags.push(parse_flag(t[2], ln)?);
    }

    let mut cells = Vec::with_capacity(nc);
    for c in 0..nc {
        let (ln, l) = next("cell")?;
        let mut t = l.split_whitespace();
        let k: usize = parse_num(t.next().unwrap_or(""), ln, "vertex count")?;
        let lp: Vec<usize> = t
            .map(|tok| parse_num::<usize>(tok, ln, "vertex index"))
            .collect::<Result<_, _>>()?;
        if lp.len() != k {
            return Err(MeshError::Parse {
                line: ln,
                msg: format!("cell declares {k} vertices but lists {}", lp.len()),
            });
        }
        if let Some(&bad) = lp.iter().find(|&&v| v >= nv) {
            return Err(MeshError::DanglingIndex {
                what: format!("cell {c}"),
                index: bad,
                count: nv,
            });
        }
        cells.push(lp);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(MeshError::MalformedCounts {
            line: ln,
            msg: "trailing records after the declared counts".into(),
        });
    }

    let mesh = PolygonalMesh::from_polygons_with_edges(&points, &cells, &edges)?;
    for (v, &f) in mesh.vertices.iter().zip(&vflags) {
        if v.on_boundary != f {
            return Err(MeshError::BoundaryFlagMismatch {
                what: format!("vertex {}", v.id),
            });
        }
    }
    for (e, &f) in mesh.edges.iter().zip(&eflags) {
        if e.on_boundary != f {
            return Err(MeshError::BoundaryFlagMismatch {
                what: format!("edge {}", e.id),
            });
        }
    }
    Ok(mesh)
}
