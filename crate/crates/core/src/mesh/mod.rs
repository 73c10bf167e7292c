//! Polygonal meshes: topology, geometry, generators, file I/O and
//! shape-regularity diagnostics.
//!
//! Every cell is a simple polygon stored as a counterclockwise vertex loop.
//! Edge `i` of a cell joins its vertices `i` and `i + 1`. Each mesh edge has a
//! single global orientation: the *owner* (the adjacent cell with the lower id,
//! or the only one on the boundary) traverses it from `vertices[0]` to
//! `vertices[1]`, and the stored normal points out of the owner. The other cell
//! sees the edge with sign `-1`.

mod diagnostics;
mod generate;
mod io;
mod voronoi;

use std::collections::HashMap;

use nalgebra::Vector2;

pub use diagnostics::{shape_diagnostics, CellShape};
pub use generate::{
    generate_square_mesh, generate_trapezoid_mesh, generate_triangle_mesh, TriangleDomain,
    TRAPEZOID_OFFSET,
};
pub use io::{load_mesh, parse_mesh, save_mesh, write_mesh};
pub use voronoi::{generate_voronoi_mesh, voronoi_mesh_from_seeds, DEFAULT_LLOYD_ITERATIONS};

use crate::error::MeshError;

pub type Vec2 = Vector2<f64>;

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    pub on_boundary: bool,
}

impl Vertex {
    pub fn point(&self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub id: usize,
    /// Endpoints in the owner's counterclockwise traversal order.
    pub vertices: [usize; 2],
    pub length: f64,
    /// Unit normal, outward from the owner cell.
    pub normal: Vec2,
    /// Unit tangent `(-n_y, n_x)`; points from `vertices[0]` to `vertices[1]`.
    pub tangent: Vec2,
    pub on_boundary: bool,
    pub owner: usize,
    pub neighbor: Option<usize>,
}

impl Edge {
    pub fn cells(&self) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(self.owner).chain(self.neighbor)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub id: usize,
    /// Counterclockwise vertex loop.
    pub vertices: Vec<usize>,
    /// `edges[i]` joins `vertices[i]` and `vertices[(i + 1) % n]`.
    pub edges: Vec<usize>,
    /// `+1` when the stored edge normal is outward for this cell, `-1` otherwise.
    pub edge_signs: Vec<f64>,
    pub area: f64,
    pub centroid: Vec2,
    pub diameter: f64,
}

impl Cell {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolygonalMesh {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub cells: Vec<Cell>,
    /// Largest cell diameter.
    pub h: f64,
}

/// Local view of one cell: coordinates and per-edge frames oriented for this
/// cell (outward normal, counterclockwise tangent).
#[derive(Debug, Clone)]
pub struct CellGeometry {
    pub id: usize,
    pub points: Vec<Vec2>,
    pub normals: Vec<Vec2>,
    pub tangents: Vec<Vec2>,
    pub lengths: Vec<f64>,
    pub signs: Vec<f64>,
    pub area: f64,
    pub centroid: Vec2,
    pub diameter: f64,
}

impl CellGeometry {
    pub fn num_vertices(&self) -> usize {
        self.points.len()
    }

    /// Midpoint of local edge `i`.
    pub fn edge_midpoint(&self, i: usize) -> Vec2 {
        let n = self.points.len();
        0.5 * (self.points[i] + self.points[(i + 1) % n])
    }
}

impl PolygonalMesh {
    /// Builds a mesh from vertex coordinates and cell loops. Clockwise loops
    /// are reoriented with a warning. Edge ids follow first appearance while
    /// scanning cells in order.
    pub fn from_polygons(points: &[[f64; 2]], cells: &[Vec<usize>]) -> Result<Self, MeshError> {
        Self::build(points, cells, None)
    }

    /// As [`PolygonalMesh::from_polygons`], with edge ids fixed by `edge_order`
    /// (unordered vertex pairs). The list must cover every edge exactly once.
    pub fn from_polygons_with_edges(
        points: &[[f64; 2]],
        cells: &[Vec<usize>],
        edge_order: &[[usize; 2]],
    ) -> Result<Self, MeshError> {
        Self::build(points, cells, Some(edge_order))
    }

    fn build(
        points: &[[f64; 2]],
        cells: &[Vec<usize>],
        edge_order: Option<&[[usize; 2]]>,
    ) -> Result<Self, MeshError> {
        let nv = points.len();
        for (i, p) in points.iter().enumerate() {
            if !p[0].is_finite() || !p[1].is_finite() {
                return Err(MeshError::NonFinite(i));
            }
        }
        let pts: Vec<Vec2> = points.iter().map(|p| Vec2::new(p[0], p[1])).collect();

        let mut loops = Vec::with_capacity(cells.len());
        for (c, lp) in cells.iter().enumerate() {
            if lp.len() < 3 {
                return Err(MeshError::DegenerateCell(c));
            }
            if let Some(&bad) = lp.iter().find(|&&v| v >= nv) {
                return Err(MeshError::DanglingIndex {
                    what: format!("cell {c}"),
                    index: bad,
                    count: nv,
                });
            }
            let mut lp = lp.clone();
            let poly: Vec<Vec2> = lp.iter().map(|&v| pts[v]).collect();
            let area = signed_area(&poly);
            let scale = diameter(&poly).powi(2);
            if !(area.abs() > 1e-14 * scale) {
                return Err(MeshError::DegenerateCell(c));
            }
            if area < 0.0 {
                log::warn!("cell {c} is clockwise; reorienting");
                lp.reverse();
            }
            let poly: Vec<Vec2> = lp.iter().map(|&v| pts[v]).collect();
            if !is_simple(&poly) {
                return Err(MeshError::SelfIntersecting(c));
            }
            loops.push(lp);
        }

        // Edge discovery keyed by the unordered vertex pair.
        let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut adjacency: Vec<Vec<(usize, [usize; 2])>> = Vec::new();
        if let Some(order) = edge_order {
            for (i, e) in order.iter().enumerate() {
                for &v in e {
                    if v >= nv {
                        return Err(MeshError::DanglingIndex {
                            what: format!("edge {i}"),
                            index: v,
                            count: nv,
                        });
                    }
                }
                if e[0] == e[1] || index.insert(key(e[0], e[1]), i).is_some() {
                    return Err(MeshError::EdgeMismatch(format!(
                        "edge {i} ({}, {}) is degenerate or repeated",
                        e[0], e[1]
                    )));
                }
            }
            adjacency.resize(order.len(), Vec::new());
        }
        let mut cell_edges = Vec::with_capacity(loops.len());
        for (c, lp) in loops.iter().enumerate() {
            let n = lp.len();
            let mut ids = Vec::with_capacity(n);
            for i in 0..n {
                let (a, b) = (lp[i], lp[(i + 1) % n]);
                let k = key(a, b);
                let id = match index.get(&k) {
                    Some(&id) => id,
                    None => {
                        if edge_order.is_some() {
                            return Err(MeshError::EdgeMismatch(format!(
                                "cell {c} uses edge ({a}, {b}) missing from the edge list"
                            )));
                        }
                        let id = adjacency.len();
                        index.insert(k, id);
                        adjacency.push(Vec::new());
                        id
                    }
                };
                adjacency[id].push((c, [a, b]));
                if adjacency[id].len() > 2 {
                    return Err(MeshError::NonManifoldEdge(a, b));
                }
                ids.push(id);
            }
            cell_edges.push(ids);
        }

        let mut edges = Vec::with_capacity(adjacency.len());
        for (id, adj) in adjacency.iter().enumerate() {
            if adj.is_empty() {
                return Err(MeshError::EdgeMismatch(format!(
                    "edge {id} is not used by any cell"
                )));
            }
            if adj.len() == 2 && adj[0].1 == adj[1].1 {
                // Both cells traverse the edge in the same direction: overlap.
                return Err(MeshError::NonManifoldEdge(adj[0].1[0], adj[0].1[1]));
            }
            let (owner, verts) = *adj.iter().min_by_key(|(c, _)| *c).unwrap();
            let neighbor = adj.iter().map(|(c, _)| *c).find(|&c| c != owner);
            let (pa, pb) = (pts[verts[0]], pts[verts[1]]);
            let length = (pb - pa).norm();
            let tangent = (pb - pa) / length;
            let normal = Vec2::new(tangent.y, -tangent.x);
            edges.push(Edge {
                id,
                vertices: verts,
                length,
                normal,
                tangent,
                on_boundary: neighbor.is_none(),
                owner,
                neighbor,
            });
        }

        let mut vertices: Vec<Vertex> = pts
            .iter()
            .enumerate()
            .map(|(id, p)| Vertex {
                id,
                x: p.x,
                y: p.y,
                on_boundary: false,
            })
            .collect();
        for e in edges.iter().filter(|e| e.on_boundary) {
            vertices[e.vertices[0]].on_boundary = true;
            vertices[e.vertices[1]].on_boundary = true;
        }

        let mut out_cells = Vec::with_capacity(loops.len());
        let mut h: f64 = 0.0;
        for (c, (lp, ids)) in loops.into_iter().zip(cell_edges).enumerate() {
            let poly: Vec<Vec2> = lp.iter().map(|&v| pts[v]).collect();
            let area = signed_area(&poly);
            let centroid = polygon_centroid(&poly);
            let diam = diameter(&poly);
            h = h.max(diam);
            let edge_signs = ids
                .iter()
                .map(|&e| if edges[e].owner == c { 1.0 } else { -1.0 })
                .collect();
            out_cells.push(Cell {
                id: c,
                vertices: lp,
                edges: ids,
                edge_signs,
                area,
                centroid,
                diameter: diam,
            });
        }

        Ok(PolygonalMesh {
            vertices,
            edges,
            cells: out_cells,
            h,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn total_area(&self) -> f64 {
        self.cells.iter().map(|c| c.area).sum()
    }

    pub fn point(&self, v: usize) -> Vec2 {
        self.vertices[v].point()
    }

    pub fn cell_geometry(&self, c: usize) -> CellGeometry {
        let cell = &self.cells[c];
        let n = cell.vertices.len();
        let points: Vec<Vec2> = cell.vertices.iter().map(|&v| self.point(v)).collect();
        let mut normals = Vec::with_capacity(n);
        let mut tangents = Vec::with_capacity(n);
        let mut lengths = Vec::with_capacity(n);
        for i in 0..n {
            let e = &self.edges[cell.edges[i]];
            let s = cell.edge_signs[i];
            normals.push(s * e.normal);
            tangents.push(s * e.tangent);
            lengths.push(e.length);
        }
        CellGeometry {
            id: c,
            points,
            normals,
            tangents,
            lengths,
            signs: cell.edge_signs.clone(),
            area: cell.area,
            centroid: cell.centroid,
            diameter: cell.diameter,
        }
    }

    /// Euler characteristic `#V - #E + #C` (1 for a simply connected domain).
    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_cells() as i64
    }

    /// Bounding box `(min, max)` of all vertices.
    pub fn bounding_box(&self) -> (Vec2, Vec2) {
        let mut lo = Vec2::repeat(f64::INFINITY);
        let mut hi = Vec2::repeat(f64::NEG_INFINITY);
        for v in &self.vertices {
            lo.x = lo.x.min(v.x);
            lo.y = lo.y.min(v.y);
            hi.x = hi.x.max(v.x);
            hi.y = hi.y.max(v.y);
        }
        (lo, hi)
    }

    /// Index of the cell containing `p`, by brute force.
    pub fn locate(&self, p: Vec2) -> Option<usize> {
        self.cells.iter().position(|c| {
            let poly: Vec<Vec2> = c.vertices.iter().map(|&v| self.point(v)).collect();
            point_in_polygon(&poly, p)
        })
    }
}

pub fn signed_area(poly: &[Vec2]) -> f64 {
    let n = poly.len();
    let mut a = 0.0;
    for i in 0..n {
        let (p, q) = (poly[i], poly[(i + 1) % n]);
        a += p.x * q.y - q.x * p.y;
    }
    0.5 * a
}

pub fn polygon_centroid(poly: &[Vec2]) -> Vec2 {
    // Shift to the first vertex to limit cancellation.
    let o = poly[0];
    let n = poly.len();
    let mut a = 0.0;
    let mut c = Vec2::zeros();
    for i in 0..n {
        let (p, q) = (poly[i] - o, poly[(i + 1) % n] - o);
        let cross = p.x * q.y - q.x * p.y;
        a += cross;
        c += cross * (p + q);
    }
    o + c / (3.0 * a)
}

pub fn diameter(poly: &[Vec2]) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..poly.len() {
        for j in i + 1..poly.len() {
            d = d.max((poly[i] - poly[j]).norm());
        }
    }
    d
}

fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

fn segments_intersect(p1: Vec2, p2: Vec2, q1: Vec2, q2: Vec2) -> bool {
    let d1 = cross(q2 - q1, p1 - q1);
    let d2 = cross(q2 - q1, p2 - q1);
    let d3 = cross(p2 - p1, q1 - p1);
    let d4 = cross(p2 - p1, q2 - p1);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |a: Vec2, b: Vec2, p: Vec2, d: f64| {
        d == 0.0
            && p.x >= a.x.min(b.x)
            && p.x <= a.x.max(b.x)
            && p.y >= a.y.min(b.y)
            && p.y <= a.y.max(b.y)
    };
    on(q1, q2, p1, d1) || on(q1, q2, p2, d2) || on(p1, p2, q1, d3) || on(p1, p2, q2, d4)
}

/// True when no two non-adjacent edges meet and no edge has zero length.
pub fn is_simple(poly: &[Vec2]) -> bool {
    let n = poly.len();
    for i in 0..n {
        if poly[i] == poly[(i + 1) % n] {
            return false;
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            if segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]) {
                return false;
            }
        }
    }
    true
}

pub fn point_in_polygon(poly: &[Vec2], p: Vec2) -> bool {
    let n = poly.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (poly[i], poly[j]);
        if (a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x {
            inside = !inside;
        }
        j = i;
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_square_topology() {
        let m = PolygonalMesh::from_polygons(
            &[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
            &[vec![0, 1, 2, 3]],
        )
        .unwrap();
        assert_eq!(m.num_edges(), 4);
        assert!(m.edges.iter().all(|e| e.on_boundary));
        assert!((m.total_area() - 1.0).abs() < 1e-15);
        // bottom edge normal points down
        assert_eq!(m.edges[0].normal, Vec2::new(0.0, -1.0));
        for e in &m.edges {
            assert_eq!(e.tangent, Vec2::new(-e.normal.y, e.normal.x));
        }
    }

    #[test]
    fn clockwise_cell_is_reoriented() {
        let m = PolygonalMesh::from_polygons(
            &[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
            &[vec![3, 2, 1, 0]],
        )
        .unwrap();
        assert!(m.cells[0].area > 0.0);
    }

    #[test]
    fn bowtie_is_rejected() {
        let r = PolygonalMesh::from_polygons(
            &[[0.0, 0.0], [2.0, 1.0], [2.0, 0.0], [0.0, 2.0]],
            &[vec![0, 1, 2, 3]],
        );
        assert!(matches!(r, Err(MeshError::SelfIntersecting(0))));
    }

    #[test]
    fn dangling_vertex_is_rejected() {
        let r = PolygonalMesh::from_polygons(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]], &[vec![0, 1, 9]]);
        assert!(matches!(r, Err(MeshError::DanglingIndex { index: 9, .. })));
    }
}
