use super::{PolygonalMesh, Vec2};

/// Shape-regularity indicators of one cell, both relative to its diameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellShape {
    /// Radius of the largest disc inside the polygon's kernel, over `h_E`.
    /// The cell is star-shaped with respect to every point of that disc.
    pub rho_star: f64,
    /// `min_e h_e / h_E`.
    pub rho_edge: f64,
}

pub fn shape_diagnostics(mesh: &PolygonalMesh) -> Vec<CellShape> {
    mesh.cells
        .iter()
        .map(|cell| {
            let poly: Vec<Vec2> = cell.vertices.iter().map(|&v| mesh.point(v)).collect();
            let min_edge = cell
                .edges
                .iter()
                .map(|&e| mesh.edges[e].length)
                .fold(f64::INFINITY, f64::min);
            let kernel = polygon_kernel(&poly);
            CellShape {
                rho_star: chebyshev_radius(&kernel) / cell.diameter,
                rho_edge: min_edge / cell.diameter,
            }
        })
        .collect()
}

/// Kernel of a counterclockwise polygon: intersection of the inner
/// half-planes of all its edges. Empty when the polygon is not star-shaped.
pub(crate) fn polygon_kernel(poly: &[Vec2]) -> Vec<Vec2> {
    let n = poly.len();
    let mut k = poly.to_vec();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let t = b - a;
        // inside: cross(t, p - a) >= 0
        let side = |p: &Vec2| t.perp(&(p - a));
        let m = k.len();
        if m == 0 {
            break;
        }
        let mut out = Vec::with_capacity(m + 1);
        for j in 0..m {
            let (p, q) = (k[j], k[(j + 1) % m]);
            let (fp, fq) = (side(&p), side(&q));
            if fp >= 0.0 {
                out.push(p);
            }
            if (fp > 0.0 && fq < 0.0) || (fp < 0.0 && fq > 0.0) {
                out.push(p + fp / (fp - fq) * (q - p));
            }
        }
        k = out;
    }
    k
}

/// Radius of the largest disc inscribed in a convex counterclockwise polygon.
/// The optimum touches three sides (or two parallel ones and a third), so all
/// triples of supporting lines are tried.
pub(crate) fn chebyshev_radius(poly: &[Vec2]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    // inward unit normal and offset: nrm . x >= off
    let lines: Vec<(Vec2, f64)> = (0..n)
        .filter_map(|i| {
            let t = poly[(i + 1) % n] - poly[i];
            let len = t.norm();
            (len > 0.0).then(|| {
                let nrm = Vec2::new(-t.y, t.x) / len;
                (nrm, nrm.dot(&poly[i]))
            })
        })
        .collect();
    let m = lines.len();
    let scale = super::diameter(poly).max(f64::MIN_POSITIVE);
    let mut best: f64 = 0.0;
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                // nrm . c - r = off for the three lines
                let a = nalgebra::Matrix3::new(
                    lines[i].0.x, lines[i].0.y, -1.0,
                    lines[j].0.x, lines[j].0.y, -1.0,
                    lines[k].0.x, lines[k].0.y, -1.0,
                );
                let rhs = nalgebra::Vector3::new(lines[i].1, lines[j].1, lines[k].1);
                let Some(sol) = a.lu().solve(&rhs) else { continue };
                let (c, r) = (Vec2::new(sol.x, sol.y), sol.z);
                if !r.is_finite() || r <= best {
                    continue;
                }
                if lines.iter().all(|(nrm, off)| nrm.dot(&c) - r >= off - 1e-12 * scale) {
                    best = r;
                }
            }
        }
    }
    best
}
