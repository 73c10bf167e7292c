//! Structured generators: squares, right triangles (unit square or L-shape)
//! and trapezoids on `[0,1]^2`.

use super::PolygonalMesh;
use crate::error::MeshError;

/// Vertical offset of interior grid rows for trapezoidal meshes, as a fraction
/// of the grid spacing `1/n`.
pub const TRAPEZOID_OFFSET: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriangleDomain {
    /// `[0,1]^2`
    UnitSquare,
    /// `[-1,1]^2` minus `(0,1) x (-1,0)`; re-entrant corner at the origin.
    LShaped,
}

fn check_n(n: usize) -> Result<(), MeshError> {
    if n == 0 {
        return Err(MeshError::InvalidParameter(
            "number of divisions must be at least 1".into(),
        ));
    }
    Ok(())
}

/// `n x n` axis-aligned squares covering the unit square.
pub fn generate_square_mesh(n: usize) -> Result<PolygonalMesh, MeshError> {
    check_n(n)?;
    let (points, idx) = grid_points(n, |x, y| [x, y]);
    let mut cells = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            cells.push(vec![idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    PolygonalMesh::from_polygons(&points, &cells)
}

/// Structured right triangles: every grid square is split along its
/// lower-right to upper-left diagonal. For the L-shaped domain `n` counts the
/// divisions of `[-1,1]` and must be even so that the origin is a vertex.
pub fn generate_triangle_mesh(
    n: usize,
    domain: TriangleDomain,
) -> Result<PolygonalMesh, MeshError> {
    check_n(n)?;
    match domain {
        TriangleDomain::UnitSquare => {
            let (points, idx) = grid_points(n, |x, y| [x, y]);
            let mut cells = Vec::with_capacity(2 * n * n);
            for j in 0..n {
                for i in 0..n {
                    split_square(&mut cells, idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
                }
            }
            PolygonalMesh::from_polygons(&points, &cells)
        }
        TriangleDomain::LShaped => {
            if !n.is_multiple_of(2) {
                return Err(MeshError::InvalidParameter(format!(
                    "L-shaped triangle mesh needs an even number of divisions, got {n}"
                )));
            }
            let half = n / 2;
            let removed = |i: usize, j: usize| i >= half && j < half;
            // keep only grid points touching a retained square
            let side = n + 1;
            let mut map = vec![usize::MAX; side * side];
            let mut points = Vec::new();
            let step = 2.0 / n as f64;
            for j in 0..=n {
                for i in 0..=n {
                    let touches = [(0, 0), (1, 0), (0, 1), (1, 1)].iter().any(|&(di, dj)| {
                        let (ci, cj) = (i as isize - di, j as isize - dj);
                        ci >= 0
                            && cj >= 0
                            && (ci as usize) < n
                            && (cj as usize) < n
                            && !removed(ci as usize, cj as usize)
                    });
                    if touches {
                        map[j * side + i] = points.len();
                        points.push([-1.0 + i as f64 * step, -1.0 + j as f64 * step]);
                    }
                }
            }
            let idx = |i: usize, j: usize| map[j * side + i];
            let mut cells = Vec::new();
            for j in 0..n {
                for i in 0..n {
                    if removed(i, j) {
                        continue;
                    }
                    split_square(&mut cells, idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
                }
            }
            PolygonalMesh::from_polygons(&points, &cells)
        }
    }
}

/// Square grid whose interior rows are shifted vertically by
/// `±TRAPEZOID_OFFSET / n` in a checkerboard pattern. Every cell keeps two
/// vertical sides, so cells are trapezoids; `n = 1` yields the unit square.
pub fn generate_trapezoid_mesh(n: usize) -> Result<PolygonalMesh, MeshError> {
    check_n(n)?;
    let h = 1.0 / n as f64;
    let (points, idx) = grid_points(n, |x, y| {
        let (i, j) = ((x * n as f64).round() as usize, (y * n as f64).round() as usize);
        if j == 0 || j == n {
            [x, y]
        } else {
            let s = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            [x, y + s * TRAPEZOID_OFFSET * h]
        }
    });
    let mut cells = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            cells.push(vec![idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    PolygonalMesh::from_polygons(&points, &cells)
}

fn split_square(cells: &mut Vec<Vec<usize>>, a: usize, b: usize, c: usize, d: usize) {
    // a, b, c, d counter-clockwise from the lower-left corner
    cells.push(vec![a, b, d]);
    cells.push(vec![b, c, d]);
}

fn grid_points(
    n: usize,
    place: impl Fn(f64, f64) -> [f64; 2],
) -> (Vec<[f64; 2]>, impl Fn(usize, usize) -> usize) {
    let mut points = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            points.push(place(i as f64 / n as f64, j as f64 / n as f64));
        }
    }
    (points, move |i: usize, j: usize| j * (n + 1) + i)
}
