//! Centroidal Voronoi tessellations of the unit square.
//!
//! Cells are computed independently by clipping the square against the
//! bisector half-planes of nearby seeds (found through a bucket grid), then
//! stitched into a conforming mesh by merging coincident vertices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{polygon_centroid, signed_area, PolygonalMesh, Vec2};
use crate::error::MeshError;

pub const DEFAULT_LLOYD_ITERATIONS: usize = 100;

/// Voronoi mesh of `n_seeds` uniformly random seeds (ChaCha8, seeded with
/// `rng_seed`) relaxed by `lloyd_iters` Lloyd steps.
pub fn generate_voronoi_mesh(
    n_seeds: usize,
    lloyd_iters: usize,
    rng_seed: u64,
) -> Result<PolygonalMesh, MeshError> {
    if n_seeds == 0 {
        return Err(MeshError::InvalidParameter("need at least one seed".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let seeds: Vec<Vec2> = (0..n_seeds)
        .map(|_| Vec2::new(rng.random::<f64>(), rng.random::<f64>()))
        .collect();
    voronoi_mesh_from_seeds(&seeds, lloyd_iters)
}

/// Voronoi mesh of explicit seeds in `[0,1]^2` after `lloyd_iters` Lloyd steps.
pub fn voronoi_mesh_from_seeds(
    seeds: &[Vec2],
    lloyd_iters: usize,
) -> Result<PolygonalMesh, MeshError> {
    if seeds.is_empty() {
        return Err(MeshError::InvalidParameter("need at least one seed".into()));
    }
    if let Some(i) = seeds
        .iter()
        .position(|s| !(0.0..=1.0).contains(&s.x) || !(0.0..=1.0).contains(&s.y))
    {
        return Err(MeshError::InvalidParameter(format!(
            "seed {i} lies outside the unit square"
        )));
    }
    let mut seeds = seeds.to_vec();
    check_duplicates(&seeds)?;
    for _ in 0..lloyd_iters {
        let cells = voronoi_cells(&seeds);
        for (s, cell) in seeds.iter_mut().zip(&cells) {
            if cell.len() >= 3 {
                *s = polygon_centroid(cell);
            }
        }
        check_duplicates(&seeds)?;
    }
    let cells = voronoi_cells(&seeds);
    stitch(&cells, 1.0 / (seeds.len() as f64).sqrt())
}

fn check_duplicates(seeds: &[Vec2]) -> Result<(), MeshError> {
    let tol = 1e-12;
    let grid = BucketGrid::new(seeds);
    for (i, s) in seeds.iter().enumerate() {
        for j in grid.within(seeds, *s, tol) {
            if j != i {
                return Err(MeshError::DuplicateSeeds(i.min(j), i.max(j)));
            }
        }
    }
    Ok(())
}

struct BucketGrid {
    n: usize,
    buckets: Vec<Vec<usize>>,
}

impl BucketGrid {
    fn new(seeds: &[Vec2]) -> Self {
        let n = ((seeds.len() as f64).sqrt().ceil() as usize).max(1);
        let mut buckets = vec![Vec::new(); n * n];
        for (i, s) in seeds.iter().enumerate() {
            let (bx, by) = Self::bucket_of(n, *s);
            buckets[by * n + bx].push(i);
        }
        BucketGrid { n, buckets }
    }

    fn bucket_of(n: usize, p: Vec2) -> (usize, usize) {
        let f = |v: f64| ((v * n as f64).floor().max(0.0) as usize).min(n - 1);
        (f(p.x), f(p.y))
    }

    /// Seeds in buckets at Chebyshev ring distance exactly `ring`.
    fn ring(&self, center: (usize, usize), ring: usize) -> Vec<usize> {
        let n = self.n as isize;
        let (cx, cy) = (center.0 as isize, center.1 as isize);
        let r = ring as isize;
        let mut out = Vec::new();
        for by in (cy - r)..=(cy + r) {
            for bx in (cx - r)..=(cx + r) {
                if (bx - cx).abs() != r && (by - cy).abs() != r {
                    continue;
                }
                if bx < 0 || by < 0 || bx >= n || by >= n {
                    continue;
                }
                out.extend_from_slice(&self.buckets[(by * n + bx) as usize]);
            }
        }
        out
    }

    fn within(&self, seeds: &[Vec2], p: Vec2, radius: f64) -> Vec<usize> {
        let c = Self::bucket_of(self.n, p);
        let rings = (radius * self.n as f64).ceil() as usize + 1;
        (0..=rings)
            .flat_map(|r| self.ring(c, r))
            .filter(|&j| (seeds[j] - p).norm() <= radius)
            .collect()
    }
}

fn voronoi_cells(seeds: &[Vec2]) -> Vec<Vec<Vec2>> {
    use rayon::prelude::*;
    let grid = BucketGrid::new(seeds);
    (0..seeds.len())
        .into_par_iter()
        .map(|i| voronoi_cell(seeds, &grid, i))
        .collect()
}

fn voronoi_cell(seeds: &[Vec2], grid: &BucketGrid, i: usize) -> Vec<Vec2> {
    let s = seeds[i];
    let mut poly = vec![
        Vec2::new(0.0, 0.0),
        Vec2::new(1.0, 0.0),
        Vec2::new(1.0, 1.0),
        Vec2::new(0.0, 1.0),
    ];
    let center = BucketGrid::bucket_of(grid.n, s);
    let bucket_size = 1.0 / grid.n as f64;
    let mut ring = 0;
    loop {
        let mut cand = grid.ring(center, ring);
        cand.retain(|&j| j != i);
        cand.sort_by(|&a, &b| {
            (seeds[a] - s)
                .norm_squared()
                .total_cmp(&(seeds[b] - s).norm_squared())
        });
        for j in cand {
            poly = clip_bisector(&poly, s, seeds[j]);
        }
        // Seeds beyond the current ring are at least `ring * bucket_size` away;
        // they cannot cut the cell once it fits in half that radius.
        let reach = poly.iter().map(|p| (p - s).norm()).fold(0.0, f64::max);
        if ring as f64 * bucket_size >= 2.0 * reach || ring > grid.n {
            break;
        }
        ring += 1;
    }
    poly
}

/// Keeps the part of `poly` closer to `s` than to `q`.
fn clip_bisector(poly: &[Vec2], s: Vec2, q: Vec2) -> Vec<Vec2> {
    let m = 0.5 * (s + q);
    let d = q - s;
    let side = |p: &Vec2| (p - m).dot(&d);
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..n {
        let (a, b) = (poly[k], poly[(k + 1) % n]);
        let (fa, fb) = (side(&a), side(&b));
        if fa <= 0.0 {
            out.push(a);
        }
        if (fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0) {
            let t = fa / (fa - fb);
            out.push(a + t * (b - a));
        }
    }
    out
}

/// Merges coincident corners of independently clipped cells into a
/// conforming polygonal mesh.
fn stitch(cells: &[Vec<Vec2>], spacing: f64) -> Result<PolygonalMesh, MeshError> {
    let tol = 1e-9 * spacing;
    let cell_size = 1e3 * tol;
    let mut buckets: std::collections::HashMap<(i64, i64), Vec<usize>> = Default::default();
    let mut points: Vec<[f64; 2]> = Vec::new();
    let mut loops = Vec::with_capacity(cells.len());
    for poly in cells {
        let mut lp: Vec<usize> = Vec::with_capacity(poly.len());
        for p in poly {
            let mut p = *p;
            // snap onto the square's sides
            for c in p.iter_mut() {
                if c.abs() < tol {
                    *c = 0.0;
                } else if (*c - 1.0).abs() < tol {
                    *c = 1.0;
                }
            }
            let key = ((p.x / cell_size).floor() as i64, (p.y / cell_size).floor() as i64);
            let mut found = None;
            'search: for dx in -1..=1 {
                for dy in -1..=1 {
                    if let Some(list) = buckets.get(&(key.0 + dx, key.1 + dy)) {
                        for &v in list {
                            let q = points[v];
                            if (q[0] - p.x).hypot(q[1] - p.y) <= tol {
                                found = Some(v);
                                break 'search;
                            }
                        }
                    }
                }
            }
            let v = found.unwrap_or_else(|| {
                points.push([p.x, p.y]);
                buckets.entry(key).or_default().push(points.len() - 1);
                points.len() - 1
            });
            if lp.last() != Some(&v) {
                lp.push(v);
            }
        }
        while lp.len() > 1 && lp.first() == lp.last() {
            lp.pop();
        }
        loops.push(lp);
    }
    // Drop corners that sit on a straight side of their own cell only when no
    // other cell uses them; otherwise keep them to stay conforming.
    let mut uses = vec![0usize; points.len()];
    for lp in &loops {
        for &v in lp {
            uses[v] += 1;
        }
    }
    for lp in loops.iter_mut() {
        let pts: Vec<Vec2> = lp.iter().map(|&v| Vec2::new(points[v][0], points[v][1])).collect();
        let n = lp.len();
        let keep: Vec<bool> = (0..n)
            .map(|k| {
                let (a, b, c) = (pts[(k + n - 1) % n], pts[k], pts[(k + 1) % n]);
                let cr = (b - a).perp(&(c - b));
                uses[lp[k]] > 1 || cr.abs() > 1e-14 * (b - a).norm() * (c - b).norm()
            })
            .collect();
        let kept: Vec<usize> = lp.iter().zip(&keep).filter(|(_, k)| **k).map(|(v, _)| *v).collect();
        *lp = kept;
    }
    debug_assert!(loops.iter().all(|lp| {
        let p: Vec<Vec2> = lp.iter().map(|&v| Vec2::new(points[v][0], points[v][1])).collect();
        signed_area(&p) > 0.0
    }));
    // Remove vertices no longer referenced.
    let mut used = vec![false; points.len()];
    for lp in &loops {
        for &v in lp {
            used[v] = true;
        }
    }
    let mut remap = vec![usize::MAX; points.len()];
    let mut compact = Vec::new();
    for (v, p) in points.iter().enumerate() {
        if used[v] {
            remap[v] = compact.len();
            compact.push(*p);
        }
    }
    for lp in loops.iter_mut() {
        for v in lp.iter_mut() {
            *v = remap[*v];
        }
    }
    let mesh = PolygonalMesh::from_polygons(&compact, &loops)?;
    let on_side = |v: usize| {
        let p = mesh.point(v);
        p.x == 0.0 || p.x == 1.0 || p.y == 0.0 || p.y == 1.0
    };
    if let Some(e) = mesh
        .edges
        .iter()
        .find(|e| e.on_boundary && !(on_side(e.vertices[0]) && on_side(e.vertices[1])))
    {
        return Err(MeshError::EdgeMismatch(format!(
            "Voronoi stitching left interior edge {} unmatched",
            e.id
        )));
    }
    Ok(mesh)
}
