#![allow(dead_code)]

use morley_ns::mesh::{
    generate_square_mesh, generate_trapezoid_mesh, generate_triangle_mesh, generate_voronoi_mesh,
    PolygonalMesh, TriangleDomain, Vec2,
};
use morley_ns::morley::Quadratic;
use nalgebra::Matrix2;
use rand::Rng;

/// Star-shaped polygon with `n` vertices around `centre`, radius in
/// `[0.4, 1] · scale`; angular gaps are at least a quarter of the mean.
pub fn star_polygon(rng: &mut impl Rng, n: usize, centre: [f64; 2], scale: f64) -> Vec<[f64; 2]> {
    let mean = std::f64::consts::TAU / n as f64;
    let mut gaps: Vec<f64> = (0..n).map(|_| rng.random_range(0.25..1.75) * mean).collect();
    let total: f64 = gaps.iter().sum();
    for g in &mut gaps {
        *g *= std::f64::consts::TAU / total;
    }
    let start = rng.random_range(0.0..std::f64::consts::TAU);
    let mut theta = start;
    gaps.iter()
        .map(|g| {
            let r = scale * rng.random_range(0.4..1.0);
            let p = [centre[0] + r * theta.cos(), centre[1] + r * theta.sin()];
            theta += g;
            p
        })
        .collect()
}

pub fn single_cell(points: &[[f64; 2]]) -> PolygonalMesh {
    let cell: Vec<usize> = (0..points.len()).collect();
    PolygonalMesh::from_polygons(points, &[cell]).expect("valid polygon")
}

/// Small meshes of the four families (plus the L-shape), so that cells
/// have both owner and non-owner edges.
pub fn family_meshes(seed: u64) -> Vec<(&'static str, PolygonalMesh)> {
    vec![
        ("square", generate_square_mesh(3).unwrap()),
        ("tri", generate_triangle_mesh(3, TriangleDomain::UnitSquare).unwrap()),
        ("tri-lshape", generate_triangle_mesh(4, TriangleDomain::LShaped).unwrap()),
        ("trap", generate_trapezoid_mesh(4).unwrap()),
        ("cvt", generate_voronoi_mesh(40, 20, seed).unwrap()),
    ]
}

pub fn random_quadratic(rng: &mut impl Rng) -> Quadratic {
    let mut u = || rng.random_range(-2.0..2.0);
    let (a, b, c) = (u(), u(), u());
    Quadratic {
        c: u(),
        g: Vec2::new(u(), u()),
        h: Matrix2::new(a, b, b, c),
    }
}

/// Relative distance `‖a − b‖ / max(‖b‖, floor)`.
pub fn rel(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / b.abs().max(floor)
}

pub fn rel_vec(a: Vec2, b: Vec2, floor: f64) -> f64 {
    (a - b).norm() / b.norm().max(floor)
}

/// Worst relative errors of the projector properties over all cells of a
/// mesh, for one random quadratic, linear field and DOF vector per cell.
#[derive(Debug, Clone, Copy, Default)]
pub struct ProjectorReport {
    pub cells: usize,
    pub proj_d: f64,
    pub proj_l2: f64,
    pub proj_curl: f64,
    pub proj_grad: f64,
    pub lap0: f64,
    pub grad_curl: f64,
    pub cr_grad: f64,
    pub idempotence: f64,
    pub rotation: f64,
    /// Cells whose kernels are not of dimension 3 (Morley) / 2 (CR).
    pub bad_kernels: usize,
}

impl ProjectorReport {
    pub fn merge(&mut self, o: &ProjectorReport) {
        self.cells += o.cells;
        for (a, b) in [
            (&mut self.proj_d, o.proj_d),
            (&mut self.proj_l2, o.proj_l2),
            (&mut self.proj_curl, o.proj_curl),
            (&mut self.proj_grad, o.proj_grad),
            (&mut self.lap0, o.lap0),
            (&mut self.grad_curl, o.grad_curl),
            (&mut self.cr_grad, o.cr_grad),
            (&mut self.idempotence, o.idempotence),
            (&mut self.rotation, o.rotation),
        ] {
            *a = a.max(b);
        }
        self.bad_kernels += o.bad_kernels;
    }

    pub fn worst(&self) -> f64 {
        [
            self.proj_d,
            self.proj_l2,
            self.proj_curl,
            self.proj_grad,
            self.lap0,
            self.grad_curl,
            self.cr_grad,
            self.idempotence,
            self.rotation,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn check_projectors(mesh: &PolygonalMesh, rng: &mut impl Rng) -> ProjectorReport {
    use morley_ns::crouzeix_raviart::{build_cr_ops, cr_interpolate};
    use morley_ns::morley::{build_local_ops, interpolate_quadratic, p1vec_eval, StabScaling};
    use nalgebra::DVector;

    let ops = build_local_ops(mesh, StabScaling::Unscaled).unwrap();
    let cr = build_cr_ops(mesh).unwrap();
    let q = random_quadratic(rng);
    let psi = interpolate_quadratic(mesh, &q);
    let lin: [f64; 6] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
    let field = move |p: Vec2| Vec2::new(lin[0] + lin[1] * p.x + lin[2] * p.y, lin[3] + lin[4] * p.x + lin[5] * p.y);
    let v = cr_interpolate(mesh, field, 1);
    let mut r = ProjectorReport::default();
    for (o, c) in ops.iter().zip(&cr) {
        r.cells += 1;
        let x = o.gather(&psi);
        let coef = q.coefficients(&o.basis);
        let cn = coef.norm();
        r.proj_d = r.proj_d.max((o.apply_proj_d(&x) - &coef).norm() / cn);
        r.proj_l2 = r.proj_l2.max((o.apply_proj_l2(&x) - &coef).norm() / cn);
        r.lap0 = r.lap0.max(rel(o.apply_lap0(&x), q.laplacian(), q.h.norm()));
        let mut pts = o.geom.points.clone();
        pts.push(o.geom.centroid);
        let scale = pts.iter().map(|&p| q.grad(p).norm()).fold(q.h.norm() * o.geom.diameter, f64::max);
        let (curl, grad, gc) = (o.apply_proj_curl(&x), o.apply_proj_grad(&x), o.apply_proj_grad_curl(&x));
        let vc = c.apply_proj_grad(&c.gather(&v));
        let vscale = pts.iter().map(|&p| field(p).norm()).fold(1e-300, f64::max);
        for &p in &pts {
            r.proj_curl = r.proj_curl.max((p1vec_eval(&o.basis, curl.as_slice(), p) - q.curl(p)).norm() / scale);
            r.proj_grad = r.proj_grad.max((p1vec_eval(&o.basis, grad.as_slice(), p) - q.grad(p)).norm() / scale);
            r.grad_curl = r.grad_curl.max((p1vec_eval(&o.basis, gc.as_slice(), p) - q.curl(p)).norm() / scale);
            r.cr_grad = r.cr_grad.max((p1vec_eval(&c.basis, vc.as_slice(), p) - field(p)).norm() / vscale);
        }
        // Π^D is a projection onto P₂ ⊂ V_h(E); Π¹curl = R₋₉₀ Π¹∇.
        let y = DVector::from_fn(o.num_local_dofs(), |_, _| rng.random_range(-1.0..1.0));
        let p = o.apply_proj_d(&y);
        let again = o.apply_proj_d(&(&o.dof_matrix * &p));
        r.idempotence = r.idempotence.max((again - &p).norm() / p.norm().max(1e-300));
        let (cu, gr) = (o.apply_proj_curl(&y), o.apply_proj_grad(&y));
        let rotated = DVector::from_fn(6, |k, _| if k < 3 { gr[k + 3] } else { -gr[k - 3] });
        r.rotation = r.rotation.max((cu - &rotated).norm() / gr.norm().max(1e-300));
        if o.kernel_dimension(1e-10) != 3 || c.kernel_dimension(1e-10) != 2 {
            r.bad_kernels += 1;
        }
    }
    r
}

pub fn random_vector(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// Worst `|B(ζ;φ,ψ) + B(ζ;ψ,φ)| / Σ_E |B^E(ζ;φ,ψ)|` over random triples.
pub fn skew_worst(ops: &[morley_ns::morley::MorleyLocalOps], dim: usize, rng: &mut impl Rng, triples: usize) -> f64 {
    use morley_ns::assembly::trilinear;
    let mut worst = 0.0f64;
    for _ in 0..triples {
        let (z, f, p) = (random_vector(rng, dim), random_vector(rng, dim), random_vector(rng, dim));
        let scale: f64 = ops
            .iter()
            .map(|o| (o.apply_lap0(&o.gather(&z)) * o.gather(&f).dot(&(&o.convection * o.gather(&p)))).abs())
            .sum();
        let s = trilinear(ops, &z, &f, &p) + trilinear(ops, &z, &p, &f);
        worst = worst.max(s.abs() / scale.max(1e-300));
    }
    worst
}

/// `A_h^E(χ, φ_h)` against the boundary form of `∫_E D²χ : D²φ` for
/// `χ ∈ P₂`: `Σ_i (n_iᵀHn_i) ∫_{e_i} ∂_n φ + (t_iᵀHn_i)(φ(v_{i+1}) − φ(v_i))`,
/// with random DOF vectors `φ_h`. Returns the worst relative error.
/// Stabilization must not contribute, since `χ` is reproduced exactly.
pub fn a_consistency_worst(mesh: &PolygonalMesh, ops: &[morley_ns::morley::MorleyLocalOps], rng: &mut impl Rng) -> f64 {
    use morley_ns::morley::interpolate_quadratic;
    let mut worst = 0.0f64;
    for _ in 0..4 {
        let q = random_quadratic(rng);
        let chi = interpolate_quadratic(mesh, &q);
        for o in ops {
            let n = o.geom.num_vertices();
            let y = nalgebra::DVector::from_fn(2 * n, |_, _| rng.random_range(-1.0..1.0));
            let x = o.gather(&chi);
            let lhs = x.dot(&(&o.stiffness * &y));
            let mut rhs = 0.0;
            // Rounding in the assembled form scales with |χ|ᵀ|A||y|.
            let mut scale = x.abs().dot(&(o.stiffness.abs() * y.abs()));
            for i in 0..n {
                let (nn, t) = (o.geom.normals[i], o.geom.tangents[i]);
                let moment = o.geom.signs[i] * y[n + i];
                let a = nn.dot(&(q.h * nn)) * moment;
                let b = t.dot(&(q.h * nn)) * (y[(i + 1) % n] - y[i]);
                rhs += a + b;
                scale += a.abs() + b.abs();
            }
            worst = worst.max((lhs - rhs).abs() / scale.max(1e-300));
        }
    }
    worst
}

/// Worst `‖J v − (R(ψ+εv) − R(ψ−εv))/(2ε)‖ / ‖J v‖` at random `ψ`, `v`.
pub fn jacobian_fd_worst(ops: &[morley_ns::morley::MorleyLocalOps], dim: usize, nu: f64, rng: &mut impl Rng) -> f64 {
    use morley_ns::assembly::{assemble_jacobian, matvec, residual, to_matrix};
    let load = random_vector(rng, dim);
    let mut worst = 0.0f64;
    for _ in 0..3 {
        let psi = random_vector(rng, dim);
        let v = random_vector(rng, dim);
        let j = to_matrix(dim, &assemble_jacobian(ops, &psi, nu, true)).unwrap();
        let jv = matvec(&j, &v);
        let eps = 1e-6;
        let shift = |s: f64| -> Vec<f64> { psi.iter().zip(&v).map(|(a, b)| a + s * b).collect() };
        let rp = residual(ops, &shift(eps), nu, &load, true);
        let rm = residual(ops, &shift(-eps), nu, &load, true);
        let num: f64 = jv.iter().zip(rp.iter().zip(&rm)).map(|(a, (p, m))| (a - (p - m) / (2.0 * eps)).powi(2)).sum();
        let den: f64 = jv.iter().map(|a| a * a).sum();
        worst = worst.max((num / den).sqrt());
    }
    worst
}

/// Worst `|∫_E div(curl ψ_h)| / Σ_i h_i |m_i · n_i|` over cells, for random
/// `ψ_h`, through the Stokes-complex map into the CR space.
pub fn div_curl_worst(mesh: &PolygonalMesh, dim: usize, rng: &mut impl Rng) -> f64 {
    use morley_ns::crouzeix_raviart::{build_cr_ops, stokes_complex_map};
    let cr = build_cr_ops(mesh).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let u = stokes_complex_map(mesh, &random_vector(rng, dim));
        for c in &cr {
            let v = c.gather(&u);
            let n = c.geom.num_vertices();
            let scale: f64 = (0..n)
                .map(|i| c.geom.lengths[i] * (v[2 * i] * c.geom.normals[i].x + v[2 * i + 1] * c.geom.normals[i].y).abs())
                .sum();
            worst = worst.max((c.divergence(&v) * c.geom.area).abs() / scale.max(1e-300));
        }
    }
    worst
}

/// Moves every interior vertex by up to `amount · h` in each direction
/// (`h = 1/n`), keeping the mesh valid for moderate `amount`.
pub fn jitter(mesh: &PolygonalMesh, n: usize, amount: f64, rng: &mut impl Rng) -> PolygonalMesh {
    let h = 1.0 / n as f64;
    let pts: Vec<[f64; 2]> = mesh
        .vertices
        .iter()
        .map(|v| {
            if v.on_boundary {
                [v.x, v.y]
            } else {
                let mut d = || amount * h * rng.random_range(-1.0..1.0);
                [v.x + d(), v.y + d()]
            }
        })
        .collect();
    let cells: Vec<Vec<usize>> = mesh.cells.iter().map(|c| c.vertices.clone()).collect();
    PolygonalMesh::from_polygons(&pts, &cells).expect("jittered mesh")
}
