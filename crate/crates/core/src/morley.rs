//! Local machinery of the lowest-order Morley-type virtual element space.
//!
//! Degrees of freedom on a cell with `N` vertices are `N` vertex values
//! followed by `N` edge moments `μ_e = ∫_e ∂_{n_e} φ`, where `n_e` is the
//! *global* normal of edge `e` (the one stored on the mesh edge). Every local
//! matrix below acts on that gathered vector, so assembly is a plain
//! scatter-add. Internally each cell works with
//!
//! * `d_i = φ(v_{i+1}) − φ(v_i)` — the integral of the counterclockwise
//!   tangential derivative over local edge `i`;
//! * `m_i = σ_i μ_i` — the moment with respect to the outward normal.
//!
//! Polynomials are stored in the scaled monomial basis of degree 2
//! (`1, ξ, η, ξ², ξη, η²`); vector fields in `P₁²` as six coefficients,
//! `(m_k, 0)` for `k < 3` and `(0, m_{k−3})` otherwise.

use nalgebra::{DMatrix, DVector, Matrix2};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mesh::{CellGeometry, PolygonalMesh, Vec2};
use crate::quadrature::{edge_rule, monomial_moments, ScaledMonomialBasis};

/// How the edge-moment DOFs enter the stabilization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StabScaling {
    /// `h_E^{-2} Σ dof_i(φ) dof_i(ψ)` with raw DOFs.
    #[default]
    Unscaled,
    /// Edge moments multiplied by `h_e^{-1}` inside the stabilization only.
    Homogenized,
}

impl std::str::FromStr for StabScaling {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unscaled" => Ok(Self::Unscaled),
            "homogenized" => Ok(Self::Homogenized),
            _ => Err(Error::Config(format!(
                "stab_scaling must be 'unscaled' or 'homogenized', got {s:?}"
            ))),
        }
    }
}

/// Global numbering: vertex `v` ↦ `v`, edge `e` ↦ `#V + e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MorleyDofLayout {
    pub num_vertices: usize,
    pub num_edges: usize,
}

impl MorleyDofLayout {
    pub fn new(mesh: &PolygonalMesh) -> Self {
        Self {
            num_vertices: mesh.num_vertices(),
            num_edges: mesh.num_edges(),
        }
    }

    pub fn num_dofs(&self) -> usize {
        self.num_vertices + self.num_edges
    }

    pub fn vertex_dof(&self, v: usize) -> usize {
        v
    }

    pub fn edge_dof(&self, e: usize) -> usize {
        self.num_vertices + e
    }

    /// Vertex DOFs of the cell loop followed by its edge DOFs.
    pub fn cell_dofs(&self, mesh: &PolygonalMesh, cell: usize) -> Vec<usize> {
        let c = &mesh.cells[cell];
        c.vertices
            .iter()
            .map(|&v| self.vertex_dof(v))
            .chain(c.edges.iter().map(|&e| self.edge_dof(e)))
            .collect()
    }

    /// DOFs fixed by Dirichlet data: boundary vertices and boundary edges.
    pub fn boundary_dofs(&self, mesh: &PolygonalMesh) -> Vec<usize> {
        let mut out: Vec<usize> = mesh
            .vertices
            .iter()
            .filter(|v| v.on_boundary)
            .map(|v| self.vertex_dof(v.id))
            .collect();
        out.extend(mesh.edges.iter().filter(|e| e.on_boundary).map(|e| self.edge_dof(e.id)));
        out
    }
}

/// Value of a `P₁²` field given its six coefficients.
pub fn p1vec_eval(basis: &ScaledMonomialBasis, c: &[f64], p: Vec2) -> Vec2 {
    let m = basis.eval(p);
    Vec2::new(
        c[0] * m[0] + c[1] * m[1] + c[2] * m[2],
        c[3] * m[0] + c[4] * m[1] + c[5] * m[2],
    )
}

/// Constant Jacobian `[∂_j u_i]` of a `P₁²` field.
pub fn p1vec_jacobian(basis: &ScaledMonomialBasis, c: &[f64]) -> Matrix2<f64> {
    let s = 1.0 / basis.h;
    Matrix2::new(c[1] * s, c[2] * s, c[4] * s, c[5] * s)
}

/// Constant gradient of the linear scaled monomial `k ∈ {0, 1, 2}`.
fn grad_p1(basis: &ScaledMonomialBasis, k: usize) -> Vec2 {
    let s = 1.0 / basis.h;
    match k {
        0 => Vec2::zeros(),
        1 => Vec2::new(s, 0.0),
        _ => Vec2::new(0.0, s),
    }
}

/// Jacobian of the `k`-th `P₁²` basis field.
fn p1vec_basis_jacobian(basis: &ScaledMonomialBasis, k: usize) -> Matrix2<f64> {
    let g = grad_p1(basis, k % 3);
    if k < 3 {
        Matrix2::new(g.x, g.y, 0.0, 0.0)
    } else {
        Matrix2::new(0.0, 0.0, g.x, g.y)
    }
}

fn block_diag3(a: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(6, 6);
    out.view_mut((0, 0), (3, 3)).copy_from(&a.view((0, 0), (3, 3)));
    out.view_mut((3, 3), (3, 3)).copy_from(&a.view((0, 0), (3, 3)));
    out
}

/// Projector matrices and local forms of one cell.
#[derive(Debug, Clone)]
pub struct MorleyLocalOps {
    pub geom: CellGeometry,
    /// Global DOF indices in local order.
    pub dofs: Vec<usize>,
    pub basis: ScaledMonomialBasis,
    /// `Π^D`: DOFs → `P₂` coefficients.
    pub proj_d: DMatrix<f64>,
    /// `Π^∇ curl`: DOFs → `P₁²` coefficients.
    pub proj_grad_curl: DMatrix<f64>,
    /// `Π¹ curl`: DOFs → `P₁²` coefficients.
    pub proj_curl: DMatrix<f64>,
    /// `Π¹ ∇`: DOFs → `P₁²` coefficients.
    pub proj_grad: DMatrix<f64>,
    /// `Π⁰ Δ`: DOFs → constant.
    pub lap0: DVector<f64>,
    /// `∫_E Π² φ` as a row.
    pub mean_row: DVector<f64>,
    /// Per edge: slope of the tangential derivative along the edge.
    pub trace_slope: Vec<DVector<f64>>,
    /// DOFs of the scaled monomials (`2N × 6`).
    pub dof_matrix: DMatrix<f64>,
    /// `∫ D²m_α : D²m_β`.
    pub hessian_gram: DMatrix<f64>,
    /// `∫ m_α m_β` on `P₂`.
    pub mass2: DMatrix<f64>,
    /// `∫_E m_α` on `P₂`.
    pub integrals2: DVector<f64>,
    /// `L²` Gram of `P₁²`.
    pub mass_vec1: DMatrix<f64>,
    /// `H¹` Gram of `P₁²`.
    pub gram_vec1: DMatrix<f64>,
    pub consistency: DMatrix<f64>,
    pub stabilization: DMatrix<f64>,
    /// `consistency + stabilization`.
    pub stiffness: DMatrix<f64>,
    /// `K` with `B^E(ζ; φ, ψ) = (Π⁰Δζ) φᵀ K ψ`; skew-symmetric.
    pub convection: DMatrix<f64>,
}

impl MorleyLocalOps {
    pub fn new(geom: CellGeometry, dofs: Vec<usize>, stab: StabScaling) -> Result<Self> {
        let n = geom.num_vertices();
        let nd = 2 * n;
        let cell = geom.id;
        let basis = ScaledMonomialBasis::new(geom.centroid, geom.diameter, 2);
        let moments = monomial_moments(&geom.points, &basis);
        let area = geom.area;

        let mids: Vec<Vec2> = (0..n).map(|i| geom.edge_midpoint(i)).collect();
        let (nrm, tng, len, sgn) = (&geom.normals, &geom.tangents, &geom.lengths, &geom.signs);

        // row += cd * d_i + cm * m_i
        let add = |row: &mut DVector<f64>, i: usize, cd: f64, cm: f64| {
            row[(i + 1) % n] += cd;
            row[i] -= cd;
            row[n + i] += sgn[i] * cm;
        };

        // DOFs of the monomials
        let mut dmat = DMatrix::zeros(nd, 6);
        for i in 0..n {
            let v = basis.eval(geom.points[i]);
            let g = basis.grad(mids[i]);
            for a in 0..6 {
                dmat[(i, a)] = v[a];
                dmat[(n + i, a)] = sgn[i] * len[i] * g[a].dot(&nrm[i]);
            }
        }

        // Π^D
        let hess = basis.hessian(geom.centroid);
        let mut hgram = DMatrix::zeros(6, 6);
        for a in 0..6 {
            for b in 0..6 {
                hgram[(a, b)] = area * hess[a].component_mul(&hess[b]).sum();
            }
        }
        let mut lhs = hgram.clone();
        let mut rhs = DMatrix::zeros(6, nd);
        for a in 0..3 {
            for b in 0..6 {
                lhs[(a, b)] = (0..n).map(|i| dmat[(i, a)] * dmat[(i, b)]).sum();
            }
            for i in 0..n {
                rhs[(a, i)] = dmat[(i, a)];
            }
        }
        for a in 3..6 {
            let mut row = DVector::zeros(nd);
            for i in 0..n {
                let h = &hess[a];
                add(&mut row, i, tng[i].dot(&(h * nrm[i])), nrm[i].dot(&(h * nrm[i])));
            }
            rhs.set_row(a, &row.transpose());
        }
        let proj_d = lhs
            .lu()
            .solve(&rhs)
            .ok_or(Error::SingularLocal { cell, what: "Π^D system" })?;

        // Π^∇ curl
        let gram_vec1 = block_diag3(&moments.h1);
        let mass_vec1 = block_diag3(&moments.mass);
        let bnd: Vec<f64> = (0..3)
            .map(|a| (0..n).map(|i| len[i] * basis.eval(mids[i])[a]).sum())
            .collect();
        let mut lhs = gram_vec1.clone();
        for (r, off) in [(0, 0), (3, 3)] {
            for k in 0..6 {
                lhs[(r, k)] = 0.0;
            }
            for a in 0..3 {
                lhs[(r, off + a)] = bnd[a];
            }
        }
        let mut rhs = DMatrix::zeros(6, nd);
        for k in 0..6 {
            let mut row = DVector::zeros(nd);
            if k == 0 || k == 3 {
                let comp = k / 3;
                for i in 0..n {
                    add(&mut row, i, nrm[i][comp], -tng[i][comp]);
                }
            } else {
                let jac = p1vec_basis_jacobian(&basis, k);
                for i in 0..n {
                    let c = jac * nrm[i];
                    add(&mut row, i, c.dot(&nrm[i]), -c.dot(&tng[i]));
                }
            }
            rhs.set_row(k, &row.transpose());
        }
        let proj_grad_curl = lhs
            .lu()
            .solve(&rhs)
            .ok_or(Error::SingularLocal { cell, what: "Π^∇ curl system" })?;

        // tangential-derivative slope on each edge: nᵀ (∇Π^∇curl φ) t
        let trace_slope: Vec<DVector<f64>> = (0..n)
            .map(|i| {
                let w = DVector::from_iterator(
                    6,
                    (0..6).map(|k| nrm[i].dot(&(p1vec_basis_jacobian(&basis, k) * tng[i]))),
                );
                proj_grad_curl.transpose() * w
            })
            .collect();

        // Π¹ curl and Π¹ ∇ via integration by parts against the edge traces
        let mean_row = proj_d.transpose() * &moments.integrals;
        let gauss = |i: usize| edge_rule(geom.points[i], geom.points[(i + 1) % n], 3);
        let mut rhs_curl = DMatrix::zeros(6, nd);
        let mut rhs_grad = DMatrix::zeros(6, nd);
        for k in 0..6 {
            let jac = p1vec_basis_jacobian(&basis, k);
            let rot = jac[(1, 0)] - jac[(0, 1)];
            let div = jac[(0, 0)] + jac[(1, 1)];
            let mut rc = rot * &mean_row;
            let mut rg = -div * &mean_row;
            let mut coef = [0.0; 6];
            coef[k] = 1.0;
            for i in 0..n {
                for (p, s, w) in gauss(i) {
                    let chi = p1vec_eval(&basis, &coef, p);
                    let tr = trace_row(n, i, len[i], &trace_slope[i], s);
                    rc -= (w * chi.dot(&tng[i])) * &tr;
                    rg += (w * chi.dot(&nrm[i])) * &tr;
                }
            }
            rhs_curl.set_row(k, &rc.transpose());
            rhs_grad.set_row(k, &rg.transpose());
        }
        let mass_lu = mass_vec1.clone().lu();
        let proj_curl = mass_lu
            .solve(&rhs_curl)
            .ok_or(Error::SingularLocal { cell, what: "P₁² mass matrix" })?;
        let proj_grad = mass_lu
            .solve(&rhs_grad)
            .ok_or(Error::SingularLocal { cell, what: "P₁² mass matrix" })?;

        let mut lap0 = DVector::zeros(nd);
        for i in 0..n {
            lap0[n + i] = sgn[i] / area;
        }

        let consistency = proj_d.transpose() * &hgram * &proj_d;
        let mut resid = DMatrix::identity(nd, nd) - &dmat * &proj_d;
        if stab == StabScaling::Homogenized {
            for i in 0..n {
                resid.row_mut(n + i).scale_mut(1.0 / len[i]);
            }
        }
        let stabilization = resid.transpose() * resid / (geom.diameter * geom.diameter);
        let mut stiffness = &consistency + &stabilization;
        // remove round-off asymmetry
        stiffness = 0.5 * (&stiffness + stiffness.transpose());
        let convection = proj_curl.transpose() * &mass_vec1 * &proj_grad;

        Ok(Self {
            geom,
            dofs,
            basis,
            proj_d,
            proj_grad_curl,
            proj_curl,
            proj_grad,
            lap0,
            mean_row,
            trace_slope,
            dof_matrix: dmat,
            hessian_gram: hgram,
            mass2: moments.mass,
            integrals2: moments.integrals,
            mass_vec1,
            gram_vec1,
            consistency,
            stabilization,
            stiffness,
            convection,
        })
    }

    pub fn num_local_dofs(&self) -> usize {
        self.dofs.len()
    }

    /// Local slice of a global vector.
    pub fn gather(&self, global: &[f64]) -> DVector<f64> {
        DVector::from_iterator(self.dofs.len(), self.dofs.iter().map(|&d| global[d]))
    }

    pub fn apply_proj_d(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.proj_d * x
    }

    /// `Π² = Π^D` on this space.
    pub fn apply_proj_l2(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.proj_d * x
    }

    pub fn apply_proj_grad_curl(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.proj_grad_curl * x
    }

    pub fn apply_proj_curl(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.proj_curl * x
    }

    pub fn apply_proj_grad(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.proj_grad * x
    }

    pub fn apply_lap0(&self, x: &DVector<f64>) -> f64 {
        self.lap0.dot(x)
    }

    /// Trace of φ on local edge `i` at arclength `s` from `v_i`.
    pub fn edge_trace(&self, i: usize, x: &DVector<f64>, s: f64) -> f64 {
        let n = self.geom.num_vertices();
        trace_row(n, i, self.geom.lengths[i], &self.trace_slope[i], s).dot(x)
    }

    /// Counterclockwise tangential derivative on local edge `i` at `s`.
    pub fn edge_tangential_derivative(&self, i: usize, x: &DVector<f64>, s: f64) -> f64 {
        let n = self.geom.num_vertices();
        let h = self.geom.lengths[i];
        (x[(i + 1) % n] - x[i]) / h + self.trace_slope[i].dot(x) * (s - 0.5 * h)
    }

    /// Number of eigenvalues of the local stiffness below `tol · λ_max`.
    pub fn kernel_dimension(&self, tol: f64) -> usize {
        kernel_dimension(&self.stiffness, tol)
    }
}

/// Number of eigenvalues below `tol · λ_max` after symmetric Jacobi
/// scaling, which balances DOFs of different scales without changing the
/// kernel.
pub(crate) fn kernel_dimension(a: &DMatrix<f64>, tol: f64) -> usize {
    let d: Vec<f64> = (0..a.nrows())
        .map(|i| {
            let v = a[(i, i)].abs();
            if v > 0.0 { 1.0 / v.sqrt() } else { 1.0 }
        })
        .collect();
    let scaled = DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| d[i] * a[(i, j)] * d[j]);
    let ev = scaled.symmetric_eigenvalues();
    let max = ev.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    ev.iter().filter(|&&v| v.abs() <= tol * max).count()
}

/// Row `r` with `r·x = φ|_e(s)` on local edge `i`:
/// `φ(v_i) + (d_i/h) s + β (s²/2 − h s/2)`.
fn trace_row(n: usize, i: usize, h: f64, slope: &DVector<f64>, s: f64) -> DVector<f64> {
    let mut r = (0.5 * s * s - 0.5 * h * s) * slope;
    r[i] += 1.0 - s / h;
    r[(i + 1) % n] += s / h;
    r
}

/// Local operators for every cell, built in parallel.
pub fn build_local_ops(mesh: &PolygonalMesh, stab: StabScaling) -> Result<Vec<MorleyLocalOps>> {
    let layout = MorleyDofLayout::new(mesh);
    let ops: Vec<MorleyLocalOps> = (0..mesh.num_cells())
        .into_par_iter()
        .map(|c| MorleyLocalOps::new(mesh.cell_geometry(c), layout.cell_dofs(mesh, c), stab))
        .collect::<Result<_>>()?;
    for op in &ops {
        let k = op.kernel_dimension(1e-10);
        if k != 3 {
            return Err(Error::KernelDimension {
                what: "Morley local stiffness",
                expected: 3,
                found: k,
            });
        }
    }
    Ok(ops)
}

/// DOF interpolant of a smooth function: vertex values and edge moments of
/// the normal derivative (Gauss rule exact to degree `edge_degree`).
pub fn interpolate_function(
    mesh: &PolygonalMesh,
    f: impl Fn(Vec2) -> f64 + Sync,
    grad: impl Fn(Vec2) -> Vec2 + Sync,
    edge_degree: usize,
) -> Vec<f64> {
    let layout = MorleyDofLayout::new(mesh);
    let mut out = vec![0.0; layout.num_dofs()];
    for v in &mesh.vertices {
        out[layout.vertex_dof(v.id)] = f(v.point());
    }
    let moments: Vec<f64> = mesh
        .edges
        .par_iter()
        .map(|e| {
            let (a, b) = (mesh.point(e.vertices[0]), mesh.point(e.vertices[1]));
            edge_rule(a, b, edge_degree)
                .into_iter()
                .map(|(p, _, w)| w * grad(p).dot(&e.normal))
                .sum()
        })
        .collect();
    for (e, m) in moments.into_iter().enumerate() {
        out[layout.edge_dof(e)] = m;
    }
    out
}

/// Interpolant of a quadratic given by value, constant Hessian and gradient
/// at the origin; edge moments are exact (midpoint rule).
pub fn interpolate_quadratic(mesh: &PolygonalMesh, q: &Quadratic) -> Vec<f64> {
    interpolate_function(mesh, |p| q.value(p), |p| q.grad(p), 1)
}

/// `c + g·x + ½ xᵀ H x` — convenience for tests and patch problems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadratic {
    pub c: f64,
    pub g: Vec2,
    pub h: Matrix2<f64>,
}

impl Quadratic {
    pub fn value(&self, p: Vec2) -> f64 {
        self.c + self.g.dot(&p) + 0.5 * p.dot(&(self.h * p))
    }

    pub fn grad(&self, p: Vec2) -> Vec2 {
        self.g + self.h * p
    }

    pub fn curl(&self, p: Vec2) -> Vec2 {
        let g = self.grad(p);
        Vec2::new(g.y, -g.x)
    }

    pub fn laplacian(&self) -> f64 {
        self.h.trace()
    }

    /// Coefficients in `basis` (degree ≥ 2).
    pub fn coefficients(&self, basis: &ScaledMonomialBasis) -> DVector<f64> {
        let (x0, h) = (basis.center, basis.h);
        let g0 = self.grad(x0);
        let mut c = DVector::zeros(basis.dim());
        c[0] = self.value(x0);
        c[1] = g0.x * h;
        c[2] = g0.y * h;
        c[3] = 0.5 * self.h[(0, 0)] * h * h;
        c[4] = self.h[(0, 1)] * h * h;
        c[5] = 0.5 * self.h[(1, 1)] * h * h;
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_square_mesh, PolygonalMesh};

    fn quad() -> Quadratic {
        Quadratic {
            c: 0.3,
            g: Vec2::new(-1.1, 0.7),
            h: Matrix2::new(2.0, -0.4, -0.4, 1.5),
        }
    }

    fn pentagon() -> PolygonalMesh {
        PolygonalMesh::from_polygons(
            &[[0.1, 0.0], [1.0, 0.2], [1.2, 0.9], [0.5, 1.3], [-0.1, 0.7]],
            &[vec![0, 1, 2, 3, 4]],
        )
        .unwrap()
    }

    fn ops(mesh: &PolygonalMesh) -> Vec<MorleyLocalOps> {
        build_local_ops(mesh, StabScaling::Unscaled).unwrap()
    }

    #[test]
    fn quadratic_reproduction_on_pentagon() {
        let m = pentagon();
        let op = &ops(&m)[0];
        let q = quad();
        let x = op.gather(&interpolate_quadratic(&m, &q));
        let c = q.coefficients(&op.basis);
        assert!((op.apply_proj_d(&x) - &c).norm() < 1e-12);
        assert!((op.apply_lap0(&x) - q.laplacian()).abs() < 1e-12);
        let p = Vec2::new(0.4, 0.6);
        for (mat, expect) in [
            (&op.proj_curl, q.curl(p)),
            (&op.proj_grad, q.grad(p)),
            (&op.proj_grad_curl, q.curl(p)),
        ] {
            let v = p1vec_eval(&op.basis, (mat * &x).as_slice(), p);
            assert!((v - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn trace_matches_quadratic_on_edges() {
        let m = pentagon();
        let op = &ops(&m)[0];
        let q = quad();
        let x = op.gather(&interpolate_quadratic(&m, &q));
        for i in 0..5 {
            let (a, h) = (op.geom.points[i], op.geom.lengths[i]);
            for s in [0.0, 0.3 * h, h] {
                let p = a + s * op.geom.tangents[i];
                assert!((op.edge_trace(i, &x, s) - q.value(p)).abs() < 1e-12);
                let dt = q.grad(p).dot(&op.geom.tangents[i]);
                assert!((op.edge_tangential_derivative(i, &x, s) - dt).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn unit_square_stiffness_kernel() {
        let m = generate_square_mesh(1).unwrap();
        let op = &ops(&m)[0];
        assert_eq!(op.kernel_dimension(1e-10), 3);
        let x = op.gather(&interpolate_function(&m, |p| 1.0 + 2.0 * p.x - p.y, |_| Vec2::new(2.0, -1.0), 1));
        assert!((&op.stiffness * x).norm() < 1e-13);
    }

    #[test]
    fn laplacian_of_x_squared() {
        let m = generate_square_mesh(1).unwrap();
        let op = &ops(&m)[0];
        let x = op.gather(&interpolate_function(&m, |p| p.x * p.x, |p| Vec2::new(2.0 * p.x, 0.0), 1));
        assert!((op.apply_lap0(&x) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn convection_matrix_is_skew() {
        let m = pentagon();
        let op = &ops(&m)[0];
        let k = &op.convection;
        assert!((k + k.transpose()).norm() < 1e-12 * k.norm());
    }

    #[test]
    fn homogenized_scaling_keeps_kernel() {
        let m = pentagon();
        let ops = build_local_ops(&m, StabScaling::Homogenized).unwrap();
        assert_eq!(ops[0].kernel_dimension(1e-10), 3);
        assert!("bogus".parse::<StabScaling>().is_err());
    }

    #[test]
    fn layout_counts() {
        let m = generate_square_mesh(2).unwrap();
        let l = MorleyDofLayout::new(&m);
        assert_eq!(l.num_dofs(), 9 + 12);
        assert_eq!(l.cell_dofs(&m, 0).len(), 8);
        assert_eq!(l.boundary_dofs(&m).len(), 8 + 8);
    }
}
