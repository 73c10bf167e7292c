//! Crouzeix–Raviart-type vector virtual elements for pressure recovery.
//!
//! Each edge carries the two components of the edge average
//! `h_e^{-1} ∫_e v`; locally they are interleaved (`x₀, y₀, x₁, y₁, …`) and
//! globally edge `e` owns DOFs `2e` and `2e + 1`. Averages do not depend on
//! edge orientation, so no sign bookkeeping is needed.

use nalgebra::{DMatrix, DVector, Vector2};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mesh::{CellGeometry, PolygonalMesh, Vec2};
use crate::morley::{kernel_dimension, p1vec_eval, MorleyLocalOps};
use crate::quadrature::{monomial_moments, polygon_rule, ScaledMonomialBasis};

/// Global CR numbering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CRDofLayout {
    pub num_edges: usize,
}

impl CRDofLayout {
    pub fn new(mesh: &PolygonalMesh) -> Self {
        Self {
            num_edges: mesh.num_edges(),
        }
    }

    pub fn num_dofs(&self) -> usize {
        2 * self.num_edges
    }

    pub fn cell_dofs(&self, mesh: &PolygonalMesh, cell: usize) -> Vec<usize> {
        mesh.cells[cell].edges.iter().flat_map(|&e| [2 * e, 2 * e + 1]).collect()
    }

    pub fn boundary_dofs(&self, mesh: &PolygonalMesh) -> Vec<usize> {
        mesh.edges
            .iter()
            .filter(|e| e.on_boundary)
            .flat_map(|e| [2 * e.id, 2 * e.id + 1])
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct CRLocalOps {
    pub geom: CellGeometry,
    pub dofs: Vec<usize>,
    pub basis: ScaledMonomialBasis,
    /// `Π^∇`: DOFs → `P₁²` coefficients.
    pub proj_grad: DMatrix<f64>,
    /// `Π⁰`: DOFs → constant vector (`2 × 2N`).
    pub proj_const: DMatrix<f64>,
    /// Row giving `div v` (constant on the cell).
    pub div_row: DVector<f64>,
    /// `b^E(v, 1) = ∫_E div v`.
    pub b_row: DVector<f64>,
    /// DOFs of the `P₁²` basis fields (`2N × 6`).
    pub dof_matrix: DMatrix<f64>,
    pub gram_vec1: DMatrix<f64>,
    pub consistency: DMatrix<f64>,
    pub stabilization: DMatrix<f64>,
    pub a_loc: DMatrix<f64>,
}

impl CRLocalOps {
    pub fn new(geom: CellGeometry, dofs: Vec<usize>) -> Result<Self> {
        let n = geom.num_vertices();
        let nd = 2 * n;
        let cell = geom.id;
        let basis = ScaledMonomialBasis::new(geom.centroid, geom.diameter, 1);
        let moments = monomial_moments(&geom.points, &basis);
        let mut gram = DMatrix::zeros(6, 6);
        gram.view_mut((0, 0), (3, 3)).copy_from(&moments.h1);
        gram.view_mut((3, 3), (3, 3)).copy_from(&moments.h1);
        let (nrm, tng, len) = (&geom.normals, &geom.tangents, &geom.lengths);
        let mids: Vec<Vec2> = (0..n).map(|i| geom.edge_midpoint(i)).collect();
        let grads = basis.grad(geom.centroid);

        let mut dmat = DMatrix::zeros(nd, 6);
        for i in 0..n {
            let m = basis.eval(mids[i]);
            for a in 0..3 {
                dmat[(2 * i, a)] = m[a];
                dmat[(2 * i + 1, 3 + a)] = m[a];
            }
        }

        // (∇Π v, ∇χ) = Σ_e h_e m_e · (∇χ) n_e ; constants from Σ_e h_e m_e
        let mut lhs = gram.clone();
        let mut rhs = DMatrix::zeros(6, nd);
        let bnd: Vec<f64> = (0..3).map(|a| (0..n).map(|i| len[i] * dmat[(2 * i, a)]).sum()).collect();
        for k in 0..6 {
            let (comp, a) = (k / 3, k % 3);
            if a == 0 {
                lhs.row_mut(k).fill(0.0);
                for b in 0..3 {
                    lhs[(k, 3 * comp + b)] = bnd[b];
                }
                for i in 0..n {
                    rhs[(k, 2 * i + comp)] = len[i];
                }
            } else {
                // ∇χ has a single nonzero row `comp` equal to ∇m_a
                for i in 0..n {
                    rhs[(k, 2 * i + comp)] = len[i] * grads[a].dot(&nrm[i]);
                }
            }
        }
        let proj_grad = lhs
            .lu()
            .solve(&rhs)
            .ok_or(Error::SingularLocal { cell, what: "CR Π^∇ system" })?;

        let mut div_row = DVector::zeros(nd);
        for i in 0..n {
            div_row[2 * i] = len[i] * nrm[i].x;
            div_row[2 * i + 1] = len[i] * nrm[i].y;
        }
        let b_row = div_row.clone();
        div_row /= geom.area;

        // ∫_E v_c = ∫_∂E (x_c − x̄_c)(v·n), with v·n linear on each edge:
        // mean m·n, slope nᵀ(∇Π^∇v)t.
        let mut proj_const = DMatrix::zeros(2, nd);
        for i in 0..n {
            let h = len[i];
            let slope: DVector<f64> = {
                let mut w = DVector::zeros(6);
                for k in 0..6 {
                    let (comp, a) = (k / 3, k % 3);
                    w[k] = nrm[i][comp] * grads[a].dot(&tng[i]);
                }
                proj_grad.transpose() * w
            };
            for c in 0..2 {
                let off = mids[i][c] - geom.centroid[c];
                proj_const[(c, 2 * i)] += h * off * nrm[i].x;
                proj_const[(c, 2 * i + 1)] += h * off * nrm[i].y;
                for j in 0..nd {
                    proj_const[(c, j)] += tng[i][c] * slope[j] * h * h * h / 12.0;
                }
            }
        }
        proj_const /= geom.area;

        let consistency = proj_grad.transpose() * &gram * &proj_grad;
        let resid = DMatrix::identity(nd, nd) - &dmat * &proj_grad;
        let stabilization = resid.transpose() * resid;
        let a_loc = &consistency + &stabilization;
        let a_loc = 0.5 * (&a_loc + a_loc.transpose());

        Ok(Self {
            geom,
            dofs,
            basis,
            proj_grad,
            proj_const,
            div_row,
            b_row,
            dof_matrix: dmat,
            gram_vec1: gram,
            consistency,
            stabilization,
            a_loc,
        })
    }

    pub fn gather(&self, global: &[f64]) -> DVector<f64> {
        DVector::from_iterator(self.dofs.len(), self.dofs.iter().map(|&d| global[d]))
    }

    pub fn apply_proj_grad(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.proj_grad * v
    }

    pub fn divergence(&self, v: &DVector<f64>) -> f64 {
        self.div_row.dot(v)
    }

    pub fn apply_proj_const(&self, v: &DVector<f64>) -> Vector2<f64> {
        let c = &self.proj_const * v;
        Vector2::new(c[0], c[1])
    }

    pub fn kernel_dimension(&self, tol: f64) -> usize {
        kernel_dimension(&self.a_loc, tol)
    }

    /// Local load of the pressure problem:
    /// `ν a^E(Π^∇ curl ψ, Π^∇ v) + (∫_E (∇U)U − f) · Π⁰ v` with `U = Π¹ curl ψ`.
    /// `nu` is the factor in front of the viscous term (pass 1 to drop it).
    pub fn pressure_load(
        &self,
        morley: &MorleyLocalOps,
        psi: &DVector<f64>,
        force: impl Fn(Vec2) -> Vec2,
        nu: f64,
        degree: usize,
    ) -> DVector<f64> {
        // Π^∇ curl ψ lives in the Morley cell's P₁² basis; both cells share
        // centroid and diameter, so coefficients transfer directly.
        let grad_curl = morley.apply_proj_grad_curl(psi);
        let u = morley.apply_proj_curl(psi);
        let jac = crate::morley::p1vec_jacobian(&morley.basis, u.as_slice());
        let q = polygon_rule(&self.geom.points, degree);
        let mut conv = Vec2::zeros();
        for (&p, &w) in q.points.iter().zip(&q.weights) {
            let up = p1vec_eval(&morley.basis, u.as_slice(), p);
            conv += w * (jac * up - force(p));
        }
        let visc = nu * (self.proj_grad.transpose() * (&self.gram_vec1 * grad_curl));
        visc + self.proj_const.transpose() * DVector::from_column_slice(conv.as_slice())
    }
}

pub fn build_cr_ops(mesh: &PolygonalMesh) -> Result<Vec<CRLocalOps>> {
    let layout = CRDofLayout::new(mesh);
    let ops: Vec<CRLocalOps> = (0..mesh.num_cells())
        .into_par_iter()
        .map(|c| CRLocalOps::new(mesh.cell_geometry(c), layout.cell_dofs(mesh, c)))
        .collect::<Result<_>>()?;
    for op in &ops {
        let k = op.kernel_dimension(1e-10);
        if k != 2 {
            return Err(Error::KernelDimension {
                what: "CR local stiffness",
                expected: 2,
                found: k,
            });
        }
    }
    Ok(ops)
}

/// CR DOFs of `curl ψ_h`: `m_e = h_e^{-1}[(ψ(v₁) − ψ(v₀)) n_e − μ_e t_e]`
/// in the global edge frame.
pub fn stokes_complex_map(mesh: &PolygonalMesh, psi: &[f64]) -> Vec<f64> {
    let nv = mesh.num_vertices();
    let mut out = vec![0.0; 2 * mesh.num_edges()];
    for e in &mesh.edges {
        let d = psi[e.vertices[1]] - psi[e.vertices[0]];
        let mu = psi[nv + e.id];
        let m = (d * e.normal - mu * e.tangent) / e.length;
        out[2 * e.id] = m.x;
        out[2 * e.id + 1] = m.y;
    }
    out
}

/// CR interpolant (edge averages) of a vector field.
pub fn cr_interpolate(
    mesh: &PolygonalMesh,
    f: impl Fn(Vec2) -> Vec2,
    degree: usize,
) -> Vec<f64> {
    let mut out = vec![0.0; 2 * mesh.num_edges()];
    for e in &mesh.edges {
        let (a, b) = (mesh.point(e.vertices[0]), mesh.point(e.vertices[1]));
        let avg: Vec2 = crate::quadrature::edge_rule(a, b, degree)
            .into_iter()
            .map(|(p, _, w)| w * f(p))
            .sum::<Vec2>()
            / e.length;
        out[2 * e.id] = avg.x;
        out[2 * e.id + 1] = avg.y;
    }
    out
}
