//! Global sparse operators: viscous stiffness, the trilinear convective form
//! and its linearization, loads, Dirichlet data, and the pressure saddle
//! system.
//!
//! Per-cell contributions are computed in parallel and merged in cell order,
//! so every assembled object is bitwise reproducible.

use faer::sparse::{SparseColMat, Triplet};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::crouzeix_raviart::{CRDofLayout, CRLocalOps};
use crate::error::{Error, Result};
use crate::exact::ExactSolution;
use crate::mesh::{PolygonalMesh, Vec2};
use crate::morley::{MorleyDofLayout, MorleyLocalOps};
use crate::quadrature::{edge_rule, polygon_rule};

pub type SparseMatrix = SparseColMat<usize, f64>;
pub type Entry = Triplet<usize, usize, f64>;

/// A square sparse system with eliminated Dirichlet rows.
#[derive(Debug, Clone)]
pub struct SparseSystem {
    pub dim: usize,
    pub matrix: SparseMatrix,
    pub rhs: Vec<f64>,
    /// `(dof, value)` pairs fixed by elimination.
    pub constrained: Vec<(usize, f64)>,
}

pub fn to_matrix(dim: usize, entries: &[Entry]) -> Result<SparseMatrix> {
    SparseMatrix::try_new_from_triplets(dim, dim, entries).map_err(|e| Error::Factorization {
        kind: "assembly",
        dim,
        nnz: entries.len(),
        msg: format!("{e:?}"),
    })
}

/// `y = A x` for a compressed-column matrix.
pub fn matvec(a: &SparseMatrix, x: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; a.nrows()];
    let (cp, ri, v) = (a.symbolic().col_ptr(), a.symbolic().row_idx(), a.val());
    for j in 0..a.ncols() {
        for k in cp[j]..cp[j + 1] {
            y[ri[k]] += v[k] * x[j];
        }
    }
    y
}

fn scatter(dofs: &[usize], local: &DMatrix<f64>, out: &mut Vec<Entry>) {
    for (a, &i) in dofs.iter().enumerate() {
        for (b, &j) in dofs.iter().enumerate() {
            let v = local[(a, b)];
            if v != 0.0 {
                out.push(Triplet::new(i, j, v));
            }
        }
    }
}

fn collect_local<T: Sync>(
    items: &[T],
    dofs: impl Fn(&T) -> &[usize] + Sync,
    local: impl Fn(&T) -> DMatrix<f64> + Sync,
) -> Vec<Entry> {
    let parts: Vec<Vec<Entry>> = items
        .par_iter()
        .map(|it| {
            let mut out = Vec::new();
            scatter(dofs(it), &local(it), &mut out);
            out
        })
        .collect();
    parts.concat()
}

/// Entries of `ν A_h`.
pub fn assemble_stiffness(ops: &[MorleyLocalOps], nu: f64) -> Vec<Entry> {
    collect_local(ops, |o| &o.dofs, |o| nu * &o.stiffness)
}

/// `r` with `r · ψ = B_h(ζ; φ, ψ)` for every `ψ`.
pub fn apply_trilinear(ops: &[MorleyLocalOps], zeta: &[f64], phi: &[f64], dim: usize) -> Vec<f64> {
    let parts: Vec<DVector<f64>> = ops
        .par_iter()
        .map(|o| o.apply_lap0(&o.gather(zeta)) * o.convection.tr_mul(&o.gather(phi)))
        .collect();
    let mut r = vec![0.0; dim];
    for (o, p) in ops.iter().zip(parts) {
        for (a, &d) in o.dofs.iter().enumerate() {
            r[d] += p[a];
        }
    }
    r
}

/// `B_h(ζ; φ, ψ)`.
pub fn trilinear(ops: &[MorleyLocalOps], zeta: &[f64], phi: &[f64], psi: &[f64]) -> f64 {
    ops.iter()
        .map(|o| {
            let (z, f, p) = (o.gather(zeta), o.gather(phi), o.gather(psi));
            o.apply_lap0(&z) * f.dot(&(&o.convection * p))
        })
        .sum()
}

/// `R(ψ) = ν A_h ψ + B_h(ψ; ψ, ·) − F`.
pub fn residual(
    ops: &[MorleyLocalOps],
    psi: &[f64],
    nu: f64,
    load: &[f64],
    convection: bool,
) -> Vec<f64> {
    let parts: Vec<DVector<f64>> = ops
        .par_iter()
        .map(|o| {
            let x = o.gather(psi);
            let mut r = nu * (&o.stiffness * &x);
            if convection {
                r += o.apply_lap0(&x) * o.convection.tr_mul(&x);
            }
            r
        })
        .collect();
    let mut r: Vec<f64> = load.iter().map(|v| -v).collect();
    for (o, p) in ops.iter().zip(parts) {
        for (a, &d) in o.dofs.iter().enumerate() {
            r[d] += p[a];
        }
    }
    r
}

/// Entries of the Jacobian of [`residual`] at `ψ`:
/// `ν A + Σ_E [c_E K_Eᵀ + (K_Eᵀ ψ_E) ⊗ ℓ_E]` with `c_E = ℓ_E · ψ_E = Π⁰Δψ`.
pub fn assemble_jacobian(ops: &[MorleyLocalOps], psi: &[f64], nu: f64, convection: bool) -> Vec<Entry> {
    collect_local(
        ops,
        |o| &o.dofs,
        |o| {
            let mut j = nu * &o.stiffness;
            if convection {
                let x = o.gather(psi);
                let kt = o.convection.transpose();
                j += o.apply_lap0(&x) * &kt;
                j += (&kt * &x) * o.lap0.transpose();
            }
            j
        },
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LoadVariant {
    /// `(f, Π¹ curl φ)`
    #[default]
    Standard,
    /// `(rot f, Π² φ)`
    Rotational,
}

impl std::str::FromStr for LoadVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Self::Standard),
            "rotational" => Ok(Self::Rotational),
            _ => Err(Error::Config(format!(
                "load_variant must be 'standard' or 'rotational', got {s:?}"
            ))),
        }
    }
}

/// Right-hand side `F_h` for the chosen variant; `degree` is the exactness
/// of the cell quadrature.
pub fn assemble_load(
    ops: &[MorleyLocalOps],
    dim: usize,
    force: &(dyn Fn(Vec2) -> Vec2 + Sync),
    rot_force: Option<&(dyn Fn(Vec2) -> f64 + Sync)>,
    variant: LoadVariant,
    degree: usize,
) -> Result<Vec<f64>> {
    if variant == LoadVariant::Rotational && rot_force.is_none() {
        return Err(Error::MissingExact("rot f for the rotational load"));
    }
    let parts: Vec<DVector<f64>> = ops
        .par_iter()
        .map(|o| {
            let q = polygon_rule(&o.geom.points, degree);
            match variant {
                LoadVariant::Standard => {
                    let mut m = DVector::zeros(6);
                    for (&p, &w) in q.points.iter().zip(&q.weights) {
                        let f = force(p);
                        let b = o.basis.eval(p);
                        for k in 0..3 {
                            m[k] += w * f.x * b[k];
                            m[3 + k] += w * f.y * b[k];
                        }
                    }
                    o.proj_curl.tr_mul(&m)
                }
                LoadVariant::Rotational => {
                    let rf = rot_force.expect("checked above");
                    let mut m = DVector::zeros(6);
                    for (&p, &w) in q.points.iter().zip(&q.weights) {
                        m += (w * rf(p)) * o.basis.eval(p);
                    }
                    o.proj_d.tr_mul(&m)
                }
            }
        })
        .collect();
    let mut out = vec![0.0; dim];
    for (o, p) in ops.iter().zip(parts) {
        for (a, &d) in o.dofs.iter().enumerate() {
            out[d] += p[a];
        }
    }
    Ok(out)
}

/// Prescribed values of every boundary DOF, sorted by DOF index.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    pub values: Vec<(usize, f64)>,
}

impl BoundaryData {
    /// Copies the prescribed values into `x`.
    pub fn impose(&self, x: &mut [f64]) {
        for &(d, v) in &self.values {
            x[d] = v;
        }
    }

    pub fn homogeneous(&self) -> Vec<(usize, f64)> {
        self.values.iter().map(|&(d, _)| (d, 0.0)).collect()
    }
}

#[derive(Clone, Copy)]
pub enum BoundaryCase<'a> {
    Homogeneous,
    /// Trace of an exact solution: vertex values and Gauss moments of `∂_nψ`.
    Exact(&'a dyn ExactSolution),
    /// Lid-driven cavity on the unit square: `ψ = 0`, `∂_nψ = 1` on the top
    /// side and `0` elsewhere.
    Lid,
}

pub fn build_boundary_data(
    mesh: &PolygonalMesh,
    case: BoundaryCase<'_>,
    edge_degree: usize,
) -> Result<BoundaryData> {
    let layout = MorleyDofLayout::new(mesh);
    if let BoundaryCase::Lid = case {
        let (lo, hi) = mesh.bounding_box();
        let square = lo.norm() < 1e-12
            && (hi - Vec2::new(1.0, 1.0)).norm() < 1e-12
            && (mesh.total_area() - 1.0).abs() < 1e-12;
        if !square {
            return Err(Error::Config(
                "lid boundary data requires the unit square domain".into(),
            ));
        }
    }
    let mut values = Vec::new();
    for v in mesh.vertices.iter().filter(|v| v.on_boundary) {
        let val = match case {
            BoundaryCase::Exact(s) => s.psi(v.point()),
            _ => 0.0,
        };
        values.push((layout.vertex_dof(v.id), val));
    }
    for e in mesh.edges.iter().filter(|e| e.on_boundary) {
        let (a, b) = (mesh.point(e.vertices[0]), mesh.point(e.vertices[1]));
        let val = match case {
            BoundaryCase::Homogeneous => 0.0,
            BoundaryCase::Exact(s) => edge_rule(a, b, edge_degree)
                .into_iter()
                .map(|(p, _, w)| w * s.grad_psi(p).dot(&e.normal))
                .sum(),
            BoundaryCase::Lid => {
                if (a.y - 1.0).abs() < 1e-12 && (b.y - 1.0).abs() < 1e-12 {
                    // outward normal (0, 1): ∂_nψ = ψ_y = 1
                    e.length * e.normal.y
                } else {
                    0.0
                }
            }
        };
        values.push((layout.edge_dof(e.id), val));
    }
    values.sort_by_key(|&(d, _)| d);
    Ok(BoundaryData { values })
}

/// Eliminates `constrained` DOFs: their rows and columns are replaced by a
/// unit diagonal, the right side is lifted by the known values.
pub fn eliminate(
    dim: usize,
    entries: &[Entry],
    mut rhs: Vec<f64>,
    constrained: &[(usize, f64)],
) -> Result<SparseSystem> {
    let mut fixed: Vec<Option<f64>> = vec![None; dim];
    for &(d, v) in constrained {
        fixed[d] = Some(v);
    }
    let mut kept = Vec::with_capacity(entries.len() + constrained.len());
    for t in entries {
        if fixed[t.row].is_some() {
            continue;
        }
        if let Some(g) = fixed[t.col] {
            rhs[t.row] -= t.val * g;
            continue;
        }
        kept.push(*t);
    }
    for &(d, v) in constrained {
        kept.push(Triplet::new(d, d, 1.0));
        rhs[d] = v;
    }
    Ok(SparseSystem {
        dim,
        matrix: to_matrix(dim, &kept)?,
        rhs,
        constrained: constrained.to_vec(),
    })
}

/// Saddle system `[[a, Bᵀ], [B, 0]]` for `(w_h, p_h)`. Boundary CR DOFs are
/// eliminated with zero value. With `w_h = 0` on the boundary the divergence
/// rows sum to zero, so the pressure of cell 0 is pinned to zero instead of
/// adding a dense zero-mean row; callers shift `p_h` afterwards.
pub fn assemble_pressure_saddle(
    mesh: &PolygonalMesh,
    morley: &[MorleyLocalOps],
    cr: &[CRLocalOps],
    psi: &[f64],
    force: &(dyn Fn(Vec2) -> Vec2 + Sync),
    nu: f64,
    degree: usize,
) -> Result<SparseSystem> {
    let layout = CRDofLayout::new(mesh);
    let nw = layout.num_dofs();
    let nc = mesh.num_cells();
    let dim = nw + nc;
    let mut entries = collect_local(cr, |o| &o.dofs, |o| o.a_loc.clone());
    for (c, o) in cr.iter().enumerate() {
        for (a, &d) in o.dofs.iter().enumerate() {
            let v = o.b_row[a];
            entries.push(Triplet::new(nw + c, d, v));
            entries.push(Triplet::new(d, nw + c, v));
        }
    }
    let loads: Vec<DVector<f64>> = cr
        .par_iter()
        .zip(morley.par_iter())
        .map(|(c, m)| c.pressure_load(m, &m.gather(psi), force, nu, degree))
        .collect();
    let mut rhs = vec![0.0; dim];
    for (o, l) in cr.iter().zip(loads) {
        for (a, &d) in o.dofs.iter().enumerate() {
            rhs[d] += l[a];
        }
    }
    let mut bc: Vec<(usize, f64)> = layout.boundary_dofs(mesh).into_iter().map(|d| (d, 0.0)).collect();
    bc.push((nw, 0.0));
    eliminate(dim, &entries, rhs, &bc)
}
