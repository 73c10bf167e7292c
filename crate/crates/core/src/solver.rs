//! Direct sparse solves and the Newton iteration for the stream function.

use faer::prelude::*;
use faer::Side;
use log::{debug, warn};

use crate::assembly::{
    assemble_jacobian, assemble_pressure_saddle, eliminate, matvec, residual, BoundaryData,
    SparseMatrix,
};
use crate::crouzeix_raviart::CRLocalOps;
use crate::error::{Error, Result};
use crate::mesh::{PolygonalMesh, Vec2};
use crate::morley::MorleyLocalOps;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveKind {
    Spd,
    General,
    Saddle,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Solves `A x = b` by sparse Cholesky (`Spd`) or LU, with up to three
/// steps of iterative refinement towards `‖Ax − b‖ ≤ 1e−10 ‖b‖`.
pub fn linear_solve(a: &SparseMatrix, b: &[f64], kind: SolveKind) -> Result<Vec<f64>> {
    let dim = a.nrows();
    let fail = |kind: &'static str, msg: String| Error::Factorization {
        kind,
        dim,
        nnz: a.compute_nnz(),
        msg,
    };
    let solve: Box<dyn Fn(&[f64]) -> Vec<f64>> = match kind {
        SolveKind::Spd => {
            let ch = a
                .sp_cholesky(Side::Lower)
                .map_err(|e| fail("cholesky", format!("{e:?}")))?;
            Box::new(move |r: &[f64]| {
                let mut m = Mat::<f64>::from_fn(r.len(), 1, |i, _| r[i]);
                ch.solve_in_place(m.as_mut());
                (0..r.len()).map(|i| m[(i, 0)]).collect()
            })
        }
        SolveKind::General | SolveKind::Saddle => {
            let lu = a.sp_lu().map_err(|e| fail("lu", format!("{e:?}")))?;
            Box::new(move |r: &[f64]| {
                let c = Col::<f64>::from_fn(r.len(), |i| r[i]);
                let x = lu.solve(&c);
                (0..r.len()).map(|i| x[i]).collect()
            })
        }
    };
    let mut x = solve(b);
    if x.iter().any(|v| !v.is_finite()) {
        return Err(fail("solve", "non-finite solution (numerically singular matrix)".into()));
    }
    let bn = norm(b);
    for _ in 0..3 {
        let ax = matvec(a, &x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(b, y)| b - y).collect();
        if norm(&r) <= 1e-10 * bn {
            break;
        }
        let dx = solve(&r);
        for (xi, di) in x.iter_mut().zip(dx) {
            *xi += di;
        }
    }
    let ax = matvec(a, &x);
    let rel = norm(&b.iter().zip(&ax).map(|(b, y)| b - y).collect::<Vec<_>>()) / bn.max(f64::MIN_POSITIVE);
    if bn > 0.0 && rel > 1e-10 {
        warn!("linear solve residual {rel:.3e} above 1e-10 (dim {dim})");
    }
    Ok(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Damping {
    /// Full Newton steps.
    None,
    /// Halve the step (at most 10 times) until the residual decreases.
    Backtracking,
    /// Backtracking for `ν ≤ 1e−3`, full steps otherwise.
    #[default]
    Auto,
}

impl std::str::FromStr for Damping {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Self::None),
            "backtracking" => Ok(Self::Backtracking),
            "auto" => Ok(Self::Auto),
            _ => Err(Error::Config(format!(
                "newton.damping must be none, backtracking or auto, got {s:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonConfig {
    pub tolerance: f64,
    pub max_iterations: usize,
    pub damping: Damping,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-8,
            max_iterations: 50,
            damping: Damping::Auto,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    /// Number of Newton updates performed.
    pub iterations: usize,
    /// Free-DOF residual norms, starting with the initial guess.
    pub residual_history: Vec<f64>,
    pub converged: bool,
}

/// Everything Newton needs: the discrete operators, data and the switch for
/// the convective term (off gives the Stokes problem).
pub struct StreamProblem<'a> {
    pub ops: &'a [MorleyLocalOps],
    pub dim: usize,
    pub nu: f64,
    pub load: Vec<f64>,
    pub boundary: BoundaryData,
    pub convection: bool,
}

impl StreamProblem<'_> {
    fn free_residual(&self, psi: &[f64]) -> Vec<f64> {
        let mut r = residual(self.ops, psi, self.nu, &self.load, self.convection);
        for &(d, _) in &self.boundary.values {
            r[d] = 0.0;
        }
        r
    }
}

/// Newton's method from `ψ = 0`. The first increment carries the boundary
/// values (the Jacobian at zero is `νA`, so this is the Stokes solve); later
/// increments vanish on the boundary. Stops once `‖R‖₂ ≤ tol · max(1, ‖F‖₂)`
/// on free DOFs, after at least one update.
pub fn newton_solve(problem: &StreamProblem<'_>, config: &NewtonConfig) -> Result<(Vec<f64>, SolveReport)> {
    if !(config.tolerance > 0.0) {
        return Err(Error::Config("newton.tol must be positive".into()));
    }
    let mut psi = vec![0.0; problem.dim];
    let homog = problem.boundary.homogeneous();
    let mut load_free = problem.load.clone();
    for &(d, _) in &homog {
        load_free[d] = 0.0;
    }
    let threshold = config.tolerance * norm(&load_free).max(1.0);
    let damped = match config.damping {
        Damping::None => false,
        Damping::Backtracking => true,
        Damping::Auto => problem.nu <= 1e-3,
    };

    let mut r = problem.free_residual(&psi);
    let mut rn = norm(&r);
    let mut history = vec![rn];
    for it in 1..=config.max_iterations {
        let jac = assemble_jacobian(problem.ops, &psi, problem.nu, problem.convection);
        let rhs: Vec<f64> = r.iter().map(|v| -v).collect();
        // Boundary rows of δ: g − ψ on the first step, zero afterwards.
        let constraints: Vec<(usize, f64)> = if it == 1 {
            problem.boundary.values.iter().map(|&(d, g)| (d, g - psi[d])).collect()
        } else {
            homog.clone()
        };
        let sys = eliminate(problem.dim, &jac, rhs, &constraints)?;
        let delta = linear_solve(&sys.matrix, &sys.rhs, SolveKind::General).map_err(|e| {
            Error::SingularJacobian {
                iteration: it,
                msg: e.to_string(),
            }
        })?;
        let mut step = 1.0;
        let mut trial: Vec<f64> = psi.iter().zip(&delta).map(|(p, d)| p + d).collect();
        let mut tr = problem.free_residual(&trial);
        let mut tn = norm(&tr);
        if damped && it > 1 {
            let mut halvings = 0;
            while tn > (1.0 - 1e-4 * step) * rn && halvings < 10 {
                step *= 0.5;
                halvings += 1;
                trial = psi.iter().zip(&delta).map(|(p, d)| p + step * d).collect();
                tr = problem.free_residual(&trial);
                tn = norm(&tr);
            }
        }
        if it > 1 && tn >= rn {
            warn!("Newton residual did not decrease at iteration {it}: {rn:.3e} -> {tn:.3e}");
        }
        debug!("Newton {it}: |R| = {tn:.3e} (step {step})");
        psi = trial;
        r = tr;
        rn = tn;
        history.push(rn);
        if !rn.is_finite() {
            break;
        }
        if rn <= threshold {
            return Ok((
                psi,
                SolveReport {
                    iterations: it,
                    residual_history: history,
                    converged: true,
                },
            ));
        }
    }
    Err(Error::NewtonDiverged {
        iterations: history.len() - 1,
        residual: rn,
        history,
    })
}

/// Recovered velocity correction `w_h` (CR DOFs) and the zero-mean per-cell
/// pressure.
#[derive(Debug, Clone, PartialEq)]
pub struct PressureSolution {
    pub w: Vec<f64>,
    pub p: Vec<f64>,
}

pub fn solve_pressure(
    mesh: &PolygonalMesh,
    morley: &[MorleyLocalOps],
    cr: &[CRLocalOps],
    psi: &[f64],
    force: &(dyn Fn(Vec2) -> Vec2 + Sync),
    nu: f64,
    degree: usize,
) -> Result<PressureSolution> {
    let sys = assemble_pressure_saddle(mesh, morley, cr, psi, force, nu, degree)?;
    let x = linear_solve(&sys.matrix, &sys.rhs, SolveKind::Saddle)?;
    let nw = 2 * mesh.num_edges();
    let nc = mesh.num_cells();
    let mut p = x[nw..nw + nc].to_vec();
    let mean = cr.iter().zip(&p).map(|(o, v)| o.geom.area * v).sum::<f64>() / mesh.total_area();
    for v in &mut p {
        *v -= mean;
    }
    Ok(PressureSolution { w: x[..nw].to_vec(), p })
}

#[cfg(test)]
mod tests {
    use super::*;
    use faer::sparse::Triplet;

    #[test]
    fn identity_returns_rhs() {
        let t: Vec<_> = (0..4).map(|i| Triplet::new(i, i, 1.0)).collect();
        let a = SparseMatrix::try_new_from_triplets(4, 4, &t).unwrap();
        let b = vec![1.0, -2.0, 3.0, 0.5];
        for k in [SolveKind::Spd, SolveKind::General, SolveKind::Saddle] {
            assert_eq!(linear_solve(&a, &b, k).unwrap(), b);
        }
    }

    #[test]
    fn singular_matrix_is_reported() {
        let t = vec![Triplet::new(0, 0, 1.0)];
        let a = SparseMatrix::try_new_from_triplets(2, 2, &t).unwrap();
        assert!(matches!(
            linear_solve(&a, &[1.0, 1.0], SolveKind::General),
            Err(Error::Factorization { .. })
        ));
        assert!(linear_solve(&a, &[1.0, 1.0], SolveKind::Spd).is_err());
    }

    #[test]
    fn damping_parses() {
        assert_eq!("auto".parse::<Damping>().unwrap(), Damping::Auto);
        assert!("x".parse::<Damping>().is_err());
    }
}
