//! Velocity and vorticity recovery, discrete error norms, convergence rates
//! and CSV output.

use std::io::Write;

use nalgebra::DVector;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::ExactSolution;
use crate::mesh::{point_in_polygon, PolygonalMesh, Vec2};
use crate::morley::{p1vec_eval, p1vec_jacobian, MorleyLocalOps};
use crate::quadrature::polygon_rule;

/// Per-cell polynomial images of a discrete stream function.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveredFields {
    /// `Π¹ curl ψ_h` (`P₁²` coefficients).
    pub velocity: Vec<DVector<f64>>,
    /// `−Π⁰ Δψ_h`
    pub vorticity: Vec<f64>,
    /// `Π^D ψ_h` (`P₂` coefficients).
    pub stream: Vec<DVector<f64>>,
}

pub fn recover_fields(ops: &[MorleyLocalOps], psi: &[f64]) -> RecoveredFields {
    let per: Vec<_> = ops
        .par_iter()
        .map(|o| {
            let x = o.gather(psi);
            (o.apply_proj_curl(&x), -o.apply_lap0(&x), o.apply_proj_d(&x))
        })
        .collect();
    let mut out = RecoveredFields {
        velocity: Vec::with_capacity(per.len()),
        vorticity: Vec::with_capacity(per.len()),
        stream: Vec::with_capacity(per.len()),
    };
    for (u, w, s) in per {
        out.velocity.push(u);
        out.vorticity.push(w);
        out.stream.push(s);
    }
    out
}

/// Errors of one refinement level.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ErrorRow {
    pub h: f64,
    pub e2_psi: f64,
    pub e1_psi: f64,
    pub e0_psi: f64,
    pub e1_u: f64,
    pub e0_u: f64,
    pub e0_w: f64,
    pub e0_p: Option<f64>,
    pub newton_iters: usize,
}

/// Broken-norm errors against `exact`, integrated with cell rules of
/// exactness `degree`. `pressure` holds one value per cell.
pub fn error_norms(
    ops: &[MorleyLocalOps],
    fields: &RecoveredFields,
    pressure: Option<&[f64]>,
    exact: &dyn ExactSolution,
    degree: usize,
) -> Result<ErrorRow> {
    if pressure.is_some() && exact.pressure(ops[0].geom.centroid).is_none() {
        return Err(Error::MissingExact("pressure"));
    }
    let sums: Vec<[f64; 7]> = ops
        .par_iter()
        .enumerate()
        .map(|(c, o)| {
            let q = polygon_rule(&o.geom.points, degree);
            let (s, u) = (fields.stream[c].as_slice(), fields.velocity[c].as_slice());
            let hess = o.basis.hessian_of(s, o.geom.centroid);
            let ju = p1vec_jacobian(&o.basis, u);
            let mut acc = [0.0; 7];
            for (&p, &w) in q.points.iter().zip(&q.weights) {
                acc[0] += w * (exact.hessian_psi(p) - hess).norm_squared();
                acc[1] += w * (exact.grad_psi(p) - o.basis.grad_of(s, p)).norm_squared();
                acc[2] += w * (exact.psi(p) - o.basis.value_of(s, p)).powi(2);
                acc[3] += w * (exact.velocity_gradient(p) - ju).norm_squared();
                acc[4] += w * (exact.velocity(p) - p1vec_eval(&o.basis, u, p)).norm_squared();
                acc[5] += w * (exact.vorticity(p) - fields.vorticity[c]).powi(2);
                if let Some(ph) = pressure {
                    acc[6] += w * (exact.pressure(p).unwrap_or(0.0) - ph[c]).powi(2);
                }
            }
            acc
        })
        .collect();
    let mut tot = [0.0; 7];
    for s in sums {
        for k in 0..7 {
            tot[k] += s[k];
        }
    }
    Ok(ErrorRow {
        h: 0.0,
        e2_psi: tot[0].sqrt(),
        e1_psi: tot[1].sqrt(),
        e0_psi: tot[2].sqrt(),
        e1_u: tot[3].sqrt(),
        e0_u: tot[4].sqrt(),
        e0_w: tot[5].sqrt(),
        e0_p: pressure.map(|_| tot[6].sqrt()),
        newton_iters: 0,
    })
}

/// `log(e₁/e₂) / log(h₁/h₂)`; `None` when either error is zero.
pub fn rate(h1: f64, e1: f64, h2: f64, e2: f64) -> Option<f64> {
    (e1 > 0.0 && e2 > 0.0).then(|| (e1 / e2).ln() / (h1 / h2).ln())
}

/// Rates of every quantity between consecutive rows, in CSV column order
/// (`E2ψ, E1ψ, E0ψ, E1u, E0u, E0ω, E0p`).
pub fn convergence_rates(rows: &[ErrorRow]) -> Vec<[Option<f64>; 7]> {
    rows.windows(2)
        .map(|w| {
            let (a, b) = (&w[0], &w[1]);
            let ea = values(a);
            let eb = values(b);
            let mut r = [None; 7];
            for k in 0..7 {
                r[k] = match (ea[k], eb[k]) {
                    (Some(x), Some(y)) => rate(a.h, x, b.h, y),
                    _ => None,
                };
            }
            r
        })
        .collect()
}

fn values(r: &ErrorRow) -> [Option<f64>; 7] {
    [
        Some(r.e2_psi),
        Some(r.e1_psi),
        Some(r.e0_psi),
        Some(r.e1_u),
        Some(r.e0_u),
        Some(r.e0_w),
        r.e0_p,
    ]
}

/// Least-squares slope of `log e` against `log h`.
pub fn least_squares_slope(h: &[f64], e: &[f64]) -> f64 {
    let n = h.len() as f64;
    let x: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let y: Vec<f64> = e.iter().map(|v| v.ln()).collect();
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

pub const CSV_VERSION_LINE: &str = "# morley-ns error report v1";
pub const CSV_HEADER: &str =
    "h,E2_psi,R2_psi,E1_psi,R1_psi,E0_psi,R0_psi,E1_u,R1_u,E0_u,R0_u,E0_w,R0_w,E0_p,R0_p,newton_iters";

pub fn write_error_csv(rows: &[ErrorRow], out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "{CSV_VERSION_LINE}")?;
    writeln!(out, "{CSV_HEADER}")?;
    let rates = convergence_rates(rows);
    let fmt = |v: Option<f64>| v.map(|x| format!("{x:.4e}")).unwrap_or_default();
    let fmt_rate = |v: Option<f64>| v.map(|x| format!("{x:.2}")).unwrap_or_default();
    for (i, r) in rows.iter().enumerate() {
        let rt = if i == 0 { [None; 7] } else { rates[i - 1] };
        let vals = values(r);
        let mut line = format!("{:.6e}", r.h);
        for k in 0..7 {
            line.push_str(&format!(",{},{}", fmt(vals[k]), fmt_rate(rt[k])));
        }
        line.push_str(&format!(",{}", r.newton_iters));
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Samples `Π^D ψ_h` and `p_h` on an `n × n` grid over the mesh bounding
/// box. Points outside the domain get `NaN`.
pub fn sample_fields(
    mesh: &PolygonalMesh,
    fields: &RecoveredFields,
    ops: &[MorleyLocalOps],
    pressure: Option<&[f64]>,
    n: usize,
) -> Vec<[f64; 4]> {
    let (lo, hi) = mesh.bounding_box();
    let size = hi - lo;
    let at = |i: usize, j: usize| {
        Vec2::new(
            lo.x + size.x * i as f64 / (n - 1) as f64,
            lo.y + size.y * j as f64 / (n - 1) as f64,
        )
    };
    // Nudge samples off cell boundaries towards the box centre so that
    // points on the outer boundary and on edges are located.
    let centre = 0.5 * (lo + hi);
    let probe = |p: Vec2| p + 1e-9 * (centre - p) + Vec2::new(1e-11, 7e-12) * size.norm();
    let mut owner = vec![usize::MAX; n * n];
    for (c, cell) in mesh.cells.iter().enumerate() {
        let poly: Vec<Vec2> = cell.vertices.iter().map(|&v| mesh.point(v)).collect();
        let (mut clo, mut chi) = (poly[0], poly[0]);
        for p in &poly {
            clo = clo.inf(p);
            chi = chi.sup(p);
        }
        let idx = |v: f64, l: f64, s: f64| ((v - l) / s * (n - 1) as f64).clamp(0.0, (n - 1) as f64);
        let (i0, i1) = (idx(clo.x, lo.x, size.x).floor() as usize, idx(chi.x, lo.x, size.x).ceil() as usize);
        let (j0, j1) = (idx(clo.y, lo.y, size.y).floor() as usize, idx(chi.y, lo.y, size.y).ceil() as usize);
        for j in j0..=j1 {
            for i in i0..=i1 {
                if owner[j * n + i] == usize::MAX && point_in_polygon(&poly, probe(at(i, j))) {
                    owner[j * n + i] = c;
                }
            }
        }
    }
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            let p = at(i, j);
            let c = owner[j * n + i];
            if c == usize::MAX {
                out.push([p.x, p.y, f64::NAN, f64::NAN]);
            } else {
                let psi = ops[c].basis.value_of(fields.stream[c].as_slice(), p);
                let pr = pressure.map_or(f64::NAN, |ph| ph[c]);
                out.push([p.x, p.y, psi, pr]);
            }
        }
    }
    out
}

pub fn write_fields_csv(samples: &[[f64; 4]], out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "x,y,psi,p")?;
    for s in samples {
        writeln!(out, "{},{},{},{}", s[0], s[1], s[2], s[3])?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rates() {
        assert!((rate(0.25, 4e-2, 0.125, 1e-2).unwrap() - 2.0).abs() < 1e-14);
        assert_eq!(rate(0.25, 1e-2, 0.125, 1e-2).unwrap(), 0.0);
        assert!(rate(0.25, 0.0, 0.125, 1e-2).is_none());
        let s = least_squares_slope(&[0.25, 0.125, 0.0625], &[1.0, 0.5, 0.25]);
        assert!((s - 1.0).abs() < 1e-14);
    }

    #[test]
    fn csv_layout() {
        let rows = [
            ErrorRow { h: 0.5, e2_psi: 1.0, e1_psi: 1.0, e0_psi: 1.0, e1_u: 1.0, e0_u: 1.0, e0_w: 1.0, e0_p: None, newton_iters: 2 },
            ErrorRow { h: 0.25, e2_psi: 0.5, e1_psi: 0.25, e0_psi: 0.25, e1_u: 0.5, e0_u: 0.25, e0_w: 0.5, e0_p: None, newton_iters: 3 },
        ];
        let mut buf = Vec::new();
        write_error_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_VERSION_LINE);
        assert_eq!(lines[1], CSV_HEADER);
        let cols: Vec<&str> = lines[3].split(',').collect();
        assert_eq!(cols.len(), 16);
        assert_eq!(cols[2], "1.00");
        assert_eq!(cols[4], "2.00");
        assert_eq!(cols[13], "");
        assert_eq!(cols[15], "3");
    }
}
