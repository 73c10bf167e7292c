//! Gauss rules on edges and polygons, and the centroid-scaled monomial basis
//! in which every local polynomial is stored.

use nalgebra::{DMatrix, DVector, Matrix2};

use crate::mesh::{signed_area, Vec2};

/// Gauss–Legendre nodes and weights on `[-1, 1]`, computed by Newton's
/// method on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "Gauss-Legendre rule needs at least one point");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j - 1) as f64 * z * p2 - (j - 1) as f64 * p3) / j as f64;
            }
            dp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Points and weights of a rule over a polygon.
#[derive(Debug, Clone)]
pub struct PolygonQuadrature {
    pub points: Vec<Vec2>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

impl PolygonQuadrature {
    pub fn integrate(&self, f: impl Fn(Vec2) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(&p, &w)| w * f(p)).sum()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Collapsed (conical product) Gauss rule on the triangle `a, b, c`,
/// exact for polynomials of total degree `d`.
pub fn triangle_rule(a: Vec2, b: Vec2, c: Vec2, d: usize) -> (Vec<Vec2>, Vec<f64>) {
    // The collapse Jacobian adds one degree in the radial direction.
    let n = d / 2 + 1;
    let (x, w) = gauss_legendre(n);
    let area2 = (b - a).perp(&(c - a));
    let mut pts = Vec::with_capacity(n * n);
    let mut wts = Vec::with_capacity(n * n);
    for i in 0..n {
        let u = 0.5 * (x[i] + 1.0);
        for j in 0..n {
            let v = 0.5 * (x[j] + 1.0);
            // (u, v) in the unit square -> (s, t) = (u, (1-u) v) in the reference triangle
            let (s, t) = (u, (1.0 - u) * v);
            pts.push(a + s * (b - a) + t * (c - a));
            wts.push(0.25 * w[i] * w[j] * (1.0 - u) * area2);
        }
    }
    (pts, wts)
}

/// Rule of exactness `d` on a simple counterclockwise polygon.
///
/// The polygon is split into a fan around its vertex centroid when every fan
/// triangle has positive area, and by ear clipping otherwise.
pub fn polygon_rule(poly: &[Vec2], d: usize) -> PolygonQuadrature {
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for [a, b, c] in triangulate(poly) {
        let (p, w) = triangle_rule(a, b, c, d);
        points.extend(p);
        weights.extend(w);
    }
    PolygonQuadrature {
        points,
        weights,
        degree: d,
    }
}

/// Triangulation used by [`polygon_rule`].
pub fn triangulate(poly: &[Vec2]) -> Vec<[Vec2; 3]> {
    let n = poly.len();
    if n == 3 {
        return vec![[poly[0], poly[1], poly[2]]];
    }
    let center = poly.iter().sum::<Vec2>() / n as f64;
    let scale = signed_area(poly).abs();
    let fan: Vec<[Vec2; 3]> = (0..n).map(|i| [center, poly[i], poly[(i + 1) % n]]).collect();
    if fan
        .iter()
        .all(|t| (t[1] - t[0]).perp(&(t[2] - t[0])) > 1e-10 * scale)
    {
        return fan;
    }
    ear_clip(poly)
}

fn ear_clip(poly: &[Vec2]) -> Vec<[Vec2; 3]> {
    let mut idx: Vec<usize> = (0..poly.len()).collect();
    let mut tris = Vec::with_capacity(poly.len() - 2);
    let cross = |a: Vec2, b: Vec2, c: Vec2| (b - a).perp(&(c - a));
    while idx.len() > 3 {
        let m = idx.len();
        let mut best: Option<(usize, f64)> = None;
        for k in 0..m {
            let (a, b, c) = (poly[idx[(k + m - 1) % m]], poly[idx[k]], poly[idx[(k + 1) % m]]);
            let area = cross(a, b, c);
            if area <= 0.0 {
                continue;
            }
            let blocked = idx.iter().any(|&j| {
                let p = poly[j];
                if p == a || p == b || p == c {
                    return false;
                }
                cross(a, b, p) >= 0.0 && cross(b, c, p) >= 0.0 && cross(c, a, p) >= 0.0
            });
            if blocked {
                continue;
            }
            // Prefer fat ears: ratio of area to squared longest side.
            let q = area / (b - a).norm_squared().max((c - b).norm_squared()).max((a - c).norm_squared());
            if best.is_none_or(|(_, bq)| q > bq) {
                best = Some((k, q));
            }
        }
        let k = best.map(|(k, _)| k).expect("a simple polygon always has an ear");
        tris.push([poly[idx[(k + m - 1) % m]], poly[idx[k]], poly[idx[(k + 1) % m]]]);
        idx.remove(k);
    }
    tris.push([poly[idx[0]], poly[idx[1]], poly[idx[2]]]);
    tris
}

/// Gauss–Legendre rule with `⌈(d+1)/2⌉` points on the segment `a → b`.
/// Returns `(point, arclength from a, weight)`.
pub fn edge_rule(a: Vec2, b: Vec2, d: usize) -> Vec<(Vec2, f64, f64)> {
    let n = d / 2 + 1;
    let (x, w) = gauss_legendre(n);
    let h = (b - a).norm();
    x.iter()
        .zip(&w)
        .map(|(&xi, &wi)| {
            let s = 0.5 * (xi + 1.0);
            (a + s * (b - a), s * h, 0.5 * wi * h)
        })
        .collect()
}

/// Exponents `(a, b)` of `ξ^a η^b`, ordered by degree then by decreasing `a`.
pub fn monomial_exponents(k: usize) -> Vec<(i32, i32)> {
    let mut out = Vec::new();
    for deg in 0..=k as i32 {
        for b in 0..=deg {
            out.push((deg - b, b));
        }
    }
    out
}

/// Number of scaled monomials of total degree at most `k`.
pub fn dim_pk(k: usize) -> usize {
    (k + 1) * (k + 2) / 2
}

/// `m_α(x) = ((x − x_E)/h_E)^α` with `|α| ≤ k`, ordered `1, ξ, η, ξ², ξη, η², …`.
#[derive(Debug, Clone)]
pub struct ScaledMonomialBasis {
    pub center: Vec2,
    pub h: f64,
    pub degree: usize,
    exps: Vec<(i32, i32)>,
}

fn powi(x: f64, n: i32) -> f64 {
    if n < 0 {
        0.0
    } else {
        x.powi(n)
    }
}

impl ScaledMonomialBasis {
    pub fn new(center: Vec2, h: f64, degree: usize) -> Self {
        Self {
            center,
            h,
            degree,
            exps: monomial_exponents(degree),
        }
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[(i32, i32)] {
        &self.exps
    }

    fn local(&self, p: Vec2) -> (f64, f64) {
        ((p.x - self.center.x) / self.h, (p.y - self.center.y) / self.h)
    }

    pub fn eval(&self, p: Vec2) -> DVector<f64> {
        let (x, y) = self.local(p);
        DVector::from_iterator(self.dim(), self.exps.iter().map(|&(a, b)| powi(x, a) * powi(y, b)))
    }

    pub fn grad(&self, p: Vec2) -> Vec<Vec2> {
        let (x, y) = self.local(p);
        let s = 1.0 / self.h;
        self.exps
            .iter()
            .map(|&(a, b)| {
                Vec2::new(
                    s * a as f64 * powi(x, a - 1) * powi(y, b),
                    s * b as f64 * powi(x, a) * powi(y, b - 1),
                )
            })
            .collect()
    }

    pub fn hessian(&self, p: Vec2) -> Vec<Matrix2<f64>> {
        let (x, y) = self.local(p);
        let s = 1.0 / (self.h * self.h);
        self.exps
            .iter()
            .map(|&(a, b)| {
                let (af, bf) = (a as f64, b as f64);
                let xx = af * (af - 1.0) * powi(x, a - 2) * powi(y, b);
                let xy = af * bf * powi(x, a - 1) * powi(y, b - 1);
                let yy = bf * (bf - 1.0) * powi(x, a) * powi(y, b - 2);
                s * Matrix2::new(xx, xy, xy, yy)
            })
            .collect()
    }

    /// Evaluates the polynomial with coefficients `c` at `p`.
    pub fn value_of(&self, c: &[f64], p: Vec2) -> f64 {
        let (x, y) = self.local(p);
        self.exps
            .iter()
            .zip(c)
            .map(|(&(a, b), &ci)| ci * powi(x, a) * powi(y, b))
            .sum()
    }

    pub fn grad_of(&self, c: &[f64], p: Vec2) -> Vec2 {
        self.grad(p).iter().zip(c).map(|(g, &ci)| ci * g).sum()
    }

    pub fn hessian_of(&self, c: &[f64], p: Vec2) -> Matrix2<f64> {
        self.hessian(p).iter().zip(c).map(|(g, &ci)| ci * g).sum()
    }
}

/// Integrals of scaled monomial products over one polygon.
#[derive(Debug, Clone)]
pub struct MonomialMoments {
    /// `∫_E m_α m_β`
    pub mass: DMatrix<f64>,
    /// `∫_E m_α`
    pub integrals: DVector<f64>,
    /// `∫_E ∇m_α · ∇m_β`
    pub h1: DMatrix<f64>,
    /// `∫_E D²m_α : D²m_β`
    pub h2: DMatrix<f64>,
}

/// Gram matrices of the degree-`k` scaled monomials on `poly`.
pub fn monomial_moments(poly: &[Vec2], basis: &ScaledMonomialBasis) -> MonomialMoments {
    let n = basis.dim();
    let q = polygon_rule(poly, 2 * basis.degree);
    let mut mass = DMatrix::zeros(n, n);
    let mut integrals = DVector::zeros(n);
    let mut h1 = DMatrix::zeros(n, n);
    let mut h2 = DMatrix::zeros(n, n);
    for (&p, &w) in q.points.iter().zip(&q.weights) {
        let v = basis.eval(p);
        let g = basis.grad(p);
        let hs = basis.hessian(p);
        integrals += w * &v;
        mass += w * &v * v.transpose();
        for a in 0..n {
            for b in 0..n {
                h1[(a, b)] += w * g[a].dot(&g[b]);
                h2[(a, b)] += w * hs[a].component_mul(&hs[b]).sum();
            }
        }
    }
    MonomialMoments {
        mass,
        integrals,
        h1,
        h2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Vec<Vec2> {
        vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ]
    }

    #[test]
    fn legendre_rules_are_exact() {
        for n in 1..12 {
            let (x, w) = gauss_legendre(n);
            for deg in 0..2 * n {
                let q: f64 = x.iter().zip(&w).map(|(&x, &w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg + 1) as f64 };
                assert!((q - exact).abs() < 1e-14, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn unit_square_integrals() {
        let q = polygon_rule(&square(), 2);
        assert!((q.integrate(|_| 1.0) - 1.0).abs() < 1e-15);
        let q = polygon_rule(&square(), 4);
        assert!((q.integrate(|p| p.x * p.x * p.y * p.y) - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn edge_arclength_moments() {
        let r = edge_rule(Vec2::zeros(), Vec2::new(1.0, 0.0), 2);
        let one: f64 = r.iter().map(|t| t.2).sum();
        let s2: f64 = r.iter().map(|t| t.2 * t.1 * t.1).sum();
        assert!((one - 1.0).abs() < 1e-15);
        assert!((s2 - 1.0 / 3.0).abs() < 1e-15);
        for d in 0..12 {
            let r = edge_rule(Vec2::zeros(), Vec2::new(2.0, 0.0), d);
            let q: f64 = r.iter().map(|t| t.2 * t.1.powi(d as i32)).sum();
            assert!((q - 2f64.powi(d as i32 + 1) / (d + 1) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn normal_derivative_of_quadratic_on_edge() {
        // f = x^2 + xy on the edge (1,0)-(1,1) with n = (1,0): ∂_n f = 2x + y = 2 + y
        let r = edge_rule(Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), 1);
        let q: f64 = r.iter().map(|(p, _, w)| w * (2.0 * p.x + p.y)).sum();
        assert!((q - 2.5).abs() < 1e-15);
    }

    #[test]
    fn nonconvex_polygon_uses_ear_clipping() {
        // Star-shaped, but the vertex average is outside the kernel.
        let poly: Vec<Vec2> = [[0.0, 0.0], [3.0, 0.0], [3.0, 0.2], [0.2, 0.2], [0.2, 3.0], [0.0, 3.0]]
            .iter()
            .map(|p| Vec2::new(p[0], p[1]))
            .collect();
        let tris = triangulate(&poly);
        assert_eq!(tris.len(), 4);
        let area: f64 = tris.iter().map(|t| 0.5 * (t[1] - t[0]).perp(&(t[2] - t[0]))).sum();
        assert!((area - signed_area(&poly)).abs() < 1e-14);
        let q = polygon_rule(&poly, 3);
        assert!((q.integrate(|p| p.x) - (3.0 * 0.2 * 1.5 + 2.8 * 0.2 * 0.1)).abs() < 1e-13);
    }

    #[test]
    fn basis_centroid_values() {
        let b = ScaledMonomialBasis::new(Vec2::new(0.3, -0.2), 0.7, 3);
        assert_eq!(b.dim(), 10);
        let v = b.eval(Vec2::new(0.3, -0.2));
        assert_eq!(v[0], 1.0);
        assert!(v.iter().skip(1).all(|&x| x == 0.0));
    }

    #[test]
    fn scaled_square_moments() {
        let poly = square();
        let b = ScaledMonomialBasis::new(Vec2::new(0.5, 0.5), 1.0, 2);
        let m = monomial_moments(&poly, &b);
        assert!((m.mass[(0, 0)] - 1.0).abs() < 1e-15);
        assert!(m.mass[(1, 2)].abs() < 1e-15);
        assert!((&m.mass - m.mass.transpose()).norm() < 1e-15);
        assert!(m.mass.clone().cholesky().is_some());
    }
}
