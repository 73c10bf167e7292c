//! Closed-form reference solutions `(ψ, p, f)` of the stream-function
//! Navier–Stokes problem, with `u = curl ψ = (ψ_y, −ψ_x)` and `ω = −Δψ`.

use std::f64::consts::PI;

use nalgebra::Matrix2;

use crate::mesh::Vec2;

pub trait ExactSolution: Sync {
    fn psi(&self, p: Vec2) -> f64;
    fn grad_psi(&self, p: Vec2) -> Vec2;
    fn hessian_psi(&self, p: Vec2) -> Matrix2<f64>;
    /// Zero-mean pressure, when known.
    fn pressure(&self, _p: Vec2) -> Option<f64> {
        None
    }
    /// Body force `f = −νΔu + (∇u)u + ∇p`.
    fn force(&self, p: Vec2) -> Vec2;
    /// `rot f = ∂_x f₂ − ∂_y f₁`, when available in closed form.
    fn rot_force(&self, _p: Vec2) -> Option<f64> {
        None
    }

    fn velocity(&self, p: Vec2) -> Vec2 {
        let g = self.grad_psi(p);
        Vec2::new(g.y, -g.x)
    }

    /// `[∂_j u_i]`
    fn velocity_gradient(&self, p: Vec2) -> Matrix2<f64> {
        let h = self.hessian_psi(p);
        Matrix2::new(h[(0, 1)], h[(1, 1)], -h[(0, 0)], -h[(0, 1)])
    }

    fn vorticity(&self, p: Vec2) -> f64 {
        -self.hessian_psi(p).trace()
    }
}

/// Kovasznay flow on `[0,1]²`; an exact solution with `f = 0`.
#[derive(Debug, Clone, Copy)]
pub struct Kovasznay {
    pub nu: f64,
    pub lambda: f64,
}

impl Kovasznay {
    pub fn new(nu: f64) -> Self {
        let re = 1.0 / nu;
        Self {
            nu,
            lambda: 0.5 * re - (0.25 * re * re + 4.0 * PI * PI).sqrt(),
        }
    }

    /// Constant making the pressure mean-free on the unit square.
    pub fn pressure_shift(&self) -> f64 {
        let l = self.lambda;
        ((2.0 * l).exp() - 1.0) / (4.0 * l)
    }
}

impl ExactSolution for Kovasznay {
    fn psi(&self, p: Vec2) -> f64 {
        p.y - (self.lambda * p.x).exp() * (2.0 * PI * p.y).sin() / (2.0 * PI)
    }

    fn grad_psi(&self, p: Vec2) -> Vec2 {
        let (l, e) = (self.lambda, (self.lambda * p.x).exp());
        let (s, c) = (2.0 * PI * p.y).sin_cos();
        Vec2::new(-l * e * s / (2.0 * PI), 1.0 - e * c)
    }

    fn hessian_psi(&self, p: Vec2) -> Matrix2<f64> {
        let (l, e) = (self.lambda, (self.lambda * p.x).exp());
        let (s, c) = (2.0 * PI * p.y).sin_cos();
        let xx = -l * l * e * s / (2.0 * PI);
        let xy = -l * e * c;
        let yy = 2.0 * PI * e * s;
        Matrix2::new(xx, xy, xy, yy)
    }

    fn pressure(&self, p: Vec2) -> Option<f64> {
        Some(-0.5 * (2.0 * self.lambda * p.x).exp() + self.pressure_shift())
    }

    fn force(&self, _p: Vec2) -> Vec2 {
        Vec2::zeros()
    }

    fn rot_force(&self, _p: Vec2) -> Option<f64> {
        Some(0.0)
    }
}

/// Singular solution `ψ = r^{5/3} sin(5θ/3)` on the L-shaped domain
/// `[−1,1]² ∖ (0,1)×(−1,0)`, with `p = sin x − sin y − p̄`.
///
/// The angle is `θ = s·φ + θ₀`, where `φ ∈ [0, 3π/2]` is the polar angle
/// measured counterclockwise from the positive x-axis, continuous on the
/// domain. The default measures θ from the positive y-axis towards the
/// positive x-axis (`s = −1`, `θ₀ = π/2`).
#[derive(Debug, Clone, Copy)]
pub struct LShaped {
    pub orientation: f64,
    pub theta0: f64,
}

impl Default for LShaped {
    fn default() -> Self {
        Self {
            orientation: -1.0,
            theta0: 0.5 * PI,
        }
    }
}

impl LShaped {
    pub const ALPHA: f64 = 5.0 / 3.0;

    /// `(r, φ)` with `φ` continuous on the L-shaped domain.
    fn polar(p: Vec2) -> (f64, f64) {
        let mut phi = p.y.atan2(p.x);
        if p.y < 0.0 && p.x <= 0.0 {
            phi += 2.0 * PI;
        }
        (p.norm(), phi)
    }

    /// Mean of `sin x − sin y` over the domain.
    pub fn pressure_shift() -> f64 {
        -2.0 * (1.0 - 1f64.cos()) / 3.0
    }
}

impl ExactSolution for LShaped {
    fn psi(&self, p: Vec2) -> f64 {
        let (r, phi) = Self::polar(p);
        let a = Self::ALPHA;
        r.powf(a) * (a * (self.orientation * phi + self.theta0)).sin()
    }

    fn grad_psi(&self, p: Vec2) -> Vec2 {
        let (r, phi) = Self::polar(p);
        if r == 0.0 {
            return Vec2::zeros();
        }
        let (a, s) = (Self::ALPHA, self.orientation);
        let ph = a * (s * phi + self.theta0) - s * phi;
        let k = a * r.powf(a - 1.0);
        Vec2::new(k * ph.sin(), s * k * ph.cos())
    }

    fn hessian_psi(&self, p: Vec2) -> Matrix2<f64> {
        let (r, phi) = Self::polar(p);
        if r == 0.0 {
            // r^{-1/3} singularity; quadrature never samples the corner.
            return Matrix2::zeros();
        }
        let (a, s) = (Self::ALPHA, self.orientation);
        let ph = a * (s * phi + self.theta0) - 2.0 * s * phi;
        let k = a * (a - 1.0) * r.powf(a - 2.0);
        let xx = k * ph.sin();
        let xy = s * k * ph.cos();
        Matrix2::new(xx, xy, xy, -xx)
    }

    fn pressure(&self, p: Vec2) -> Option<f64> {
        Some(p.x.sin() - p.y.sin() - Self::pressure_shift())
    }

    /// `ψ` is harmonic, so `Δu = 0` and `f = (∇u)u + ∇p` for every ν.
    fn force(&self, p: Vec2) -> Vec2 {
        let u = self.velocity(p);
        self.velocity_gradient(p) * u + Vec2::new(p.x.cos(), -p.y.cos())
    }
}

/// `ψ = x²y²(1−x)²(1−y)²` on `[0,1]²` with `p = x³y³ − 1/16`.
#[derive(Debug, Clone, Copy)]
pub struct Robustness {
    pub nu: f64,
}

/// `P(t) = t²(1−t)²` and its derivatives up to order four.
fn bump(t: f64) -> [f64; 5] {
    [
        t * t * (1.0 - t) * (1.0 - t),
        2.0 * t - 6.0 * t * t + 4.0 * t * t * t,
        2.0 - 12.0 * t + 12.0 * t * t,
        -12.0 + 24.0 * t,
        24.0,
    ]
}

impl Robustness {
    /// `∇(Δψ)`
    fn grad_laplacian(&self, p: Vec2) -> Vec2 {
        let (x, y) = (bump(p.x), bump(p.y));
        Vec2::new(x[3] * y[0] + x[1] * y[2], x[2] * y[1] + x[0] * y[3])
    }

    fn bilaplacian(&self, p: Vec2) -> f64 {
        let (x, y) = (bump(p.x), bump(p.y));
        x[4] * y[0] + 2.0 * x[2] * y[2] + x[0] * y[4]
    }
}

impl ExactSolution for Robustness {
    fn psi(&self, p: Vec2) -> f64 {
        bump(p.x)[0] * bump(p.y)[0]
    }

    fn grad_psi(&self, p: Vec2) -> Vec2 {
        let (x, y) = (bump(p.x), bump(p.y));
        Vec2::new(x[1] * y[0], x[0] * y[1])
    }

    fn hessian_psi(&self, p: Vec2) -> Matrix2<f64> {
        let (x, y) = (bump(p.x), bump(p.y));
        Matrix2::new(x[2] * y[0], x[1] * y[1], x[1] * y[1], x[0] * y[2])
    }

    fn pressure(&self, p: Vec2) -> Option<f64> {
        Some((p.x * p.y).powi(3) - 1.0 / 16.0)
    }

    fn force(&self, p: Vec2) -> Vec2 {
        // Δu = curl Δψ
        let gl = self.grad_laplacian(p);
        let lap_u = Vec2::new(gl.y, -gl.x);
        let grad_p = Vec2::new(3.0 * p.x * p.x * p.y.powi(3), 3.0 * p.x.powi(3) * p.y * p.y);
        -self.nu * lap_u + self.velocity_gradient(p) * self.velocity(p) + grad_p
    }

    /// `rot f = νΔ²ψ − u·∇Δψ`
    fn rot_force(&self, p: Vec2) -> Option<f64> {
        Some(self.nu * self.bilaplacian(p) - self.velocity(p).dot(&self.grad_laplacian(p)))
    }
}

/// A global quadratic stream function with zero force; the discrete Stokes
/// problem reproduces it exactly.
#[derive(Debug, Clone, Copy)]
pub struct QuadraticStream(pub crate::morley::Quadratic);

impl ExactSolution for QuadraticStream {
    fn psi(&self, p: Vec2) -> f64 {
        self.0.value(p)
    }

    fn grad_psi(&self, p: Vec2) -> Vec2 {
        self.0.grad(p)
    }

    fn hessian_psi(&self, _p: Vec2) -> Matrix2<f64> {
        self.0.h
    }

    fn force(&self, _p: Vec2) -> Vec2 {
        Vec2::zeros()
    }

    fn rot_force(&self, _p: Vec2) -> Option<f64> {
        Some(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Central differences of `f` at `p`.
    fn fd_grad(f: impl Fn(Vec2) -> f64, p: Vec2, h: f64) -> Vec2 {
        Vec2::new(
            (f(p + Vec2::new(h, 0.0)) - f(p - Vec2::new(h, 0.0))) / (2.0 * h),
            (f(p + Vec2::new(0.0, h)) - f(p - Vec2::new(0.0, h))) / (2.0 * h),
        )
    }

    fn check_derivatives(sol: &dyn ExactSolution, pts: &[Vec2]) {
        for &p in pts {
            let g = fd_grad(|q| sol.psi(q), p, 1e-6);
            assert!((g - sol.grad_psi(p)).norm() < 1e-7 * (1.0 + g.norm()), "grad at {p:?}");
            let hx = fd_grad(|q| sol.grad_psi(q).x, p, 1e-6);
            let hy = fd_grad(|q| sol.grad_psi(q).y, p, 1e-6);
            let h = sol.hessian_psi(p);
            let fd = Matrix2::new(hx.x, hx.y, hy.x, hy.y);
            assert!((fd - h).norm() < 1e-6 * (1.0 + h.norm()), "hessian at {p:?}");
        }
    }

    /// Residual of the momentum equation `−νΔu + (∇u)u + ∇p − f` by
    /// finite differences of the closed-form fields.
    fn momentum_residual(sol: &dyn ExactSolution, nu: f64, p: Vec2) -> f64 {
        let h = 1e-4;
        let lap = |i: usize| {
            let c = |q: Vec2| sol.velocity(q)[i];
            (c(p + Vec2::new(h, 0.0)) + c(p - Vec2::new(h, 0.0)) + c(p + Vec2::new(0.0, h))
                + c(p - Vec2::new(0.0, h))
                - 4.0 * c(p))
                / (h * h)
        };
        let gp = fd_grad(|q| sol.pressure(q).unwrap(), p, 1e-6);
        let r = -nu * Vec2::new(lap(0), lap(1)) + sol.velocity_gradient(p) * sol.velocity(p) + gp
            - sol.force(p);
        r.norm()
    }

    #[test]
    fn kovasznay_is_an_exact_solution() {
        for nu in [1.0, 0.01] {
            let k = Kovasznay::new(nu);
            let pts = [Vec2::new(0.3, 0.7), Vec2::new(0.8, 0.1)];
            check_derivatives(&k, &pts);
            for &p in &pts {
                assert!(momentum_residual(&k, nu, p) < 1e-5);
                let w = (k.lambda.powi(2) - 4.0 * PI * PI) / (2.0 * PI)
                    * (k.lambda * p.x).exp()
                    * (2.0 * PI * p.y).sin();
                assert!((k.vorticity(p) - w).abs() < 1e-10 * (1.0 + w.abs()));
            }
        }
    }

    #[test]
    fn lshaped_is_harmonic_and_consistent() {
        let pts = [Vec2::new(0.3, 0.7), Vec2::new(-0.5, -0.4), Vec2::new(-0.2, 0.6)];
        for s in [LShaped::default(), LShaped { orientation: 1.0, theta0: 0.0 }] {
            check_derivatives(&s, &pts);
            for &p in &pts {
                assert!(s.hessian_psi(p).trace().abs() < 1e-12);
                assert!(momentum_residual(&s, 1.0, p) < 1e-5);
            }
        }
    }

    #[test]
    fn robustness_forcing() {
        let s = Robustness { nu: 0.1 };
        let pts = [Vec2::new(0.3, 0.7), Vec2::new(0.8, 0.45)];
        check_derivatives(&s, &pts);
        for &p in &pts {
            assert!(momentum_residual(&s, 0.1, p) < 1e-5);
            // rot f by differencing f
            let h = 1e-5;
            let dx = (s.force(p + Vec2::new(h, 0.0)).y - s.force(p - Vec2::new(h, 0.0)).y) / (2.0 * h);
            let dy = (s.force(p + Vec2::new(0.0, h)).x - s.force(p - Vec2::new(0.0, h)).x) / (2.0 * h);
            assert!((dx - dy - s.rot_force(p).unwrap()).abs() < 1e-6);
        }
    }
}
