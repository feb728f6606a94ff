//! Closed forms for the interval weight `(κ+1)χ_(ξ,ξ+δ) - 1`.
//!
//! Notation used throughout: `s = √λ`, `w = √(λκ)`, `b = β e^α`,
//! `E = κ e^{2α(κ+1)}` and `u = s(1-δ)`. On each piece the eigenfunction is
//! a combination of `cosh/sinh(s x)` (where `m = -1`) or `cos/sin(w x)`
//! (where `m = κ`), and matching fluxes `e^{αm} φ'` at `ξ` and `ξ+δ` gives a
//! scalar equation `F(ξ, β, λ) = 0` whose first positive root is `λ₁`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::weights::ModelParams;

/// Model constants plus the interval length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TranscendParams {
    pub params: ModelParams,
    pub delta: f64,
}

impl TranscendParams {
    pub fn new(params: ModelParams, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidArgument(format!("delta must lie in (0,1), got {delta}")));
        }
        Ok(Self { params, delta })
    }

    /// Interval length `δ*` saturating the mass constraint.
    pub fn saturated(params: ModelParams) -> Self {
        Self { params, delta: params.delta_star() }
    }

    /// Left endpoint of the centered interval.
    pub fn centered_xi(&self) -> f64 {
        0.5 * (1.0 - self.delta)
    }

    fn e_big(&self) -> f64 {
        let p = &self.params;
        p.kappa * (2.0 * p.alpha * (p.kappa + 1.0)).exp()
    }

    /// `√κ e^{α(κ+1)}`, the flux ratio across the interval ends.
    fn flux_ratio(&self) -> f64 {
        let p = &self.params;
        p.kappa.sqrt() * (p.alpha * (p.kappa + 1.0)).exp()
    }

    /// Upper end `π²/(κδ²)` of the root search.
    pub fn lambda_cap(&self) -> f64 {
        PI * PI / (self.params.kappa * self.delta * self.delta)
    }

    fn check_xi(&self, xi: f64) -> Result<()> {
        if !(xi >= 0.0 && xi <= 1.0 - self.delta + 1e-14) {
            return Err(Error::InvalidArgument(format!("xi must lie in [0, 1-delta], got {xi}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FComponents {
    pub f_s: f64,
    pub f_c: f64,
    pub f: f64,
}

/// Hyperbolic factors multiplied by `e^{-u}`: `(sinh u, cosh u, cosh v)`.
fn scaled_hyperbolics(u: f64, v: f64) -> (f64, f64, f64) {
    let e2 = (-2.0 * u).exp();
    let sh = 0.5 * (1.0 - e2);
    let ch = 0.5 * (1.0 + e2);
    let chv = 0.5 * ((v.abs() - u).exp() + (-v.abs() - u).exp());
    (sh, ch, chv)
}

fn components(xi: f64, beta: f64, lambda: f64, tp: &TranscendParams, scaled: bool) -> FComponents {
    let p = &tp.params;
    let d = tp.delta;
    let s = lambda.sqrt();
    let b = beta * p.alpha.exp();
    let e = tp.e_big();
    let u = s * (1.0 - d);
    let v = s * (1.0 - 2.0 * xi - d);
    let (sh, ch, chv) = if scaled {
        scaled_hyperbolics(u, v)
    } else {
        (u.sinh(), u.cosh(), v.cosh())
    };
    let f_s = b * s * (e - 1.0) * sh + 0.5 * (1.0 + e) * (lambda - b * b) * chv + 0.5 * (e - 1.0) * (b * b + lambda) * ch;
    let f_c = (lambda + b * b) * sh + 2.0 * b * s * ch;
    let wd = (lambda * p.kappa).sqrt() * d;
    let f = -f_s * wd.sin() + tp.flux_ratio() * f_c * wd.cos();
    FComponents { f_s, f_c, f }
}

/// `F^s`, `F^c` and `F` at `(ξ, β, λ)`, unscaled.
pub fn f_components(xi: f64, beta: f64, lambda: f64, tp: &TranscendParams) -> FComponents {
    components(xi, beta, lambda, tp, false)
}

/// `F e^{-√λ(1-δ)}`: same sign as `F`, finite for large `λ`.
pub fn f_scaled(xi: f64, beta: f64, lambda: f64, tp: &TranscendParams) -> f64 {
    components(xi, beta, lambda, tp, true).f
}

/// `∂F/∂√λ` at `λ = 0`, which does not depend on `ξ`.
pub fn slope_at_zero(beta: f64, tp: &TranscendParams) -> f64 {
    let p = &tp.params;
    let k = p.kappa;
    let a = p.alpha;
    k.sqrt() * tp.delta * beta * beta * (2.0 * a).exp()
        + k.sqrt() * (a * (k + 2.0)).exp() * beta * (beta * a.exp() * (1.0 - tp.delta) + 2.0)
}

fn scan_step(t: f64, tp: &TranscendParams) -> f64 {
    let base = PI / (8.0 * tp.params.kappa.sqrt() * tp.delta);
    0.01f64.min(base) * (1.0 + t)
}

fn bisect(mut lo: f64, mut hi: f64, rel: f64, positive_at_lo: bool, f: impl Fn(f64) -> f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == positive_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= rel * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// First positive root of `F(ξ, β, ·)`, searched in `√λ` on `[1e-4, π/(√κδ)]`.
///
/// `sin(√(λκ)δ)` is positive on the whole search interval, so a sign change
/// can never be the spurious factor `sin = 0`.
pub fn transcendental_root(xi: f64, beta: f64, tp: &TranscendParams) -> Result<f64> {
    tp.check_xi(xi)?;
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::InvalidArgument(format!("beta must be finite and >= 0, got {beta}")));
    }
    let g = |t: f64| f_scaled(xi, beta, t * t, tp);
    let t_max = PI / (tp.params.kappa.sqrt() * tp.delta);
    let mut samples = Vec::new();
    let mut t = 1e-4;
    let first = g(t);
    samples.push((t * t, first));
    if first <= 0.0 {
        return Err(Error::RootNotFound { samples });
    }
    while t < t_max {
        let next = (t + scan_step(t, tp)).min(t_max);
        let val = g(next);
        if samples.len() < 4096 {
            samples.push((next * next, val));
        }
        if val <= 0.0 {
            if val == 0.0 {
                return Ok(next * next);
            }
            let root = bisect(t, next, 5e-13, true, g);
            return Ok(root * root);
        }
        t = next;
    }
    Err(Error::RootNotFound { samples })
}

/// First positive root of `tan(√(λκ)δ) = -√κ e^{α(κ+1)} tanh(√λ(1-δ))`,
/// the Dirichlet equation for the interval touching `x = 0`.
pub fn dirichlet_root(tp: &TranscendParams) -> Result<f64> {
    let k = tp.params.kappa;
    let d = tp.delta;
    let r = tp.flux_ratio();
    // multiplied through by cos, so no poles
    let g = |t: f64| {
        let wd = t * k.sqrt() * d;
        wd.sin() + r * (t * (1.0 - d)).tanh() * wd.cos()
    };
    let lo = PI / (2.0 * k.sqrt() * d);
    let hi = PI / (k.sqrt() * d);
    if !(g(lo) > 0.0 && g(hi) < 0.0) {
        return Err(Error::RootNotFound { samples: vec![(lo * lo, g(lo)), (hi * hi, g(hi))] });
    }
    let t = bisect(lo, hi, 5e-13, true, g);
    Ok(t * t)
}

/// Critical Robin coefficient separating the boundary and centered optima.
pub fn beta_crit(tp: &TranscendParams) -> f64 {
    let p = &tp.params;
    let scale = (-p.alpha).exp() / (p.kappa.sqrt() * tp.delta);
    let e = tp.e_big();
    let ratio = 2.0 * tp.flux_ratio();
    if e > 1.0 {
        scale * (ratio / (e - 1.0)).atan()
    } else if e == 1.0 {
        scale * 0.5 * PI
    } else {
        scale * ((ratio / (e - 1.0)).atan() + PI)
    }
}

/// Sign diagnostic `Δ = -½(λ - β²e^{2α})(E + 1)(cosh(√λ(1-δ)) - 1)`.
pub fn delta_diag(beta: f64, lambda: f64, tp: &TranscendParams) -> f64 {
    let p = &tp.params;
    let s = lambda.sqrt();
    -0.5 * (lambda - beta * beta * (2.0 * p.alpha).exp()) * (tp.e_big() + 1.0) * ((s * (1.0 - tp.delta)).cosh() - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeForm {
    /// Interval at the boundary, `β < β_crit`.
    Boundary,
    /// Centered interval, `β > β_crit`.
    Centered,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeEquation {
    pub form: RegimeForm,
    /// `tan(√(λκ)δ)`.
    pub lhs: f64,
    pub rhs: f64,
}

/// Both sides of the `tan(√(λκ)δ) = …` equation for the regime selected by `β`.
pub fn regime_equations(beta: f64, lambda: f64, tp: &TranscendParams) -> Result<RegimeEquation> {
    let bc = beta_crit(tp);
    if (beta - bc).abs() <= 1e-12 * bc {
        return Err(Error::InvalidArgument(format!("beta = {beta} is the critical value, no regime equation")));
    }
    let p = &tp.params;
    let wd = (lambda * p.kappa).sqrt() * tp.delta;
    let cos = wd.cos();
    if cos.abs() < 1e-12 {
        return Err(Error::TangentPole { lambda, distance: cos.abs() });
    }
    let lhs = wd.tan();
    let s = lambda.sqrt();
    let b = beta * p.alpha.exp();
    let e = tp.e_big();
    let u = s * (1.0 - tp.delta);
    let (form, rhs) = if beta < bc {
        let th = u.tanh();
        let num = (lambda + b * b) * th + 2.0 * b * s;
        let den = b * s * (e - 1.0) * th + e * lambda - b * b;
        (RegimeForm::Boundary, tp.flux_ratio() * num / den)
    } else {
        let (sh, ch, _) = scaled_hyperbolics(u, 0.0);
        let num = (lambda + b * b) * sh + 2.0 * b * s * ch;
        let den = centered_denominator_scaled(beta, lambda, tp);
        (RegimeForm::Centered, tp.flux_ratio() * num / den)
    };
    Ok(RegimeEquation { form, lhs, rhs })
}

/// `𝒟(β, λ) e^{-√λ(1-δ)}`, the centered-regime denominator.
fn centered_denominator_scaled(beta: f64, lambda: f64, tp: &TranscendParams) -> f64 {
    let p = &tp.params;
    let s = lambda.sqrt();
    let b = beta * p.alpha.exp();
    let e = tp.e_big();
    let u = s * (1.0 - tp.delta);
    let (sh, ch, _) = scaled_hyperbolics(u, 0.0);
    b * s * (e - 1.0) * sh + 0.5 * (1.0 + e) * (lambda - b * b) * (-u).exp() + 0.5 * (e - 1.0) * (b * b + lambda) * ch
}

/// `𝒟(β, λ)` unscaled.
pub fn centered_denominator(beta: f64, lambda: f64, tp: &TranscendParams) -> f64 {
    let u = lambda.sqrt() * (1.0 - tp.delta);
    centered_denominator_scaled(beta, lambda, tp) * u.exp()
}

/// Piecewise closed-form eigenfunction.
///
/// Left of `ξ` it is `A P(x)/P(ξ)` with `P = s cosh(sx) + b sinh(sx)`; on the
/// interval `C cos(w(x-ξ)) + D sin(w(x-ξ))`; right of `ξ+δ` it is
/// `B Q(x)/Q(ξ+δ)` with `Q = s cosh(s(1-x)) + b sinh(s(1-x))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormEigenfunction {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub xi: f64,
    pub lambda: f64,
    pub beta: f64,
    pub tp: TranscendParams,
}

/// `cosh(s x)(s + b tanh(s x))` divided by the same at `x0`, overflow-safe.
fn hyperbolic_ratio(s: f64, b: f64, x: f64, x0: f64) -> f64 {
    let cosh_ratio = (s * (x - x0)).exp() * (1.0 + (-2.0 * s * x).exp()) / (1.0 + (-2.0 * s * x0).exp());
    cosh_ratio * (s + b * (s * x).tanh()) / (s + b * (s * x0).tanh())
}

/// Logarithmic derivative of `s cosh(s x) + b sinh(s x)`.
fn log_derivative(s: f64, b: f64, x: f64) -> f64 {
    let th = (s * x).tanh();
    s * (s * th + b) / (s + b * th)
}

impl ClosedFormEigenfunction {
    fn consts(&self) -> (f64, f64, f64, f64) {
        let p = &self.tp.params;
        let s = self.lambda.sqrt();
        let w = (self.lambda * p.kappa).sqrt();
        let b = self.beta * p.alpha.exp();
        let jump = (p.alpha * (p.kappa + 1.0)).exp();
        (s, w, b, jump)
    }

    pub fn right_end(&self) -> f64 {
        self.xi + self.tp.delta
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (s, w, b, _) = self.consts();
        let r = self.right_end();
        if x < self.xi {
            self.a * hyperbolic_ratio(s, b, x, self.xi)
        } else if x <= r {
            let t = w * (x - self.xi);
            self.c * t.cos() + self.d * t.sin()
        } else {
            self.b * hyperbolic_ratio(s, b, 1.0 - x, 1.0 - r)
        }
    }

    /// One-sided derivative: from the left at `ξ+δ` and the interior points,
    /// from the right at `ξ`.
    pub fn derivative(&self, x: f64) -> f64 {
        let (s, w, b, _) = self.consts();
        let r = self.right_end();
        if x < self.xi {
            self.eval(x) * log_derivative(s, b, x)
        } else if x <= r {
            let t = w * (x - self.xi);
            w * (-self.c * t.sin() + self.d * t.cos())
        } else {
            -self.eval(x) * log_derivative(s, b, 1.0 - x)
        }
    }

    /// Relative flux mismatch `|φ'(ξ⁻) - e^{α(κ+1)} φ'(ξ⁺)|` and
    /// `|e^{α(κ+1)} φ'((ξ+δ)⁻) - φ'((ξ+δ)⁺)|`, the larger of the two.
    pub fn jump_residual(&self) -> f64 {
        let (s, _, b, jump) = self.consts();
        let r = self.right_end();
        let left_outer = self.a * log_derivative(s, b, self.xi);
        let left_inner = jump * self.derivative(self.xi);
        let right_inner = jump * self.derivative(r);
        let right_outer = -self.b * log_derivative(s, b, 1.0 - r);
        let r1 = (left_outer - left_inner).abs() / left_outer.abs().max(left_inner.abs()).max(1.0);
        let r2 = (right_inner - right_outer).abs() / right_inner.abs().max(right_outer.abs()).max(1.0);
        r1.max(r2)
    }

    pub fn sample(&self, nodes: &[f64]) -> Vec<f64> {
        nodes.iter().map(|&x| self.eval(x)).collect()
    }
}

/// Builds the eigenfunction at a root `λ` of `F(ξ, β, ·)` with `A = 1`.
///
/// The flux conditions form a symmetric 2×2 system `M (A, B)ᵀ = 0`;
/// `B` is read off whichever row of `M` is better conditioned.
pub fn closed_form_eigenfunction(xi: f64, beta: f64, lambda: f64, tp: &TranscendParams) -> Result<ClosedFormEigenfunction> {
    tp.check_xi(xi)?;
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument(format!("lambda must be positive, got {lambda}")));
    }
    let p = &tp.params;
    let s = lambda.sqrt();
    let w = (lambda * p.kappa).sqrt();
    let b = beta * p.alpha.exp();
    let jump = (p.alpha * (p.kappa + 1.0)).exp();
    let wd = w * tp.delta;
    let (sin, cos) = wd.sin_cos();
    let pl = log_derivative(s, b, xi);
    let qr = -log_derivative(s, b, 1.0 - xi - tp.delta);
    let m11 = pl * sin + jump * w * cos;
    let m12 = -jump * w;
    let m22 = jump * w * cos - qr * sin;
    let row1 = m11.abs() + m12.abs();
    let row2 = m12.abs() + m22.abs();
    // each row reads m_i1 A + m_i2 B = 0
    let bb = if row1 >= row2 {
        if m12 == 0.0 {
            return Err(Error::NumericalRank("degenerate flux system".into()));
        }
        -m11 / m12
    } else {
        if m22 == 0.0 {
            return Err(Error::NumericalRank("degenerate flux system".into()));
        }
        -m12 / m22
    };
    if sin.abs() < 1e-300 {
        return Err(Error::NumericalRank("sin(√(λκ)δ) vanishes".into()));
    }
    let a = 1.0;
    let c = a;
    let d = (bb - a * cos) / sin;
    Ok(ClosedFormEigenfunction { a, b: bb, c, d, xi, lambda, beta, tp: *tp })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tp() -> TranscendParams {
        TranscendParams::new(ModelParams::new(0.2, 1.0, 0.4).unwrap(), 0.3).unwrap()
    }

    #[test]
    fn beta_crit_reference_value() {
        assert!((beta_crit(&tp()) - 3.223_220_728_655_64).abs() < 1e-12);
        assert!((beta_crit(&tp()) - 3.2232).abs() < 1e-3);
    }

    #[test]
    fn beta_crit_middle_case() {
        // κ e^{2α(κ+1)} = 1 with κ = e^{-1}, α = 1/(2(κ+1))
        let k = (-1.0f64).exp();
        let alpha = 0.5 / (k + 1.0);
        let tp = TranscendParams::new(ModelParams::new(alpha, k, 0.2).unwrap(), 0.4).unwrap();
        let e = tp.e_big();
        let expected = PI * (-alpha).exp() / (2.0 * k.sqrt() * 0.4);
        if e == 1.0 {
            assert!((beta_crit(&tp) / expected - 1.0).abs() < 1e-15);
        } else {
            // rounding lands on one of the outer branches, which are continuous there
            assert!((beta_crit(&tp) - expected).abs() < 1e-6);
        }
    }

    #[test]
    fn beta_crit_is_continuous_across_cases() {
        let k: f64 = 0.5;
        let alpha0 = -k.ln() / (2.0 * (k + 1.0));
        let vals: Vec<f64> = [-1e-9, 1e-9]
            .iter()
            .map(|eps| {
                let tp = TranscendParams::new(ModelParams::new(alpha0 + eps, k, 0.2).unwrap(), 0.3).unwrap();
                beta_crit(&tp)
            })
            .collect();
        assert!((vals[0] - vals[1]).abs() < 1e-6);
    }

    #[test]
    fn f_vanishes_at_zero() {
        for xi in [0.0, 0.2, 0.35] {
            let f = f_components(xi, 2.0, 1e-20, &tp()).f;
            assert!(f.abs() < 1e-8, "{f}");
        }
    }

    #[test]
    fn slope_matches_finite_difference() {
        let tp = tp();
        for (xi, beta) in [(0.0, 1.0), (0.1, 2.0), (0.35, 10.0)] {
            let t: f64 = 1e-6;
            let fd = f_components(xi, beta, t * t, &tp).f / t;
            let exact = slope_at_zero(beta, &tp);
            assert!((fd / exact - 1.0).abs() < 1e-4, "{fd} vs {exact}");
            assert!(exact > 0.0);
        }
    }

    #[test]
    fn f_is_independent_of_xi_at_special_lambda() {
        let tp = tp();
        let beta = 2.5;
        let lam = beta * beta * 0.4f64.exp();
        let f0 = f_components(0.0, beta, lam, &tp).f;
        for xi in [0.1, 0.2, 0.35, 0.7] {
            assert!((f_components(xi, beta, lam, &tp).f - f0).abs() < 1e-9 * f0.abs().max(1.0));
        }
    }

    #[test]
    fn reference_roots() {
        let tp = tp();
        for (xi, beta, expected) in [(0.0, 1.0, 8.247_818_0), (0.35, 1.0, 13.750_49), (0.1, 10.0, 20.675_23), (0.35, 10.0, 16.899_44)] {
            let r = transcendental_root(xi, beta, &tp).unwrap();
            assert!((r / expected - 1.0).abs() < 2e-6, "xi {xi} beta {beta}: {r}");
            assert!(r < tp.lambda_cap());
        }
    }

    #[test]
    fn critical_beta_makes_roots_coincide() {
        let tp = tp();
        let bc = beta_crit(&tp);
        let target = bc * bc * 0.4f64.exp();
        for xi in [0.0, 0.1, tp.centered_xi()] {
            let r = transcendental_root(xi, bc, &tp).unwrap();
            assert!((r / target - 1.0).abs() < 1e-8, "{xi}: {r} vs {target}");
        }
    }

    #[test]
    fn symmetry_and_beta_monotonicity() {
        let tp = tp();
        for beta in [0.5, 3.0, 12.0] {
            let a = transcendental_root(0.1, beta, &tp).unwrap();
            let b = transcendental_root(0.6, beta, &tp).unwrap();
            assert!((a / b - 1.0).abs() < 1e-11);
        }
        let mut prev = 0.0;
        for beta in [0.0, 0.1, 1.0, 3.0, 10.0, 100.0] {
            let r = transcendental_root(0.2, beta, &tp).unwrap();
            assert!(r >= prev);
            prev = r;
        }
    }

    #[test]
    fn ordering_of_boundary_and_centered_roots() {
        let tp = tp();
        let bc = beta_crit(&tp);
        let c = tp.centered_xi();
        for beta in [0.5 * bc, 0.9 * bc] {
            assert!(transcendental_root(0.0, beta, &tp).unwrap() < transcendental_root(c, beta, &tp).unwrap());
        }
        for beta in [1.1 * bc, 5.0 * bc] {
            assert!(transcendental_root(0.0, beta, &tp).unwrap() > transcendental_root(c, beta, &tp).unwrap());
        }
    }

    #[test]
    fn f_positive_before_root() {
        let tp = tp();
        for xi in [0.0, tp.centered_xi()] {
            let r = transcendental_root(xi, 2.0, &tp).unwrap();
            for i in 1..200 {
                let lam = r * i as f64 / 200.0;
                assert!(f_scaled(xi, 2.0, lam, &tp) > 0.0);
            }
        }
    }

    #[test]
    fn ratio_to_beta_squared_decreases() {
        let tp = tp();
        let mut prev = f64::INFINITY;
        for i in 0..20 {
            let beta = 0.1 * 1.4f64.powi(i);
            let bc = beta_crit(&tp);
            let xi = if beta < bc { 0.0 } else { tp.centered_xi() };
            let r = transcendental_root(xi, beta, &tp).unwrap() / (beta * beta);
            assert!(r < prev);
            prev = r;
        }
    }

    #[test]
    fn dirichlet_root_bounds() {
        let tp = tp();
        let r = dirichlet_root(&tp).unwrap();
        let k = 1.0;
        let wd = (r * k).sqrt() * 0.3;
        assert!(wd > PI / 2.0 && wd < PI);
        assert!((r / 51.905 - 1.0).abs() < 1e-3, "{r}");
        let wide = TranscendParams::new(ModelParams::new(0.2, 2.0, 0.4).unwrap(), 0.999).unwrap();
        let rw = dirichlet_root(&wide).unwrap();
        assert!((rw / (PI * PI / 2.0) - 1.0).abs() < 0.01, "{rw}");
    }

    #[test]
    fn dirichlet_root_at_zero_advection() {
        let tp = TranscendParams::new(ModelParams::new(0.0, 1.0, 0.4).unwrap(), 0.3).unwrap();
        let r = dirichlet_root(&tp).unwrap();
        let s = r.sqrt();
        assert!(((s * 0.3).tan() + (s * 0.7).tanh()).abs() < 1e-9);
    }

    #[test]
    fn regime_equations_hold_at_roots() {
        let tp = tp();
        let bc = beta_crit(&tp);
        for beta in [0.3, 1.0, 2.5] {
            let r = transcendental_root(0.0, beta, &tp).unwrap();
            let eq = regime_equations(beta, r, &tp).unwrap();
            assert_eq!(eq.form, RegimeForm::Boundary);
            assert!((eq.lhs - eq.rhs).abs() <= 1e-8 * eq.lhs.abs().max(1.0), "{eq:?}");
        }
        for beta in [4.0, 10.0, 100.0] {
            let r = transcendental_root(tp.centered_xi(), beta, &tp).unwrap();
            let eq = regime_equations(beta, r, &tp).unwrap();
            assert_eq!(eq.form, RegimeForm::Centered);
            assert!((eq.lhs - eq.rhs).abs() <= 1e-8 * eq.lhs.abs().max(1.0), "{eq:?}");
        }
        assert!(regime_equations(bc, 10.0, &tp).is_err());
    }

    #[test]
    fn centered_denominator_is_f_s() {
        let tp = tp();
        for (beta, lam) in [(1.0, 5.0), (7.0, 20.0)] {
            let d = centered_denominator(beta, lam, &tp);
            let fs = f_components(tp.centered_xi(), beta, lam, &tp).f_s;
            assert!((d - fs).abs() < 1e-10 * fs.abs());
        }
    }

    #[test]
    fn tangent_pole_is_reported() {
        let tp = tp();
        // √λ · 0.3 = π/2
        let lam = (PI / 0.6).powi(2);
        assert!(matches!(regime_equations(1.0, lam, &tp), Err(Error::TangentPole { .. })));
    }

    #[test]
    fn delta_diagnostic_signs() {
        let tp = tp();
        let bc = beta_crit(&tp);
        assert_eq!(delta_diag(2.0, 4.0 * 0.4f64.exp(), &tp), 0.0);
        let lo = 0.5 * bc;
        assert!(delta_diag(lo, transcendental_root(0.0, lo, &tp).unwrap(), &tp) < 0.0);
        let hi = 2.0 * bc;
        assert!(delta_diag(hi, transcendental_root(tp.centered_xi(), hi, &tp).unwrap(), &tp) > 0.0);
    }

    #[test]
    fn closed_form_continuity_and_jumps() {
        let tp = tp();
        for (xi, beta) in [(0.0, 1.0), (0.2, 1.0), (0.35, 10.0), (0.7, 0.3)] {
            let lam = transcendental_root(xi, beta, &tp).unwrap();
            let cf = closed_form_eigenfunction(xi, beta, lam, &tp).unwrap();
            let r = xi + 0.3;
            let below = cf.eval(r - 1e-13);
            assert!((cf.eval(r) - cf.b).abs() < 1e-12 * cf.b.abs().max(1.0));
            assert!((below - cf.b).abs() < 1e-9);
            assert!((cf.eval(xi) - cf.a).abs() < 1e-14);
            assert!(cf.jump_residual() < 1e-9, "{}", cf.jump_residual());
            assert!(cf.sample(&[0.0, 0.5, 1.0]).iter().all(|&v| v > 0.0));
        }
    }
}
