//! Principal eigenpairs of the weighted drift problem by P1 finite elements.
//!
//! The weak problem is
//! `∫ e^{αm} φ'ψ' + β(φ(0)ψ(0) + φ(1)ψ(1)) = λ ∫ m e^{αm} φψ`.
//! Since the right-hand form is indefinite, the eigenvalue is not computed
//! from the pencil `(K, B)` directly. Instead `μ(λ)`, the smallest eigenvalue
//! of `(K - λB, M0)`, is evaluated by inertia counts and `λ₁` is the positive
//! zero of `μ`.

pub mod tridiag;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::output::write_atomic;
use crate::rearrange::change_of_variable_forward;
use crate::weights::{Boundary, ModelParams, PiecewiseWeight};
use tridiag::{combine, negative_count, solve, SymTridiag};

pub const DEFAULT_GRID: usize = 2000;

/// Solver tolerances. All have defaults so config files may omit them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative width at which the bisection on `λ` stops.
    pub lambda_rel: f64,
    /// Relative width at which the bisection on `μ` stops.
    pub mu_rel: f64,
    /// `λ` above which the bracket search gives up.
    pub bracket_cap: f64,
    /// Relative offset of the inverse-iteration shift above `λ`.
    pub shift_rel: f64,
    pub inverse_iterations: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { lambda_rel: 1e-12, mu_rel: 1e-12, bracket_cap: 1e8, shift_rel: 1e-10, inverse_iterations: 5 }
    }
}

/// Grid on `[0, L]`: `n` uniform cells merged with the weight breakpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Discretization {
    n: usize,
    nodes: Vec<f64>,
}

impl Discretization {
    /// Uniform nodes closer than `h/4` to a breakpoint are dropped in favour
    /// of the breakpoint, so no element is much shorter than `h/4` unless
    /// two breakpoints are themselves that close.
    pub fn new(n: usize, m: &PiecewiseWeight) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("grid needs at least one cell".into()));
        }
        let len = m.length();
        let h = len / n as f64;
        let bps = m.breakpoints();
        let mut nodes: Vec<f64> = bps.to_vec();
        for j in 1..n {
            let x = j as f64 * h;
            let idx = bps.partition_point(|&b| b < x);
            let near = [idx.checked_sub(1), Some(idx)]
                .into_iter()
                .flatten()
                .filter_map(|i| bps.get(i))
                .map(|b| (b - x).abs())
                .fold(f64::INFINITY, f64::min);
            if near >= 0.25 * h {
                nodes.push(x);
            }
        }
        nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        nodes.dedup();
        Ok(Self { n, nodes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn contains_breakpoints(&self, m: &PiecewiseWeight) -> bool {
        m.breakpoints().iter().all(|b| self.nodes.binary_search_by(|x| x.partial_cmp(b).unwrap()).is_ok())
    }
}

/// Assembled forms on the unknowns. For Dirichlet the endpoint nodes are
/// eliminated, so unknown `i` sits at `nodes[i + 1]`.
#[derive(Debug, Clone)]
pub struct Forms {
    pub k: SymTridiag,
    pub b: SymTridiag,
    pub m0: SymTridiag,
    pub nodes: Vec<f64>,
    pub dirichlet: bool,
}

impl Forms {
    pub fn dim(&self) -> usize {
        self.k.dim()
    }

    /// Nodal values on the full grid, inserting the Dirichlet zeros.
    pub fn expand(&self, x: &[f64]) -> Vec<f64> {
        if self.dirichlet {
            let mut full = Vec::with_capacity(x.len() + 2);
            full.push(0.0);
            full.extend_from_slice(x);
            full.push(0.0);
            full
        } else {
            x.to_vec()
        }
    }

    /// Number of generalized eigenvalues of `(K - λB, M0)` below `mu`.
    pub fn count_below(&self, lambda: f64, mu: f64) -> usize {
        negative_count(&self.k, &self.b, lambda, &self.m0, mu)
    }

    /// Smallest eigenvalue of `(K - λB, M0)` by bisection on inertia.
    pub fn mu(&self, lambda: f64, tol: &Tolerances) -> f64 {
        let a = combine(&self.k, &self.b, lambda, &self.m0, 0.0);
        // Rayleigh quotient of the constant vector is an upper bound.
        let ones = vec![1.0; self.dim()];
        let rq = a.form(&ones, &ones) / self.m0.form(&ones, &ones);
        let mut hi = rq + 1e-12 * rq.abs().max(1.0);
        while self.count_below(lambda, hi) == 0 {
            hi += hi.abs().max(1.0);
        }
        let mut lo = -(hi.abs().max(1.0));
        while self.count_below(lambda, lo) > 0 {
            lo *= 2.0;
        }
        // pivots carry errors of order eps‖A‖, which is also the floor for μ
        let m_min = self.m0.diag.iter().copied().fold(f64::INFINITY, f64::min);
        let floor = 8.0 * f64::EPSILON * a.norm_inf() / m_min;
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if self.count_below(lambda, mid) == 0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= tol.mu_rel * lo.abs().max(hi.abs()) || hi - lo <= floor {
                break;
            }
        }
        self.refine_mu(&a, lo, hi, floor).unwrap_or(0.5 * (lo + hi))
    }

    /// Rayleigh quotient of an inverse-iteration vector shifted just below
    /// the bracket. The count-based bracket cannot be narrower than the
    /// pivot noise; the quotient is accurate to that noise squared.
    fn refine_mu(&self, a: &SymTridiag, lo: f64, hi: f64, floor: f64) -> Option<f64> {
        let sigma = lo - floor.max(1e-12 * lo.abs());
        let shifted = combine(a, &self.m0, sigma, &SymTridiag::zeros(self.dim()), 0.0);
        let mut x = vec![1.0; self.dim()];
        for _ in 0..3 {
            let y = solve(&shifted, &self.m0.matvec(&x))?;
            let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if !(scale.is_finite() && scale > 0.0) {
                return None;
            }
            x = y.iter().map(|v| v / scale).collect();
        }
        let rq = a.form_by_differences(&x) / self.m0.form(&x, &x);
        let slack = 2.0 * floor;
        (rq >= lo - slack && rq <= hi + slack).then_some(rq)
    }
}

fn assemble_profile(
    m: &PiecewiseWeight,
    bc: Boundary,
    disc: &Discretization,
    coeff: impl Fn(f64) -> (f64, f64),
) -> Result<Forms> {
    if !disc.contains_breakpoints(m) {
        return Err(Error::Assembly("grid nodes do not include every weight breakpoint".into()));
    }
    let nodes = disc.nodes();
    if (nodes[nodes.len() - 1] - m.length()).abs() > 0.0 {
        return Err(Error::Assembly("grid and weight domains differ".into()));
    }
    let np = nodes.len();
    let mut k = SymTridiag::zeros(np);
    let mut b = SymTridiag::zeros(np);
    let mut m0 = SymTridiag::zeros(np);
    for e in 0..np - 1 {
        let (x0, x1) = (nodes[e], nodes[e + 1]);
        let h = x1 - x0;
        let v = m.eval(0.5 * (x0 + x1))?;
        let (stiff, weight) = coeff(v);
        k.diag[e] += stiff / h;
        k.diag[e + 1] += stiff / h;
        k.off[e] -= stiff / h;
        for (form, c) in [(&mut b, weight), (&mut m0, 1.0)] {
            form.diag[e] += c * h / 3.0;
            form.diag[e + 1] += c * h / 3.0;
            form.off[e] += c * h / 6.0;
        }
    }
    let dirichlet = match bc {
        Boundary::Robin(beta) => {
            k.diag[0] += beta;
            k.diag[np - 1] += beta;
            false
        }
        Boundary::Dirichlet => {
            if np < 3 {
                return Err(Error::Assembly("Dirichlet problem needs an interior node".into()));
            }
            for form in [&mut k, &mut b, &mut m0] {
                form.diag = form.diag[1..np - 1].to_vec();
                form.off = form.off[1..np - 2].to_vec();
            }
            true
        }
    };
    Ok(Forms { k, b, m0, nodes: nodes.to_vec(), dirichlet })
}

/// Stiffness `K`, weighted mass `B` and plain mass `M0` on `disc`.
pub fn assemble(m: &PiecewiseWeight, params: &ModelParams, bc: Boundary, disc: &Discretization) -> Result<Forms> {
    let a = params.alpha;
    assemble_profile(m, bc, disc, |v| ((a * v).exp(), v * (a * v).exp()))
}

/// `μ(λ)`: smallest eigenvalue of `(K - λB, M0)`.
pub fn mu_of_lambda(
    m: &PiecewiseWeight,
    params: &ModelParams,
    bc: Boundary,
    disc: &Discretization,
    lambda: f64,
) -> Result<f64> {
    Ok(assemble(m, params, bc, disc)?.mu(lambda, &Tolerances::default()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuCurvePoint {
    pub lambda: f64,
    pub mu: f64,
}

/// `μ` sampled at every `λ` in `lambdas`, sharing one assembly.
pub fn mu_curve(
    m: &PiecewiseWeight,
    params: &ModelParams,
    bc: Boundary,
    disc: &Discretization,
    lambdas: &[f64],
) -> Result<Vec<MuCurvePoint>> {
    let forms = assemble(m, params, bc, disc)?;
    let tol = Tolerances::default();
    Ok(lambdas.iter().map(|&lambda| MuCurvePoint { lambda, mu: forms.mu(lambda, &tol) }).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `∫ m e^{αm} φ² = 1` with `φ > 0`.
    WeightedUnit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenPair {
    pub lambda: f64,
    pub nodes: Vec<f64>,
    pub phi: Vec<f64>,
    pub normalization: Normalization,
    /// `‖Kφ - λBφ‖ / ‖Kφ‖` on the unknowns.
    pub residual: f64,
    pub max_phi: f64,
    pub n: usize,
}

impl EigenPair {
    /// Smallest node at which `φ` attains its maximum.
    pub fn argmax_node(&self) -> f64 {
        let i = self.phi.iter().position(|&p| p == self.max_phi).unwrap_or(0);
        self.nodes[i]
    }

    /// Piecewise-linear interpolant of `φ`.
    pub fn eval(&self, x: f64) -> f64 {
        let i = self.nodes.partition_point(|&t| t <= x).clamp(1, self.nodes.len() - 1);
        let (x0, x1) = (self.nodes[i - 1], self.nodes[i]);
        let t = ((x - x0) / (x1 - x0)).clamp(0.0, 1.0);
        self.phi[i - 1] * (1.0 - t) + self.phi[i] * t
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,phi\n");
        for (x, p) in self.nodes.iter().zip(&self.phi) {
            s.push_str(&format!("{x:.17e},{p:.17e}\n"));
        }
        s
    }

    pub fn metadata(&self, params: &ModelParams, bc: Boundary) -> serde_json::Value {
        serde_json::json!({
            "lambda": self.lambda,
            "beta": match bc { Boundary::Robin(b) => serde_json::json!(b), Boundary::Dirichlet => serde_json::json!("dirichlet") },
            "alpha": params.alpha,
            "kappa": params.kappa,
            "n": self.n,
            "residual": self.residual,
            "max_phi": self.max_phi,
            "normalization": self.normalization,
        })
    }

    /// Writes `<stem>.csv` and `<stem>.json` next to each other.
    pub fn export(&self, stem: &Path, params: &ModelParams, bc: Boundary) -> Result<()> {
        write_atomic(&stem.with_extension("csv"), self.to_csv().as_bytes())?;
        let meta = serde_json::to_vec_pretty(&self.metadata(params, bc))?;
        write_atomic(&stem.with_extension("json"), &meta)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Principal {
    Positive(EigenPair),
    /// Neumann with `∫ m e^{αm} ≥ 0`: zero is the only non-negative principal eigenvalue.
    ZeroRegime,
}

impl Principal {
    pub fn lambda(&self) -> f64 {
        match self {
            Principal::Positive(p) => p.lambda,
            Principal::ZeroRegime => 0.0,
        }
    }

    pub fn pair(&self) -> Option<&EigenPair> {
        match self {
            Principal::Positive(p) => Some(p),
            Principal::ZeroRegime => None,
        }
    }

    pub fn into_pair(self) -> Option<EigenPair> {
        match self {
            Principal::Positive(p) => Some(p),
            Principal::ZeroRegime => None,
        }
    }
}

/// Positive zero of `μ` and its eigenfunction for assembled forms.
///
/// `weight_integral` is `∫ m e^{αm}`, only consulted for Neumann.
fn principal_from_forms(forms: &Forms, neumann: bool, weight_integral: f64, n: usize, tol: &Tolerances) -> Result<Principal> {
    match lambda_from_forms(forms, neumann, weight_integral, tol)? {
        None => Ok(Principal::ZeroRegime),
        Some(lambda) => Ok(Principal::Positive(eigenfunction(forms, lambda, n, tol)?)),
    }
}

/// Positive zero of `μ`, `None` in the Neumann zero regime.
fn lambda_from_forms(forms: &Forms, neumann: bool, weight_integral: f64, tol: &Tolerances) -> Result<Option<f64>> {
    if neumann && weight_integral >= 0.0 {
        return Ok(None);
    }
    // μ(λ) < 0 exactly when K - λB has a negative eigenvalue
    let below = |lambda: f64| negative_count(&forms.k, &forms.b, lambda, &forms.m0, 0.0) > 0;
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut probes = Vec::new();
    while !below(hi) {
        probes.push(hi);
        lo = hi;
        hi *= 2.0;
        if hi > tol.bracket_cap {
            let samples = probes.iter().map(|&l| (l, forms.mu(l, tol))).collect();
            return Err(Error::BracketFailure { cap: tol.bracket_cap, samples });
        }
    }
    while hi - lo > tol.lambda_rel * hi {
        let mid = 0.5 * (lo + hi);
        if below(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

fn eigenfunction(forms: &Forms, lambda: f64, n: usize, tol: &Tolerances) -> Result<EigenPair> {
    let sigma = lambda * (1.0 + tol.shift_rel);
    let a = combine(&forms.k, &forms.b, sigma, &forms.m0, 0.0);
    let mut x = vec![1.0; forms.dim()];
    for _ in 0..tol.inverse_iterations.max(1) {
        let rhs = forms.m0.matvec(&x);
        x = solve(&a, &rhs).ok_or_else(|| Error::NumericalRank("singular shifted pencil in inverse iteration".into()))?;
        let scale = x.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::NumericalRank("inverse iteration diverged".into()));
        }
        x.iter_mut().for_each(|v| *v /= scale);
    }
    let norm = forms.b.form(&x, &x);
    if !(norm > 0.0) {
        return Err(Error::NumericalRank(format!("weighted norm of eigenvector is {norm}")));
    }
    let sign = if x.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
    let s = sign / norm.sqrt();
    x.iter_mut().for_each(|v| *v *= s);

    let kx = forms.k.matvec(&x);
    let bx = forms.b.matvec(&x);
    let r: f64 = kx.iter().zip(&bx).map(|(k, b)| (k - lambda * b).powi(2)).sum::<f64>().sqrt();
    let kn: f64 = kx.iter().map(|v| v * v).sum::<f64>().sqrt();
    let residual = if kn > 0.0 { r / kn } else { r };

    let phi = forms.expand(&x);
    let max_phi = phi.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(EigenPair { lambda, nodes: forms.nodes.clone(), phi, normalization: Normalization::WeightedUnit, residual, max_phi, n })
}

fn check_positive_part(m: &PiecewiseWeight) -> Result<()> {
    if m.superlevel_measure(0.0) <= 0.0 {
        return Err(Error::InvalidWeight("weight has no positive part, no positive principal eigenvalue".into()));
    }
    Ok(())
}

/// Principal eigenpair, or [`Principal::ZeroRegime`] for Neumann with `∫ m e^{αm} ≥ 0`.
pub fn principal_eigenvalue(
    m: &PiecewiseWeight,
    params: &ModelParams,
    bc: Boundary,
    disc: &Discretization,
) -> Result<Principal> {
    principal_eigenvalue_with(m, params, bc, disc, &Tolerances::default())
}

pub fn principal_eigenvalue_with(
    m: &PiecewiseWeight,
    params: &ModelParams,
    bc: Boundary,
    disc: &Discretization,
    tol: &Tolerances,
) -> Result<Principal> {
    check_positive_part(m)?;
    let forms = assemble(m, params, bc, disc)?;
    principal_from_forms(&forms, bc.is_neumann(), m.exp_mass(params.alpha), disc.n(), tol)
}

/// Same eigenvalue through the form `-u'' = λ m̃ e^{2αm̃} u` on `(0, c(1))`.
///
/// The eigenfunction is returned on the `x` grid obtained by mapping the
/// `y` nodes back through `c⁻¹`, with `φ(x) = u(c(x))`.
pub fn eigen_cov(m: &PiecewiseWeight, params: &ModelParams, bc: Boundary, n: usize) -> Result<Principal> {
    check_positive_part(m)?;
    let (cov, m_tilde) = change_of_variable_forward(m, params.alpha)?;
    let disc = Discretization::new(n, &m_tilde)?;
    let a = params.alpha;
    let forms = assemble_profile(&m_tilde, bc, &disc, |v| (1.0, v * (2.0 * a * v).exp()))?;
    let integral = m_tilde.lengths().map(|(l, v)| l * v * (2.0 * a * v).exp()).sum();
    let principal = principal_from_forms(&forms, bc.is_neumann(), integral, n, &Tolerances::default())?;
    Ok(match principal {
        Principal::ZeroRegime => Principal::ZeroRegime,
        Principal::Positive(mut pair) => {
            pair.nodes = pair.nodes.iter().map(|&y| cov.inverse(y)).collect();
            Principal::Positive(pair)
        }
    })
}

/// Grid size and tolerances bundled for repeated solves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSolver {
    pub n: usize,
    pub tol: Tolerances,
}

impl Default for EigenSolver {
    fn default() -> Self {
        Self { n: DEFAULT_GRID, tol: Tolerances::default() }
    }
}

impl EigenSolver {
    pub fn new(n: usize) -> Self {
        Self { n, tol: Tolerances::default() }
    }

    pub fn principal(&self, m: &PiecewiseWeight, params: &ModelParams, bc: Boundary) -> Result<Principal> {
        let disc = Discretization::new(self.n, m)?;
        principal_eigenvalue_with(m, params, bc, &disc, &self.tol)
    }

    /// `λ₁` without the eigenfunction, with the zero regime reported as `0`.
    pub fn lambda(&self, m: &PiecewiseWeight, params: &ModelParams, bc: Boundary) -> Result<f64> {
        check_positive_part(m)?;
        let disc = Discretization::new(self.n, m)?;
        let forms = assemble(m, params, bc, &disc)?;
        Ok(lambda_from_forms(&forms, bc.is_neumann(), m.exp_mass(params.alpha), &self.tol)?.unwrap_or(0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::BangBangInterval;
    use std::f64::consts::PI;

    fn p(alpha: f64) -> ModelParams {
        ModelParams::new(alpha, 1.0, 0.4).unwrap()
    }

    #[test]
    fn hat_function_values() {
        let m = PiecewiseWeight::constant(1.0);
        let disc = Discretization::new(2, &m).unwrap();
        assert_eq!(disc.nodes(), &[0.0, 0.5, 1.0]);
        let f = assemble(&m, &p(0.0), Boundary::Dirichlet, &disc).unwrap();
        assert_eq!(f.k.diag, vec![4.0]);
        assert!((f.m0.diag[0] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn neumann_kernel_for_constant_weight() {
        let m = PiecewiseWeight::constant(0.3);
        let disc = Discretization::new(10, &m).unwrap();
        let f = assemble(&m, &p(0.7), Boundary::neumann(), &disc).unwrap();
        let kx = f.k.matvec(&vec![1.0; f.dim()]);
        assert!(kx.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn grid_contains_breakpoints_without_slivers() {
        let m = PiecewiseWeight::new(vec![0.0, 0.35, 0.65, 1.0], vec![-1.0, 1.0, -1.0]).unwrap();
        let disc = Discretization::new(20, &m).unwrap();
        assert!(disc.contains_breakpoints(&m));
        let min_h = disc.nodes().windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        assert!(min_h >= 0.25 / 20.0 - 1e-15, "{min_h}");
        let other = Discretization::new(20, &PiecewiseWeight::constant(1.0)).unwrap();
        assert!(matches!(assemble(&m, &p(0.0), Boundary::neumann(), &other), Err(Error::Assembly(_))));
    }

    #[test]
    fn stiffness_is_positive_semidefinite() {
        let m = PiecewiseWeight::new(vec![0.0, 0.2, 0.7, 1.0], vec![0.5, -1.0, 2.0]).unwrap();
        let disc = Discretization::new(30, &m).unwrap();
        for bc in [Boundary::neumann(), Boundary::Robin(1.0), Boundary::Dirichlet] {
            let f = assemble(&m, &p(0.4), bc, &disc).unwrap();
            assert_eq!(f.count_below(0.0, 0.0), 0);
            let strictly = !bc.is_neumann();
            // a tiny positive shift reveals the Neumann kernel
            assert_eq!(f.count_below(0.0, 1e-9) > 0, !strictly, "{bc}");
        }
    }

    #[test]
    fn dirichlet_constant_weight_is_pi_squared() {
        let m = PiecewiseWeight::constant(1.0);
        let disc = Discretization::new(2000, &m).unwrap();
        for a in [0.0, 0.3, 1.0] {
            let l = principal_eigenvalue(&m, &p(a), Boundary::Dirichlet, &disc).unwrap().lambda();
            assert!((l / (PI * PI) - 1.0).abs() < 1e-3, "alpha {a}: {l}");
        }
        let mu0 = mu_of_lambda(&m, &p(0.0), Boundary::Dirichlet, &disc, 0.0).unwrap();
        assert!((mu0 / (PI * PI) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn neumann_mu_vanishes_at_zero() {
        let m = BangBangInterval::new(0.1, 0.3, p(0.2)).unwrap().weight();
        let disc = Discretization::new(200, &m).unwrap();
        let mu = mu_of_lambda(&m, &p(0.2), Boundary::neumann(), &disc, 0.0).unwrap();
        assert!(mu.abs() < 1e-9, "{mu}");
    }

    #[test]
    fn neumann_zero_regime() {
        let m = PiecewiseWeight::constant(1.0);
        let disc = Discretization::new(50, &m).unwrap();
        assert_eq!(principal_eigenvalue(&m, &p(0.2), Boundary::neumann(), &disc).unwrap(), Principal::ZeroRegime);
    }

    #[test]
    fn no_positive_part_is_an_error() {
        let m = PiecewiseWeight::constant(-1.0);
        let disc = Discretization::new(50, &m).unwrap();
        assert!(principal_eigenvalue(&m, &p(0.2), Boundary::Dirichlet, &disc).is_err());
    }

    #[test]
    fn eigenpair_invariants() {
        let m = BangBangInterval::new(0.1, 0.3, p(0.2)).unwrap().weight();
        let disc = Discretization::new(400, &m).unwrap();
        for bc in [Boundary::neumann(), Boundary::Robin(1.0), Boundary::Robin(10.0), Boundary::Dirichlet] {
            let pair = principal_eigenvalue(&m, &p(0.2), bc, &disc).unwrap().into_pair().unwrap();
            let f = assemble(&m, &p(0.2), bc, &disc).unwrap();
            let interior = &pair.phi[1..pair.phi.len() - 1];
            assert!(interior.iter().all(|&v| v > 0.0), "{bc}");
            let x: Vec<f64> = if f.dirichlet { interior.to_vec() } else { pair.phi.clone() };
            assert!((f.b.form(&x, &x) - 1.0).abs() < 1e-8);
            assert!(pair.residual < 1e-8, "{bc}: {}", pair.residual);
            assert!(f.mu(pair.lambda, &Tolerances::default()).abs() < 1e-7);
        }
    }

    #[test]
    fn robin_bang_bang_reference_value() {
        let m = BangBangInterval::new(0.0, 0.3, p(0.2)).unwrap().weight();
        let disc = Discretization::new(4000, &m).unwrap();
        let l = principal_eigenvalue(&m, &p(0.2), Boundary::Robin(1.0), &disc).unwrap().lambda();
        assert!((l / 8.247_818 - 1.0).abs() < 1e-4, "{l}");
    }

    #[test]
    fn change_of_variable_path_agrees() {
        let m = BangBangInterval::new(0.2, 0.3, p(0.2)).unwrap().weight();
        for (a, bc) in [(0.0, Boundary::Robin(1.0)), (0.2, Boundary::Robin(1.0)), (0.2, Boundary::Dirichlet), (0.2, Boundary::neumann())] {
            let direct = EigenSolver::new(2000).lambda(&m, &p(a), bc).unwrap();
            let cov = eigen_cov(&m, &p(a), bc, 2000).unwrap().lambda();
            let tol = if a == 0.0 { 1e-10 } else { 1e-4 };
            assert!((cov / direct - 1.0).abs() < tol, "alpha {a} {bc}: {cov} vs {direct}");
        }
    }

    #[test]
    fn second_order_convergence() {
        let m = PiecewiseWeight::new(vec![0.0, 0.25, 0.5, 1.0], vec![-1.0, 1.0, -1.0]).unwrap();
        let l: Vec<f64> = [100, 200, 400, 800]
            .iter()
            .map(|&n| EigenSolver::new(n).lambda(&m, &p(0.2), Boundary::Robin(2.0)).unwrap())
            .collect();
        for w in l.windows(3) {
            let slope = ((w[1] - w[0]) / (w[2] - w[1])).log2();
            assert!((1.8..=2.2).contains(&slope), "{slope}");
        }
    }

    #[test]
    fn export_writes_csv_and_metadata() {
        let m = BangBangInterval::new(0.2, 0.3, p(0.2)).unwrap().weight();
        let pair = EigenSolver::new(50).principal(&m, &p(0.2), Boundary::Robin(1.0)).unwrap().into_pair().unwrap();
        let dir = tempfile::tempdir().unwrap();
        let stem = dir.path().join("phi");
        pair.export(&stem, &p(0.2), Boundary::Robin(1.0)).unwrap();
        let csv = std::fs::read_to_string(stem.with_extension("csv")).unwrap();
        assert!(csv.starts_with("x,phi\n"));
        assert_eq!(csv.lines().count(), pair.nodes.len() + 1);
        let meta: serde_json::Value = serde_json::from_slice(&std::fs::read(stem.with_extension("json")).unwrap()).unwrap();
        assert_eq!(meta["n"], 50);
        assert_eq!(meta["beta"], 1.0);
    }
}
