//! Optimal interval designs, β sweeps and optimality diagnostics.

use std::fmt;

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigensolve::{EigenPair, EigenSolver};
use crate::error::{Error, Result};
use crate::transcend::{beta_crit, dirichlet_root, transcendental_root, TranscendParams};
use crate::weights::{BangBangInterval, Boundary, ModelParams, PiecewiseWeight, MASS_SLACK};

/// Half-width of the band around `β_crit` reported as degenerate.
pub const DEGENERATE_BAND: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    BoundaryLeft,
    /// Mirror image of [`Regime::BoundaryLeft`]; the search is restricted to
    /// `ξ ≤ (1-δ)/2`, so this is only produced by [`DesignOptimum::mirrored`].
    BoundaryRight,
    Centered,
    /// Every `ξ` is optimal.
    Degenerate,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Regime::BoundaryLeft => "boundary_left",
            Regime::BoundaryRight => "boundary_right",
            Regime::Centered => "centered",
            Regime::Degenerate => "degenerate",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DesignOptimum {
    pub xi_star: f64,
    pub delta: f64,
    pub lambda_star: f64,
    pub regime: Regime,
    pub mass_active: bool,
    #[serde(skip)]
    pub boundary: Boundary,
}

impl DesignOptimum {
    pub fn weight(&self, params: &ModelParams) -> Result<PiecewiseWeight> {
        Ok(BangBangInterval::new(self.xi_star, self.delta, *params)?.weight())
    }

    pub fn mirrored(&self) -> Self {
        let regime = match self.regime {
            Regime::BoundaryLeft => Regime::BoundaryRight,
            Regime::BoundaryRight => Regime::BoundaryLeft,
            r => r,
        };
        Self { xi_star: (1.0 - self.delta - self.xi_star).max(0.0), regime, ..*self }
    }
}

/// Search settings shared by the design routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignOptions {
    pub xi_grid: usize,
    pub xi_tol: f64,
    pub delta_grid: usize,
    /// Finite element solver used for Dirichlet objectives.
    pub fe: EigenSolver,
}

impl Default for DesignOptions {
    fn default() -> Self {
        Self { xi_grid: 64, xi_tol: 1e-8, delta_grid: 32, fe: EigenSolver::default() }
    }
}

/// `λ₁` of the interval weight `(ξ, ξ+δ)`.
pub fn objective(xi: f64, delta: f64, bc: Boundary, params: &ModelParams, opts: &DesignOptions) -> Result<f64> {
    let wrap = |e: Error| Error::Objective { xi, source: Box::new(e) };
    match bc {
        Boundary::Robin(beta) => {
            let tp = TranscendParams::new(*params, delta).map_err(wrap)?;
            transcendental_root(xi, beta, &tp).map_err(wrap)
        }
        Boundary::Dirichlet => {
            let w = BangBangInterval::new(xi, delta, *params).map_err(wrap)?.weight();
            opts.fe.lambda(&w, params, bc).map_err(wrap)
        }
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section minimization of a unimodal `f` on `[a, b]`.
pub fn golden_section(mut a: f64, mut b: f64, tol: f64, mut f: impl FnMut(f64) -> Result<f64>) -> Result<(f64, f64)> {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc <= fd { (c, fc) } else { (d, fd) })
}

/// Grid scan followed by golden-section refinement; the interval ends are
/// preferred when they are within rounding of the refined minimum.
fn minimize_on(
    lo: f64,
    hi: f64,
    points: usize,
    tol: f64,
    f: &(dyn Fn(f64) -> Result<f64> + Sync),
) -> Result<(f64, f64, Vec<(f64, f64)>)> {
    let points = points.max(3);
    let grid: Vec<f64> = (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect();
    let values: Vec<(f64, f64)> = grid.iter().map(|&x| f(x).map(|v| (x, v))).collect::<Result<_>>()?;
    let (imin, _) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .unwrap();
    let a = grid[imin.saturating_sub(1)];
    let b = grid[(imin + 1).min(points - 1)];
    let (mut x, mut fx) = golden_section(a, b, tol, f)?;
    // later candidates win ties, so the left end fixes ξ* = 0 in the degenerate band
    for (xe, fe) in [values[imin], values[points - 1], values[0]] {
        if fe <= fx + 1e-12 * fx.abs() {
            x = xe;
            fx = fe;
        }
    }
    Ok((x, fx, values))
}

fn classify(bc: Boundary, delta: f64, params: &ModelParams) -> Regime {
    match bc {
        Boundary::Dirichlet => Regime::Centered,
        Boundary::Robin(beta) => {
            let crit = beta_crit(&TranscendParams { params: *params, delta });
            if (beta - crit).abs() <= DEGENERATE_BAND {
                Regime::Degenerate
            } else if beta < crit {
                Regime::BoundaryLeft
            } else {
                Regime::Centered
            }
        }
    }
}

fn mass_is_saturated(delta: f64, params: &ModelParams) -> bool {
    let mass = (params.kappa + 1.0) * delta - 1.0;
    (mass + params.m0).abs() <= MASS_SLACK
}

/// Best location `ξ ∈ [0, (1-δ)/2]` for an interval of length `δ`.
pub fn locate_optimal_interval(bc: Boundary, delta: f64, params: &ModelParams, opts: &DesignOptions) -> Result<DesignOptimum> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!("delta must lie in (0,1), got {delta}")));
    }
    let center = 0.5 * (1.0 - delta);
    let f = |xi: f64| objective(xi, delta, bc, params, opts);
    let (xi_star, lambda_star, _) = minimize_on(0.0, center, opts.xi_grid, opts.xi_tol, &f)?;
    if bc == Boundary::Dirichlet {
        if let Ok(anchor) = dirichlet_root(&TranscendParams { params: *params, delta }) {
            let fe = f(0.0)?;
            if (fe / anchor - 1.0).abs() > 1e-3 {
                warn!("Dirichlet objective at xi = 0 is {fe}, closed form gives {anchor}");
            }
        }
    }
    Ok(DesignOptimum {
        xi_star,
        delta,
        lambda_star,
        regime: classify(bc, delta, params),
        mass_active: mass_is_saturated(delta, params),
        boundary: bc,
    })
}

/// `α < sinh²(β ξ*)/(1 + 2 sinh²(β ξ*))` with `β = β_crit` at `α = 1/2`,
/// `δ = δ*`, `ξ* = (κ+m0)/(2(1+κ))`. When true the mass constraint is known
/// to be active at the optimum.
pub fn active_constraint_condition(params: &ModelParams) -> bool {
    let half = ModelParams { alpha: 0.5, ..*params };
    let b_half = beta_crit(&TranscendParams::saturated(half));
    let sh2 = (b_half * params.xi_star()).sinh().powi(2);
    params.alpha < sh2 / (1.0 + 2.0 * sh2)
}

/// Optimal interval design: `δ = δ*` when the mass constraint is known to be
/// active, otherwise a scan over the used mass `m̃0 ∈ [m0, 1)`.
pub fn optimal_design(bc: Boundary, params: &ModelParams, opts: &DesignOptions) -> Result<DesignOptimum> {
    let delta_star = params.delta_star();
    if active_constraint_condition(params) {
        return locate_optimal_interval(bc, delta_star, params, opts);
    }
    let k1 = params.kappa + 1.0;
    // λ grows like 1/δ² as δ → 0, so intervals shorter than δ*/4 are never optimal
    let top = 1.0 - 0.25 * (1.0 - params.m0);
    let f = |mt: f64| locate_optimal_interval(bc, (1.0 - mt) / k1, params, opts).map(|o| o.lambda_star);
    let (mt, _, _) = minimize_on(params.m0, top, opts.delta_grid, 1e-8, &f)?;
    let mut best = locate_optimal_interval(bc, (1.0 - mt) / k1, params, opts)?;
    if mt == top {
        warn!("used-mass scan ended at its upper limit {top}");
    }
    if mt == params.m0 {
        best.delta = delta_star;
        best.mass_active = true;
    } else {
        info!("mass constraint inactive: optimal used mass {mt} > m0 = {}", params.m0);
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    /// `+inf` marks the Dirichlet reference row.
    pub beta: f64,
    pub lambda_star: f64,
    pub xi_star: f64,
    pub regime: Regime,
    pub mass_active: bool,
    pub delta: f64,
}

impl SweepRow {
    fn from_optimum(beta: f64, o: &DesignOptimum) -> Self {
        Self { beta, lambda_star: o.lambda_star, xi_star: o.xi_star, regime: o.regime, mass_active: o.mass_active, delta: o.delta }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepFailure {
    pub beta: f64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub params: ModelParams,
    /// `β_crit` at `δ*`.
    pub beta_crit: f64,
    pub rows: Vec<SweepRow>,
    pub dirichlet: Option<SweepRow>,
    pub failures: Vec<SweepFailure>,
}

impl SweepReport {
    pub fn is_complete(&self) -> bool {
        self.failures.is_empty() && self.dirichlet.is_some()
    }

    /// CSV with columns `beta, lambda_star, xi_star, regime, mass_active`;
    /// the Dirichlet row has `beta = inf`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("beta,lambda_star,xi_star,regime,mass_active\n");
        for r in self.rows.iter().chain(self.dirichlet.iter()) {
            let beta = if r.beta.is_infinite() { "inf".to_string() } else { format!("{:.12e}", r.beta) };
            s.push_str(&format!("{beta},{:.12e},{:.12e},{},{}\n", r.lambda_star, r.xi_star, r.regime, r.mass_active));
        }
        s
    }

    pub fn summary(&self) -> serde_json::Value {
        serde_json::json!({
            "params": self.params,
            "beta_crit": self.beta_crit,
            "rows": self.rows.len(),
            "failures": self.failures,
            "dirichlet_lambda_star": self.dirichlet.map(|r| r.lambda_star),
            "regime_switch": locate_regime_switch(&self.rows, &self.params).ok().flatten(),
        })
    }

    /// True when every interior row lies on or above the chord of its neighbours.
    pub fn is_concave(&self, rel_tol: f64) -> bool {
        self.rows.windows(3).all(|w| {
            let t = (w[1].beta - w[0].beta) / (w[2].beta - w[0].beta);
            let chord = (1.0 - t) * w[0].lambda_star + t * w[2].lambda_star;
            w[1].lambda_star >= chord - rel_tol * chord.abs()
        })
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].lambda_star >= w[0].lambda_star)
    }
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// Optimal design for every `β`, in parallel, plus the Dirichlet reference.
pub fn sweep_beta(betas: &[f64], params: &ModelParams, opts: &DesignOptions) -> Result<SweepReport> {
    if betas.iter().any(|b| !(b.is_finite() && *b >= 0.0)) {
        return Err(Error::InvalidArgument("betas must be finite and non-negative".into()));
    }
    if betas.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument("betas must be sorted".into()));
    }
    let results: Vec<(f64, Result<DesignOptimum>)> = betas
        .par_iter()
        .map(|&beta| (beta, optimal_design(Boundary::Robin(beta), params, opts)))
        .collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (beta, r) in results {
        match r {
            Ok(o) => rows.push(SweepRow::from_optimum(beta, &o)),
            Err(e) => {
                warn!("sweep row beta = {beta} failed: {e}");
                failures.push(SweepFailure { beta, error: e.to_string() });
            }
        }
    }
    let dirichlet = match optimal_design(Boundary::Dirichlet, params, opts) {
        Ok(o) => Some(SweepRow::from_optimum(f64::INFINITY, &o)),
        Err(e) => {
            failures.push(SweepFailure { beta: f64::INFINITY, error: e.to_string() });
            None
        }
    };
    Ok(SweepReport { params: *params, beta_crit: beta_crit(&TranscendParams::saturated(*params)), rows, dirichlet, failures })
}

/// `β` at which the optimum switches from the boundary to the center,
/// bracketed by the first pair of saturated rows whose `ξ*` changes and
/// refined by bisection on `root(0) - root(center)`.
pub fn locate_regime_switch(rows: &[SweepRow], params: &ModelParams) -> Result<Option<f64>> {
    let pair = rows
        .windows(2)
        .find(|w| w[0].mass_active && w[1].mass_active && w[0].xi_star == 0.0 && w[1].xi_star > 0.0);
    let Some(w) = pair else { return Ok(None) };
    let tp = TranscendParams::saturated(*params);
    let c = tp.centered_xi();
    let g = |beta: f64| -> Result<f64> { Ok(transcendental_root(0.0, beta, &tp)? - transcendental_root(c, beta, &tp)?) };
    let (mut lo, mut hi) = (w[0].beta, w[1].beta);
    if g(lo)? >= 0.0 || g(hi)? <= 0.0 {
        return Ok(Some(0.5 * (lo + hi)));
    }
    while hi - lo > 1e-10 * hi {
        let mid = 0.5 * (lo + hi);
        if g(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// `ψ₀ = α φ'² - λ (α m + 1) φ²` sampled per element.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SwitchFunction {
    /// Element midpoints.
    pub x: Vec<f64>,
    pub m: Vec<f64>,
    pub psi: Vec<f64>,
    /// `ψ₀` at `x = 0` and `x = 1` from the nodal value and the end element slope.
    pub psi_left: f64,
    pub psi_right: f64,
}

pub fn switch_function(pair: &EigenPair, m: &PiecewiseWeight, params: &ModelParams) -> Result<SwitchFunction> {
    let a = params.alpha;
    let lam = pair.lambda;
    let psi_of = |phi: f64, slope: f64, mv: f64| a * slope * slope - lam * (a * mv + 1.0) * phi * phi;
    let nodes = &pair.nodes;
    let phi = &pair.phi;
    let ne = nodes.len() - 1;
    let mut out = SwitchFunction { x: Vec::with_capacity(ne), m: Vec::with_capacity(ne), psi: Vec::with_capacity(ne), psi_left: 0.0, psi_right: 0.0 };
    for e in 0..ne {
        let h = nodes[e + 1] - nodes[e];
        let mid = 0.5 * (nodes[e] + nodes[e + 1]);
        let mv = m.eval(mid)?;
        let slope = (phi[e + 1] - phi[e]) / h;
        out.x.push(mid);
        out.m.push(mv);
        out.psi.push(psi_of(0.5 * (phi[e] + phi[e + 1]), slope, mv));
    }
    let s0 = (phi[1] - phi[0]) / (nodes[1] - nodes[0]);
    let s1 = (phi[ne] - phi[ne - 1]) / (nodes[ne] - nodes[ne - 1]);
    out.psi_left = psi_of(phi[0], s0, m.eval(0.0)?);
    out.psi_right = psi_of(phi[ne], s1, m.eval(1.0)?);
    Ok(out)
}

/// Interval weight with its interior jumps replaced by centered linear
/// ramps of the given width, each ramp resolved by `steps` cell averages.
///
/// A centered ramp keeps the mass; if rounding pushes it above `-m0` the
/// `κ` plateau is shortened to restore the constraint.
pub fn mollified_interval_weight(opt: &DesignOptimum, width: f64, params: &ModelParams, steps: usize) -> Result<PiecewiseWeight> {
    let k = params.kappa;
    let (xi, d) = (opt.xi_star, opt.delta);
    if width == 0.0 {
        return opt.weight(params);
    }
    let mut jumps = Vec::new();
    if xi > 0.0 {
        jumps.push((xi, 1.0));
    }
    if xi + d < 1.0 {
        jumps.push((xi + d, -1.0));
    }
    let room = jumps
        .iter()
        .map(|&(x, _)| 2.0 * x.min(1.0 - x))
        .fold(d, f64::min);
    if !(width > 0.0 && width <= room) {
        return Err(Error::InvalidArgument(format!("ramp width {width} must lie in (0, {room}]")));
    }
    let h = width / steps as f64;
    // `shift` moves every jump toward the inside of the plateau
    let build = |shift: f64| -> Result<PiecewiseWeight> {
        let mut bps = vec![0.0];
        let mut vals = Vec::new();
        let mut level = if xi > 0.0 { -1.0 } else { k };
        for &(xj, dir) in &jumps {
            let start = xj + dir * shift - 0.5 * width;
            bps.push(start);
            vals.push(level);
            for i in 0..steps {
                // cell average of the linear ramp is its midpoint value
                let t = (i as f64 + 0.5) / steps as f64;
                vals.push(if dir > 0.0 { -1.0 + t * (k + 1.0) } else { k - t * (k + 1.0) });
                bps.push(if i + 1 == steps { start + width } else { start + (i + 1) as f64 * h });
            }
            level = if dir > 0.0 { k } else { -1.0 };
        }
        bps.push(1.0);
        vals.push(level);
        PiecewiseWeight::new(bps, vals)
    };
    let w = build(0.0)?;
    let excess = w.mass() + params.m0;
    if excess > 0.0 {
        return build(excess / ((k + 1.0) * jumps.len() as f64));
    }
    Ok(w)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MollifiedPoint {
    pub width: f64,
    pub lambda: f64,
}

/// `λ₁` of the mollified optimum for each ramp width.
pub fn mollify_demo(
    opt: &DesignOptimum,
    widths: &[f64],
    params: &ModelParams,
    solver: &EigenSolver,
    steps: usize,
) -> Result<Vec<MollifiedPoint>> {
    widths
        .par_iter()
        .map(|&width| {
            let w = mollified_interval_weight(opt, width, params, steps)?;
            Ok(MollifiedPoint { width, lambda: solver.lambda(&w, params, opt.boundary)? })
        })
        .collect()
}
