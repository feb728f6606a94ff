//! Seeded property battery behind the `verify` command.
//!
//! Every property reports the worst measured violation next to its
//! tolerance. Wall-clock times are left out so that two runs with the same
//! options produce identical reports.

use rayon::prelude::*;
use serde::Serialize;

use crate::eigensolve::{mu_curve, Discretization, EigenSolver};
use crate::error::Result;
use crate::optimize::{locate_optimal_interval, mollify_demo, DesignOptimum, DesignOptions, Regime};
use crate::random::{random_admissible_weight, rng};
use crate::rearrange::{transformed_length, transformed_mass, unimodal_rearrangement};
use crate::transcend::{beta_crit, transcendental_root, TranscendParams};
use crate::weights::{BangBangInterval, Boundary, ModelParams, PiecewiseWeight};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub grid_n: usize,
    /// Random weights per property.
    pub samples: usize,
    pub params: ModelParams,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: crate::random::DEFAULT_SEED,
            grid_n: crate::eigensolve::DEFAULT_GRID,
            samples: 16,
            params: ModelParams::new(0.2, 1.0, 0.4).expect("default parameters are valid"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub passed: bool,
    /// Worst violation observed; the property holds when it is at most `tolerance`.
    pub measured: f64,
    pub tolerance: f64,
    pub checks: usize,
    pub detail: String,
}

impl PropertyResult {
    fn new(name: &str, measured: f64, tolerance: f64, checks: usize, detail: String) -> Self {
        Self { name: name.into(), passed: measured <= tolerance, measured, tolerance, checks, detail }
    }

    fn errored(name: &str, tolerance: f64, e: &crate::Error) -> Self {
        Self { name: name.into(), passed: false, measured: f64::INFINITY, tolerance, checks: 0, detail: format!("error: {e}") }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    /// Hex, as accepted by `--seed`.
    pub seed: String,
    pub grid_n: usize,
    pub samples: usize,
    pub params: ModelParams,
    pub passed: bool,
    pub properties: Vec<PropertyResult>,
}

impl VerifyReport {
    pub fn failed(&self) -> Vec<&str> {
        self.properties.iter().filter(|p| !p.passed).map(|p| p.name.as_str()).collect()
    }
}

fn run(name: &str, tolerance: f64, f: impl FnOnce() -> Result<(f64, usize, String)>) -> PropertyResult {
    match f() {
        Ok((measured, checks, detail)) => PropertyResult::new(name, measured, tolerance, checks, detail),
        Err(e) => PropertyResult::errored(name, tolerance, &e),
    }
}

fn weights(opts: &VerifyOptions, stream: u64) -> Vec<PiecewiseWeight> {
    let mut r = rng(opts.seed.wrapping_add(stream));
    (0..opts.samples).map(|_| random_admissible_weight(&mut r, &opts.params, 8)).collect()
}

fn max_of(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(f64::NEG_INFINITY, f64::max)
}

/// `λ₁(mᴿ) - λ₁(m)` over random weights, three advection rates and four boundary conditions.
fn rearrangement_monotonicity(opts: &VerifyOptions) -> Result<(f64, usize, String)> {
    let ws = weights(opts, 1);
    let bcs = [Boundary::Robin(0.0), Boundary::Robin(1.0), Boundary::Robin(10.0), Boundary::Dirichlet];
    let cases: Vec<(usize, f64, Boundary)> = (0..ws.len())
        .flat_map(|i| [0.0, 0.1, 0.2].into_iter().flat_map(move |a| bcs.into_iter().map(move |bc| (i, a, bc))))
        .collect();
    let solver = EigenSolver::new(opts.grid_n);
    let gaps: Vec<f64> = cases
        .par_iter()
        .map(|&(i, a, bc)| {
            let p = opts.params.with_alpha(a)?;
            let disc = Discretization::new(opts.grid_n, &ws[i])?;
            let r = unimodal_rearrangement(&ws[i], &p, bc, &disc)?;
            Ok(solver.lambda(&r.m_r, &p, bc)? - r.lambda)
        })
        .collect::<Result<_>>()?;
    let worst = max_of(gaps.iter().copied());
    Ok((worst, gaps.len(), format!("max lambda(m_R) - lambda(m) = {worst:e}")))
}

/// Level-set lengths of `m̃` and `m̃ᴿ`, the length of the inverse image and the mass identity.
fn equimeasurability(opts: &VerifyOptions) -> Result<(f64, usize, String)> {
    let ws = weights(opts, 2);
    let p = opts.params;
    let bc = Boundary::Robin(1.0);
    let mut worst = 0.0f64;
    let mut checks = 0;
    for w in &ws {
        let disc = Discretization::new(opts.grid_n, w)?;
        let r = unimodal_rearrangement(w, &p, bc, &disc)?;
        for &c in r.m_tilde.values() {
            worst = worst.max((r.m_tilde.superlevel_measure(c) - r.m_tilde_r.superlevel_measure(c)).abs());
            checks += 1;
        }
        worst = worst.max((transformed_length(&r.m_tilde_r, p.alpha) - 1.0).abs());
        worst = worst.max((transformed_mass(&r.m_tilde, p.alpha) - w.mass()).abs());
        checks += 2;
    }
    Ok((worst, checks, format!("max identity defect = {worst:e}")))
}

/// `μ` on random triples `λ₀ < λ₁ < λ₂`: relative drop of `μ(λ₁)` below the chord.
fn mu_concavity(opts: &VerifyOptions) -> Result<(f64, usize, String)> {
    let ws = weights(opts, 3);
    let mut r = rng(opts.seed.wrapping_add(4));
    let mut worst = f64::NEG_INFINITY;
    let mut checks = 0;
    for w in &ws {
        let disc = Discretization::new(opts.grid_n, w)?;
        for bc in [Boundary::Robin(0.0), Boundary::Robin(1.0)] {
            use rand::Rng;
            let mut l: Vec<f64> = (0..3).map(|_| r.gen_range(0.0..60.0)).collect();
            l.sort_by(f64::total_cmp);
            let mu = mu_curve(w, &opts.params, bc, &disc, &l)?;
            let t = (l[1] - l[0]) / (l[2] - l[0]);
            let chord = (1.0 - t) * mu[0].mu + t * mu[2].mu;
            let scale = mu.iter().map(|p| p.mu.abs()).fold(1.0, f64::max);
            worst = worst.max((chord - mu[1].mu) / scale);
            checks += 1;
        }
    }
    Ok((worst, checks, format!("max relative chord excess = {worst:e}")))
}

/// Boundary optimum below `β_crit` and centered optimum above it.
fn trichotomy(opts: &VerifyOptions) -> Result<(f64, usize, String)> {
    let design = DesignOptions::default();
    let mut worst = 0.0f64;
    let mut checks = 0;
    for alpha in [0.05, 0.2] {
        for m0 in [0.3, 0.5] {
            let p = ModelParams { alpha, m0, ..opts.params };
            p.validate()?;
            let tp = TranscendParams::saturated(p);
            let crit = beta_crit(&tp);
            for (beta, want) in [(0.5 * crit, 0.0), (2.0 * crit, tp.centered_xi())] {
                let o = locate_optimal_interval(Boundary::Robin(beta), tp.delta, &p, &design)?;
                worst = worst.max((o.xi_star - want).abs());
                checks += 1;
            }
        }
    }
    Ok((worst, checks, format!("max |xi* - predicted| = {worst:e}")))
}

/// Ramp-mollified optimum: `λ` must fall strictly as the ramps narrow and stay
/// strictly above the unmollified value on the same grid.
fn mollify(opts: &VerifyOptions) -> Result<(f64, usize, String)> {
    let p = opts.params.with_alpha(0.05)?;
    let tp = TranscendParams::saturated(p);
    let bc = Boundary::Robin(1.0);
    let xi = 0.0;
    let lambda_star = transcendental_root(xi, 1.0, &tp)?;
    let opt = DesignOptimum { xi_star: xi, delta: tp.delta, lambda_star, regime: Regime::BoundaryLeft, mass_active: true, boundary: bc };
    let solver = EigenSolver::new(opts.grid_n);
    let widths = [0.1, 0.05, 0.02];
    let pts = mollify_demo(&opt, &widths, &p, &solver, 16)?;
    let fe_star = solver.lambda(&opt.weight(&p)?, &p, bc)?;
    // violations are positive; a passing run reports the smallest (negated) gap
    let mut worst = f64::NEG_INFINITY;
    for w in pts.windows(2) {
        worst = worst.max(w[1].lambda - w[0].lambda);
    }
    worst = worst.max(fe_star - pts.last().unwrap().lambda);
    let lam: Vec<String> = pts.iter().map(|q| format!("{}:{:.8}", q.width, q.lambda)).collect();
    Ok((worst, pts.len(), format!("lambda by width [{}], grid lambda* = {fe_star:.8}", lam.join(", "))))
}

/// Finite element `λ₁` against the transcendental root on interval weights.
fn discretization_agreement(opts: &VerifyOptions) -> Result<(f64, usize, String)> {
    let p = opts.params;
    let tp = TranscendParams::saturated(p);
    let solver = EigenSolver::new(opts.grid_n);
    let mut worst = 0.0f64;
    let mut checks = 0;
    for xi in [0.0, 0.15, tp.centered_xi()] {
        for beta in [0.5, 3.0, 20.0] {
            let w = BangBangInterval::new(xi, tp.delta, p)?.weight();
            let fe = solver.lambda(&w, &p, Boundary::Robin(beta))?;
            let exact = transcendental_root(xi, beta, &tp)?;
            worst = worst.max((fe / exact - 1.0).abs());
            checks += 1;
        }
    }
    Ok((worst, checks, format!("max relative gap = {worst:e} at n = {}", opts.grid_n)))
}

pub fn run_all(opts: &VerifyOptions) -> VerifyReport {
    let properties = vec![
        run("rearrangement_monotonicity", 1e-6, || rearrangement_monotonicity(opts)),
        run("equimeasurability", 1e-14, || equimeasurability(opts)),
        run("mu_concavity", 1e-9, || mu_concavity(opts)),
        run("trichotomy", 1e-6, || trichotomy(opts)),
        run("mollify", 0.0, || mollify(opts)),
        run("discretization_agreement", 1e-4, || discretization_agreement(opts)),
    ];
    VerifyReport {
        seed: format!("{:#x}", opts.seed),
        grid_n: opts.grid_n,
        samples: opts.samples,
        params: opts.params,
        passed: properties.iter().all(|p| p.passed),
        properties,
    }
}
