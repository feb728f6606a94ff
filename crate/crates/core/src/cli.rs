//! Command-line front end.
//!
//! A run is described by a JSON [`RunConfig`]; command-line flags override
//! the file. Exit codes: 0 success, 1 failed verification, 2 invalid
//! configuration, 3 solver error (a diagnostic JSON goes to stderr and
//! `error.json`), 4 sweep with failed rows.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::eigensolve::{Discretization, EigenSolver, Principal, Tolerances, DEFAULT_GRID};
use crate::error::Error;
use crate::optimize::{locate_optimal_interval, log_space, optimal_design, sweep_beta, DesignOptions};
use crate::output::write_atomic;
use crate::rearrange::unimodal_rearrangement;
use crate::transcend::{beta_crit, dirichlet_root, f_scaled, regime_equations, transcendental_root, TranscendParams};
use crate::verify::{run_all, VerifyOptions};
use crate::weights::{BangBangInterval, Boundary, ModelParams, PiecewiseWeight};

pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_PARTIAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "drift-design", version, about = "Principal eigenvalues and optimal designs for 1D drift problems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Principal eigenpair of the configured weight.
    Eig,
    /// First root of the interval equation and the critical Robin coefficient.
    Root,
    /// Optimal interval position (and length, unless --delta is given).
    Locate,
    /// Optimal value over a sweep of Robin coefficients.
    Sweep,
    /// Unimodal rearrangement of the configured weight.
    Rearrange,
    /// Seeded property battery with a JSON report.
    Verify,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Grid cells.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Random seed in hex, e.g. 0xE16E.
    #[arg(long, global = true)]
    pub seed: Option<String>,
    /// Model parameter overrides, e.g. alpha=0.1,kappa=2.
    #[arg(long, global = true, value_delimiter = ',')]
    pub params: Vec<String>,
    /// Robin coefficient, or `dirichlet` / `inf`.
    #[arg(long, global = true)]
    pub beta: Option<String>,
    /// Interval start; selects an interval weight.
    #[arg(long, global = true)]
    pub xi: Option<f64>,
    /// Interval length.
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    /// Random weights per verified property.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightSpec {
    Piecewise(PiecewiseWeight),
    Constant(f64),
    /// `κ` on `(ξ, ξ+δ)`, `-1` elsewhere; `δ` defaults to the saturating length.
    BangBang {
        xi: f64,
        #[serde(default)]
        delta: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SweepSpec {
    LogSpace { min: f64, max: f64, points: usize },
    List(Vec<f64>),
}

impl SweepSpec {
    pub fn betas(&self) -> Vec<f64> {
        match self {
            SweepSpec::LogSpace { points: 0, .. } => Vec::new(),
            SweepSpec::LogSpace { min, max, points } => log_space(*min, *max, *points),
            SweepSpec::List(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub params: ModelParams,
    pub boundary: Boundary,
    pub sweep: SweepSpec,
    pub weight: WeightSpec,
    pub grid_n: usize,
    pub tolerances: Tolerances,
    pub output: PathBuf,
    /// Hex string.
    pub seed: String,
    pub samples: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: ModelParams { alpha: 0.2, kappa: 1.0, m0: 0.4 },
            boundary: Boundary::Robin(1.0),
            sweep: SweepSpec::LogSpace { min: 0.1, max: 30.0, points: 60 },
            weight: WeightSpec::BangBang { xi: 0.0, delta: None },
            grid_n: DEFAULT_GRID,
            tolerances: Tolerances::default(),
            output: PathBuf::from("out"),
            seed: format!("{:#x}", crate::random::DEFAULT_SEED),
            samples: VerifyOptions::default().samples,
        }
    }
}

pub fn parse_seed(s: &str) -> Result<u64, String> {
    let t = s.trim();
    let digits = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")).unwrap_or(t);
    u64::from_str_radix(digits, 16).map_err(|e| format!("seed {s:?} is not hex: {e}"))
}

pub fn parse_beta(s: &str) -> Result<Boundary, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "dirichlet" | "inf" | "infinity" => Ok(Boundary::Dirichlet),
        "neumann" => Ok(Boundary::neumann()),
        t => {
            let b: f64 = t.parse().map_err(|_| format!("beta {s:?} is neither a number nor dirichlet"))?;
            Boundary::robin(b).map_err(|e| e.to_string())
        }
    }
}

impl RunConfig {
    /// Reads `--config` if given, applies the flag overrides and validates.
    pub fn load(args: &CommonArgs) -> Result<Self, String> {
        let mut cfg = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
                serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?
            }
            None => RunConfig::default(),
        };
        cfg.apply(args)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply(&mut self, args: &CommonArgs) -> Result<(), String> {
        if let Some(out) = &args.out {
            self.output = out.clone();
        }
        if let Some(n) = args.n {
            self.grid_n = n;
        }
        if let Some(seed) = &args.seed {
            self.seed = seed.clone();
        }
        if let Some(s) = args.samples {
            self.samples = s;
        }
        for kv in &args.params {
            let (k, v) = kv.split_once('=').ok_or_else(|| format!("--params expects K=V, got {kv:?}"))?;
            let v: f64 = v.trim().parse().map_err(|_| format!("--params {k}: {v:?} is not a number"))?;
            match k.trim() {
                "alpha" => self.params.alpha = v,
                "kappa" => self.params.kappa = v,
                "m0" => self.params.m0 = v,
                other => return Err(format!("unknown parameter {other:?}; expected alpha, kappa or m0")),
            }
        }
        if let Some(b) = &args.beta {
            self.boundary = parse_beta(b)?;
        }
        if args.xi.is_some() || args.delta.is_some() {
            let (xi0, d0) = match self.weight {
                WeightSpec::BangBang { xi, delta } => (xi, delta),
                _ => (0.0, None),
            };
            self.weight = WeightSpec::BangBang { xi: args.xi.unwrap_or(xi0), delta: args.delta.or(d0) };
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), String> {
        self.params.validate().map_err(|e| e.to_string())?;
        if let Boundary::Robin(b) = self.boundary {
            Boundary::robin(b).map_err(|e| e.to_string())?;
        }
        if self.grid_n < 2 {
            return Err(format!("grid_n must be at least 2, got {}", self.grid_n));
        }
        let t = &self.tolerances;
        if !(t.lambda_rel > 0.0 && t.mu_rel > 0.0 && t.bracket_cap > 1.0 && t.shift_rel > 0.0 && t.inverse_iterations > 0) {
            return Err("tolerances must be positive".into());
        }
        parse_seed(&self.seed)?;
        if let WeightSpec::BangBang { xi, delta } = self.weight {
            BangBangInterval::new(xi, delta.unwrap_or(self.params.delta_star()), self.params).map_err(|e| e.to_string())?;
        }
        Ok(())
    }

    pub fn seed_value(&self) -> u64 {
        parse_seed(&self.seed).expect("validated")
    }

    pub fn delta(&self) -> Option<f64> {
        match self.weight {
            WeightSpec::BangBang { delta, .. } => delta,
            _ => None,
        }
    }

    pub fn weight(&self) -> Result<PiecewiseWeight, String> {
        match &self.weight {
            WeightSpec::Piecewise(w) => Ok(w.clone()),
            WeightSpec::Constant(v) => {
                if v.is_finite() {
                    Ok(PiecewiseWeight::constant(*v))
                } else {
                    Err(format!("constant weight must be finite, got {v}"))
                }
            }
            WeightSpec::BangBang { xi, delta } => {
                let d = delta.unwrap_or(self.params.delta_star());
                Ok(BangBangInterval::new(*xi, d, self.params).map_err(|e| e.to_string())?.weight())
            }
        }
    }

    pub fn solver(&self) -> EigenSolver {
        EigenSolver { n: self.grid_n, tol: self.tolerances }
    }

    pub fn design_options(&self) -> DesignOptions {
        DesignOptions { fe: self.solver(), ..DesignOptions::default() }
    }

    /// Sorted, validated sweep grid.
    pub fn betas(&self) -> Result<Vec<f64>, String> {
        if let SweepSpec::LogSpace { min, max, .. } = self.sweep {
            if !(min > 0.0 && max >= min && max.is_finite()) {
                return Err(format!("log_space needs 0 < min <= max, got [{min}, {max}]"));
            }
        }
        let mut b = self.sweep.betas();
        if b.is_empty() {
            return Err("sweep grid is empty".into());
        }
        if let Some(bad) = b.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(format!("sweep values must be finite and >= 0, got {bad}"));
        }
        b.sort_by(f64::total_cmp);
        Ok(b)
    }
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Solver(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Solver(e)
    }
}

type Outcome = std::result::Result<i32, Failure>;

fn config<T>(r: std::result::Result<T, String>) -> std::result::Result<T, Failure> {
    r.map_err(Failure::Config)
}

fn beta_json(bc: Boundary) -> serde_json::Value {
    match bc {
        Boundary::Robin(b) => json!(b),
        Boundary::Dirichlet => json!("dirichlet"),
    }
}

fn write_json(path: &Path, value: &impl Serialize) -> crate::Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let cfg = match RunConfig::load(&cli.common) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("configuration error: {msg}");
            return EXIT_CONFIG;
        }
    };
    let result = match cli.command {
        Command::Eig => cmd_eig(&cfg),
        Command::Root => cmd_root(&cfg),
        Command::Locate => cmd_locate(&cfg),
        Command::Sweep => cmd_sweep(&cfg),
        Command::Rearrange => cmd_rearrange(&cfg),
        Command::Verify => cmd_verify(&cfg),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Config(msg)) => {
            eprintln!("configuration error: {msg}");
            EXIT_CONFIG
        }
        Err(Failure::Solver(e)) => {
            let diag = json!({
                "command": format!("{:?}", cli.command).to_ascii_lowercase(),
                "error": e.to_string(),
                "params": cfg.params,
                "boundary": beta_json(cfg.boundary),
                "grid_n": cfg.grid_n,
            });
            eprintln!("{diag}");
            if let Err(w) = write_json(&cfg.output.join("error.json"), &diag) {
                eprintln!("could not write error.json: {w}");
            }
            EXIT_SOLVER
        }
    }
}

fn cmd_eig(cfg: &RunConfig) -> Outcome {
    let m = config(cfg.weight())?;
    match cfg.solver().principal(&m, &cfg.params, cfg.boundary)? {
        Principal::Positive(pair) => {
            pair.export(&cfg.output.join("eig"), &cfg.params, cfg.boundary)?;
            println!("lambda={:.12}", pair.lambda);
        }
        Principal::ZeroRegime => {
            let meta = json!({
                "lambda": 0.0,
                "zero_regime": true,
                "beta": beta_json(cfg.boundary),
                "alpha": cfg.params.alpha,
                "kappa": cfg.params.kappa,
                "exp_mass": m.exp_mass(cfg.params.alpha),
                "n": cfg.grid_n,
            });
            write_json(&cfg.output.join("eig.json"), &meta)?;
            println!("lambda=0 (zero regime)");
        }
    }
    Ok(0)
}

fn cmd_root(cfg: &RunConfig) -> Outcome {
    let WeightSpec::BangBang { xi, delta } = cfg.weight else {
        return Err(Failure::Config("root needs a bang_bang weight".into()));
    };
    let delta = delta.unwrap_or(cfg.params.delta_star());
    let tp = config(TranscendParams::new(cfg.params, delta).map_err(|e| e.to_string()))?;
    let crit = beta_crit(&tp);
    let (lambda, residual) = match cfg.boundary {
        Boundary::Dirichlet => {
            if xi != 0.0 {
                return Err(Failure::Config(format!("the Dirichlet equation is for xi = 0, got xi = {xi}")));
            }
            (dirichlet_root(&tp)?, None)
        }
        Boundary::Robin(beta) => {
            let lambda = transcendental_root(xi, beta, &tp)?;
            // the regime equation describes ξ = 0 below β_crit and the center above it
            let on_regime = (beta < crit && xi == 0.0) || (beta > crit && (xi - tp.centered_xi()).abs() <= 1e-12);
            let residual = if on_regime {
                let eq = regime_equations(beta, lambda, &tp)?;
                Some((eq.lhs - eq.rhs).abs() / (1.0 + eq.lhs.abs()))
            } else {
                None
            };
            (lambda, residual)
        }
    };
    let report = json!({
        "xi": xi,
        "delta": delta,
        "beta": beta_json(cfg.boundary),
        "lambda": lambda,
        "beta_crit": crit,
        "regime_residual": residual,
        "f_scaled_at_root": cfg.boundary.beta().map(|b| f_scaled(xi, b, lambda, &tp)),
        "params": cfg.params,
    });
    write_json(&cfg.output.join("root.json"), &report)?;
    println!("lambda={lambda:.12}");
    println!("beta_crit={crit:.12}");
    Ok(0)
}

fn cmd_locate(cfg: &RunConfig) -> Outcome {
    let opts = cfg.design_options();
    let opt = match cfg.delta() {
        Some(d) => locate_optimal_interval(cfg.boundary, d, &cfg.params, &opts)?,
        None => optimal_design(cfg.boundary, &cfg.params, &opts)?,
    };
    let report = json!({ "optimum": opt, "beta": beta_json(cfg.boundary), "params": cfg.params });
    write_json(&cfg.output.join("locate.json"), &report)?;
    println!("xi_star={:.12}", opt.xi_star);
    println!("delta={:.12}", opt.delta);
    println!("lambda_star={:.12}", opt.lambda_star);
    println!("regime={}", opt.regime);
    println!("mass_active={}", opt.mass_active);
    Ok(0)
}

fn cmd_sweep(cfg: &RunConfig) -> Outcome {
    let betas = config(cfg.betas())?;
    let report = sweep_beta(&betas, &cfg.params, &cfg.design_options())?;
    write_atomic(&cfg.output.join("sweep.csv"), report.to_csv().as_bytes())?;
    let mut plot = String::from("# beta lambda_star\n");
    for r in &report.rows {
        writeln!(plot, "{:.12e} {:.12e}", r.beta, r.lambda_star).expect("string write");
    }
    write_atomic(&cfg.output.join("sweep_plot.dat"), plot.as_bytes())?;
    let full = json!({ "summary": report.summary(), "rows": report.rows, "dirichlet": report.dirichlet });
    write_json(&cfg.output.join("sweep.json"), &full)?;
    println!("rows={}", report.rows.len());
    println!("beta_crit={:.12}", report.beta_crit);
    if let Some(s) = report.summary()["regime_switch"].as_f64() {
        println!("regime_switch={s:.12}");
    }
    if let Some(d) = report.dirichlet {
        println!("dirichlet_lambda_star={:.12}", d.lambda_star);
    }
    if !report.is_complete() {
        for f in &report.failures {
            eprintln!("row beta={} failed: {}", f.beta, f.error);
        }
        return Ok(EXIT_PARTIAL);
    }
    Ok(0)
}

fn cmd_rearrange(cfg: &RunConfig) -> Outcome {
    let m = config(cfg.weight())?;
    let disc = Discretization::new(cfg.grid_n, &m)?;
    let r = unimodal_rearrangement(&m, &cfg.params, cfg.boundary, &disc)?;
    let after = cfg.solver().lambda(&r.m_r, &cfg.params, cfg.boundary)?;
    let report = json!({
        "input": m,
        "rearranged": r.m_r,
        "m_tilde": r.m_tilde,
        "m_tilde_rearranged": r.m_tilde_r,
        "x_plus": r.x_plus,
        "y_plus": r.y_plus,
        "lambda_before": r.lambda,
        "lambda_after": after,
        "beta": beta_json(cfg.boundary),
        "params": cfg.params,
    });
    write_json(&cfg.output.join("rearranged.json"), &report)?;
    println!("lambda_before={:.12}", r.lambda);
    println!("lambda_after={after:.12}");
    Ok(0)
}

fn cmd_verify(cfg: &RunConfig) -> Outcome {
    let opts = VerifyOptions { seed: cfg.seed_value(), grid_n: cfg.grid_n, samples: cfg.samples.max(1), params: cfg.params };
    let report = run_all(&opts);
    write_json(&cfg.output.join("verify.json"), &report)?;
    for p in &report.properties {
        let tag = if p.passed { "PASS" } else { "FAIL" };
        println!("{tag} {} measured={:e} tolerance={:e}", p.name, p.measured, p.tolerance);
    }
    if report.passed {
        Ok(0)
    } else {
        eprintln!("failed properties: {}", report.failed().join(", "));
        Ok(EXIT_VERIFY_FAILED)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_parse_as_hex() {
        assert_eq!(parse_seed("0xE16E").unwrap(), 0xE16E);
        assert_eq!(parse_seed("e16e").unwrap(), 0xE16E);
        assert!(parse_seed("zz").is_err());
    }

    #[test]
    fn beta_flag_accepts_dirichlet() {
        assert_eq!(parse_beta("inf").unwrap(), Boundary::Dirichlet);
        assert_eq!(parse_beta("2.5").unwrap(), Boundary::Robin(2.5));
        assert!(parse_beta("-1").is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"grid":10}"#).is_err());
        assert!(serde_json::from_str::<RunConfig>(r#"{"params":{"alpha":0.1,"kappa":1,"m0":0.4,"x":1}}"#).is_err());
        let c: RunConfig = serde_json::from_str(r#"{"weight":{"constant":1.0},"boundary":"dirichlet"}"#).unwrap();
        assert_eq!(c.boundary, Boundary::Dirichlet);
    }

    #[test]
    fn flags_override_file_values() {
        let mut c = RunConfig::default();
        let args = CommonArgs { params: vec!["alpha=0.1".into(), "m0=0.3".into()], n: Some(500), xi: Some(0.2), ..Default::default() };
        c.apply(&args).unwrap();
        assert_eq!(c.params.alpha, 0.1);
        assert_eq!(c.params.m0, 0.3);
        assert_eq!(c.grid_n, 500);
        assert_eq!(c.weight, WeightSpec::BangBang { xi: 0.2, delta: None });
        let bad = CommonArgs { params: vec!["gamma=1".into()], ..Default::default() };
        assert!(c.apply(&bad).is_err());
    }

    #[test]
    fn empty_sweep_is_a_config_error() {
        let c = RunConfig { sweep: SweepSpec::List(vec![]), ..Default::default() };
        assert!(c.betas().is_err());
    }
}
