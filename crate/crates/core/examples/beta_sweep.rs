//! Optimal eigenvalue as a function of the Robin coefficient.
//!
//! cargo run --release --example beta_sweep > sweep.csv

use drift_design::optimize::{locate_regime_switch, log_space, sweep_beta, DesignOptions};
use drift_design::weights::ModelParams;

fn main() -> drift_design::Result<()> {
    let params = ModelParams::new(0.2, 1.0, 0.4)?;
    let report = sweep_beta(&log_space(0.1, 30.0, 60), &params, &DesignOptions::default())?;
    print!("{}", report.to_csv());
    eprintln!("beta_crit = {:.6}", report.beta_crit);
    if let Some(s) = locate_regime_switch(&report.rows, &params)? {
        eprintln!("switch   = {s:.6}");
    }
    eprintln!("non-decreasing {}, concave {}", report.is_non_decreasing(), report.is_concave(1e-9));
    Ok(())
}
