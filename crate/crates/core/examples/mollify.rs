//! Smoothing the optimal weight raises the eigenvalue; the optimum is only
//! approached as the ramps shrink.
//!
//! cargo run --release --example mollify

use drift_design::eigensolve::EigenSolver;
use drift_design::optimize::{locate_optimal_interval, mollify_demo, DesignOptions};
use drift_design::weights::{Boundary, ModelParams};

fn main() -> drift_design::Result<()> {
    let params = ModelParams::new(0.05, 1.0, 0.4)?;
    let opt = locate_optimal_interval(Boundary::Robin(1.0), params.delta_star(), &params, &DesignOptions::default())?;
    println!("lambda* = {:.8}", opt.lambda_star);
    let widths = [0.1, 0.05, 0.02, 0.01, 0.005];
    for p in mollify_demo(&opt, &widths, &params, &EigenSolver::new(8000), 64)? {
        println!("width {:<6} lambda = {:.8} (+{:.2e})", p.width, p.lambda, p.lambda / opt.lambda_star - 1.0);
    }
    Ok(())
}
