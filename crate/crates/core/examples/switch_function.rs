//! Sign of the switch function at the ends of a boundary optimum.
//!
//! cargo run --release --example switch_function

use drift_design::eigensolve::EigenSolver;
use drift_design::optimize::switch_function;
use drift_design::weights::{BangBangInterval, Boundary, ModelParams};

fn main() -> drift_design::Result<()> {
    let params = ModelParams::new(0.2, 1.0, 0.4)?;
    let m = BangBangInterval::boundary(params).weight();
    let principal = EigenSolver::new(2000).principal(&m, &params, Boundary::Robin(1.0))?;
    let pair = principal.pair().expect("positive eigenvalue");
    let s = switch_function(pair, &m, &params)?;
    println!("psi(0) = {:+.6}, psi(1) = {:+.6}", s.psi_left, s.psi_right);
    for i in (0..s.x.len()).step_by(s.x.len() / 10) {
        println!("x = {:.3} m = {:+.1} psi = {:+.6}", s.x[i], s.m[i], s.psi[i]);
    }
    Ok(())
}
