//! Principal eigenpair of an interval weight, checked against the closed form.
//!
//! cargo run --release --example eigenvalue

use drift_design::eigensolve::{eigen_cov, EigenSolver};
use drift_design::transcend::{transcendental_root, TranscendParams};
use drift_design::weights::{BangBangInterval, Boundary, ModelParams};

fn main() -> drift_design::Result<()> {
    let params = ModelParams::new(0.2, 1.0, 0.4)?;
    let interval = BangBangInterval::new(0.1, params.delta_star(), params)?;
    let m = interval.weight();
    let bc = Boundary::Robin(1.0);

    let fe = EigenSolver::new(4000).principal(&m, &params, bc)?;
    let pair = fe.pair().expect("Robin problems have a positive eigenvalue");
    let cov = eigen_cov(&m, &params, bc, 4000)?;
    let exact = transcendental_root(interval.xi, 1.0, &TranscendParams::new(params, interval.delta)?)?;

    println!("finite elements   {:.10}  (residual {:.1e})", pair.lambda, pair.residual);
    println!("change of variable {:.10}", cov.lambda());
    println!("transcendental     {:.10}", exact);
    println!("max of phi at x = {:.4}", pair.argmax_node());
    Ok(())
}
