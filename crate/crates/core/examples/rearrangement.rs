//! Unimodal rearrangement of a two-bump weight.
//!
//! cargo run --release --example rearrangement

use drift_design::eigensolve::{Discretization, EigenSolver};
use drift_design::rearrange::unimodal_rearrangement;
use drift_design::weights::{Boundary, ModelParams, PiecewiseWeight};

fn main() -> drift_design::Result<()> {
    let params = ModelParams::new(0.2, 1.0, 0.4)?;
    let m = PiecewiseWeight::new(vec![0.0, 0.1, 0.55, 0.7, 1.0], vec![1.0, -1.0, 0.5, -1.0])?;
    let bc = Boundary::Robin(2.0);
    let r = unimodal_rearrangement(&m, &params, bc, &Discretization::new(2000, &m)?)?;
    let after = EigenSolver::new(2000).lambda(&r.m_r, &params, bc)?;
    println!("x+ = {:.4}, y+ = {:.4}", r.x_plus, r.y_plus);
    println!("before: {:?} on {:?}", m.values(), m.breakpoints());
    println!("after:  {:?} on {:?}", r.m_r.values(), r.m_r.breakpoints());
    println!("lambda {:.8} -> {:.8}", r.lambda, after);
    println!("mass {:.12} -> {:.12}", m.mass(), r.m_r.mass());
    Ok(())
}
