//! Optimal interval position below and above the critical Robin coefficient.
//!
//! cargo run --release --example optimal_interval

use drift_design::optimize::{optimal_design, DesignOptions};
use drift_design::weights::{Boundary, ModelParams};

fn main() -> drift_design::Result<()> {
    let params = ModelParams::new(0.2, 1.0, 0.4)?;
    let opts = DesignOptions::default();
    for bc in [Boundary::neumann(), Boundary::Robin(1.0), Boundary::Robin(10.0), Boundary::Dirichlet] {
        let o = optimal_design(bc, &params, &opts)?;
        println!(
            "{bc:<10} xi* = {:.6} delta = {:.4} lambda* = {:.8} {} (mass active: {})",
            o.xi_star, o.delta, o.lambda_star, o.regime, o.mass_active
        );
    }
    Ok(())
}
