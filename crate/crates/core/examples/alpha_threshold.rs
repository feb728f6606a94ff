//! Uniform advection threshold and the zero regime of the Neumann problem.
//!
//! cargo run --release --example alpha_threshold

use drift_design::eigensolve::{EigenSolver, Principal};
use drift_design::weights::{abar, alpha_star, BangBangInterval, Boundary, ModelParams};

fn main() -> drift_design::Result<()> {
    let base = ModelParams::new(0.0, 1.0, 0.4)?;
    let m = BangBangInterval::boundary(base).weight();
    println!("abar(kappa=1, m0=0.4) = {:.15}", abar(&base));
    println!("alpha_star(bang-bang) = {:.15}", alpha_star(&m));

    let solver = EigenSolver::new(2000);
    for alpha in [0.0, 0.2, 0.4, 0.42, 0.43, 0.6] {
        let p = base.with_alpha(alpha)?;
        let shown = match solver.principal(&m, &p, Boundary::neumann())? {
            Principal::ZeroRegime => "0 (zero regime)".to_string(),
            Principal::Positive(pair) => format!("{:.8}", pair.lambda),
        };
        println!("alpha = {alpha:<5} exp_mass = {:+.6}  lambda = {shown}", m.exp_mass(alpha));
    }
    Ok(())
}
