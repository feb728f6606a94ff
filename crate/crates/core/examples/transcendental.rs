//! Roots of the interval equation, the critical Robin coefficient and the
//! closed-form eigenfunction.
//!
//! cargo run --release --example transcendental

use drift_design::transcend::{
    beta_crit, closed_form_eigenfunction, dirichlet_root, regime_equations, transcendental_root, TranscendParams,
};
use drift_design::weights::ModelParams;

fn main() -> drift_design::Result<()> {
    let tp = TranscendParams::saturated(ModelParams::new(0.2, 1.0, 0.4)?);
    let crit = beta_crit(&tp);
    println!("beta_crit = {crit:.12}");
    println!("Dirichlet, interval at 0: {:.10}", dirichlet_root(&tp)?);

    for beta in [1.0, crit, 10.0] {
        let at_zero = transcendental_root(0.0, beta, &tp)?;
        let centered = transcendental_root(tp.centered_xi(), beta, &tp)?;
        println!("beta = {beta:>8.4}: lambda(xi=0) = {at_zero:.8}, lambda(center) = {centered:.8}");
        if let Ok(eq) = regime_equations(beta, at_zero.min(centered), &tp) {
            println!("    {:?} form: tan = {:.10}, rhs = {:.10}", eq.form, eq.lhs, eq.rhs);
        }
    }

    let lambda = transcendental_root(0.2, 1.0, &tp)?;
    let phi = closed_form_eigenfunction(0.2, 1.0, lambda, &tp)?;
    println!("closed form at xi = 0.2: jump residual {:.1e}", phi.jump_residual());
    for x in [0.0, 0.2, 0.35, 0.5, 1.0] {
        println!("    phi({x}) = {:.6}", phi.eval(x));
    }
    Ok(())
}
