//! Compares convergence with the recommended coupling gain against gains
//! below the stability bound.
//!
//! ```text
//! cargo run --release --example stability
//! ```

use mcm_dynamics::data::{make_synthetic, ScalingKind, SyntheticKind};
use mcm_dynamics::dynamics::{analyze_stability, integrate, recommend_k, DynamicsConfig};
use mcm_dynamics::mcm::build_linear_mcm;

fn main() -> mcm_dynamics::Result<()> {
    let d = make_synthetic(SyntheticKind::GaussianOverlap, 24, 5)?.scaled(ScalingKind::MinMax);
    let lp = build_linear_mcm(&d, 1.0)?;
    let report = analyze_stability(&lp, 1.0);
    println!(
        "λ_min(GᵀG) = {:.4e}  λ_max(GᵀG) = {:.4e}  k must exceed {:.4}",
        report.lambda_min, report.lambda_max, report.k_lower_bound
    );

    let recommended = recommend_k(&lp, 1.1)?.k;
    for (label, k) in [("recommended", recommended), ("k/3", recommended / 3.0), ("k/10", recommended / 10.0)] {
        let cfg = DynamicsConfig { k, step_size: 0.05, max_time: 2e4, ..Default::default() };
        let run = integrate(&lp, &cfg)?;
        println!(
            "{label:>11}: k = {k:.4}  satisfies bound = {:<5}  converged = {:<5}  t = {:>8.1}  objective {:.6}",
            analyze_stability(&lp, k).chosen_k_satisfies,
            run.converged,
            run.state.t,
            run.objective()
        );
    }
    Ok(())
}
