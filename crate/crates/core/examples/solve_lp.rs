//! Solves a small LP three ways: the simplex oracle, the primal-dual
//! dynamics, and the dual through the oracle, then checks the KKT conditions.
//!
//! ```text
//! cargo run --example solve_lp
//! ```

use mcm_dynamics::dynamics::{integrate, recommend_k, DynamicsConfig};
use mcm_dynamics::lp::{check_kkt, dualize, solve_reference, Sense, StandardFormLP};

fn main() -> mcm_dynamics::Result<()> {
    // max 3x + 2y  s.t.  x + y ≤ 4,  x + 3y ≤ 6,  x ≤ 3
    let lp = StandardFormLP::from_rows(
        &[3.0, 2.0],
        &[&[1.0, 1.0], &[1.0, 3.0], &[1.0, 0.0]],
        &[4.0, 6.0, 3.0],
        Sense::Maximize,
    )?;
    print!("{}", lp.to_text());

    let oracle = solve_reference(&lp)?;
    println!("simplex:  objective {:.6}  x = {:?}  dual = {:?}", oracle.objective, oracle.primal.as_slice(), oracle.dual.as_slice());

    let dual = solve_reference(&dualize(&lp).to_standard_form()?)?;
    println!("dual LP:  objective {:.6}", dual.objective);

    let k = recommend_k(&lp, 1.1)?.k;
    let run = integrate(&lp, &DynamicsConfig { k, step_size: 0.01, ..Default::default() })?;
    println!(
        "dynamics: objective {:.6}  x = {:?}  t = {:.1}  converged = {}",
        run.objective(),
        run.state.x.as_slice(),
        run.state.t,
        run.converged
    );

    let kkt = check_kkt(&lp, &run.state.x, &run.state.z, 1e-4)?;
    println!("KKT at the equilibrium: optimal = {}  gap = {:.2e}", kkt.is_optimal, kkt.duality_gap);
    Ok(())
}
