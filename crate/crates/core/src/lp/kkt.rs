use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::StandardFormLP;
use crate::error::{Error, Result};

/// Optimality residuals of a primal/dual pair, measured on the
/// maximization-sense problem `max cᵀθ, Gθ ≤ p` and its dual
/// `min pᵀδ, Gᵀδ ≥ c, δ ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KktReport {
    /// `max_i (Gθ − p)_i⁺`
    pub primal_feasibility_violation: f64,
    /// `max_j (c − Gᵀδ)_j⁺` on nonnegative columns, `|c − Gᵀδ|_j` on free ones.
    pub dual_feasibility_violation: f64,
    /// Largest negative part among sign-constrained θ and all of δ.
    pub sign_violation: f64,
    /// `|pᵀδ − cᵀθ|`
    pub duality_gap: f64,
    /// Primal objective in the problem's own sense.
    pub primal_objective: f64,
    /// Dual objective, converted to the primal's sense.
    pub dual_objective: f64,
    pub tolerance: f64,
    pub is_optimal: bool,
}

pub fn check_kkt(
    lp: &StandardFormLP,
    primal: &DVector<f64>,
    dual: &DVector<f64>,
    tol: f64,
) -> Result<KktReport> {
    lp.check_primal_len(primal.len())?;
    lp.check_dual_len(dual.len())?;
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let c = lp.max_objective();
    let g = lp.constraint_matrix();
    let p = lp.rhs();

    let residual = g * primal - p;
    let primal_feasibility_violation = residual.iter().fold(0.0f64, |a, v| a.max(*v));

    let reduced = &c - g.tr_mul(dual);
    let dual_feasibility_violation = reduced
        .iter()
        .zip(lp.sign_mask())
        .fold(0.0f64, |a, (r, s)| {
            if s.is_nonnegative() {
                a.max(*r)
            } else {
                a.max(r.abs())
            }
        });

    let mut sign_violation = 0.0f64;
    for (v, s) in primal.iter().zip(lp.sign_mask()) {
        if s.is_nonnegative() {
            sign_violation = sign_violation.max(-v);
        }
    }
    for v in dual.iter() {
        sign_violation = sign_violation.max(-v);
    }

    let primal_max = c.dot(primal);
    let dual_max = p.dot(dual);
    let duality_gap = (dual_max - primal_max).abs();

    let is_optimal = primal_feasibility_violation <= tol
        && dual_feasibility_violation <= tol
        && sign_violation <= tol
        && duality_gap <= tol * (1.0 + primal_max.abs());

    Ok(KktReport {
        primal_feasibility_violation,
        dual_feasibility_violation,
        sign_violation,
        duality_gap,
        primal_objective: lp.from_max_value(primal_max),
        dual_objective: lp.from_max_value(dual_max),
        tolerance: tol,
        is_optimal,
    })
}
