//! Spectral checks on `GᵀG` for choosing the coupling gain.
//!
//! The second-order form of the dynamics is asymptotically stable when both
//! `GᵀG` and `k²GᵀG − I` are positive definite, i.e. when
//! `k² · λ_min(GᵀG) > 1`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::StandardFormLP;

/// `λ_min` below this fraction of `λ_max` is treated as singular.
const SINGULAR_RATIO: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// `1/√λ_min`, or `+∞` when `GᵀG` is singular.
    pub k_lower_bound: f64,
    pub chosen_k_satisfies: bool,
}

fn gram(lp: &StandardFormLP) -> DMatrix<f64> {
    let g = lp.constraint_matrix();
    g.tr_mul(g)
}

fn singular(lambda_min: f64, lambda_max: f64) -> bool {
    !(lambda_min > SINGULAR_RATIO * lambda_max) || lambda_max <= 0.0
}

pub fn analyze_stability(lp: &StandardFormLP, k: f64) -> StabilityReport {
    let eig = SymmetricEigen::new(gram(lp));
    let lambda_min = eig.eigenvalues.min();
    let lambda_max = eig.eigenvalues.max();
    let (k_lower_bound, chosen_k_satisfies) = if singular(lambda_min, lambda_max) {
        (f64::INFINITY, false)
    } else {
        (1.0 / lambda_min.sqrt(), k * k * lambda_min > 1.0)
    };
    StabilityReport {
        lambda_min,
        lambda_max,
        k_lower_bound,
        chosen_k_satisfies,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KRecommendation {
    pub k: f64,
    /// `GᵀG` was numerically singular; `k` fell back to 1.
    pub degenerate: bool,
}

/// `safety / √λ_min(GᵀG)`, or `k = 1` flagged degenerate when `GᵀG` is singular.
pub fn recommend_k(lp: &StandardFormLP, safety: f64) -> Result<KRecommendation> {
    if !(safety >= 1.0) {
        return Err(Error::InvalidArgument(format!("safety factor must be at least 1, got {safety}")));
    }
    let report = analyze_stability(lp, 1.0);
    if singular(report.lambda_min, report.lambda_max) {
        Ok(KRecommendation { k: 1.0, degenerate: true })
    } else {
        Ok(KRecommendation {
            k: safety / report.lambda_min.sqrt(),
            degenerate: false,
        })
    }
}

/// Extreme eigenvalues of `GᵀG` by power iteration (largest) and inverse
/// iteration through a Cholesky factor (smallest). Independent of the dense
/// symmetric eigensolver used by [`analyze_stability`]. Returns `None` for
/// the smallest eigenvalue when `GᵀG` cannot be factored.
pub fn extreme_eigenvalues_iterative(lp: &StandardFormLP, max_iter: usize, tol: f64) -> (Option<f64>, f64) {
    let a = gram(lp);
    let n = a.nrows();
    if n == 0 {
        return (None, 0.0);
    }
    // deterministic, non-degenerate start vector
    let start = DVector::from_fn(n, |i, _| 1.0 + (i as f64 * 0.618_033_988_75).fract());

    let rayleigh = |v: &DVector<f64>| v.dot(&(&a * v)) / v.dot(v);

    let mut v = start.normalize();
    let mut lambda_max = rayleigh(&v);
    for _ in 0..max_iter {
        let w = &a * &v;
        let norm = w.norm();
        if norm == 0.0 {
            break;
        }
        v = w / norm;
        let next = rayleigh(&v);
        let done = (next - lambda_max).abs() <= tol * next.abs();
        lambda_max = next;
        if done {
            break;
        }
    }

    let lambda_min = a.clone().cholesky().map(|chol| {
        let mut v = start.normalize();
        let mut mu = rayleigh(&v);
        for _ in 0..max_iter {
            let w = chol.solve(&v);
            v = w.normalize();
            let next = rayleigh(&v);
            let done = (next - mu).abs() <= tol * next.abs();
            mu = next;
            if done {
                break;
            }
        }
        mu
    });
    (lambda_min, lambda_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::Sense;

    fn identity_lp(d: f64) -> StandardFormLP {
        StandardFormLP::from_rows(&[1.0, 1.0], &[&[d, 0.0], &[0.0, d]], &[1.0, 1.0], Sense::Maximize).unwrap()
    }

    #[test]
    fn identity_gain_thresholds() {
        let r = analyze_stability(&identity_lp(1.0), 2.0);
        assert!((r.lambda_min - 1.0).abs() < 1e-12);
        assert!((r.k_lower_bound - 1.0).abs() < 1e-12);
        assert!(r.chosen_k_satisfies);
        assert!(!analyze_stability(&identity_lp(1.0), 0.5).chosen_k_satisfies);
    }

    #[test]
    fn recommended_gain() {
        let r = recommend_k(&identity_lp(1.0), 1.1).unwrap();
        assert!((r.k - 1.1).abs() < 1e-12);
        assert!(!r.degenerate);
        // G = 2I gives λ_min = 4
        let r = recommend_k(&identity_lp(2.0), 1.1).unwrap();
        assert!((r.k - 0.55).abs() < 1e-12);
        assert!(recommend_k(&identity_lp(1.0), 0.9).is_err());
    }

    #[test]
    fn singular_gram_is_flagged() {
        let lp = StandardFormLP::from_rows(&[1.0, 1.0], &[&[1.0, 1.0]], &[1.0], Sense::Maximize).unwrap();
        let r = analyze_stability(&lp, 10.0);
        assert!(r.k_lower_bound.is_infinite());
        assert!(!r.chosen_k_satisfies);
        let rec = recommend_k(&lp, 1.1).unwrap();
        assert!(rec.degenerate);
        assert_eq!(rec.k, 1.0);
    }

    #[test]
    fn iterative_matches_dense() {
        let lp = StandardFormLP::from_rows(
            &[1.0, 1.0, 1.0],
            &[&[2.0, 1.0, 0.0], &[0.0, 1.0, 3.0], &[1.0, 0.0, 1.0], &[1.0, 1.0, 1.0]],
            &[1.0; 4],
            Sense::Maximize,
        )
        .unwrap();
        let dense = analyze_stability(&lp, 1.0);
        let (lmin, lmax) = extreme_eigenvalues_iterative(&lp, 10_000, 1e-15);
        assert!(((lmin.unwrap() - dense.lambda_min) / dense.lambda_min).abs() < 1e-8);
        assert!(((lmax - dense.lambda_max) / dense.lambda_max).abs() < 1e-8);
    }
}
