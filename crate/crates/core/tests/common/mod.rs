#![allow(dead_code)]

use mcm_dynamics::data::{make_synthetic, Dataset, ScalingKind, SyntheticKind};
use mcm_dynamics::lp::{Sense, StandardFormLP, VarSign};
use mcm_dynamics::mcm::build_linear_mcm;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random LP that is primal feasible (contains `x0`) and dual feasible
/// (contains `δ0 > 0`), hence has a finite optimum.
pub fn random_lp(seed: u64, n: usize, m: usize, allow_free: bool) -> StandardFormLP {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::from_fn(m, n, |_, _| rng.random_range(-1.0..1.0));
    let mask: Vec<VarSign> = (0..n)
        .map(|_| if allow_free && rng.random_bool(0.25) { VarSign::Free } else { VarSign::NonNegative })
        .collect();
    let x0 = DVector::from_fn(n, |j, _| match mask[j] {
        VarSign::Free => rng.random_range(-1.0..1.0),
        VarSign::NonNegative => rng.random_range(0.0..1.0),
    });
    let p = &g * &x0 + DVector::from_fn(m, |_, _| rng.random_range(0.0..1.0));
    let d0 = DVector::from_fn(m, |_, _| rng.random_range(0.1..1.0));
    let gtd = g.transpose() * &d0;
    let c_max = DVector::from_fn(n, |j, _| match mask[j] {
        VarSign::Free => gtd[j],
        VarSign::NonNegative => gtd[j] - rng.random_range(0.0..0.5),
    });
    let (objective, sense) = if rng.random_bool(0.3) { (-c_max, Sense::Minimize) } else { (c_max, Sense::Maximize) };
    StandardFormLP::new(objective, g, p, sense, mask).unwrap()
}

/// The seeded corpus used across suites: 50 random LPs with 2–10 variables
/// and up to 20 constraints.
pub fn random_corpus() -> Vec<StandardFormLP> {
    (0..50u64)
        .map(|s| {
            let n = 2 + (s as usize % 9);
            let m = (n + 1 + (s as usize * 7) % 11).min(20);
            random_lp(1000 + s, n, m, s % 3 == 0)
        })
        .collect()
}

/// MCM training sets with `M ≤ 30`, already min-max scaled.
pub fn mcm_datasets() -> Vec<Dataset> {
    let mut out = Vec::new();
    for s in 0..5u64 {
        let m = 10 + 4 * s as usize;
        out.push(make_synthetic(SyntheticKind::SeparableBlobs, m, s).unwrap().scaled(ScalingKind::MinMax));
        out.push(make_synthetic(SyntheticKind::GaussianOverlap, m + 2, 100 + s).unwrap().scaled(ScalingKind::MinMax));
    }
    out
}

pub fn mcm_corpus() -> Vec<StandardFormLP> {
    mcm_datasets()
        .iter()
        .enumerate()
        .map(|(i, d)| build_linear_mcm(d, [0.5, 1.0, 4.0][i % 3]).unwrap())
        .collect()
}

fn combinations(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f);
}

/// Optimal value (in the LP's own sense) by brute-force vertex enumeration:
/// every choice of `n` tight constraints among the rows of `G` and the sign
/// bounds is solved and the best feasible point kept. Assumes the optimum is
/// attained at a vertex, which holds when the feasible set has one.
pub fn vertex_enumeration(lp: &StandardFormLP) -> Option<f64> {
    let n = lp.n_vars();
    let g = lp.constraint_matrix();
    let p = lp.rhs();
    let mut rows: Vec<(Vec<f64>, f64)> = (0..lp.n_cons()).map(|i| (g.row(i).iter().copied().collect(), p[i])).collect();
    for (j, s) in lp.sign_mask().iter().enumerate() {
        if s.is_nonnegative() {
            let mut r = vec![0.0; n];
            r[j] = -1.0;
            rows.push((r, 0.0));
        }
    }
    let c = lp.max_objective();
    let mut best: Option<f64> = None;
    combinations(rows.len(), n, &mut |idx| {
        let a = DMatrix::from_fn(n, n, |i, j| rows[idx[i]].0[j]);
        let b = DVector::from_fn(n, |i, _| rows[idx[i]].1);
        let Some(x) = a.lu().solve(&b) else { return };
        if !x.iter().all(|v| v.is_finite()) {
            return;
        }
        let feasible = rows.iter().all(|(r, rhs)| r.iter().zip(x.iter()).map(|(a, b)| a * b).sum::<f64>() <= rhs + 1e-9);
        if feasible {
            let v = c.dot(&x);
            if best.is_none_or(|b| v > b) {
                best = Some(v);
            }
        }
    });
    best.map(|v| lp.from_max_value(v))
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}
