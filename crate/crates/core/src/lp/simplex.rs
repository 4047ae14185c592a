//! Dense two-phase tableau simplex.
//!
//! Entering columns are chosen by largest reduced cost (lowest index on
//! ties). After a run of degenerate pivots the right-hand side is shifted by
//! a small positive amount, the perturbed problem is solved, and the shift is
//! removed again with dual simplex pivots. If perturbation is exhausted the
//! rule falls back to Bland's lowest-index choice.
//!
//! Free variables are split as `v = v⁺ − v⁻`. Rows with a negative right-hand
//! side are negated and given an artificial variable; phase one minimizes the
//! sum of artificials. When the optimal face is not a single point the first
//! vertex reached is returned.

use nalgebra::{DMatrix, DVector};

use super::StandardFormLP;
use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-11;
const COST_EPS: f64 = 1e-10;
const FEAS_EPS: f64 = 1e-9;
const DEGENERATE_RUN: usize = 50;
const REINVERT_EVERY: usize = 100;
const ZERO_SNAP: f64 = 1e-12;
const RATIO_TIE: f64 = 1e-11;
/// Relative size of the right-hand-side shift applied to escape a degenerate vertex.
const PERTURBATION: f64 = 1e-7;
const MAX_PERTURBATIONS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub primal: DVector<f64>,
    /// Nonnegative multipliers of `Gθ ≤ p` for the maximization-sense problem.
    pub dual: DVector<f64>,
    /// Optimal value in the problem's own sense.
    pub objective: f64,
}

struct Tableau {
    rows: usize,
    cols: usize,
    // row-major, `cols + 1` entries per row, last entry is the rhs
    data: Vec<f64>,
    basis: Vec<usize>,
    original: Vec<f64>,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * (self.cols + 1) + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.data[r * (self.cols + 1) + self.cols]
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.cols + 1;
        let piv = self.data[pr * w + pc];
        for v in &mut self.data[pr * w..(pr + 1) * w] {
            *v /= piv;
        }
        let pivot_row: Vec<f64> = self.data[pr * w..(pr + 1) * w].to_vec();
        for r in 0..self.rows {
            if r == pr {
                continue;
            }
            let f = self.data[r * w + pc];
            if f != 0.0 {
                let row = &mut self.data[r * w..(r + 1) * w];
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[pc] = 0.0;
            }
        }
        self.basis[pr] = pc;
    }

    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut rc = cost.to_vec();
        for r in 0..self.rows {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                for (c, v) in rc.iter_mut().enumerate() {
                    *v -= cb * self.at(r, c);
                }
            }
        }
        rc
    }

    /// Recomputes the tableau as `B⁻¹·[A | b]` from the original data to shed
    /// accumulated rounding error. Leaves it untouched if `B` is singular.
    fn reinvert(&mut self) {
        let w = self.cols + 1;
        let a = DMatrix::from_row_slice(self.rows, w, &self.original);
        let b = DMatrix::from_fn(self.rows, self.rows, |i, j| a[(i, self.basis[j])]);
        let Some(fresh) = b.lu().solve(&a) else {
            return;
        };
        for r in 0..self.rows {
            for c in 0..w {
                self.data[r * w + c] = fresh[(r, c)];
            }
        }
        for (r, &bc) in self.basis.iter().enumerate() {
            for q in 0..self.rows {
                self.data[q * w + bc] = if q == r { 1.0 } else { 0.0 };
            }
        }
    }

    /// Adds a small positive amount to every basic value. The shift is
    /// written back into the original right-hand side as `b + B·δ` so that
    /// reinversion keeps it.
    fn perturb(&mut self) {
        let w = self.cols + 1;
        let scale = (0..self.rows).fold(1.0f64, |a, r| a.max(self.original[r * w + self.cols].abs()));
        let delta: Vec<f64> = (0..self.rows)
            .map(|r| PERTURBATION * scale * (0.5 + 0.5 * (r as f64 * 0.618_033_988_75).fract()))
            .collect();
        for q in 0..self.rows {
            let shift: f64 = (0..self.rows).map(|r| self.original[q * w + self.basis[r]] * delta[r]).sum();
            self.original[q * w + self.cols] += shift;
        }
        for (r, d) in delta.iter().enumerate() {
            self.data[r * w + self.cols] += d;
        }
    }

    /// Restores the saved right-hand side, reinverts and repairs any primal
    /// infeasibility with dual simplex pivots. The basis stays dual feasible
    /// throughout.
    fn unperturb(&mut self, rhs: &[f64], cost: &[f64], allowed: &impl Fn(usize) -> bool, limit: usize) -> Result<()> {
        let w = self.cols + 1;
        for (r, v) in rhs.iter().enumerate() {
            self.original[r * w + self.cols] = *v;
        }
        self.reinvert();
        for _ in 0..limit {
            let Some(leave) = (0..self.rows).filter(|&r| self.rhs(r) < -FEAS_EPS).min_by(|&a, &b| self.rhs(a).total_cmp(&self.rhs(b)))
            else {
                return Ok(());
            };
            let rc = self.reduced_costs(cost);
            let enter = (0..self.cols)
                .filter(|&c| allowed(c) && self.at(leave, c) < -PIVOT_EPS)
                .min_by(|&a, &b| (rc[a] / self.at(leave, a)).total_cmp(&(rc[b] / self.at(leave, b))));
            let Some(enter) = enter else {
                return Err(Error::Undefined("lost feasibility while removing the degeneracy perturbation".into()));
            };
            self.pivot(leave, enter);
        }
        Err(Error::Undefined(format!("dual simplex cleanup did not terminate within {limit} pivots")))
    }

    /// Maximizes `costᵀx` over the columns allowed by `allowed`. Returns
    /// `Ok(Some(col))` with the entering column of an unbounded direction.
    fn optimize(&mut self, cost: &[f64], allowed: impl Fn(usize) -> bool) -> Result<Option<usize>> {
        let limit = 50 * (self.rows + self.cols) + 1000;
        let w = self.cols + 1;
        let mut saved_rhs: Option<Vec<f64>> = None;
        let mut perturbations = 0usize;
        let mut degenerate = 0usize;
        let mut since_reinvert = 0usize;
        for _ in 0..limit {
            if since_reinvert >= REINVERT_EVERY {
                self.reinvert();
                since_reinvert = 0;
            }
            if degenerate >= DEGENERATE_RUN && saved_rhs.is_none() && perturbations < MAX_PERTURBATIONS {
                saved_rhs = Some((0..self.rows).map(|r| self.original[r * w + self.cols]).collect());
                perturbations += 1;
                self.perturb();
                degenerate = 0;
            }
            let bland = degenerate >= DEGENERATE_RUN;
            let rc = self.reduced_costs(cost);
            let candidates = (0..self.cols).filter(|&c| allowed(c) && rc[c] > COST_EPS);
            let enter = if bland {
                candidates.min()
            } else {
                candidates.fold(None, |best: Option<usize>, c| match best {
                    Some(b) if rc[b] >= rc[c] => Some(b),
                    _ => Some(c),
                })
            };
            let Some(enter) = enter else {
                if let Some(rhs) = saved_rhs.take() {
                    self.unperturb(&rhs, cost, &allowed, limit)?;
                    since_reinvert = 0;
                    degenerate = 0;
                    continue;
                }
                if since_reinvert == 0 {
                    return Ok(None);
                }
                // confirm optimality on a freshly computed tableau
                self.reinvert();
                since_reinvert = 0;
                continue;
            };
            let ratio = |r: usize| self.rhs(r).max(0.0) / self.at(r, enter);
            let eligible: Vec<usize> = (0..self.rows).filter(|&r| self.at(r, enter) > PIVOT_EPS).collect();
            let Some(min_ratio) = eligible.iter().map(|&r| ratio(r)).min_by(f64::total_cmp) else {
                if saved_rhs.is_some() {
                    // a ray of the perturbed problem is a ray of the original one
                    let rhs = saved_rhs.take().expect("checked");
                    let w = self.cols + 1;
                    for (r, v) in rhs.iter().enumerate() {
                        self.original[r * w + self.cols] = *v;
                    }
                    self.reinvert();
                }
                return Ok(Some(enter));
            };
            let ties = eligible.into_iter().filter(|&r| ratio(r) <= min_ratio + RATIO_TIE * (1.0 + min_ratio));
            let leave = if bland {
                ties.min_by_key(|&r| self.basis[r])
            } else {
                ties.max_by(|&a, &b| self.at(a, enter).total_cmp(&self.at(b, enter)).then(b.cmp(&a)))
            }
            .expect("nonempty tie set");
            if min_ratio <= 1e-12 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(leave, enter);
            since_reinvert += 1;
        }
        Err(Error::Undefined(format!("simplex did not terminate within {limit} pivots")))
    }

    /// `πᵀ = c_Bᵀ B⁻¹`, read off the columns that formed the initial identity basis.
    fn multipliers(&self, cost: &[f64], init_cols: &[usize]) -> Vec<f64> {
        init_cols
            .iter()
            .map(|&ic| {
                (0..self.rows)
                    .map(|r| cost[self.basis[r]] * self.at(r, ic))
                    .sum()
            })
            .collect()
    }
}

/// Solves a small dense LP exactly (up to floating point) with the simplex
/// method. Intended as a reference for certifying other solvers.
pub fn solve_reference(lp: &StandardFormLP) -> Result<LpSolution> {
    let n = lp.n_vars();
    let m = lp.n_cons();
    let c = lp.max_objective();
    let g = lp.constraint_matrix();
    let p = lp.rhs();

    // structural columns: one per variable plus one extra per free variable
    let mut col_of: Vec<(usize, f64)> = Vec::new();
    for j in 0..n {
        col_of.push((j, 1.0));
    }
    for (j, s) in lp.sign_mask().iter().enumerate() {
        if !s.is_nonnegative() {
            col_of.push((j, -1.0));
        }
    }
    let ns = col_of.len();
    let sigma: Vec<f64> = (0..m).map(|i| if p[i] < 0.0 { -1.0 } else { 1.0 }).collect();
    let art_rows: Vec<usize> = (0..m).filter(|&i| sigma[i] < 0.0).collect();
    let n_art = art_rows.len();
    let cols = ns + m + n_art;

    let w = cols + 1;
    let mut data = vec![0.0; m * w];
    let mut basis = vec![0; m];
    let mut init_cols = vec![0; m];
    for i in 0..m {
        for (k, &(j, sgn)) in col_of.iter().enumerate() {
            data[i * w + k] = sigma[i] * sgn * g[(i, j)];
        }
        data[i * w + ns + i] = sigma[i];
        data[i * w + cols] = sigma[i] * p[i];
        basis[i] = ns + i;
        init_cols[i] = ns + i;
    }
    for (a, &i) in art_rows.iter().enumerate() {
        data[i * w + ns + m + a] = 1.0;
        basis[i] = ns + m + a;
        init_cols[i] = ns + m + a;
    }
    let mut t = Tableau {
        rows: m,
        cols,
        original: data.clone(),
        data,
        basis,
    };
    let is_art = |col: usize| col >= ns + m;

    if n_art > 0 {
        let mut cost1 = vec![0.0; cols];
        for v in &mut cost1[ns + m..] {
            *v = -1.0;
        }
        // phase one is bounded above by zero, so no ray can appear
        t.optimize(&cost1, |_| true)?;
        let value: f64 = (0..m).map(|r| cost1[t.basis[r]] * t.rhs(r)).sum();
        if value < -FEAS_EPS * (1.0 + p.amax()) {
            let pi = t.multipliers(&cost1, &init_cols);
            let witness = pi.iter().zip(&sigma).map(|(a, s)| a * s).collect();
            return Err(Error::Infeasible { witness });
        }
        // drive zero-level artificials out of the basis where possible
        for r in 0..m {
            if is_art(t.basis[r]) {
                if let Some(col) = (0..ns + m).find(|&col| t.at(r, col).abs() > 1e-9) {
                    t.pivot(r, col);
                }
            }
        }
    }

    let mut cost2 = vec![0.0; cols];
    for (k, &(j, sgn)) in col_of.iter().enumerate() {
        cost2[k] = sgn * c[j];
    }
    if let Some(enter) = t.optimize(&cost2, |col| !is_art(col))? {
        let mut dir = vec![0.0; cols];
        dir[enter] = 1.0;
        for r in 0..m {
            dir[t.basis[r]] = -t.at(r, enter);
        }
        let mut ray = vec![0.0; n];
        for (k, &(j, sgn)) in col_of.iter().enumerate() {
            ray[j] += sgn * dir[k];
        }
        return Err(Error::Unbounded { ray });
    }

    let mut values = vec![0.0; cols];
    for r in 0..m {
        values[t.basis[r]] = t.rhs(r);
    }
    snap_to_zero(&mut values);
    let mut primal = DVector::zeros(n);
    for (k, &(j, sgn)) in col_of.iter().enumerate() {
        primal[j] += sgn * values[k];
    }
    let pi = t.multipliers(&cost2, &init_cols);
    let mut dual: Vec<f64> = pi.iter().zip(&sigma).map(|(a, s)| (a * s).max(0.0)).collect();
    snap_to_zero(&mut dual);
    let dual = DVector::from_vec(dual);
    let objective = lp.objective_value(&primal);
    Ok(LpSolution {
        primal,
        dual,
        objective,
    })
}

/// Flushes round-off residue to an exact zero so bound-active entries sit
/// exactly on their bound.
fn snap_to_zero(v: &mut [f64]) {
    let scale = v.iter().fold(1.0f64, |a, x| a.max(x.abs()));
    for x in v.iter_mut() {
        if x.abs() <= ZERO_SNAP * scale {
            *x = 0.0;
        }
    }
}
