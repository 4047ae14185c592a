//! Standard-form linear programs, their duals, optimality checks and a
//! small dense simplex used as a reference solver.
//!
//! A [`StandardFormLP`] is `opt objᵀθ  s.t.  Gθ ≤ p` with a per-variable sign
//! flag. Internally every problem is handled in maximization sense; the
//! objective vector in that sense is [`StandardFormLP::max_objective`].

mod format;
mod kkt;
mod simplex;

pub use kkt::{check_kkt, KktReport};
pub use simplex::{solve_reference, LpSolution};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarSign {
    NonNegative,
    Free,
}

impl VarSign {
    pub fn is_nonnegative(self) -> bool {
        matches!(self, VarSign::NonNegative)
    }
}

/// `opt objectiveᵀθ  s.t.  constraint_matrix·θ ≤ rhs`, with `θᵢ ≥ 0` for
/// every variable flagged [`VarSign::NonNegative`].
#[derive(Debug, Clone, PartialEq)]
pub struct StandardFormLP {
    objective: DVector<f64>,
    constraint_matrix: DMatrix<f64>,
    rhs: DVector<f64>,
    sense: Sense,
    sign_mask: Vec<VarSign>,
}

impl StandardFormLP {
    pub fn new(
        objective: DVector<f64>,
        constraint_matrix: DMatrix<f64>,
        rhs: DVector<f64>,
        sense: Sense,
        sign_mask: Vec<VarSign>,
    ) -> Result<Self> {
        let n = objective.len();
        if constraint_matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                context: "constraint matrix columns vs objective length",
                expected: n,
                found: constraint_matrix.ncols(),
            });
        }
        if constraint_matrix.nrows() != rhs.len() {
            return Err(Error::DimensionMismatch {
                context: "constraint matrix rows vs rhs length",
                expected: rhs.len(),
                found: constraint_matrix.nrows(),
            });
        }
        if sign_mask.len() != n {
            return Err(Error::DimensionMismatch {
                context: "sign mask length vs objective length",
                expected: n,
                found: sign_mask.len(),
            });
        }
        if !objective.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("objective"));
        }
        if !constraint_matrix.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("constraint matrix"));
        }
        if !rhs.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("rhs"));
        }
        Ok(Self {
            objective,
            constraint_matrix,
            rhs,
            sense,
            sign_mask,
        })
    }

    /// Convenience constructor from row-major slices; every variable nonnegative.
    pub fn from_rows(objective: &[f64], rows: &[&[f64]], rhs: &[f64], sense: Sense) -> Result<Self> {
        let n = objective.len();
        let m = rows.len();
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    context: "constraint row length",
                    expected: n,
                    found: row.len(),
                });
            }
        }
        let g = DMatrix::from_fn(m, n, |i, j| rows[i][j]);
        Self::new(
            DVector::from_column_slice(objective),
            g,
            DVector::from_column_slice(rhs),
            sense,
            vec![VarSign::NonNegative; n],
        )
    }

    pub fn with_sign_mask(self, sign_mask: Vec<VarSign>) -> Result<Self> {
        Self::new(
            self.objective,
            self.constraint_matrix,
            self.rhs,
            self.sense,
            sign_mask,
        )
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn n_cons(&self) -> usize {
        self.rhs.len()
    }

    pub fn objective(&self) -> &DVector<f64> {
        &self.objective
    }

    pub fn constraint_matrix(&self) -> &DMatrix<f64> {
        &self.constraint_matrix
    }

    pub fn rhs(&self) -> &DVector<f64> {
        &self.rhs
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn sign_mask(&self) -> &[VarSign] {
        &self.sign_mask
    }

    /// Objective vector of the equivalent maximization problem.
    pub fn max_objective(&self) -> DVector<f64> {
        match self.sense {
            Sense::Maximize => self.objective.clone(),
            Sense::Minimize => -&self.objective,
        }
    }

    /// Objective value of `x` in the problem's own sense.
    pub fn objective_value(&self, x: &DVector<f64>) -> f64 {
        self.objective.dot(x)
    }

    /// Converts a value of the maximization-sense problem back to this
    /// problem's sense.
    pub fn from_max_value(&self, v: f64) -> f64 {
        match self.sense {
            Sense::Maximize => v,
            Sense::Minimize => -v,
        }
    }

    pub(crate) fn check_primal_len(&self, len: usize) -> Result<()> {
        if len != self.n_vars() {
            return Err(Error::DimensionMismatch {
                context: "primal point length",
                expected: self.n_vars(),
                found: len,
            });
        }
        Ok(())
    }

    pub(crate) fn check_dual_len(&self, len: usize) -> Result<()> {
        if len != self.n_cons() {
            return Err(Error::DimensionMismatch {
                context: "dual point length",
                expected: self.n_cons(),
                found: len,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowKind {
    GreaterEq,
    Equal,
}

/// Dual of a [`StandardFormLP`].
///
/// For a maximization primal the dual is `min pᵀδ  s.t.  Gᵀδ ≥ q, δ ≥ 0`,
/// with equality rows for the primal's free variables. A minimization primal
/// `min cᵀθ` is dualized as `max (−p)ᵀδ  s.t.  Gᵀδ ≥ −c, δ ≥ 0`, so that the
/// dual optimum always equals the primal optimum.
#[derive(Debug, Clone, PartialEq)]
pub struct DualLP {
    pub objective: DVector<f64>,
    pub constraint_matrix: DMatrix<f64>,
    pub rhs: DVector<f64>,
    pub sense: Sense,
    pub row_kinds: Vec<RowKind>,
}

impl DualLP {
    /// Rewrites the dual as a standard-form problem: `≥` rows are negated and
    /// equality rows become a pair of opposite inequalities.
    pub fn to_standard_form(&self) -> Result<StandardFormLP> {
        let n = self.constraint_matrix.ncols();
        let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
        for (i, kind) in self.row_kinds.iter().enumerate() {
            let row: Vec<f64> = self.constraint_matrix.row(i).iter().copied().collect();
            rows.push((row.iter().map(|v| -v).collect(), -self.rhs[i]));
            if *kind == RowKind::Equal {
                rows.push((row, self.rhs[i]));
            }
        }
        let g = DMatrix::from_fn(rows.len(), n, |i, j| rows[i].0[j]);
        let p = DVector::from_iterator(rows.len(), rows.iter().map(|r| r.1));
        StandardFormLP::new(
            self.objective.clone(),
            g,
            p,
            self.sense,
            vec![VarSign::NonNegative; n],
        )
    }
}

pub fn dualize(lp: &StandardFormLP) -> DualLP {
    let gt = lp.constraint_matrix.transpose();
    let row_kinds = lp
        .sign_mask
        .iter()
        .map(|s| match s {
            VarSign::NonNegative => RowKind::GreaterEq,
            VarSign::Free => RowKind::Equal,
        })
        .collect();
    match lp.sense {
        Sense::Maximize => DualLP {
            objective: lp.rhs.clone(),
            constraint_matrix: gt,
            rhs: lp.objective.clone(),
            sense: Sense::Minimize,
            row_kinds,
        },
        Sense::Minimize => DualLP {
            objective: -&lp.rhs,
            constraint_matrix: gt,
            rhs: -&lp.objective,
            sense: Sense::Maximize,
            row_kinds,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_variable_dual() {
        let lp = StandardFormLP::from_rows(&[1.0], &[&[1.0]], &[1.0], Sense::Maximize).unwrap();
        let d = dualize(&lp);
        assert_eq!(d.sense, Sense::Minimize);
        assert_eq!(d.objective.as_slice(), &[1.0]);
        assert_eq!(d.constraint_matrix[(0, 0)], 1.0);
        assert_eq!(d.rhs.as_slice(), &[1.0]);
        assert_eq!(d.row_kinds, vec![RowKind::GreaterEq]);
    }

    #[test]
    fn identity_dual() {
        let lp = StandardFormLP::from_rows(
            &[1.0, 1.0],
            &[&[1.0, 0.0], &[0.0, 1.0]],
            &[1.0, 1.0],
            Sense::Maximize,
        )
        .unwrap();
        let d = dualize(&lp);
        assert_eq!(d.objective.as_slice(), &[1.0, 1.0]);
        assert_eq!(d.constraint_matrix, DMatrix::identity(2, 2));
        assert_eq!(d.rhs.as_slice(), &[1.0, 1.0]);
    }

    #[test]
    fn free_variable_gives_equality_row() {
        let lp = StandardFormLP::from_rows(&[1.0, 0.0], &[&[1.0, 1.0]], &[2.0], Sense::Maximize)
            .unwrap()
            .with_sign_mask(vec![VarSign::Free, VarSign::NonNegative])
            .unwrap();
        let d = dualize(&lp);
        assert_eq!(d.row_kinds, vec![RowKind::Equal, RowKind::GreaterEq]);
        let sf = d.to_standard_form().unwrap();
        assert_eq!(sf.n_cons(), 3);
    }

    #[test]
    fn rejects_bad_shapes() {
        let err = StandardFormLP::new(
            DVector::from_vec(vec![1.0, 2.0]),
            DMatrix::zeros(3, 2),
            DVector::zeros(2),
            Sense::Maximize,
            vec![VarSign::NonNegative; 2],
        );
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
        let err = StandardFormLP::new(
            DVector::from_vec(vec![1.0, 2.0]),
            DMatrix::zeros(1, 2),
            DVector::zeros(1),
            Sense::Maximize,
            vec![VarSign::NonNegative; 3],
        );
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
        let err = StandardFormLP::from_rows(&[f64::NAN], &[&[1.0]], &[1.0], Sense::Maximize);
        assert!(matches!(err, Err(Error::NonFinite(_))));
    }
}
