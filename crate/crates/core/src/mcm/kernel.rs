use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum KernelSpec {
    /// `xᵀy`
    Linear,
    /// `exp(−gamma·‖x − y‖²)`
    Rbf { gamma: f64 },
    /// `(xᵀy + coef0)^degree`
    Polynomial { degree: u32, coef0: f64 },
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::Linear => Ok(()),
            KernelSpec::Rbf { gamma } if gamma > 0.0 && gamma.is_finite() => Ok(()),
            KernelSpec::Rbf { gamma } => Err(Error::InvalidArgument(format!("rbf gamma must be positive, got {gamma}"))),
            KernelSpec::Polynomial { degree, coef0 } if degree >= 1 && coef0.is_finite() => Ok(()),
            KernelSpec::Polynomial { degree, .. } => {
                Err(Error::InvalidArgument(format!("polynomial degree must be at least 1, got {degree}")))
            }
        }
    }

    /// Same kernel with a different RBF width; other kinds are returned unchanged.
    pub fn with_gamma(self, gamma: f64) -> Self {
        match self {
            KernelSpec::Rbf { .. } => KernelSpec::Rbf { gamma },
            other => other,
        }
    }

    pub fn eval<'a, I>(&self, x: I, y: I) -> f64
    where
        I: IntoIterator<Item = &'a f64>,
    {
        match *self {
            KernelSpec::Linear => x.into_iter().zip(y).map(|(a, b)| a * b).sum(),
            KernelSpec::Rbf { gamma } => {
                let d2: f64 = x.into_iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
                (-gamma * d2).exp()
            }
            KernelSpec::Polynomial { degree, coef0 } => {
                let dot: f64 = x.into_iter().zip(y).map(|(a, b)| a * b).sum();
                (dot + coef0).powi(degree as i32)
            }
        }
    }

    /// Gram matrix over the rows of `points`; symmetric by construction.
    pub fn gram(&self, points: &DMatrix<f64>) -> DMatrix<f64> {
        let m = points.nrows();
        let rows: Vec<Vec<f64>> = (0..m).map(|i| points.row(i).iter().copied().collect()).collect();
        let mut k = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let v = self.eval(&rows[i], &rows[j]);
                k[(i, j)] = v;
                k[(j, i)] = v;
            }
        }
        k
    }
}
