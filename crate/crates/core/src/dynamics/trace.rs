use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::DynamicsState;
use crate::error::{Error, Result};

/// Which primal components to record, and the names used in CSV headers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSpec {
    pub indices: Vec<usize>,
    pub names: Vec<String>,
}

impl TraceSpec {
    /// Every component, named `x1..xn`.
    pub fn all(n: usize) -> Self {
        Self {
            indices: (0..n).collect(),
            names: (1..=n).map(|i| format!("x{i}")).collect(),
        }
    }

    pub fn new(indices: Vec<usize>, names: Vec<String>) -> Self {
        Self { indices, names }
    }

    pub(crate) fn validate(&self, n_vars: usize) -> Result<()> {
        if self.indices.len() != self.names.len() {
            return Err(Error::DimensionMismatch {
                context: "trace names vs indices",
                expected: self.indices.len(),
                found: self.names.len(),
            });
        }
        if let Some(&bad) = self.indices.iter().find(|&&i| i >= n_vars) {
            return Err(Error::InvalidArgument(format!("trace index {bad} out of range for {n_vars} variables")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTrace {
    pub names: Vec<String>,
    pub times: Vec<f64>,
    /// `values[c][s]`: component `c` at sample `s`.
    pub values: Vec<Vec<f64>>,
    /// Projected time derivatives of the same components.
    pub derivatives: Vec<Vec<f64>>,
    /// `(‖dX‖∞, ‖dZ‖∞)` per sample.
    pub derivative_inf_norms: Vec<(f64, f64)>,
    /// `|pᵀZ − cᵀX|` per sample.
    pub duality_gaps: Vec<f64>,
}

impl ConvergenceTrace {
    pub(crate) fn new(spec: &TraceSpec) -> Self {
        Self {
            names: spec.names.clone(),
            values: vec![Vec::new(); spec.indices.len()],
            derivatives: vec![Vec::new(); spec.indices.len()],
            ..Default::default()
        }
    }

    pub(crate) fn record(&mut self, spec: &TraceSpec, state: &DynamicsState, gap: f64) {
        self.times.push(state.t);
        for (c, &i) in spec.indices.iter().enumerate() {
            self.values[c].push(state.x[i]);
            self.derivatives[c].push(state.dx[i]);
        }
        self.derivative_inf_norms.push(state.derivative_norms());
        self.duality_gaps.push(gap);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn component(&self, name: &str) -> Option<&[f64]> {
        self.names.iter().position(|n| n == name).map(|c| self.values[c].as_slice())
    }

    /// `max − min` of a component over the trailing `fraction` of samples.
    pub fn tail_range(&self, name: &str, fraction: f64) -> Option<f64> {
        let v = self.component(name)?;
        let start = ((1.0 - fraction) * v.len() as f64).floor() as usize;
        let tail = &v[start.min(v.len().saturating_sub(1))..];
        let lo = tail.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Some(hi - lo)
    }

    /// CSV with header `t,<name>...,d<name>...,dX_inf,dZ_inf,gap`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for n in &self.names {
            write!(out, ",{n}").unwrap();
        }
        for n in &self.names {
            write!(out, ",d{n}").unwrap();
        }
        out.push_str(",dX_inf,dZ_inf,gap\n");
        for s in 0..self.len() {
            write!(out, "{:.16e}", self.times[s]).unwrap();
            for col in self.values.iter().chain(&self.derivatives) {
                write!(out, ",{:.16e}", col[s]).unwrap();
            }
            let (nx, nz) = self.derivative_inf_norms[s];
            writeln!(out, ",{nx:.16e},{nz:.16e},{:.16e}", self.duality_gaps[s]).unwrap();
        }
        out
    }
}
