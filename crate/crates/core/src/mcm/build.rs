use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{KernelSpec, McmLayout};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::lp::{Sense, StandardFormLP, VarSign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct McmOptions {
    /// Put `+qᵢ` into the `h ≥ yᵢ f(xᵢ)` rows, i.e. `h ≥ yᵢ f(xᵢ) + qᵢ`.
    /// Off by default: the margin rows carry a zero slack block.
    pub slack_in_margin_rows: bool,
}

fn check_inputs(dataset: &Dataset, c: f64) -> Result<()> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!("C must be positive, got {c}")));
    }
    if dataset.n_samples() < 2 {
        return Err(Error::InvalidDataset(format!("{}: need at least 2 samples", dataset.name)));
    }
    dataset.require_both_classes()
}

/// Assembles the MCM LP around a per-sample weight block `Υ·B` where `B` is
/// `ψ` (linear) or the Gram matrix `K` (kernel).
fn assemble(dataset: &Dataset, block: &DMatrix<f64>, c: f64, layout: McmLayout, options: &McmOptions) -> Result<StandardFormLP> {
    let m = dataset.n_samples();
    let nv = layout.n_vars();
    let mut g = DMatrix::zeros(2 * m, nv);
    let mut p = DVector::zeros(2 * m);
    for i in 0..m {
        let y = dataset.label(i);
        for j in 0..layout.weights {
            g[(i, j)] = y * block[(i, j)];
            g[(m + i, j)] = -y * block[(i, j)];
        }
        g[(i, layout.b())] = y;
        g[(m + i, layout.b())] = -y;
        if options.slack_in_margin_rows {
            g[(i, layout.slack(i))] = 1.0;
        }
        g[(m + i, layout.slack(i))] = -1.0;
        g[(i, layout.h())] = -1.0;
        p[m + i] = -1.0;
    }
    let mut objective = DVector::zeros(nv);
    for i in 0..m {
        objective[layout.slack(i)] = c;
    }
    objective[layout.h()] = 1.0;
    let mask = (0..nv)
        .map(|j| if j <= layout.b() { VarSign::Free } else { VarSign::NonNegative })
        .collect();
    StandardFormLP::new(objective, g, p, Sense::Minimize, mask)
}

/// Linear MCM LP with layout `[w(n), b, q(M), h]`.
pub fn build_linear_mcm(dataset: &Dataset, c: f64) -> Result<StandardFormLP> {
    build_mcm(dataset, c, None, &McmOptions::default())
}

/// Kernel MCM LP with layout `[λ(M), b, q(M), h]`.
pub fn build_kernel_mcm(dataset: &Dataset, c: f64, kernel: KernelSpec) -> Result<StandardFormLP> {
    build_mcm(dataset, c, Some(kernel), &McmOptions::default())
}

pub fn build_mcm(dataset: &Dataset, c: f64, kernel: Option<KernelSpec>, options: &McmOptions) -> Result<StandardFormLP> {
    check_inputs(dataset, c)?;
    match kernel {
        None => {
            let layout = McmLayout::linear(dataset.n_features(), dataset.n_samples());
            assemble(dataset, dataset.features(), c, layout, options)
        }
        Some(k) => {
            k.validate()?;
            let gram = k.gram(dataset.features());
            assemble(dataset, &gram, c, McmLayout::kernel(dataset.n_samples()), options)
        }
    }
}
