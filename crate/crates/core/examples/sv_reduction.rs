//! Counts support vectors of a kernel MCM against a linear MCM on the same
//! folds and reports the relative reduction.
//!
//! ```text
//! cargo run --release --example sv_reduction
//! ```

use std::path::PathBuf;

use mcm_dynamics::bench::{kernel_reference, run_cv, sv_reduction, sv_reduction_from_means, CvOptions, GridSpec, Mode, Solver};
use mcm_dynamics::data::{load_csv, split_cv, CsvOptions, LabelColumn};
use mcm_dynamics::mcm::KernelSpec;

fn main() -> mcm_dynamics::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join("fertility.csv");
    let d = load_csv(path, &CsvOptions::new(LabelColumn::Last, "O"))?;
    let plan = split_cv(&d, 5, 0)?;
    let options = CvOptions { solver: Solver::Oracle, ..Default::default() };
    let grid = GridSpec::default();

    let kernel = run_cv(&d, Mode::Kernel(KernelSpec::Rbf { gamma: 1.0 }), &grid, &plan, &options)?;
    let linear = run_cv(&d, Mode::Linear, &grid, &plan, &options)?;
    println!("rbf MCM:    {:.2}% accuracy, {:.2} ± {:.2} support vectors", kernel.accuracy_mean, kernel.sv_mean, kernel.sv_std);
    println!("linear MCM: {:.2}% accuracy, {:.2} ± {:.2} support vectors", linear.accuracy_mean, linear.sv_mean, linear.sv_std);
    println!("reduction: {:.1}%", sv_reduction(&kernel, &linear)?);

    if let Some(r) = kernel_reference("Fertility Diagnosis") {
        println!(
            "published: MCM {:.2} vs SVM {:.2} support vectors, reduction {:.1}%",
            r.mcm_svs.mean,
            r.svm_svs.mean,
            sv_reduction_from_means(r.mcm_svs.mean, r.svm_svs.mean)?
        );
    }
    Ok(())
}
