//! Five-fold grid search of a linear MCM on a bundled dataset, printed as a
//! markdown report next to the published reference numbers.
//!
//! ```text
//! cargo run --release --example cross_validation -- [haberman|fertility|hayes_roth]
//! ```

use std::path::PathBuf;

use mcm_dynamics::bench::{emit_report, run_cv, CvOptions, GridSpec, Mode, ReportFormat};
use mcm_dynamics::data::{load_csv, split_cv, CsvOptions, LabelColumn};

fn main() -> mcm_dynamics::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "fertility".into());
    let positive = match name.as_str() {
        "haberman" => "positive",
        "fertility" => "O",
        _ => "1",
    };
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(format!("{name}.csv"));
    let d = load_csv(path, &CsvOptions::new(LabelColumn::Last, positive))?;

    let plan = split_cv(&d, 5, 0)?;
    let options = CvOptions { jobs: 0, ..Default::default() };
    let result = run_cv(&d, Mode::Linear, &GridSpec::default(), &plan, &options)?;

    for g in &result.grid_results {
        println!("C = {:>8}: {:6.2} ± {:5.2}", g.c, g.accuracy_mean, g.accuracy_std);
    }
    println!();
    print!("{}", emit_report(&[result], ReportFormat::Markdown)?);
    Ok(())
}
