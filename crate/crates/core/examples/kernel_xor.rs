//! XOR is not linearly separable; an RBF kernel MCM classifies it exactly.
//!
//! ```text
//! cargo run --example kernel_xor
//! ```

use mcm_dynamics::data::Dataset;
use mcm_dynamics::mcm::{support_vectors, train, KernelSpec, TrainConfig};

fn main() -> mcm_dynamics::Result<()> {
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (i, (x, y)) in [(0.0, 0.0), (1.0, 1.0), (0.0, 1.0), (1.0, 0.0)].into_iter().enumerate() {
        for j in 0..5 {
            let e = 0.03 * j as f64;
            rows.push(vec![x + e, y - e]);
            labels.push(if i < 2 { 1 } else { -1 });
        }
    }
    let d = Dataset::from_rows("xor", &rows, labels)?;

    let linear = train(&d, &TrainConfig::linear(10.0))?;
    println!("linear: training accuracy {:.1}%", linear.model.accuracy(&d)?);

    for gamma in [0.5, 2.0, 8.0] {
        let out = train(&d, &TrainConfig::kernel(10.0, KernelSpec::Rbf { gamma }))?;
        let svs = support_vectors(&out.model, &d, 1e-6)?;
        println!(
            "rbf gamma={gamma}: training accuracy {:.1}%  h = {:.4}  support points {:?}",
            out.model.accuracy(&d)?,
            out.model.h(),
            svs.indices
        );
    }
    Ok(())
}
