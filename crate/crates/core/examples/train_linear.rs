//! Trains a linear MCM on overlapping Gaussians with both backends and
//! evaluates on a held-out sample.
//!
//! ```text
//! cargo run --release --example train_linear
//! ```

use mcm_dynamics::data::{make_synthetic, SyntheticKind};
use mcm_dynamics::dynamics::DynamicsConfig;
use mcm_dynamics::mcm::{support_vectors, train, Backend, KPolicy, McmModel, TrainConfig};

fn main() -> mcm_dynamics::Result<()> {
    let train_set = make_synthetic(SyntheticKind::GaussianOverlap, 80, 1)?;
    let test_set = make_synthetic(SyntheticKind::GaussianOverlap, 200, 2)?;

    let dynamics = Backend::Dynamics {
        config: DynamicsConfig { step_size: 0.5, max_time: 5e4, ..Default::default() },
        k_policy: KPolicy::default(),
    };
    for backend in [Backend::Oracle, dynamics] {
        let name = backend.name();
        let out = train(&train_set, &TrainConfig::linear(1.0).with_backend(backend))?;
        let McmModel::Linear(m) = &out.model else { unreachable!() };
        let svs = support_vectors(&out.model, &train_set, 1e-4)?;
        println!(
            "{name:>8}: w = [{:.4}, {:.4}]  b = {:.4}  h = {:.4}  objective {:.6}  SVs {}  train {:.1}%  test {:.1}%",
            m.w[0],
            m.w[1],
            m.b,
            m.h,
            out.objective,
            svs.len(),
            out.model.accuracy(&train_set)?,
            out.model.accuracy(&test_set)?
        );
    }

    let model = train(&train_set, &TrainConfig::linear(1.0))?.model;
    let p = model.predict(&[0.8, -0.3])?;
    println!("predict([0.8, -0.3]) = {:+} (margin {:.4})", p.label, p.margin);
    Ok(())
}
