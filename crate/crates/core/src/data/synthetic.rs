use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SyntheticKind {
    /// Two uniform squares of half-width 1.5 centred at (2, 2) and (−2, −2).
    /// Every sample satisfies `y·(x₁ + x₂) ≥ 1`.
    SeparableBlobs,
    /// Unit-variance normals centred at (1, 0) and (−1, 0).
    GaussianOverlap,
}

/// Two-dimensional toy data with `m/2` samples per class, positives first.
pub fn make_synthetic(kind: SyntheticKind, m: usize, seed: u64) -> Result<Dataset> {
    if m < 4 || m % 2 != 0 {
        return Err(Error::InvalidArgument(format!("synthetic sample count must be even and at least 4, got {m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = m / 2;
    let mut features = DMatrix::zeros(m, 2);
    let mut labels = Vec::with_capacity(m);
    for i in 0..m {
        let y: i8 = if i < half { 1 } else { -1 };
        let s = f64::from(y);
        let (a, b) = match kind {
            SyntheticKind::SeparableBlobs => (
                2.0 * s + rng.random_range(-1.5..1.5),
                2.0 * s + rng.random_range(-1.5..1.5),
            ),
            SyntheticKind::GaussianOverlap => {
                let n = Normal::new(0.0, 1.0).expect("unit normal");
                (s + n.sample(&mut rng), n.sample(&mut rng))
            }
        };
        features[(i, 0)] = a;
        features[(i, 1)] = b;
        labels.push(y);
    }
    let name = match kind {
        SyntheticKind::SeparableBlobs => "separable-blobs",
        SyntheticKind::GaussianOverlap => "gaussian-overlap",
    };
    Dataset::new(name, features, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_from_seed() {
        let a = make_synthetic(SyntheticKind::GaussianOverlap, 200, 7).unwrap();
        let b = make_synthetic(SyntheticKind::GaussianOverlap, 200, 7).unwrap();
        assert_eq!(a, b);
        let c = make_synthetic(SyntheticKind::GaussianOverlap, 200, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn blobs_have_positive_margin() {
        let d = make_synthetic(SyntheticKind::SeparableBlobs, 50, 3).unwrap();
        assert_eq!(d.class_counts(), (25, 25));
        for i in 0..d.n_samples() {
            let r = d.row(i);
            assert!(d.label(i) * (r[0] + r[1]) >= 1.0);
        }
    }

    #[test]
    fn rejects_odd_or_tiny() {
        assert!(make_synthetic(SyntheticKind::SeparableBlobs, 5, 0).is_err());
        assert!(make_synthetic(SyntheticKind::SeparableBlobs, 2, 0).is_err());
    }
}
