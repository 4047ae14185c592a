use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CvPlan {
    pub n_folds: usize,
    pub seed: u64,
    /// Fold index of every sample.
    pub fold_assignment: Vec<usize>,
    /// False when a class had fewer samples than folds and the split fell
    /// back to an unstratified shuffle.
    pub stratified: bool,
}

impl CvPlan {
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.fold_assignment.len()).filter(|&i| self.fold_assignment[i] == fold).collect()
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.fold_assignment.len()).filter(|&i| self.fold_assignment[i] != fold).collect()
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n_folds];
        for &f in &self.fold_assignment {
            sizes[f] += 1;
        }
        sizes
    }
}

/// Seeded, label-stratified k-fold split.
///
/// Each class is shuffled, positives then negatives are concatenated and
/// dealt round-robin, so fold sizes differ by at most one and each fold's
/// class counts are within one of the global ratio.
pub fn split_cv(dataset: &Dataset, n_folds: usize, seed: u64) -> Result<CvPlan> {
    let m = dataset.n_samples();
    if n_folds < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 folds, got {n_folds}")));
    }
    if m < n_folds {
        return Err(Error::InvalidArgument(format!("{m} samples cannot fill {n_folds} folds")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (pos, neg) = dataset.class_counts();
    let stratified = pos >= n_folds && neg >= n_folds;

    let order: Vec<usize> = if stratified {
        let mut p: Vec<usize> = (0..m).filter(|&i| dataset.labels()[i] == 1).collect();
        let mut n: Vec<usize> = (0..m).filter(|&i| dataset.labels()[i] == -1).collect();
        p.shuffle(&mut rng);
        n.shuffle(&mut rng);
        p.into_iter().chain(n).collect()
    } else {
        let mut all: Vec<usize> = (0..m).collect();
        all.shuffle(&mut rng);
        all
    };
    let mut fold_assignment = vec![0; m];
    for (pos, &i) in order.iter().enumerate() {
        fold_assignment[i] = pos % n_folds;
    }
    Ok(CvPlan {
        n_folds,
        seed,
        fold_assignment,
        stratified,
    })
}
