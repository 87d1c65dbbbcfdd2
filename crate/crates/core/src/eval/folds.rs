//! Seeded stratified k-fold splitting.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Splits indices into `k` disjoint test folds, stratified by label: the
/// per-class counts across folds differ by at most one, and overall fold
/// sizes are balanced by assigning classes round-robin with a running
/// offset. Deterministic given the seed.
///
/// # Panics
/// Panics unless `k >= 2` and `y` is non-empty.
pub fn stratified_kfold(y: &[usize], k: usize, seed: u64) -> Vec<Vec<usize>> {
    assert!(k >= 2, "need at least two folds");
    assert!(!y.is_empty(), "cannot fold an empty label set");

    let max_class = *y.iter().max().unwrap();
    let mut per_class: Vec<Vec<usize>> = vec![Vec::new(); max_class + 1];
    for (i, label) in y.iter().enumerate() {
        per_class[*label].push(i);
    }
    if let Some(smallest) = per_class.iter().filter(|c| !c.is_empty()).map(Vec::len).min() {
        if k > smallest {
            log::warn!(
                "{k} folds but smallest class has only {smallest} samples; \
                 some test folds will lack that class"
            );
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut next = 0usize;
    for indices in per_class.iter_mut() {
        indices.shuffle(&mut rng);
        for &i in indices.iter() {
            folds[next % k].push(i);
            next += 1;
        }
    }
    for fold in &mut folds {
        fold.sort_unstable();
    }
    folds
}

/// Hex digest of a fold assignment, for report provenance.
pub fn fold_digest(folds: &[Vec<usize>]) -> String {
    let mut hasher = Sha256::new();
    for (f, fold) in folds.iter().enumerate() {
        hasher.update(f.to_le_bytes());
        for i in fold {
            hasher.update(i.to_le_bytes());
        }
    }
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}
