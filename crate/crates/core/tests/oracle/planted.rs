//! A numeric table with a few informative columns among noise columns.

use convabuse::fusion::FeatureTable;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub const PLANTED: [&str; 3] = ["signal0", "signal1", "signal2"];

/// `n` rows per class; each planted column is shifted by `±shift`, the
/// `noise` other columns are standard normal.
pub fn planted_table(n: usize, noise: usize, shift: f64, seed: u64) -> FeatureTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let mut manifest: Vec<String> = Vec::new();
    // Interleave so that the planted columns are not simply the first ones.
    for k in 0..noise + PLANTED.len() {
        if k % 20 == 7 && k / 20 < PLANTED.len() {
            manifest.push(PLANTED[k / 20].to_string());
        } else {
            manifest.push(format!("noise{k}"));
        }
    }
    let labels: Vec<bool> = (0..2 * n).map(|i| i < n).collect();
    let rows = labels
        .iter()
        .map(|&l| {
            manifest
                .iter()
                .map(|name| {
                    let z = normal.sample(&mut rng);
                    match (PLANTED.contains(&name.as_str()), l) {
                        (true, true) => z + shift,
                        (true, false) => z - shift,
                        _ => z,
                    }
                })
                .collect()
        })
        .collect();
    let ids = (0..2 * n).map(|i| format!("r{i}")).collect();
    FeatureTable::from_matrix(ids, labels, manifest, rows).expect("consistent table")
}
