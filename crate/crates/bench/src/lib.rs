//! Shared fixtures for the estimator benchmarks: deterministic synthetic
//! datasets with the same shape as the simulation study's workloads.

use lpreg::lpe::Dataset;
use lpreg::numerics::RandomSource;
use lpreg::sim::Target;

/// A reproducible dataset of `n` uniform design points on [−2, 2] with
/// noisy cubic responses.
pub fn synthetic_dataset(n: usize, seed: u64) -> Dataset {
    let mut rs = RandomSource::new(seed);
    let xs: Vec<f64> = (0..n).map(|_| rs.uniform(-2.0, 2.0)).collect();
    let ys: Vec<f64> = xs
        .iter()
        .map(|&x| Target::F.eval(x) + rs.gaussian(0.0, 0.5).expect("noise"))
        .collect();
    Dataset::from_univariate(xs, ys).expect("distinct design points")
}
