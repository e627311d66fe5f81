//! Seeded synthetic labeled streams for experiments and tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::ingest::LabeledStream;

/// `n` points uniform in `[0, 1)^dim`, all genuine.
pub fn uniform(n: usize, dim: usize, seed: u64) -> LabeledStream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n)
        .map(|_| (0..dim).map(|_| rng.random()).collect())
        .collect();
    LabeledStream::new("uniform", points, vec![false; n])
}

/// Genuine points from `clusters` isotropic Gaussians (std 0.05) with
/// centers in `[0.2, 0.8]^dim`; a `noise` fraction of anomalies is uniform
/// in `[-0.5, 1.5]^dim`.
pub fn gaussian_mixture(
    n: usize,
    dim: usize,
    clusters: usize,
    noise: f64,
    seed: u64,
) -> LabeledStream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centers: Vec<Vec<f64>> = (0..clusters.max(1))
        .map(|_| (0..dim).map(|_| rng.random_range(0.2..0.8)).collect())
        .collect();
    let spread = Normal::new(0.0, 0.05).expect("valid std");
    let mut points = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let anomaly = rng.random_bool(noise);
        let p = if anomaly {
            (0..dim).map(|_| rng.random_range(-0.5..1.5)).collect()
        } else {
            let c = &centers[rng.random_range(0..centers.len())];
            c.iter().map(|m| m + spread.sample(&mut rng)).collect()
        };
        points.push(p);
        labels.push(anomaly);
    }
    LabeledStream::new("gaussian-mixture", points, labels)
}

/// Two-dimensional stream in the unit square: uniform background plus a
/// dense Gaussian cluster at (0.7, 0.3) holding `cluster_fraction` of the
/// points. Cluster points are labeled genuine, background points anomalous.
pub fn dense_cluster(n: usize, cluster_fraction: f64, seed: u64) -> LabeledStream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spread = Normal::new(0.0, 0.03).expect("valid std");
    let mut points = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        if rng.random_bool(cluster_fraction) {
            points.push(vec![
                0.7 + spread.sample(&mut rng),
                0.3 + spread.sample(&mut rng),
            ]);
            labels.push(false);
        } else {
            points.push(vec![rng.random(), rng.random()]);
            labels.push(true);
        }
    }
    LabeledStream::new("dense-cluster", points, labels)
}

/// Genuine points from a unit Gaussian whose mean jumps from the origin to
/// `shift` on every axis at `n / 2`; an `anomaly_rate` fraction of points is
/// drawn far from the current mean, at radius 4 to 6 in a random direction.
pub fn mean_shift(n: usize, dim: usize, shift: f64, anomaly_rate: f64, seed: u64) -> LabeledStream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = Normal::new(0.0, 1.0).expect("valid std");
    let mut points = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for t in 0..n {
        let mean = if t < n / 2 { 0.0 } else { shift };
        let anomaly = rng.random_bool(anomaly_rate);
        let p: Vec<f64> = if anomaly {
            let dir: Vec<f64> = (0..dim).map(|_| unit.sample(&mut rng)).collect();
            let norm = dir
                .iter()
                .map(|v| v * v)
                .sum::<f64>()
                .sqrt()
                .max(f64::MIN_POSITIVE);
            let radius = rng.random_range(4.0..6.0);
            dir.iter().map(|v| mean + radius * v / norm).collect()
        } else {
            (0..dim).map(|_| mean + unit.sample(&mut rng)).collect()
        };
        points.push(p);
        labels.push(anomaly);
    }
    LabeledStream::new("mean-shift", points, labels)
}
