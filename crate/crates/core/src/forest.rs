use std::collections::VecDeque;

use rand::RngCore;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::ForestConfig;
use crate::error::ForestError;
use crate::geometry::{self, Point};
use crate::sampling;
use crate::tree::{OnlineITree, TreeParams, TreeStats};

/// Read-only summary of a forest's shape.
#[derive(Debug, Clone, PartialEq)]
pub struct ForestStats {
    pub trees: Vec<TreeStats>,
    pub buffer_len: usize,
}

impl ForestStats {
    pub fn node_counts(&self) -> Vec<usize> {
        self.trees.iter().map(|t| t.nodes).collect()
    }

    pub fn max_depths(&self) -> Vec<u32> {
        self.trees.iter().map(|t| t.max_depth).collect()
    }

    pub fn max_depth(&self) -> u32 {
        self.trees.iter().map(|t| t.max_depth).max().unwrap_or(0)
    }

    /// Mean over trees of each tree's mean leaf depth.
    pub fn mean_leaf_depth(&self) -> f64 {
        self.trees.iter().map(|t| t.mean_leaf_depth).sum::<f64>() / self.trees.len() as f64
    }
}

/// Ensemble of Online-iTrees fed from a sliding window of the most recent
/// points.
///
/// Each call to [`process_point`](Self::process_point) learns the new point
/// in every tree, forgets the point that falls out of the window, then
/// scores the new point against the updated trees.
#[derive(Debug, Clone)]
pub struct OnlineIForest<R = ChaCha8Rng> {
    config: ForestConfig,
    trees: Vec<OnlineITree<R>>,
    buffer: VecDeque<Point>,
    samples_seen: u64,
    dim: Option<usize>,
}

impl OnlineIForest<ChaCha8Rng> {
    /// Tree `i` draws from the ChaCha stream `i` of `master_seed`.
    pub fn new(config: ForestConfig) -> Self {
        let rngs = (0..config.num_trees() as u64)
            .map(|i| sampling::tree_rng(config.master_seed(), i))
            .collect();
        Self::with_rngs(config, rngs)
    }
}

impl<R: RngCore + Send + Sync> OnlineIForest<R> {
    /// Builds a forest whose trees draw from the given streams, one per tree.
    ///
    /// Panics if `rngs.len() != config.num_trees()`.
    pub fn with_rngs(config: ForestConfig, rngs: Vec<R>) -> Self {
        assert_eq!(rngs.len(), config.num_trees(), "one random stream per tree");
        let params = TreeParams {
            max_leaf_samples: config.max_leaf_samples() as u64,
            depth_limit: config.depth_limit(),
        };
        let trees = rngs
            .into_iter()
            .map(|rng| OnlineITree::new(params, rng))
            .collect();
        Self {
            buffer: VecDeque::with_capacity(config.window_size() + 1),
            config,
            trees,
            samples_seen: 0,
            dim: None,
        }
    }

    pub fn config(&self) -> &ForestConfig {
        &self.config
    }

    pub fn trees(&self) -> &[OnlineITree<R>] {
        &self.trees
    }

    pub fn buffer(&self) -> &VecDeque<Point> {
        &self.buffer
    }

    pub fn samples_seen(&self) -> u64 {
        self.samples_seen
    }

    /// Dimension fixed by the first processed point.
    pub fn dim(&self) -> Option<usize> {
        self.dim
    }

    fn check(&self, x: &[f64]) -> Result<(), ForestError> {
        geometry::validate(x)?;
        match self.dim {
            Some(expected) if expected != x.len() => Err(ForestError::DimensionMismatch {
                expected,
                got: x.len(),
            }),
            _ => Ok(()),
        }
    }

    /// Learns `x`, forgets the point leaving the window, and returns the
    /// anomaly score of `x` in `[0, 1]`. On error the forest is unchanged.
    pub fn process_point(&mut self, x: &[f64]) -> Result<f64, ForestError> {
        self.check(x)?;
        self.dim = Some(x.len());

        self.buffer.push_back(Point::new(x.to_vec())?);
        let expired = if self.buffer.len() > self.config.window_size() {
            self.buffer.pop_front()
        } else {
            None
        };
        let expired = expired.as_ref().map(Point::coords);

        let update = |tree: &mut OnlineITree<R>| {
            tree.learn(x);
            if let Some(old) = expired {
                tree.forget(old);
            }
        };
        if self.config.is_parallel() {
            self.trees.par_iter_mut().for_each(update);
        } else {
            self.trees.iter_mut().for_each(update);
        }
        self.samples_seen += 1;
        Ok(self.score_unchecked(x))
    }

    /// Processes a batch point by point; equivalent to calling
    /// [`process_point`](Self::process_point) on each in order. Stops at the
    /// first invalid point, keeping the updates already applied.
    pub fn process_batch<P: AsRef<[f64]>>(&mut self, batch: &[P]) -> Result<Vec<f64>, ForestError> {
        batch
            .iter()
            .map(|x| self.process_point(x.as_ref()))
            .collect()
    }

    /// Scores `x` against the current trees without learning it.
    pub fn score(&self, x: &[f64]) -> Result<f64, ForestError> {
        self.check(x)?;
        Ok(self.score_unchecked(x))
    }

    /// Depth of `x` in each tree, in tree order.
    pub fn depths(&self, x: &[f64]) -> Vec<f64> {
        if self.config.is_parallel() {
            self.trees.par_iter().map(|t| t.point_depth(x)).collect()
        } else {
            self.trees.iter().map(|t| t.point_depth(x)).collect()
        }
    }

    fn score_unchecked(&self, x: &[f64]) -> f64 {
        // Sum in tree order so the result does not depend on scheduling.
        let depths = self.depths(x);
        let mean = depths.iter().sum::<f64>() / depths.len() as f64;
        score_from_mean_depth(mean, self.config.normalizer())
    }

    pub fn stats(&self) -> ForestStats {
        ForestStats {
            trees: self.trees.iter().map(OnlineITree::stats).collect(),
            buffer_len: self.buffer.len(),
        }
    }
}

/// `2^(-mean_depth / normalizer)`, with a zero mean depth mapping to 1.
///
/// A zero normalizer (window equal to leaf size) can only occur together
/// with a zero mean depth, since no split ever happens and no leaf holds
/// more than `max_leaf_samples` points.
pub fn score_from_mean_depth(mean_depth: f64, normalizer: f64) -> f64 {
    if mean_depth <= 0.0 {
        1.0
    } else if normalizer <= 0.0 {
        0.0
    } else {
        (-mean_depth / normalizer).exp2()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn forest(trees: usize, window: usize, eta: usize, seed: u64) -> OnlineIForest {
        OnlineIForest::new(ForestConfig::new(trees, window, eta, seed).unwrap())
    }

    #[test]
    fn fresh_forest_shape() {
        let f = forest(32, 2048, 32, 0);
        let s = f.stats();
        assert_eq!(s.trees.len(), 32);
        assert!(s.node_counts().iter().all(|&n| n == 1));
        assert!(s.max_depths().iter().all(|&d| d == 0));
        assert_eq!(s.buffer_len, 0);
        assert!(f.trees().iter().all(|t| t.root().support().is_none()));
    }

    #[test]
    fn first_point_scores_one() {
        let mut f = forest(32, 2048, 32, 11);
        assert_eq!(f.process_point(&[0.3, -2.0]).unwrap(), 1.0);
    }

    #[test]
    fn normalizer_equal_to_mean_depth_gives_half() {
        assert_eq!(score_from_mean_depth(6.0, 6.0), 0.5);
        assert_eq!(score_from_mean_depth(0.0, 6.0), 1.0);
        assert_eq!(score_from_mean_depth(12.0, 6.0), 0.25);
    }

    #[test]
    fn degenerate_config_scores_one_forever() {
        let mut f = forest(1, 1, 1, 0);
        for i in 0..50 {
            assert_eq!(f.process_point(&[i as f64]).unwrap(), 1.0);
            assert_eq!(f.buffer().len(), 1);
            assert!(f.trees()[0].root().is_leaf());
        }
    }

    #[test]
    fn rejects_bad_points_without_mutation() {
        let mut f = forest(4, 16, 4, 0);
        f.process_point(&[1.0, 2.0]).unwrap();
        assert_eq!(
            f.process_point(&[1.0]),
            Err(ForestError::DimensionMismatch {
                expected: 2,
                got: 1
            })
        );
        assert!(matches!(
            f.process_point(&[f64::NAN, 0.0]),
            Err(ForestError::NonFiniteCoordinate { position: 0, .. })
        ));
        assert_eq!(f.process_point(&[]), Err(ForestError::EmptyPoint));
        assert_eq!(f.samples_seen(), 1);
        assert_eq!(f.buffer().len(), 1);
        assert!(f.trees().iter().all(|t| t.root().height() == 1));
    }

    #[test]
    fn buffer_is_bounded_by_window() {
        let mut f = forest(2, 8, 2, 0);
        for i in 0..20 {
            f.process_point(&[i as f64]).unwrap();
            assert_eq!(f.buffer().len(), (i + 1).min(8));
            for t in f.trees() {
                assert_eq!(t.root().height(), f.buffer().len() as i64);
            }
        }
        assert_eq!(f.samples_seen(), 20);
        assert_eq!(f.buffer().front().unwrap().coords(), &[12.0]);
    }

    #[test]
    fn score_does_not_mutate() {
        let mut f = forest(4, 64, 4, 3);
        for i in 0..100 {
            f.process_point(&[(i % 17) as f64, (i % 5) as f64]).unwrap();
        }
        let before = f.stats();
        let s = f.score(&[3.0, 2.0]).unwrap();
        assert!((0.0..=1.0).contains(&s));
        assert_eq!(f.stats(), before);
        assert!(f.score(&[1.0]).is_err());
    }

    #[test]
    fn parallel_fan_out_matches_sequential() {
        let mut a = forest(8, 128, 4, 99);
        let mut b = OnlineIForest::new(ForestConfig::new(8, 128, 4, 99).unwrap().parallel(true));
        for i in 0..1000 {
            let x = [((i * 37) % 101) as f64 / 7.0, ((i * 13) % 29) as f64];
            let sa = a.process_point(&x).unwrap();
            let sb = b.process_point(&x).unwrap();
            assert_eq!(sa.to_bits(), sb.to_bits());
        }
    }

    #[test]
    fn batch_equals_point_by_point() {
        let pts: Vec<Vec<f64>> = (0..300)
            .map(|i| vec![(i % 23) as f64, (i % 7) as f64])
            .collect();
        let mut a = forest(4, 64, 4, 5);
        let mut b = forest(4, 64, 4, 5);
        let one: Vec<f64> = pts.iter().map(|p| a.process_point(p).unwrap()).collect();
        let mut batched = Vec::new();
        for chunk in pts.chunks(100) {
            batched.extend(b.process_batch(chunk).unwrap());
        }
        assert_eq!(one, batched);
    }
}
