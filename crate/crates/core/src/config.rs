use crate::error::ForestError;

/// Run parameters of an [`OnlineIForest`](crate::OnlineIForest).
///
/// The depth limit and the score normalizer are both `log2(window_size /
/// max_leaf_samples)`; they are derived once at construction and never
/// recomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct ForestConfig {
    num_trees: usize,
    window_size: usize,
    max_leaf_samples: usize,
    master_seed: u64,
    depth_limit: f64,
    parallel: bool,
}

impl ForestConfig {
    pub const DEFAULT_TREES: usize = 32;
    pub const DEFAULT_WINDOW: usize = 2048;
    pub const DEFAULT_MAX_LEAF_SAMPLES: usize = 32;

    pub fn new(
        num_trees: usize,
        window_size: usize,
        max_leaf_samples: usize,
        master_seed: u64,
    ) -> Result<Self, ForestError> {
        if num_trees == 0 {
            return Err(ForestError::InvalidConfig("num_trees must be positive"));
        }
        if max_leaf_samples == 0 {
            return Err(ForestError::InvalidConfig(
                "max_leaf_samples must be positive",
            ));
        }
        if window_size == 0 {
            return Err(ForestError::InvalidConfig("window_size must be positive"));
        }
        if window_size < max_leaf_samples {
            return Err(ForestError::InvalidConfig("window_size < max_leaf_samples"));
        }
        let depth_limit = (window_size as f64 / max_leaf_samples as f64).log2();
        Ok(Self {
            num_trees,
            window_size,
            max_leaf_samples,
            master_seed,
            depth_limit,
            parallel: false,
        })
    }

    /// Defaults: 32 trees, window 2048, 32 samples per leaf.
    pub fn with_seed(master_seed: u64) -> Self {
        Self::new(
            Self::DEFAULT_TREES,
            Self::DEFAULT_WINDOW,
            Self::DEFAULT_MAX_LEAF_SAMPLES,
            master_seed,
        )
        .expect("default configuration is valid")
    }

    /// Run the per-tree fan-out on the rayon pool. Results are identical
    /// either way.
    pub fn parallel(mut self, enabled: bool) -> Self {
        self.parallel = enabled;
        self
    }

    pub fn num_trees(&self) -> usize {
        self.num_trees
    }

    pub fn window_size(&self) -> usize {
        self.window_size
    }

    pub fn max_leaf_samples(&self) -> usize {
        self.max_leaf_samples
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn is_parallel(&self) -> bool {
        self.parallel
    }

    /// Splits happen only at depths strictly below this value.
    pub fn depth_limit(&self) -> f64 {
        self.depth_limit
    }

    /// Expected tree depth used to normalize the anomaly score.
    pub fn normalizer(&self) -> f64 {
        self.depth_limit
    }
}
