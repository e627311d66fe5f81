//! Online Isolation Forest.
//!
//! An ensemble of multi-resolution histogram trees that learn each arriving
//! point, forget the point leaving a fixed-size sliding window, and score
//! every point by how shallow it sits in the trees. Shallow points live in
//! sparsely populated regions and get scores near 1.
//!
//! ```
//! use oiforest::{ForestConfig, OnlineIForest};
//!
//! let mut forest = OnlineIForest::new(ForestConfig::new(16, 256, 16, 7).unwrap());
//! for i in 0..1000 {
//!     let x = [(i % 50) as f64 / 50.0, (i % 7) as f64 / 7.0];
//!     let score = forest.process_point(&x).unwrap();
//!     assert!((0.0..=1.0).contains(&score));
//! }
//! ```

pub mod config;
pub mod error;
pub mod forest;
pub mod geometry;
pub mod ingest;
pub mod metrics;
pub mod sampling;
pub mod synth;
pub mod tree;

pub use config::ForestConfig;
pub use error::{ForestError, IngestError, MetricsError};
pub use forest::{ForestStats, OnlineIForest};
pub use geometry::{Hyperrectangle, Point};
pub use ingest::{load_csv, LabelColumn, LabeledStream};
pub use metrics::{roc_auc, windowed_auc, ScoreRecord};
pub use tree::{Node, OnlineITree, Split, TreeParams, TreeStats};
