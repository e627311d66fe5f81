use std::io;
use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use oiforest::LabelColumn;
use oiforest_cli::{cmd_bench, cmd_grid, cmd_score, LabelSpec, RunConfig, ScoreOptions};

#[derive(Parser)]
#[command(
    name = "oiforest",
    version,
    about = "Streaming anomaly detection with Online Isolation Forest"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score every point of a dataset in arrival order.
    Score {
        input: PathBuf,
        /// Output CSV with index,score,label rows.
        #[arg(long)]
        out: PathBuf,
        /// Shuffle rows with --seed before replaying.
        #[arg(long)]
        shuffle: bool,
        /// Window of the centered moving AUC.
        #[arg(long, default_value_t = 5000, requires = "windowed_out")]
        auc_window: usize,
        /// Output CSV with index,auc rows.
        #[arg(long)]
        windowed_out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Replay a dataset several times and report AUC and time as JSON lines.
    Bench {
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        runs: usize,
        /// Keep file order instead of shuffling each run.
        #[arg(long)]
        no_shuffle: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Learn a 2-D dataset, then score a lattice over its bounding box.
    Grid {
        input: PathBuf,
        #[arg(long, default_value_t = 50)]
        resolution: usize,
        /// Output CSV with x,y,s rows.
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 32)]
    trees: usize,
    #[arg(long, default_value_t = 2048)]
    window: usize,
    #[arg(long, default_value_t = 32)]
    max_leaf_samples: usize,
    #[arg(long, default_value_t = 100)]
    batch: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Update trees on the rayon thread pool.
    #[arg(long)]
    parallel: bool,
    /// Label column: header name or zero-based index. Defaults to the last
    /// column.
    #[arg(long)]
    label_column: Option<String>,
    #[arg(long, default_value = "1")]
    anomaly_value: String,
}

impl Common {
    fn split(self) -> (RunConfig, LabelSpec) {
        let cfg = RunConfig {
            trees: self.trees,
            window: self.window,
            max_leaf_samples: self.max_leaf_samples,
            batch: self.batch,
            seed: self.seed,
            parallel: self.parallel,
        };
        let labels = LabelSpec {
            column: self
                .label_column
                .as_deref()
                .map_or(LabelColumn::Last, LabelColumn::parse),
            anomaly_value: self.anomaly_value,
        };
        (cfg, labels)
    }
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Score {
            input,
            out,
            shuffle,
            auc_window,
            windowed_out,
            common,
        } => {
            let (cfg, labels) = common.split();
            let opts = ScoreOptions {
                shuffle,
                auc_window: windowed_out.is_some().then_some(auc_window),
                windowed_out,
            };
            let summary = cmd_score(&input, &out, &cfg, &labels, &opts)?;
            match summary.auc {
                Some(auc) => eprintln!(
                    "scored {} points in {:.3}s, auc {auc:.4}",
                    summary.n, summary.elapsed_seconds
                ),
                None => eprintln!(
                    "scored {} points in {:.3}s",
                    summary.n, summary.elapsed_seconds
                ),
            }
        }
        Command::Bench {
            input,
            runs,
            no_shuffle,
            common,
        } => {
            let (cfg, labels) = common.split();
            let summary = cmd_bench(
                &input,
                &cfg,
                &labels,
                runs,
                !no_shuffle,
                io::stdout().lock(),
            )?;
            eprintln!(
                "{}: median auc {:.4}, median time {:.3}s over {} runs",
                summary.median.dataset,
                summary.median.auc,
                summary.median.elapsed_seconds,
                summary.runs
            );
        }
        Command::Grid {
            input,
            resolution,
            out,
            common,
        } => {
            let (cfg, labels) = common.split();
            let rows = cmd_grid(&input, &out, &cfg, &labels, resolution)?;
            eprintln!("wrote {rows} grid cells to {}", out.display());
        }
    }
    Ok(())
}
