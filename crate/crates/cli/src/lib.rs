//! Commands behind the `oiforest` binary: replay a labeled CSV through the
//! forest, write per-point scores, benchmark AUC and wall-clock time, and
//! export score grids of 2-D streams.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use oiforest::{
    load_csv, roc_auc, windowed_auc, ForestConfig, LabelColumn, LabeledStream, OnlineIForest,
    ScoreRecord,
};
use serde::Serialize;

/// Forest and replay settings shared by every command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub trees: usize,
    pub window: usize,
    pub max_leaf_samples: usize,
    pub batch: usize,
    pub seed: u64,
    pub parallel: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            trees: ForestConfig::DEFAULT_TREES,
            window: ForestConfig::DEFAULT_WINDOW,
            max_leaf_samples: ForestConfig::DEFAULT_MAX_LEAF_SAMPLES,
            batch: 100,
            seed: 0,
            parallel: false,
        }
    }
}

impl RunConfig {
    pub fn forest_config(&self, seed: u64) -> Result<ForestConfig> {
        Ok(
            ForestConfig::new(self.trees, self.window, self.max_leaf_samples, seed)?
                .parallel(self.parallel),
        )
    }
}

/// Where to find the label and which value marks an anomaly.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelSpec {
    pub column: LabelColumn,
    pub anomaly_value: String,
}

impl Default for LabelSpec {
    fn default() -> Self {
        Self {
            column: LabelColumn::Last,
            anomaly_value: "1".to_owned(),
        }
    }
}

pub fn load(path: &Path, labels: &LabelSpec) -> Result<LabeledStream> {
    load_csv(path, &labels.column, &labels.anomaly_value)
        .with_context(|| format!("loading {}", path.display()))
}

/// Scores of a replay together with the time spent in the forest.
#[derive(Debug, Clone)]
pub struct Replay {
    pub scores: Vec<f64>,
    pub elapsed_seconds: f64,
    pub forest: OnlineIForest,
}

/// Feeds `stream` through a fresh forest in batches of `cfg.batch` points.
pub fn replay(stream: &LabeledStream, cfg: &RunConfig, seed: u64) -> Result<Replay> {
    if cfg.batch == 0 {
        bail!("batch size must be positive");
    }
    let mut forest = OnlineIForest::new(cfg.forest_config(seed)?);
    let mut scores = Vec::with_capacity(stream.len());
    let start = Instant::now();
    for (b, batch) in stream.batches(cfg.batch).enumerate() {
        let batch_scores = forest
            .process_batch(batch)
            .with_context(|| format!("processing batch {b}"))?;
        scores.extend(batch_scores);
    }
    let elapsed_seconds = start.elapsed().as_secs_f64().max(f64::MIN_POSITIVE);
    Ok(Replay {
        scores,
        elapsed_seconds,
        forest,
    })
}

pub fn records(stream: &LabeledStream, scores: &[f64]) -> Vec<ScoreRecord> {
    scores
        .iter()
        .zip(&stream.labels)
        .enumerate()
        .map(|(i, (&s, &l))| ScoreRecord::new(i as u64, s, l))
        .collect()
}

/// Writes `index,score,label` rows in arrival order.
pub fn write_scores(path: &Path, stream: &LabeledStream, scores: &[f64]) -> Result<()> {
    let mut out =
        BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    writeln!(out, "index,score,label")?;
    for (i, (s, &l)) in scores.iter().zip(&stream.labels).enumerate() {
        writeln!(out, "{i},{s},{}", u8::from(l))?;
    }
    out.flush()?;
    Ok(())
}

/// Writes `index,auc` rows; undefined windows leave the auc cell empty.
pub fn write_windowed(path: &Path, rows: &[(u64, Option<f64>)]) -> Result<()> {
    let mut out =
        BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    writeln!(out, "index,auc")?;
    for (i, auc) in rows {
        match auc {
            Some(a) => writeln!(out, "{i},{a}")?,
            None => writeln!(out, "{i},")?,
        }
    }
    out.flush()?;
    Ok(())
}

/// Options of the `score` command.
#[derive(Debug, Clone, Default)]
pub struct ScoreOptions {
    pub shuffle: bool,
    /// Window for the centered moving AUC, written next to the scores.
    pub auc_window: Option<usize>,
    pub windowed_out: Option<std::path::PathBuf>,
}

/// Summary of a `score` run, for diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreSummary {
    pub n: usize,
    pub auc: Option<f64>,
    pub elapsed_seconds: f64,
}

pub fn cmd_score(
    input: &Path,
    out: &Path,
    cfg: &RunConfig,
    labels: &LabelSpec,
    opts: &ScoreOptions,
) -> Result<ScoreSummary> {
    let mut stream = load(input, labels)?;
    if opts.shuffle {
        stream = stream.shuffled(cfg.seed);
    }
    let run = replay(&stream, cfg, cfg.seed)?;
    write_scores(out, &stream, &run.scores)?;
    let recs = records(&stream, &run.scores);
    if let (Some(window), Some(path)) = (opts.auc_window, &opts.windowed_out) {
        write_windowed(path, &windowed_auc(&recs, window)?)?;
    }
    Ok(ScoreSummary {
        n: stream.len(),
        auc: roc_auc(&recs).ok(),
        elapsed_seconds: run.elapsed_seconds,
    })
}

/// One benchmark run, serialized as one JSON line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchResult {
    pub dataset: String,
    pub seed: u64,
    pub auc: f64,
    pub elapsed_seconds: f64,
    pub n: usize,
    pub d: usize,
    pub trees: usize,
    pub window: usize,
    pub max_leaf_samples: usize,
}

/// Median over runs; same fields as [`BenchResult`] plus the run count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchSummary {
    #[serde(flatten)]
    pub median: BenchResult,
    pub runs: usize,
    pub statistic: &'static str,
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Runs `runs` replays; run `r` shuffles with and seeds the forest from
/// `cfg.seed + r`.
pub fn bench_stream(
    stream: &LabeledStream,
    cfg: &RunConfig,
    runs: usize,
    shuffle: bool,
) -> Result<(Vec<BenchResult>, BenchSummary)> {
    if runs == 0 {
        bail!("--runs must be at least 1");
    }
    let mut results = Vec::with_capacity(runs);
    for r in 0..runs as u64 {
        let seed = cfg.seed.wrapping_add(r);
        let shuffled;
        let data = if shuffle {
            shuffled = stream.shuffled(seed);
            &shuffled
        } else {
            stream
        };
        let run = replay(data, cfg, seed)?;
        let auc = roc_auc(&records(data, &run.scores))
            .with_context(|| format!("dataset {}", stream.name))?;
        results.push(BenchResult {
            dataset: stream.name.clone(),
            seed,
            auc,
            elapsed_seconds: run.elapsed_seconds,
            n: stream.len(),
            d: stream.dim,
            trees: cfg.trees,
            window: cfg.window,
            max_leaf_samples: cfg.max_leaf_samples,
        });
    }
    let aucs: Vec<f64> = results.iter().map(|r| r.auc).collect();
    let times: Vec<f64> = results.iter().map(|r| r.elapsed_seconds).collect();
    let summary = BenchSummary {
        median: BenchResult {
            seed: cfg.seed,
            auc: median(&aucs),
            elapsed_seconds: median(&times),
            ..results[0].clone()
        },
        runs,
        statistic: "median",
    };
    Ok((results, summary))
}

/// Benchmarks `input` and writes one JSON line per run followed by the
/// median summary line.
pub fn cmd_bench<W: Write>(
    input: &Path,
    cfg: &RunConfig,
    labels: &LabelSpec,
    runs: usize,
    shuffle: bool,
    mut out: W,
) -> Result<BenchSummary> {
    let stream = load(input, labels)?;
    let (results, summary) = bench_stream(&stream, cfg, runs, shuffle)?;
    for r in &results {
        writeln!(out, "{}", serde_json::to_string(r)?)?;
    }
    writeln!(out, "{}", serde_json::to_string(&summary)?)?;
    out.flush()?;
    Ok(summary)
}

/// Evenly spaced lattice coordinates covering `[lo, hi]`; a single cell sits
/// at the midpoint.
pub fn lattice(lo: f64, hi: f64, resolution: usize) -> Vec<f64> {
    if resolution == 1 {
        return vec![lo + (hi - lo) / 2.0];
    }
    let step = (hi - lo) / (resolution - 1) as f64;
    (0..resolution)
        .map(|i| {
            if i + 1 == resolution {
                hi
            } else {
                lo + step * i as f64
            }
        })
        .collect()
}

/// Scores of a `resolution x resolution` lattice over the bounding box of a
/// 2-D stream, taken after the whole stream was learned.
pub fn score_grid(
    stream: &LabeledStream,
    cfg: &RunConfig,
    resolution: usize,
) -> Result<Vec<[f64; 3]>> {
    if stream.dim != 2 {
        bail!(
            "grid export needs a 2-dimensional dataset, got d = {}",
            stream.dim
        );
    }
    if resolution == 0 {
        bail!("--resolution must be at least 1");
    }
    let run = replay(stream, cfg, cfg.seed)?;
    let (lo, hi) = stream.bounds().context("dataset is empty")?;
    let xs = lattice(lo[0], hi[0], resolution);
    let ys = lattice(lo[1], hi[1], resolution);
    let mut rows = Vec::with_capacity(resolution * resolution);
    for &y in &ys {
        for &x in &xs {
            rows.push([x, y, run.forest.score(&[x, y])?]);
        }
    }
    Ok(rows)
}

pub fn cmd_grid(
    input: &Path,
    out: &Path,
    cfg: &RunConfig,
    labels: &LabelSpec,
    resolution: usize,
) -> Result<usize> {
    let stream = load(input, labels)?;
    let rows = score_grid(&stream, cfg, resolution)?;
    let mut w =
        BufWriter::new(File::create(out).with_context(|| format!("creating {}", out.display()))?);
    writeln!(w, "x,y,s")?;
    for [x, y, s] in &rows {
        writeln!(w, "{x},{y},{s}")?;
    }
    w.flush()?;
    Ok(rows.len())
}
