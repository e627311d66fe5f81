//! ROC AUC over score streams.
//!
//! Both the global and the windowed AUC count the Mann-Whitney statistic
//! exactly: ties between an anomaly and a genuine record earn half a win.
//! The count is kept doubled so it stays an integer, and both routes divide
//! the same integers, so a window covering the whole stream reproduces the
//! global value bit for bit.

use std::cmp::Ordering;

use crate::error::MetricsError;

/// One scored record of a stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreRecord {
    pub index: u64,
    pub score: f64,
    pub anomaly: bool,
}

impl ScoreRecord {
    pub fn new(index: u64, score: f64, anomaly: bool) -> Self {
        Self {
            index,
            score,
            anomaly,
        }
    }
}

fn auc_from_counts(doubled_wins: u64, positives: u64, negatives: u64) -> f64 {
    doubled_wins as f64 / (2 * positives * negatives) as f64
}

/// Area under the ROC curve, anomalies being the positive class.
pub fn roc_auc(records: &[ScoreRecord]) -> Result<f64, MetricsError> {
    let positives = records.iter().filter(|r| r.anomaly).count();
    let negatives = records.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(MetricsError::AucUndefined {
            positives,
            negatives,
        });
    }

    let mut sorted: Vec<(f64, bool)> = records.iter().map(|r| (r.score, r.anomaly)).collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut doubled_wins = 0u64;
    let mut negatives_below = 0u64;
    let mut start = 0;
    while start < sorted.len() {
        let score = sorted[start].0;
        let end = start
            + sorted[start..]
                .iter()
                .take_while(|r| r.0.total_cmp(&score) == Ordering::Equal)
                .count();
        let pos = sorted[start..end].iter().filter(|r| r.1).count() as u64;
        let neg = (end - start) as u64 - pos;
        doubled_wins += 2 * pos * negatives_below + pos * neg;
        negatives_below += neg;
        start = end;
    }
    Ok(auc_from_counts(
        doubled_wins,
        positives as u64,
        negatives as u64,
    ))
}

/// Fenwick tree of counts over score ranks.
struct RankCounts {
    tree: Vec<u64>,
    total: u64,
}

impl RankCounts {
    fn new(ranks: usize) -> Self {
        Self {
            tree: vec![0; ranks + 1],
            total: 0,
        }
    }

    fn add(&mut self, rank: usize, delta: i64) {
        self.total = self.total.wrapping_add_signed(delta);
        let mut i = rank + 1;
        while i < self.tree.len() {
            self.tree[i] = self.tree[i].wrapping_add_signed(delta);
            i += i & i.wrapping_neg();
        }
    }

    /// Count with rank strictly below `rank`.
    fn below(&self, rank: usize) -> u64 {
        let mut sum = 0u64;
        let mut i = rank;
        while i > 0 {
            sum = sum.wrapping_add(self.tree[i]);
            i -= i & i.wrapping_neg();
        }
        sum
    }

    fn at(&self, rank: usize) -> u64 {
        self.below(rank + 1) - self.below(rank)
    }

    fn above(&self, rank: usize) -> u64 {
        self.total - self.below(rank + 1)
    }
}

/// Running Mann-Whitney count over a multiset of ranked records.
struct WindowAuc {
    pos: RankCounts,
    neg: RankCounts,
    doubled_wins: u64,
}

impl WindowAuc {
    fn new(ranks: usize) -> Self {
        Self {
            pos: RankCounts::new(ranks),
            neg: RankCounts::new(ranks),
            doubled_wins: 0,
        }
    }

    fn counts(&mut self, anomaly: bool) -> &mut RankCounts {
        if anomaly {
            &mut self.pos
        } else {
            &mut self.neg
        }
    }

    fn pair_credit(&self, rank: usize, anomaly: bool) -> u64 {
        if anomaly {
            2 * self.neg.below(rank) + self.neg.at(rank)
        } else {
            2 * self.pos.above(rank) + self.pos.at(rank)
        }
    }

    fn insert(&mut self, rank: usize, anomaly: bool) {
        self.doubled_wins += self.pair_credit(rank, anomaly);
        self.counts(anomaly).add(rank, 1);
    }

    fn remove(&mut self, rank: usize, anomaly: bool) {
        self.counts(anomaly).add(rank, -1);
        self.doubled_wins -= self.pair_credit(rank, anomaly);
    }

    fn auc(&self) -> Option<f64> {
        (self.pos.total > 0 && self.neg.total > 0)
            .then(|| auc_from_counts(self.doubled_wins, self.pos.total, self.neg.total))
    }
}

/// Centered moving AUC.
///
/// For every record at index `t`, the AUC over records whose index lies in
/// `[t - window/2, t + window/2]`, truncated at the stream ends. `None` where
/// that range holds a single class. Records must be sorted by index.
pub fn windowed_auc(
    records: &[ScoreRecord],
    window: usize,
) -> Result<Vec<(u64, Option<f64>)>, MetricsError> {
    if window < 2 {
        return Err(MetricsError::WindowTooSmall(window));
    }
    debug_assert!(records.windows(2).all(|w| w[0].index < w[1].index));
    let half = (window / 2) as u64;

    let mut distinct: Vec<f64> = records.iter().map(|r| r.score).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup_by(|a, b| a.total_cmp(b) == Ordering::Equal);
    let ranks: Vec<usize> = records
        .iter()
        .map(|r| {
            distinct
                .binary_search_by(|s| s.total_cmp(&r.score))
                .expect("score is present")
        })
        .collect();

    let mut state = WindowAuc::new(distinct.len());
    let (mut lo, mut hi) = (0usize, 0usize);
    let mut out = Vec::with_capacity(records.len());
    for center in records {
        let upper = center.index.saturating_add(half);
        let lower = center.index.saturating_sub(half);
        while hi < records.len() && records[hi].index <= upper {
            state.insert(ranks[hi], records[hi].anomaly);
            hi += 1;
        }
        while records[lo].index < lower {
            state.remove(ranks[lo], records[lo].anomaly);
            lo += 1;
        }
        out.push((center.index, state.auc()));
    }
    Ok(out)
}
