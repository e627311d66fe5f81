#![allow(dead_code)]

pub mod reference;

use oiforest::{Node, OnlineIForest};
use rand::RngCore;
use reference::NodeState;

/// Pre-order canonical form of a library tree.
pub fn node_states(root: &Node) -> Vec<NodeState> {
    let mut out = Vec::new();
    root.visit(&mut |n| {
        out.push(NodeState {
            depth: n.depth(),
            height: n.height(),
            support: n
                .support()
                .map(|r| (r.lower().to_vec(), r.upper().to_vec())),
            split: n.split().map(|s| (s.dim, s.value.to_bits())),
        })
    });
    out
}

/// Worst-case node count of one tree for a window and leaf size.
pub fn node_bound(window: usize, eta: usize) -> usize {
    let depth = (((window + 1) as f64 / eta as f64).log2() + 1.0).floor() as u32;
    (1usize << (depth + 1)) - 1
}

/// Checks every structural invariant of the forest after an update that
/// returned `score`. Returns a description of the first violation.
pub fn check_invariants<R: RngCore + Send + Sync>(
    forest: &OnlineIForest<R>,
    score: f64,
) -> Result<(), String> {
    if !(0.0..=1.0).contains(&score) {
        return Err(format!("score {score} out of range"));
    }
    let cfg = forest.config();
    let depth_cap = cfg.depth_limit().ceil() as u32;
    let buffer = forest.buffer().len();
    if buffer > cfg.window_size() {
        return Err(format!("buffer {buffer} exceeds window"));
    }
    let bound = node_bound(cfg.window_size(), cfg.max_leaf_samples());
    for (i, tree) in forest.trees().iter().enumerate() {
        let root = tree.root();
        if root.depth() != 0 {
            return Err(format!("tree {i}: root depth {}", root.depth()));
        }
        if root.height() != buffer as i64 {
            return Err(format!(
                "tree {i}: root height {} != buffer {buffer}",
                root.height()
            ));
        }
        let mut violation = None;
        let mut nodes = 0;
        root.visit(&mut |n| {
            nodes += 1;
            if violation.is_some() {
                return;
            }
            if n.depth() > depth_cap {
                violation = Some(format!("tree {i}: depth {} > cap {depth_cap}", n.depth()));
            }
            if let Some(s) = n.split() {
                if f64::from(n.depth()) >= cfg.depth_limit() {
                    violation = Some(format!("tree {i}: split at depth {}", n.depth()));
                }
                if s.left.height() + s.right.height() != n.height() {
                    violation = Some(format!(
                        "tree {i}: height {} != {} + {} at depth {}",
                        n.height(),
                        s.left.height(),
                        s.right.height(),
                        n.depth()
                    ));
                }
                if s.left.depth() != n.depth() + 1 || s.right.depth() != n.depth() + 1 {
                    violation = Some(format!("tree {i}: child depth mismatch"));
                }
                for child in [&s.left, &s.right] {
                    if let (Some(parent), Some(c)) = (n.support(), child.support()) {
                        if !parent.contains_box(c) {
                            violation = Some(format!("tree {i}: child support escapes parent"));
                        }
                    }
                }
            }
        });
        if let Some(v) = violation {
            return Err(v);
        }
        if nodes > bound {
            return Err(format!("tree {i}: {nodes} nodes > bound {bound}"));
        }
    }
    Ok(())
}
