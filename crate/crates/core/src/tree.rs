//! Online-iTree: a binary histogram whose bins split as mass arrives and
//! merge back as it leaves.

use rand::RngCore;
use rand_chacha::ChaCha8Rng;

use crate::geometry::{hull, Hyperrectangle};
use crate::sampling;

/// Split/merge thresholds shared by every node of a tree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeParams {
    pub max_leaf_samples: u64,
    pub depth_limit: f64,
}

impl TreeParams {
    /// Maximum bin height at depth `depth`: `max_leaf_samples * 2^depth`.
    #[inline]
    pub fn capacity(&self, depth: u32) -> i64 {
        (self.max_leaf_samples as i64) << depth
    }

    /// Expected extra depth below a leaf holding `height` points.
    /// Clamped at zero, including for empty or negative bins.
    #[inline]
    pub fn adjustment(&self, height: i64) -> f64 {
        if height <= 0 {
            return 0.0;
        }
        (height as f64 / self.max_leaf_samples as f64)
            .log2()
            .max(0.0)
    }
}

/// Axis-aligned cut of an internal node. Points with `x[dim] < value` go
/// left, everything else goes right.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub dim: usize,
    pub value: f64,
    pub left: Node,
    pub right: Node,
}

impl Split {
    #[inline]
    pub fn child(&self, x: &[f64]) -> &Node {
        if x[self.dim] < self.value {
            &self.left
        } else {
            &self.right
        }
    }

    #[inline]
    fn child_mut(&mut self, x: &[f64]) -> &mut Node {
        if x[self.dim] < self.value {
            &mut self.left
        } else {
            &mut self.right
        }
    }
}

/// One histogram bin.
///
/// `height` is signed: children initialized from synthetic samples can be
/// decremented below zero by real points that were never attributed to
/// them. The merge rule cleans those up.
#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    height: i64,
    support: Option<Hyperrectangle>,
    depth: u32,
    split: Option<Box<Split>>,
}

impl Node {
    pub fn new_leaf(depth: u32, height: i64, support: Option<Hyperrectangle>) -> Self {
        Self {
            height,
            support,
            depth,
            split: None,
        }
    }

    pub fn height(&self) -> i64 {
        self.height
    }

    pub fn support(&self) -> Option<&Hyperrectangle> {
        self.support.as_ref()
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn split(&self) -> Option<&Split> {
        self.split.as_deref()
    }

    pub fn is_leaf(&self) -> bool {
        self.split.is_none()
    }

    /// Adds `x` along its root-to-leaf path and splits the terminal leaf if
    /// it reached capacity below the depth limit.
    pub fn learn<R: RngCore + ?Sized>(&mut self, x: &[f64], params: &TreeParams, rng: &mut R) {
        self.height += 1;
        match &mut self.support {
            Some(support) => support.expand(x),
            None => self.support = Some(Hyperrectangle::point(x)),
        }
        match &mut self.split {
            Some(split) => split.child_mut(x).learn(x, params, rng),
            None => {
                if self.height >= params.capacity(self.depth)
                    && f64::from(self.depth) < params.depth_limit
                {
                    self.split_leaf(params, rng);
                }
            }
        }
    }

    /// Turns a full leaf into an internal node with two children initialized
    /// from `capacity(depth)` points drawn uniformly from the leaf's support.
    ///
    /// Panics if the node is internal or has no support.
    pub fn split_leaf<R: RngCore + ?Sized>(&mut self, params: &TreeParams, rng: &mut R) {
        assert!(self.is_leaf(), "split_leaf on an internal node");
        let support = self
            .support
            .as_ref()
            .expect("split_leaf on a node without support");
        let d = support.dim();
        let (lower, upper) = (support.lower(), support.upper());

        let dim = sampling::index(rng, d);
        let value = sampling::between(rng, lower[dim], upper[dim]);

        let samples = params.capacity(self.depth);
        let mut scratch = vec![0.0; d];
        let mut left: Option<Hyperrectangle> = None;
        let mut right: Option<Hyperrectangle> = None;
        let mut left_height = 0i64;
        for _ in 0..samples {
            for (i, c) in scratch.iter_mut().enumerate() {
                *c = sampling::between(rng, lower[i], upper[i]);
            }
            let side = if scratch[dim] < value {
                left_height += 1;
                &mut left
            } else {
                &mut right
            };
            match side {
                Some(r) => r.expand(&scratch),
                None => *side = Some(Hyperrectangle::point(&scratch)),
            }
        }

        let depth = self.depth + 1;
        self.split = Some(Box::new(Split {
            dim,
            value,
            left: Node::new_leaf(depth, left_height, left),
            right: Node::new_leaf(depth, samples - left_height, right),
        }));
    }

    /// Removes `x` along the path given by the current splits. An internal
    /// node whose height drops below capacity absorbs its children.
    pub fn forget(&mut self, x: &[f64], params: &TreeParams) {
        self.height -= 1;
        if let Some(split) = &mut self.split {
            if self.height < params.capacity(self.depth) {
                self.merge_children();
            } else {
                split.child_mut(x).forget(x, params);
            }
        }
    }

    /// Collapses an internal node into a leaf whose support is the hull of
    /// the children's supports. Height is left as is. No-op on a leaf.
    pub fn merge_children(&mut self) {
        if let Some(split) = self.split.take() {
            self.support = hull(split.left.support(), split.right.support());
        }
    }

    /// Depth of the leaf `x` falls into plus the clamped adjustment for the
    /// mass still held there.
    pub fn point_depth(&self, x: &[f64], params: &TreeParams) -> f64 {
        let mut node = self;
        while let Some(split) = node.split() {
            node = split.child(x);
        }
        f64::from(node.depth) + params.adjustment(node.height)
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Node)) {
        f(self);
        if let Some(split) = self.split() {
            split.left.visit(f);
            split.right.visit(f);
        }
    }
}

/// Shape summary of one tree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeStats {
    pub nodes: usize,
    pub leaves: usize,
    pub max_depth: u32,
    /// Unweighted mean depth over leaves.
    pub mean_leaf_depth: f64,
}

/// A histogram tree with its own random stream.
#[derive(Debug, Clone)]
pub struct OnlineITree<R = ChaCha8Rng> {
    root: Node,
    params: TreeParams,
    rng: R,
}

impl<R: RngCore> OnlineITree<R> {
    pub fn new(params: TreeParams, rng: R) -> Self {
        Self {
            root: Node::new_leaf(0, 0, None),
            params,
            rng,
        }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn params(&self) -> &TreeParams {
        &self.params
    }

    pub fn learn(&mut self, x: &[f64]) {
        self.root.learn(x, &self.params, &mut self.rng);
    }

    pub fn forget(&mut self, x: &[f64]) {
        self.root.forget(x, &self.params);
    }

    pub fn point_depth(&self, x: &[f64]) -> f64 {
        self.root.point_depth(x, &self.params)
    }

    pub fn stats(&self) -> TreeStats {
        let mut nodes = 0;
        let mut leaves = 0;
        let mut max_depth = 0;
        let mut depth_sum = 0u64;
        self.root.visit(&mut |n| {
            nodes += 1;
            max_depth = max_depth.max(n.depth());
            if n.is_leaf() {
                leaves += 1;
                depth_sum += u64::from(n.depth());
            }
        });
        TreeStats {
            nodes,
            leaves,
            max_depth,
            mean_leaf_depth: depth_sum as f64 / leaves as f64,
        }
    }
}
