//! Straight-line re-simulation of the forest update and scoring loop.
//!
//! Shares no code with the library: nodes live in a flat arena, descent is
//! iterative, and the random draws come from a plain slice of `u64`s that the
//! library consumes through [`Replay`]. Used as the oracle for exact state
//! equivalence.

#![allow(dead_code)]

use std::collections::VecDeque;
use std::sync::Arc;

use rand::RngCore;

/// Scripted random stream: hands out a fixed sequence of `u64`s.
#[derive(Debug, Clone)]
pub struct Replay {
    draws: Arc<Vec<u64>>,
    pos: usize,
}

impl Replay {
    pub fn new(draws: Arc<Vec<u64>>) -> Self {
        Self { draws, pos: 0 }
    }
}

impl RngCore for Replay {
    fn next_u32(&mut self) -> u32 {
        self.next_u64() as u32
    }

    fn next_u64(&mut self) -> u64 {
        let v = self.draws[self.pos];
        self.pos += 1;
        v
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        for chunk in dst.chunks_mut(8) {
            let bytes = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&bytes[..chunk.len()]);
        }
    }
}

/// Canonical pre-order description of one node, comparable across
/// implementations.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeState {
    pub depth: u32,
    pub height: i64,
    pub support: Option<(Vec<f64>, Vec<f64>)>,
    pub split: Option<(usize, u64)>,
}

#[derive(Debug, Clone)]
struct RefNode {
    h: i64,
    k: u32,
    lo: Vec<f64>,
    hi: Vec<f64>,
    has_support: bool,
    internal: bool,
    q: usize,
    p: f64,
    left: usize,
    right: usize,
}

impl RefNode {
    fn fresh(k: u32, d: usize) -> Self {
        RefNode {
            h: 0,
            k,
            lo: vec![0.0; d],
            hi: vec![0.0; d],
            has_support: false,
            internal: false,
            q: 0,
            p: 0.0,
            left: 0,
            right: 0,
        }
    }
}

pub struct RefTree {
    nodes: Vec<RefNode>,
    draws: Arc<Vec<u64>>,
    cursor: usize,
    eta: i64,
    delta: f64,
    d: usize,
}

impl RefTree {
    pub fn new(d: usize, eta: i64, delta: f64, draws: Arc<Vec<u64>>) -> Self {
        RefTree {
            nodes: vec![RefNode::fresh(0, d)],
            draws,
            cursor: 0,
            eta,
            delta,
            d,
        }
    }

    fn draw_unit(&mut self) -> f64 {
        let raw = self.draws[self.cursor];
        self.cursor += 1;
        (raw >> 11) as f64 / 9007199254740992.0
    }

    fn draw_in(&mut self, lo: f64, hi: f64) -> f64 {
        let u = self.draw_unit();
        let v = lo + (hi - lo) * u;
        if v > hi {
            hi
        } else {
            v
        }
    }

    pub fn learn(&mut self, x: &[f64]) {
        let mut id = 0;
        loop {
            let n = &mut self.nodes[id];
            n.h += 1;
            if !n.has_support {
                n.lo = x.to_vec();
                n.hi = x.to_vec();
                n.has_support = true;
            } else {
                for (i, &v) in x.iter().enumerate() {
                    if v < n.lo[i] {
                        n.lo[i] = v;
                    }
                    if v > n.hi[i] {
                        n.hi[i] = v;
                    }
                }
            }
            if n.internal {
                id = if x[n.q] < n.p { n.left } else { n.right };
                continue;
            }
            let cap = self.eta * (1i64 << n.k);
            if n.h >= cap && (n.k as f64) < self.delta {
                self.split(id);
            }
            return;
        }
    }

    fn split(&mut self, id: usize) {
        let d = self.d;
        let k = self.nodes[id].k;
        let lo = self.nodes[id].lo.clone();
        let hi = self.nodes[id].hi.clone();

        let u = self.draw_unit();
        let mut q = (u * d as f64) as usize;
        if q > d - 1 {
            q = d - 1;
        }
        let p = self.draw_in(lo[q], hi[q]);

        let count = self.eta * (1i64 << k);
        let mut left = RefNode::fresh(k + 1, d);
        let mut right = RefNode::fresh(k + 1, d);
        for _ in 0..count {
            let mut s = vec![0.0; d];
            for i in 0..d {
                s[i] = self.draw_in(lo[i], hi[i]);
            }
            let target = if s[q] < p { &mut left } else { &mut right };
            target.h += 1;
            if !target.has_support {
                target.lo = s.clone();
                target.hi = s;
                target.has_support = true;
            } else {
                for (i, &v) in s.iter().enumerate() {
                    if v < target.lo[i] {
                        target.lo[i] = v;
                    }
                    if v > target.hi[i] {
                        target.hi[i] = v;
                    }
                }
            }
        }
        self.nodes.push(left);
        self.nodes.push(right);
        let n = self.nodes.len();
        let node = &mut self.nodes[id];
        node.internal = true;
        node.q = q;
        node.p = p;
        node.left = n - 2;
        node.right = n - 1;
    }

    pub fn forget(&mut self, x: &[f64]) {
        let mut id = 0;
        loop {
            self.nodes[id].h -= 1;
            if !self.nodes[id].internal {
                return;
            }
            let cap = self.eta * (1i64 << self.nodes[id].k);
            if self.nodes[id].h < cap {
                let l = self.nodes[self.nodes[id].left].clone();
                let r = self.nodes[self.nodes[id].right].clone();
                let node = &mut self.nodes[id];
                node.internal = false;
                if l.has_support && r.has_support {
                    for i in 0..l.lo.len() {
                        node.lo[i] = if l.lo[i] < r.lo[i] { l.lo[i] } else { r.lo[i] };
                        node.hi[i] = if l.hi[i] > r.hi[i] { l.hi[i] } else { r.hi[i] };
                    }
                    node.has_support = true;
                } else if l.has_support {
                    node.lo = l.lo;
                    node.hi = l.hi;
                    node.has_support = true;
                } else if r.has_support {
                    node.lo = r.lo;
                    node.hi = r.hi;
                    node.has_support = true;
                } else {
                    node.has_support = false;
                }
                return;
            }
            let n = &self.nodes[id];
            id = if x[n.q] < n.p { n.left } else { n.right };
        }
    }

    pub fn depth(&self, x: &[f64]) -> f64 {
        let mut id = 0;
        while self.nodes[id].internal {
            let n = &self.nodes[id];
            id = if x[n.q] < n.p { n.left } else { n.right };
        }
        let leaf = &self.nodes[id];
        let extra = if leaf.h <= 0 {
            0.0
        } else {
            let c = (leaf.h as f64 / self.eta as f64).log2();
            if c < 0.0 {
                0.0
            } else {
                c
            }
        };
        leaf.k as f64 + extra
    }

    pub fn state(&self) -> Vec<NodeState> {
        let mut out = Vec::new();
        let mut stack = vec![0usize];
        while let Some(id) = stack.pop() {
            let n = &self.nodes[id];
            out.push(NodeState {
                depth: n.k,
                height: n.h,
                support: n.has_support.then(|| (n.lo.clone(), n.hi.clone())),
                split: n.internal.then(|| (n.q, n.p.to_bits())),
            });
            if n.internal {
                stack.push(n.right);
                stack.push(n.left);
            }
        }
        out
    }
}

/// Reference forest: sliding buffer plus trees, scoring after the update.
pub struct RefForest {
    pub trees: Vec<RefTree>,
    window: VecDeque<Vec<f64>>,
    omega: usize,
    norm: f64,
}

impl RefForest {
    pub fn new(d: usize, omega: usize, eta: usize, draws: Vec<Arc<Vec<u64>>>) -> Self {
        let delta = (omega as f64 / eta as f64).log2();
        RefForest {
            trees: draws
                .into_iter()
                .map(|s| RefTree::new(d, eta as i64, delta, s))
                .collect(),
            window: VecDeque::new(),
            omega,
            norm: delta,
        }
    }

    pub fn step(&mut self, x: &[f64]) -> f64 {
        self.window.push_back(x.to_vec());
        for t in self.trees.iter_mut() {
            t.learn(x);
        }
        if self.window.len() > self.omega {
            let old = self.window.pop_front().unwrap();
            for t in self.trees.iter_mut() {
                t.forget(&old);
            }
        }
        let mut total = 0.0;
        for t in &self.trees {
            total += t.depth(x);
        }
        let mean = total / self.trees.len() as f64;
        if mean == 0.0 {
            1.0
        } else {
            (-mean / self.norm).exp2()
        }
    }

    pub fn window_len(&self) -> usize {
        self.window.len()
    }
}
