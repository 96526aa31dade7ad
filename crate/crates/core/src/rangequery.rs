// Copyright 2026 The winfreq Authors
// SPDX-License-Identifier: Apache-2.0

//! Private orthogonal range counting over `{0, ..., M}` and `{0, ..., M}^2`.
//!
//! Both trees are binary hierarchies over the domain padded to `2^L` leaves,
//! `L = ceil(log2(M + 1))`. Nodes use heap numbering: the root is `1` and the
//! children of `n` are `2n` and `2n + 1`. Every node (root and leaves included)
//! carries an independent noise draw on top of its true count. No consistency
//! post-processing is applied and estimates stay real-valued.
//!
//! A point touches one node per level, `L + 1` in total, so adding or removing
//! a point moves the 1d count vector by `L + 1` in l1 and `sqrt(L + 1)` in l2.
//! The 2d hierarchy is the product of two such trees: a point touches
//! `(L + 1)^2` nodes, l1 sensitivity `(L + 1)^2`, l2 sensitivity `L + 1`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::privacy::{gaussian_sigma_for, NodeNoise, NoiseKind, PrivacyBudget};

/// Heap id of a dyadic node.
pub type NodeId = u64;

pub type Point1D = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point2D {
    pub x: u32,
    pub y: u32,
}

impl Point2D {
    pub fn new(x: u32, y: u32) -> Self {
        Self { x, y }
    }
}

/// `ceil(log2(bound + 1))`.
pub fn depth_for(bound: u32) -> u32 {
    let n = u64::from(bound) + 1;
    64 - (n - 1).leading_zeros()
}

/// Closed coordinate interval covered by `node` in a tree of the given depth.
pub fn node_interval(node: NodeId, depth: u32) -> (u64, u64) {
    let level = 63 - node.leading_zeros();
    let span = 1u64 << (depth - level);
    let lo = (node - (1u64 << level)) * span;
    (lo, lo + span - 1)
}

/// Canonical decomposition of `[lo, hi]` into disjoint maximal dyadic nodes,
/// at most two per level.
pub fn dyadic_cover(lo: u64, hi: u64, depth: u32) -> Vec<NodeId> {
    let leaves = 1u64 << depth;
    let (mut l, mut r) = (lo + leaves, hi + leaves + 1);
    let (mut left, mut right) = (Vec::new(), Vec::new());
    while l < r {
        if l & 1 == 1 {
            left.push(l);
            l += 1;
        }
        if r & 1 == 1 {
            r -= 1;
            right.push(r);
        }
        l >>= 1;
        r >>= 1;
    }
    left.extend(right.into_iter().rev());
    left
}

/// Ancestors of a leaf coordinate from the leaf up to the root.
fn path(coord: u64, depth: u32) -> impl Iterator<Item = NodeId> {
    let leaf = coord + (1u64 << depth);
    (0..=depth).map(move |s| leaf >> s)
}

fn count_between(sorted: &[u32], lo: u64, hi: u64) -> usize {
    let a = sorted.partition_point(|&v| u64::from(v) < lo);
    let b = sorted.partition_point(|&v| u64::from(v) <= hi);
    b - a
}

fn check_interval(lo: u32, hi: u32, bound: u32) -> Result<()> {
    if lo > hi || hi > bound {
        return Err(Error::InvalidRange(format!("[{lo}, {hi}] not within [0, {bound}]")));
    }
    Ok(())
}

fn noise_scale(kind: NoiseKind, budget: PrivacyBudget, l1: f64, l2: f64) -> Result<f64> {
    match kind {
        NoiseKind::Laplace => Ok(l1 / budget.epsilon),
        NoiseKind::Gaussian => gaussian_sigma_for(budget, l2),
        NoiseKind::None => Ok(0.0),
    }
}

/// 1d dyadic-tree mechanism.
#[derive(Clone, Debug)]
pub struct RangeTree1d {
    bound: u32,
    depth: u32,
    coords: Vec<u32>,
    noise: NodeNoise,
    budget: PrivacyBudget,
}

impl RangeTree1d {
    pub fn build<R: Rng + ?Sized>(
        points: &[Point1D],
        bound: u32,
        budget: PrivacyBudget,
        kind: NoiseKind,
        rng: &mut R,
    ) -> Result<Self> {
        if let Some(&p) = points.iter().find(|&&p| p > bound) {
            return Err(Error::InvalidRange(format!("point {p} exceeds bound {bound}")));
        }
        let depth = depth_for(bound);
        let levels = f64::from(depth + 1);
        let scale = noise_scale(kind, budget, levels, levels.sqrt())?;
        let mut coords = points.to_vec();
        coords.sort_unstable();
        Ok(Self {
            bound,
            depth,
            coords,
            noise: NodeNoise::new(kind, scale, rng),
            budget,
        })
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn budget(&self) -> PrivacyBudget {
        self.budget
    }

    pub fn noise(&self) -> &NodeNoise {
        &self.noise
    }

    /// All node ids, root first.
    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        1..(2u64 << self.depth)
    }

    pub fn true_count(&self, node: NodeId) -> u64 {
        let (lo, hi) = node_interval(node, self.depth);
        count_between(&self.coords, lo, hi) as u64
    }

    pub fn noisy_count(&self, node: NodeId) -> f64 {
        self.true_count(node) as f64 + self.noise.at(node)
    }

    /// Nodes whose sum answers `[lo, hi]`.
    pub fn decompose(&self, lo: u32, hi: u32) -> Result<Vec<NodeId>> {
        check_interval(lo, hi, self.bound)?;
        Ok(dyadic_cover(u64::from(lo), u64::from(hi), self.depth))
    }

    /// Noisy estimate of the number of points in `[lo, hi]`.
    pub fn query(&self, lo: u32, hi: u32) -> Result<f64> {
        Ok(self
            .decompose(lo, hi)?
            .into_iter()
            .map(|n| self.noisy_count(n))
            .sum())
    }

    /// Nodes a point at `coord` contributes to.
    pub fn touched_by(&self, coord: u32) -> Vec<NodeId> {
        path(u64::from(coord), self.depth).collect()
    }
}

/// 2d product-hierarchy mechanism: a dyadic tree on `x` whose every node owns a
/// dyadic tree on `y`.
#[derive(Clone, Debug)]
pub struct RangeTree2d {
    bound: u32,
    depth: u32,
    // y coordinates of the points under each x node, sorted; indexed by x node id
    columns: Vec<Vec<u32>>,
    noise: NodeNoise,
    budget: PrivacyBudget,
}

impl RangeTree2d {
    pub fn build<R: Rng + ?Sized>(
        points: &[Point2D],
        bound: u32,
        budget: PrivacyBudget,
        kind: NoiseKind,
        rng: &mut R,
    ) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.x > bound || p.y > bound) {
            return Err(Error::InvalidRange(format!(
                "point ({}, {}) exceeds bound {bound}",
                p.x, p.y
            )));
        }
        let depth = depth_for(bound);
        let levels = f64::from(depth + 1);
        let scale = noise_scale(kind, budget, levels * levels, levels)?;
        let mut columns = vec![Vec::new(); (2usize) << depth];
        for p in points {
            for node in path(u64::from(p.x), depth) {
                columns[node as usize].push(p.y);
            }
        }
        for c in &mut columns {
            c.sort_unstable();
        }
        Ok(Self {
            bound,
            depth,
            columns,
            noise: NodeNoise::new(kind, scale, rng),
            budget,
        })
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn budget(&self) -> PrivacyBudget {
        self.budget
    }

    pub fn noise(&self) -> &NodeNoise {
        &self.noise
    }

    fn key(&self, x_node: NodeId, y_node: NodeId) -> u64 {
        (x_node << (self.depth + 1)) | y_node
    }

    /// All `(x node, y node)` pairs.
    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        let n = 2u64 << self.depth;
        (1..n).flat_map(move |a| (1..n).map(move |b| (a, b)))
    }

    pub fn true_count(&self, x_node: NodeId, y_node: NodeId) -> u64 {
        let (lo, hi) = node_interval(y_node, self.depth);
        count_between(&self.columns[x_node as usize], lo, hi) as u64
    }

    pub fn noisy_count(&self, x_node: NodeId, y_node: NodeId) -> f64 {
        self.true_count(x_node, y_node) as f64 + self.noise.at(self.key(x_node, y_node))
    }

    pub fn decompose(&self, lo: Point2D, hi: Point2D) -> Result<Vec<(NodeId, NodeId)>> {
        check_interval(lo.x, hi.x, self.bound)?;
        check_interval(lo.y, hi.y, self.bound)?;
        let xs = dyadic_cover(u64::from(lo.x), u64::from(hi.x), self.depth);
        let ys = dyadic_cover(u64::from(lo.y), u64::from(hi.y), self.depth);
        Ok(xs
            .iter()
            .flat_map(|&a| ys.iter().map(move |&b| (a, b)))
            .collect())
    }

    /// Noisy estimate of the number of points `p` with `lo <= p <= hi` componentwise.
    pub fn query(&self, lo: Point2D, hi: Point2D) -> Result<f64> {
        Ok(self
            .decompose(lo, hi)?
            .into_iter()
            .map(|(a, b)| self.noisy_count(a, b))
            .sum())
    }

    pub fn touched_by(&self, p: Point2D) -> Vec<(NodeId, NodeId)> {
        let ys: Vec<_> = path(u64::from(p.y), self.depth).collect();
        path(u64::from(p.x), self.depth)
            .flat_map(|a| ys.iter().map(move |&b| (a, b)))
            .collect()
    }
}
