// Copyright 2026 The winfreq Authors
// SPDX-License-Identifier: Apache-2.0

use rand::Rng;

use super::points::cumulative_points;
use super::{check_member, BudgetLedger, Release};
use crate::error::Result;
use crate::index::build_index;
use crate::privacy::{group_invert, NoiseKind, PrivacyBudget};
use crate::query::{QueryFamily, QueryKind};
use crate::rangequery::RangeTree1d;
use crate::stream::{validate_stream, EventStream};

/// A neighboring stream can move one item's `k`-th occurrence: one point
/// removed and one added.
pub(crate) const CUMULATIVE_POINT_CHANGES: usize = 2;

/// Cumulative `Freq>=k` through a single 1d tree over `{0, ..., T + 1}`.
#[derive(Clone, Debug)]
pub struct CumulativeRelease {
    family: QueryFamily,
    tree: RangeTree1d,
    ledger: BudgetLedger,
}

impl CumulativeRelease {
    /// Builds from precomputed `k`-th occurrence times in `1..=horizon`.
    pub(crate) fn from_points<R: Rng + ?Sized>(
        points: &[u32],
        horizon: usize,
        budget: PrivacyBudget,
        noise: NoiseKind,
        rng: &mut R,
    ) -> Result<Self> {
        let tree_budget = group_invert(budget, CUMULATIVE_POINT_CHANGES);
        let tree = RangeTree1d::build(points, (horizon + 1) as u32, tree_budget, noise, rng)?;
        let mut ledger = BudgetLedger::default();
        ledger.push("cumulative.tree", 1, Some(budget), tree_budget);
        Ok(Self {
            family: QueryFamily::new(QueryKind::Cumulative, horizon, None)?,
            tree,
            ledger,
        })
    }

    pub fn tree(&self) -> &RangeTree1d {
        &self.tree
    }

    /// Prefix estimate for `[1, t]`.
    pub fn prefix(&self, t: usize) -> Result<f64> {
        self.estimate(1, t)
    }
}

impl Release for CumulativeRelease {
    fn family(&self) -> QueryFamily {
        self.family
    }

    fn estimate(&self, t1: usize, t2: usize) -> Result<f64> {
        check_member(&self.family, t1, t2)?;
        self.tree.query(0, t2 as u32)
    }

    fn ledger(&self) -> &BudgetLedger {
        &self.ledger
    }
}

pub fn cumulative<R: Rng + ?Sized>(
    stream: &EventStream,
    k: usize,
    budget: PrivacyBudget,
    noise: NoiseKind,
    rng: &mut R,
) -> Result<CumulativeRelease> {
    validate_stream(stream)?;
    let index = build_index(stream, k)?;
    CumulativeRelease::from_points(&cumulative_points(&index), stream.horizon(), budget, noise, rng)
}
