// Copyright 2026 The winfreq Authors
// SPDX-License-Identifier: Apache-2.0

use rand::Rng;

use super::cumulative::CumulativeRelease;
use super::points::time_window_points;
use super::{check_member, BudgetLedger, Composition, Release};
use crate::error::Result;
use crate::index::build_index;
use crate::privacy::{advanced_split, basic_split, group_invert, NoiseKind, PrivacyBudget};
use crate::query::{QueryFamily, QueryKind};
use crate::rangequery::{Point2D, RangeTree2d};
use crate::stream::{validate_stream, EventStream};

/// Arbitrary windows at event level through two 2d trees over
/// `{0, ..., T + 1}^2`. Window `[i, j]` is `U - x[0..i, j..M] + x'[0..i, j..M]`.
#[derive(Clone, Debug)]
pub struct TimeWindowEventRelease {
    family: QueryFamily,
    universe: usize,
    x: RangeTree2d,
    x_shift: RangeTree2d,
    ledger: BudgetLedger,
}

impl TimeWindowEventRelease {
    pub fn trees(&self) -> (&RangeTree2d, &RangeTree2d) {
        (&self.x, &self.x_shift)
    }
}

impl Release for TimeWindowEventRelease {
    fn family(&self) -> QueryFamily {
        self.family
    }

    fn estimate(&self, t1: usize, t2: usize) -> Result<f64> {
        check_member(&self.family, t1, t2)?;
        let m = self.x.bound();
        let lo = Point2D::new(0, t2 as u32);
        let hi = Point2D::new(t1 as u32, m);
        Ok(self.universe as f64 - self.x.query(lo, hi)? + self.x_shift.query(lo, hi)?)
    }

    fn ledger(&self) -> &BudgetLedger {
        &self.ledger
    }
}

/// Adding or removing one event changes at most `2k + 1` points of each set.
fn event_point_changes(k: usize) -> usize {
    2 * k + 1
}

pub fn time_window_event<R: Rng + ?Sized>(
    stream: &EventStream,
    k: usize,
    budget: PrivacyBudget,
    noise: NoiseKind,
    rng: &mut R,
) -> Result<TimeWindowEventRelease> {
    validate_stream(stream)?;
    let horizon = stream.horizon();
    let family = QueryFamily::new(QueryKind::TimeWindow, horizon, None)?;
    let index = build_index(stream, k)?;
    let (xs, xs_shift) = time_window_points(&index);
    let tree_budget = group_invert(budget.halved(), event_point_changes(k));
    let bound = (horizon + 1) as u32;
    let x = RangeTree2d::build(&xs, bound, tree_budget, noise, rng)?;
    let x_shift = RangeTree2d::build(&xs_shift, bound, tree_budget, noise, rng)?;
    let m = event_point_changes(k) as f64;
    let nominal = PrivacyBudget {
        epsilon: budget.epsilon / (2.0 * m),
        delta: budget.delta / (4.0 * budget.epsilon * m),
    };
    let mut ledger = BudgetLedger::default();
    ledger.push("time_window.tree", 2, Some(nominal), tree_budget);
    Ok(TimeWindowEventRelease {
        family,
        universe: stream.universe(),
        x,
        x_shift,
        ledger,
    })
}

/// Arbitrary windows at item level: one cumulative release per start time `s`,
/// run on the suffix `[s, T]`. Window `[t1, t2]` is prefix `t2 - t1 + 1` of run
/// `t1`.
#[derive(Clone, Debug)]
pub struct TimeWindowItemRelease {
    family: QueryFamily,
    runs: Vec<CumulativeRelease>,
    ledger: BudgetLedger,
}

impl TimeWindowItemRelease {
    pub fn runs(&self) -> &[CumulativeRelease] {
        &self.runs
    }
}

impl Release for TimeWindowItemRelease {
    fn family(&self) -> QueryFamily {
        self.family
    }

    fn estimate(&self, t1: usize, t2: usize) -> Result<f64> {
        check_member(&self.family, t1, t2)?;
        self.runs[t1 - 1].prefix(t2 - t1 + 1)
    }

    fn ledger(&self) -> &BudgetLedger {
        &self.ledger
    }
}

pub fn time_window_item<R: Rng + ?Sized>(
    stream: &EventStream,
    k: usize,
    budget: PrivacyBudget,
    composition: Composition,
    noise: NoiseKind,
    rng: &mut R,
) -> Result<TimeWindowItemRelease> {
    validate_stream(stream)?;
    let horizon = stream.horizon();
    let family = QueryFamily::new(QueryKind::TimeWindow, horizon, None)?;
    // validates k
    build_index(stream, 1.max(k))?;
    let run_budget = match composition {
        Composition::Basic => basic_split(budget, horizon),
        Composition::Advanced => advanced_split(budget, horizon)?,
    };
    let occurrences = stream.item_occurrences();
    let mut runs = Vec::with_capacity(horizon);
    let mut points = Vec::with_capacity(occurrences.len());
    for s in 1..=horizon {
        points.clear();
        for occ in &occurrences {
            let first = occ.partition_point(|&t| t < s);
            if let Some(&t) = occ.get(first + k - 1) {
                points.push((t - s + 1) as u32);
            }
        }
        runs.push(CumulativeRelease::from_points(&points, horizon - s + 1, run_budget, noise, rng)?);
    }
    let mut ledger = BudgetLedger::default();
    ledger.push("time_window_item.run", horizon, Some(run_budget), run_budget);
    ledger.nest(runs[0].ledger(), horizon);
    Ok(TimeWindowItemRelease { family, runs, ledger })
}
