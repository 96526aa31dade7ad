// Copyright 2026 The winfreq Authors
// SPDX-License-Identifier: Apache-2.0

use rand::Rng;

use super::points::fixed_window_points;
use super::{check_member, BudgetLedger, Composition, Release};
use crate::error::{Error, Result};
use crate::index::build_index;
use crate::privacy::{advanced_split, basic_split, group_invert, NoiseKind, PrivacyBudget};
use crate::query::{QueryFamily, QueryKind};
use crate::rangequery::RangeTree1d;
use crate::stream::{validate_stream, EventStream};

/// Fixed windows of length `W` over a stream of horizon at most `2W`.
///
/// Two 1d trees over `{0, ..., T + 1}`; window `[i, i + W - 1]` is answered as
/// `U - x[0, i - 1] + x'[0, i - 1]`.
#[derive(Clone, Debug)]
pub struct FixedWindowCore {
    family: QueryFamily,
    universe: usize,
    x: RangeTree1d,
    x_shift: RangeTree1d,
    ledger: BudgetLedger,
}

impl FixedWindowCore {
    pub fn window(&self) -> usize {
        self.family.window.unwrap_or(1)
    }

    pub fn trees(&self) -> (&RangeTree1d, &RangeTree1d) {
        (&self.x, &self.x_shift)
    }

    /// Estimate for the window starting at `i`.
    pub fn at(&self, i: usize) -> Result<f64> {
        let w = self.window();
        self.estimate(i, i + w - 1)
    }
}

impl Release for FixedWindowCore {
    fn family(&self) -> QueryFamily {
        self.family
    }

    fn estimate(&self, t1: usize, t2: usize) -> Result<f64> {
        check_member(&self.family, t1, t2)?;
        let below = (t1 - 1) as u32;
        Ok(self.universe as f64 - self.x.query(0, below)? + self.x_shift.query(0, below)?)
    }

    fn ledger(&self) -> &BudgetLedger {
        &self.ledger
    }
}

/// Each item places at most `2k` points in each tree on a horizon of `2W`, and a
/// neighbor moves each of them.
fn core_point_changes(k: usize) -> usize {
    2 * k
}

pub fn fixed_window_core<R: Rng + ?Sized>(
    stream: &EventStream,
    k: usize,
    window: usize,
    budget: PrivacyBudget,
    noise: NoiseKind,
    rng: &mut R,
) -> Result<FixedWindowCore> {
    validate_stream(stream)?;
    let horizon = stream.horizon();
    if window == 0 || horizon > 2 * window {
        return Err(Error::InvalidConfig(format!(
            "fixed-window core needs W <= T <= 2W, got T = {horizon}, W = {window}"
        )));
    }
    let family = QueryFamily::new(QueryKind::FixedWindow, horizon, Some(window))?;
    let index = build_index(stream, k)?;
    let (xs, xs_shift) = fixed_window_points(&index, window);
    let tree_budget = group_invert(budget.halved(), core_point_changes(k));
    let bound = (horizon + 1) as u32;
    let x = RangeTree1d::build(&xs, bound, tree_budget, noise, rng)?;
    let x_shift = RangeTree1d::build(&xs_shift, bound, tree_budget, noise, rng)?;
    let nominal = PrivacyBudget {
        epsilon: budget.epsilon / (4 * k) as f64,
        delta: budget.delta / (8 * k) as f64,
    };
    let mut ledger = BudgetLedger::default();
    ledger.push("fixed_window.tree", 2, Some(nominal), tree_budget);
    Ok(FixedWindowCore {
        family,
        universe: stream.universe(),
        x,
        x_shift,
        ledger,
    })
}

/// Steps covered by tile `j` (1-indexed): `[(j - 1)W + 1, min((j + 1)W, T)]`.
pub fn tile_span(j: usize, window: usize, horizon: usize) -> (usize, usize) {
    ((j - 1) * window + 1, ((j + 1) * window).min(horizon))
}

/// Tile serving the window that starts at `i`.
pub fn tile_for_query(i: usize, window: usize) -> usize {
    (i - 1) / window + 1
}

/// Fixed windows over any horizon, stitched from overlapping cores.
#[derive(Clone, Debug)]
pub struct FixedWindowRelease {
    family: QueryFamily,
    tiles: Vec<FixedWindowCore>,
    ledger: BudgetLedger,
}

impl FixedWindowRelease {
    pub fn tiles(&self) -> &[FixedWindowCore] {
        &self.tiles
    }
}

impl Release for FixedWindowRelease {
    fn family(&self) -> QueryFamily {
        self.family
    }

    fn estimate(&self, t1: usize, t2: usize) -> Result<f64> {
        check_member(&self.family, t1, t2)?;
        let w = self.family.window.unwrap_or(1);
        let j = tile_for_query(t1, w);
        let offset = (j - 1) * w;
        self.tiles[j - 1].estimate(t1 - offset, t2 - offset)
    }

    fn ledger(&self) -> &BudgetLedger {
        &self.ledger
    }
}

// Only tiles that serve some query are built: those with a full window inside.
fn build_tiles<R: Rng + ?Sized>(
    stream: &EventStream,
    k: usize,
    window: usize,
    tile_budget: PrivacyBudget,
    noise: NoiseKind,
    rng: &mut R,
) -> Result<(QueryFamily, Vec<FixedWindowCore>)> {
    validate_stream(stream)?;
    let horizon = stream.horizon();
    let family = QueryFamily::new(QueryKind::FixedWindow, horizon, Some(window))?;
    let served = tile_for_query(horizon + 1 - window, window);
    let tiles = (1..=served)
        .map(|j| {
            let (a, b) = tile_span(j, window, horizon);
            fixed_window_core(&stream.slice(a, b)?, k, window, tile_budget, noise, rng)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((family, tiles))
}

/// Event level: every step lies in at most two tiles, so each tile gets half.
pub fn fixed_window_event<R: Rng + ?Sized>(
    stream: &EventStream,
    k: usize,
    window: usize,
    budget: PrivacyBudget,
    noise: NoiseKind,
    rng: &mut R,
) -> Result<FixedWindowRelease> {
    let tile_budget = budget.halved();
    let (family, tiles) = build_tiles(stream, k, window, tile_budget, noise, rng)?;
    let mut ledger = BudgetLedger::default();
    ledger.push("fixed_window.tile", tiles.len(), Some(tile_budget), tile_budget);
    if let Some(first) = tiles.first() {
        ledger.nest(first.ledger(), tiles.len());
    }
    Ok(FixedWindowRelease { family, tiles, ledger })
}

/// Item level: an item can touch every tile, so the budget is split across all
/// `ceil(T / W)` of them.
pub fn fixed_window_item<R: Rng + ?Sized>(
    stream: &EventStream,
    k: usize,
    window: usize,
    budget: PrivacyBudget,
    composition: Composition,
    noise: NoiseKind,
    rng: &mut R,
) -> Result<FixedWindowRelease> {
    if window == 0 {
        return Err(Error::InvalidConfig("window must be positive".into()));
    }
    let count = stream.horizon().div_ceil(window);
    let tile_budget = match composition {
        Composition::Basic => basic_split(budget, count),
        Composition::Advanced => advanced_split(budget, count)?,
    };
    let (family, tiles) = build_tiles(stream, k, window, tile_budget, noise, rng)?;
    let mut ledger = BudgetLedger::default();
    ledger.push("fixed_window.tile", count, Some(tile_budget), tile_budget);
    if let Some(first) = tiles.first() {
        ledger.nest(first.ledger(), tiles.len());
    }
    Ok(FixedWindowRelease { family, tiles, ledger })
}
