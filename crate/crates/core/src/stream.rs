// Copyright 2026 The winfreq Authors
// SPDX-License-Identifier: Apache-2.0

//! Sparse time-indexed event streams.
//!
//! A stream holds, for every time step `t` in `1..=T`, a multiset of items drawn
//! from `1..=U`. Only nonzero `(t, item)` counts are stored.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Whether a stream may carry more than one event per time step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Bundle,
    Singleton,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Bundle => "bundle",
            Regime::Singleton => "singleton",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventStream {
    horizon: usize,
    universe: usize,
    regime: Regime,
    steps: BTreeMap<usize, BTreeMap<usize, u64>>,
}

impl EventStream {
    pub fn new(horizon: usize, universe: usize, regime: Regime) -> Result<Self> {
        if horizon == 0 || universe == 0 {
            return Err(Error::InvalidConfig(format!(
                "horizon and universe must be positive (T={horizon}, U={universe})"
            )));
        }
        Ok(Self {
            horizon,
            universe,
            regime,
            steps: BTreeMap::new(),
        })
    }

    /// Adds `count` occurrences of `item` at step `t`. Zero counts are ignored.
    pub fn add(&mut self, t: usize, item: usize, count: u64) -> Result<()> {
        if t == 0 || t > self.horizon {
            return Err(Error::StreamViolation {
                t,
                item,
                reason: format!("time outside [1, {}]", self.horizon),
            });
        }
        if item == 0 || item > self.universe {
            return Err(Error::StreamViolation {
                t,
                item,
                reason: format!("item outside [1, {}]", self.universe),
            });
        }
        if count > 0 {
            *self.steps.entry(t).or_default().entry(item).or_insert(0) += count;
        }
        Ok(())
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn set_regime(&mut self, regime: Regime) {
        self.regime = regime;
    }

    /// Occurrence count `S^t_u`.
    pub fn count(&self, t: usize, item: usize) -> u64 {
        self.steps
            .get(&t)
            .and_then(|s| s.get(&item))
            .copied()
            .unwrap_or(0)
    }

    /// Nonzero entries of step `t` as `(item, count)` in item order.
    pub fn step(&self, t: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.steps
            .get(&t)
            .into_iter()
            .flat_map(|s| s.iter().map(|(&u, &c)| (u, c)))
    }

    /// All nonzero entries as `(t, item, count)`, ordered by time then item.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.steps
            .iter()
            .flat_map(|(&t, s)| s.iter().map(move |(&u, &c)| (t, u, c)))
    }

    /// Entries restricted to steps in `[t1, t2]`.
    pub fn entries_in(&self, t1: usize, t2: usize) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.steps
            .range(t1..=t2)
            .flat_map(|(&t, s)| s.iter().map(move |(&u, &c)| (t, u, c)))
    }

    pub fn total_events(&self) -> u64 {
        self.entries().map(|(_, _, c)| c).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Sorted occurrence times per item (index `u - 1`), repeated by multiplicity.
    pub fn item_occurrences(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.universe];
        for (t, u, c) in self.entries() {
            out[u - 1].extend(std::iter::repeat_n(t, c as usize));
        }
        out
    }

    /// The steps `[start, end]` re-indexed to `1..=end-start+1`.
    pub fn slice(&self, start: usize, end: usize) -> Result<Self> {
        if start == 0 || start > end || end > self.horizon {
            return Err(Error::InvalidWindow {
                t1: start,
                t2: end,
                horizon: self.horizon,
            });
        }
        let mut out = Self::new(end - start + 1, self.universe, self.regime)?;
        for (t, u, c) in self.entries_in(start, end) {
            out.add(t - start + 1, u, c)?;
        }
        Ok(out)
    }

    /// Delays every event by `offset` steps, growing the horizon to match.
    pub fn shifted(&self, offset: usize) -> Self {
        let mut out = self.clone();
        out.horizon += offset;
        out.steps = self
            .steps
            .iter()
            .map(|(&t, s)| (t + offset, s.clone()))
            .collect();
        out
    }
}

/// Checks every stream invariant, including the one-event-per-step limit of
/// singleton streams. Reports the first violating `(t, item)`.
pub fn validate_stream(stream: &EventStream) -> Result<()> {
    for (&t, step) in &stream.steps {
        let mut total = 0u64;
        for (&u, &c) in step {
            if t == 0 || t > stream.horizon || u == 0 || u > stream.universe || c == 0 {
                return Err(Error::StreamViolation {
                    t,
                    item: u,
                    reason: "entry out of range or zero".into(),
                });
            }
            total += c;
            if stream.regime == Regime::Singleton && total > 1 {
                return Err(Error::StreamViolation {
                    t,
                    item: u,
                    reason: format!("singleton stream carries {total} events in one step"),
                });
            }
        }
    }
    Ok(())
}

/// Merges consecutive disjoint blocks of `block` steps into single bundle steps.
/// Step `i` of the result sums original steps `block*(i-1)+1 ..= min(block*i, T)`.
pub fn compress_time(stream: &EventStream, block: usize) -> Result<EventStream> {
    if block == 0 {
        return Err(Error::InvalidConfig("block length must be positive".into()));
    }
    let mut out = EventStream::new(stream.horizon.div_ceil(block), stream.universe, Regime::Bundle)?;
    for (t, u, c) in stream.entries() {
        out.add(t.div_ceil(block), u, c)?;
    }
    Ok(out)
}

/// Maps an original window onto compressed block indices.
///
/// The left end goes to the block containing `t1`; the right end goes to the
/// block containing `t2` when `t2` closes that block and to the previous block
/// otherwise. The covered span then gains at most `block - 1` steps on the left
/// and loses at most `block - 1` steps on the right, so on a singleton stream the
/// exact count moves by at most `block - 1`. `None` means the mapped range is
/// empty.
pub fn map_compressed_window(
    t1: usize,
    t2: usize,
    horizon: usize,
    block: usize,
) -> Option<(usize, usize)> {
    let left = t1.div_ceil(block);
    let containing = t2.div_ceil(block);
    let block_end = (containing * block).min(horizon);
    let right = if t2 == block_end { containing } else { containing - 1 };
    (right >= left).then_some((left, right))
}
