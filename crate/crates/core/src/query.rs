// Copyright 2026 The winfreq Authors
// SPDX-License-Identifier: Apache-2.0

//! Query windows and the query families an estimator answers.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QueryKind {
    #[serde(rename = "cumulative")]
    Cumulative,
    #[serde(rename = "fixed")]
    FixedWindow,
    #[serde(rename = "time")]
    TimeWindow,
}

impl fmt::Display for QueryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QueryKind::Cumulative => "cumulative",
            QueryKind::FixedWindow => "fixed",
            QueryKind::TimeWindow => "time",
        })
    }
}

/// A single window `[t1, t2]` with threshold `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WindowQuery {
    pub kind: QueryKind,
    pub t1: usize,
    pub t2: usize,
    pub k: usize,
}

impl WindowQuery {
    pub fn new(
        kind: QueryKind,
        t1: usize,
        t2: usize,
        k: usize,
        horizon: usize,
        window: Option<usize>,
    ) -> Result<Self> {
        check_window(t1, t2, horizon)?;
        if k == 0 {
            return Err(Error::InvalidConfig("k must be at least 1".into()));
        }
        match kind {
            QueryKind::Cumulative if t1 != 1 => {
                return Err(Error::InvalidWindow { t1, t2, horizon })
            }
            QueryKind::FixedWindow => {
                let w = window.ok_or_else(|| Error::InvalidConfig("fixed window needs W".into()))?;
                if t2 + 1 != t1 + w {
                    return Err(Error::InvalidWindow { t1, t2, horizon });
                }
            }
            _ => {}
        }
        Ok(Self { kind, t1, t2, k })
    }
}

/// Rejects windows outside `1 <= t1 <= t2 <= horizon`. Windows are never clamped.
pub fn check_window(t1: usize, t2: usize, horizon: usize) -> Result<()> {
    if t1 == 0 || t1 > t2 || t2 > horizon {
        return Err(Error::InvalidWindow { t1, t2, horizon });
    }
    Ok(())
}

/// The full set of windows a query kind asks about over a horizon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryFamily {
    pub kind: QueryKind,
    pub horizon: usize,
    pub window: Option<usize>,
}

impl QueryFamily {
    pub fn new(kind: QueryKind, horizon: usize, window: Option<usize>) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::InvalidConfig("horizon must be positive".into()));
        }
        let window = match kind {
            QueryKind::FixedWindow => match window {
                Some(w) if (1..=horizon).contains(&w) => Some(w),
                Some(w) => {
                    return Err(Error::InvalidConfig(format!(
                        "window {w} outside [1, {horizon}]"
                    )))
                }
                None => return Err(Error::InvalidConfig("fixed-window queries need a window length".into())),
            },
            _ => None,
        };
        Ok(Self { kind, horizon, window })
    }

    pub fn len(&self) -> usize {
        let t = self.horizon;
        match self.kind {
            QueryKind::Cumulative => t,
            QueryKind::FixedWindow => t + 1 - self.window.unwrap_or(1),
            QueryKind::TimeWindow => t * (t + 1) / 2,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, t1: usize, t2: usize) -> bool {
        if check_window(t1, t2, self.horizon).is_err() {
            return false;
        }
        match self.kind {
            QueryKind::Cumulative => t1 == 1,
            QueryKind::FixedWindow => Some(t2 + 1 - t1) == self.window,
            QueryKind::TimeWindow => true,
        }
    }

    /// Windows in `(t1, t2)` lexicographic order.
    pub fn iter(&self) -> Box<dyn Iterator<Item = (usize, usize)> + Send + '_> {
        let t = self.horizon;
        match self.kind {
            QueryKind::Cumulative => Box::new((1..=t).map(|t2| (1, t2))),
            QueryKind::FixedWindow => {
                let w = self.window.unwrap_or(1);
                Box::new((1..=t + 1 - w).map(move |i| (i, i + w - 1)))
            }
            QueryKind::TimeWindow => Box::new((1..=t).flat_map(move |a| (a..=t).map(move |b| (a, b)))),
        }
    }

    /// Draws a window uniformly from the family.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (usize, usize) {
        let t = self.horizon;
        match self.kind {
            QueryKind::Cumulative => (1, rng.random_range(1..=t)),
            QueryKind::FixedWindow => {
                let w = self.window.unwrap_or(1);
                let i = rng.random_range(1..=t + 1 - w);
                (i, i + w - 1)
            }
            QueryKind::TimeWindow => loop {
                let a = rng.random_range(1..=t);
                let b = rng.random_range(1..=t);
                if a <= b {
                    break (a, b);
                }
            },
        }
    }
}
