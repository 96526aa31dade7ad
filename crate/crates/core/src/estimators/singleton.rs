// Copyright 2026 The winfreq Authors
// SPDX-License-Identifier: Apache-2.0

use rand::Rng;

use super::cumulative::{cumulative, CumulativeRelease};
use super::time_window::{time_window_item, TimeWindowItemRelease};
use super::{check_member, BudgetLedger, Composition, Release};
use crate::error::{Error, Result};
use crate::privacy::{NoiseKind, PrivacyBudget};
use crate::query::{QueryFamily, QueryKind};
use crate::stream::{compress_time, map_compressed_window, validate_stream, EventStream, Regime};

/// Block length balancing compression error against noise: `ceil(sqrt(T/eps))`
/// for pure DP and `ceil((T/eps^2)^(1/3))` otherwise, clamped to `[1, T]`.
pub fn default_block_length(horizon: usize, budget: PrivacyBudget) -> usize {
    let t = horizon as f64;
    let raw = if budget.is_pure() {
        (t / budget.epsilon).sqrt()
    } else {
        (t / (budget.epsilon * budget.epsilon)).cbrt()
    };
    (raw.ceil() as usize).clamp(1, horizon.max(1))
}

#[derive(Clone, Debug)]
enum Inner {
    Cumulative(Box<CumulativeRelease>),
    Windows(TimeWindowItemRelease),
}

/// Item-level estimates on a singleton stream, answered on the stream with
/// blocks of `block` steps merged into one.
#[derive(Clone, Debug)]
pub struct SingletonRelease {
    family: QueryFamily,
    block: usize,
    inner: Inner,
    ledger: BudgetLedger,
}

impl SingletonRelease {
    pub fn block_length(&self) -> usize {
        self.block
    }
}

impl Release for SingletonRelease {
    fn family(&self) -> QueryFamily {
        self.family
    }

    fn estimate(&self, t1: usize, t2: usize) -> Result<f64> {
        check_member(&self.family, t1, t2)?;
        let Some((a, b)) = map_compressed_window(t1, t2, self.family.horizon, self.block) else {
            return Ok(0.0);
        };
        match &self.inner {
            Inner::Cumulative(r) => r.prefix(b),
            Inner::Windows(r) => r.estimate(a, b),
        }
    }

    fn ledger(&self) -> &BudgetLedger {
        &self.ledger
    }
}

#[allow(clippy::too_many_arguments)]
pub fn singleton_wrapper<R: Rng + ?Sized>(
    stream: &EventStream,
    query: QueryKind,
    window: Option<usize>,
    k: usize,
    block: usize,
    budget: PrivacyBudget,
    composition: Composition,
    noise: NoiseKind,
    rng: &mut R,
) -> Result<SingletonRelease> {
    if stream.regime() != Regime::Singleton {
        return Err(Error::InvalidConfig("the singleton wrapper needs a singleton stream".into()));
    }
    validate_stream(stream)?;
    let family = QueryFamily::new(query, stream.horizon(), window)?;
    let compressed = compress_time(stream, block)?;
    let inner = match query {
        QueryKind::Cumulative => Inner::Cumulative(Box::new(cumulative(&compressed, k, budget, noise, rng)?)),
        _ => Inner::Windows(time_window_item(&compressed, k, budget, composition, noise, rng)?),
    };
    let mut ledger = BudgetLedger::default();
    ledger.push("singleton.compressed", 1, Some(budget), budget);
    ledger.nest(
        match &inner {
            Inner::Cumulative(r) => r.ledger(),
            Inner::Windows(r) => r.ledger(),
        },
        1,
    );
    Ok(SingletonRelease {
        family,
        block,
        inner,
        ledger,
    })
}
