// Copyright 2026 The winfreq Authors
// SPDX-License-Identifier: Apache-2.0

use rand::RngCore;

use super::{fit_at_least, BudgetLedger, EstimatorConfig, Release};
use crate::error::Result;
use crate::privacy::SeededRng;
use crate::query::QueryFamily;
use crate::stream::EventStream;

/// `Freq=k` as `Freq>=k` minus `Freq>=k+1`, each run at half the budget.
pub struct ExactKRelease {
    at_least: Box<dyn Release>,
    above: Box<dyn Release>,
    ledger: BudgetLedger,
}

impl std::fmt::Debug for ExactKRelease {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExactKRelease")
            .field("family", &self.at_least.family())
            .field("ledger", &self.ledger)
            .finish()
    }
}

impl Release for ExactKRelease {
    fn family(&self) -> QueryFamily {
        self.at_least.family()
    }

    fn estimate(&self, t1: usize, t2: usize) -> Result<f64> {
        Ok(self.at_least.estimate(t1, t2)? - self.above.estimate(t1, t2)?)
    }

    fn ledger(&self) -> &BudgetLedger {
        &self.ledger
    }
}

pub fn freq_exact(
    stream: &EventStream,
    config: &EstimatorConfig,
    rng: &mut SeededRng,
) -> Result<ExactKRelease> {
    let half = config.budget.halved();
    let (seed_a, seed_b) = (rng.next_u64(), rng.next_u64());
    let at_least = fit_at_least(stream, config, config.k, half, &mut SeededRng::new(seed_a))?;
    let above = fit_at_least(stream, config, config.k + 1, half, &mut SeededRng::new(seed_b))?;
    let mut ledger = BudgetLedger::default();
    ledger.push("exact_k.half", 2, Some(half), half);
    ledger.nest(at_least.ledger(), 1);
    ledger.nest(above.ledger(), 1);
    Ok(ExactKRelease {
        at_least,
        above,
        ledger,
    })
}
