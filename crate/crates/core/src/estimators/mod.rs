// Copyright 2026 The winfreq Authors
// SPDX-License-Identifier: Apache-2.0

//! Private `Freq>=k` estimators built by reducing to range counting.
//!
//! Every estimator produces a [`Release`]: the noisy structures built once from
//! the stream, which then answer any window in their query family without
//! touching the data again. [`EstimateTable`] materializes a whole family.

mod cumulative;
mod exact_k;
mod fixed_window;
pub mod points;
mod singleton;
mod time_window;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::privacy::{NoiseKind, PrivacyBudget, SeededRng};
use crate::query::{QueryFamily, QueryKind};
use crate::stream::{validate_stream, EventStream, Regime};

pub use cumulative::{cumulative, CumulativeRelease};
pub use exact_k::{freq_exact, ExactKRelease};
pub use fixed_window::{
    fixed_window_core, fixed_window_event, fixed_window_item, tile_for_query, tile_span,
    FixedWindowCore, FixedWindowRelease,
};
pub use singleton::{default_block_length, singleton_wrapper, SingletonRelease};
pub use time_window::{time_window_event, time_window_item, TimeWindowEventRelease, TimeWindowItemRelease};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DpLevel {
    Event,
    Item,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Composition {
    Basic,
    Advanced,
}

/// Everything needed to reproduce one estimator run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimatorConfig {
    pub query: QueryKind,
    pub k: usize,
    #[serde(default)]
    pub window: Option<usize>,
    pub level: DpLevel,
    pub regime: Regime,
    pub budget: PrivacyBudget,
    pub composition: Composition,
    pub noise: NoiseKind,
    pub seed: u64,
    /// Singleton time-compression block length; defaulted from the budget when absent.
    #[serde(default)]
    pub block_length: Option<usize>,
    /// Answer `Freq=k` instead of `Freq>=k`.
    #[serde(default)]
    pub exact_k: bool,
}

impl EstimatorConfig {
    pub fn new(query: QueryKind, k: usize, budget: PrivacyBudget) -> Self {
        Self {
            query,
            k,
            window: None,
            level: DpLevel::Event,
            regime: Regime::Bundle,
            budget,
            composition: Composition::Basic,
            noise: NoiseKind::Laplace,
            seed: 0,
            block_length: None,
            exact_k: false,
        }
    }

    /// Checks the configuration on its own and against a stream's shape.
    pub fn check(&self, horizon: usize) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidConfig("k must be at least 1".into()));
        }
        PrivacyBudget::new(self.budget.epsilon, self.budget.delta)?;
        if self.noise == NoiseKind::Gaussian && self.budget.delta <= 0.0 {
            return Err(Error::InvalidConfig("gaussian noise needs delta > 0".into()));
        }
        let composes = self.level == DpLevel::Item && self.query != QueryKind::Cumulative;
        if composes && self.composition == Composition::Advanced && self.budget.delta <= 0.0 {
            return Err(Error::InvalidConfig("advanced composition needs delta > 0".into()));
        }
        if self.block_length == Some(0) {
            return Err(Error::InvalidConfig("block length must be positive".into()));
        }
        QueryFamily::new(self.query, horizon, self.window)?;
        Ok(())
    }
}

/// One line of the budget ledger: what the reduction nominally allots a
/// sub-instance and what was actually used.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub stage: String,
    pub instances: usize,
    pub nominal: Option<PrivacyBudget>,
    pub used: PrivacyBudget,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BudgetLedger {
    pub entries: Vec<LedgerEntry>,
}

impl BudgetLedger {
    pub fn push(
        &mut self,
        stage: impl Into<String>,
        instances: usize,
        nominal: Option<PrivacyBudget>,
        used: PrivacyBudget,
    ) {
        self.entries.push(LedgerEntry {
            stage: stage.into(),
            instances,
            nominal,
            used,
        });
    }

    /// Appends `other`, multiplying its instance counts by `times`.
    pub fn nest(&mut self, other: &BudgetLedger, times: usize) {
        for e in &other.entries {
            let mut e = e.clone();
            e.instances *= times;
            self.entries.push(e);
        }
    }

    pub fn find(&self, stage: &str) -> Option<&LedgerEntry> {
        self.entries.iter().find(|e| e.stage == stage)
    }
}

/// Noisy structures that answer every window of one query family.
pub trait Release: Send + Sync {
    fn family(&self) -> QueryFamily;

    /// Estimate for a window of the family. Windows outside it are errors.
    fn estimate(&self, t1: usize, t2: usize) -> Result<f64>;

    fn ledger(&self) -> &BudgetLedger;
}

pub(crate) fn check_member(family: &QueryFamily, t1: usize, t2: usize) -> Result<()> {
    if family.contains(t1, t2) {
        Ok(())
    } else {
        Err(Error::InvalidWindow {
            t1,
            t2,
            horizon: family.horizon,
        })
    }
}

/// Estimates for every window of a family, in family order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateTable {
    pub family: QueryFamily,
    pub entries: Vec<(usize, usize, f64)>,
    pub ledger: BudgetLedger,
}

impl EstimateTable {
    pub fn from_release(release: &dyn Release) -> Result<Self> {
        let family = release.family();
        let entries = family
            .iter()
            .map(|(a, b)| release.estimate(a, b).map(|v| (a, b, v)))
            .collect::<Result<_>>()?;
        Ok(Self {
            family,
            entries,
            ledger: release.ledger().clone(),
        })
    }

    pub fn get(&self, t1: usize, t2: usize) -> Option<f64> {
        self.entries
            .binary_search_by(|&(a, b, _)| (a, b).cmp(&(t1, t2)))
            .ok()
            .map(|i| self.entries[i].2)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Runs the estimator `config` selects on `stream`, seeded from `config.seed`.
///
/// Selection: cumulative queries always use the cumulative reduction; otherwise
/// event-level uses the event-level reduction, item-level on bundle streams uses
/// composition, and item-level on singleton streams compresses time first.
pub fn fit(stream: &EventStream, config: &EstimatorConfig) -> Result<Box<dyn Release>> {
    fit_with(stream, config, &mut SeededRng::new(config.seed))
}

pub fn fit_with(
    stream: &EventStream,
    config: &EstimatorConfig,
    rng: &mut SeededRng,
) -> Result<Box<dyn Release>> {
    validate_stream(stream)?;
    config.check(stream.horizon())?;
    if stream.regime() != config.regime {
        return Err(Error::InvalidConfig(format!(
            "configured for {} streams but the stream is {}",
            config.regime,
            stream.regime()
        )));
    }
    if config.exact_k {
        let release = freq_exact(stream, config, rng)?;
        return Ok(Box::new(release));
    }
    fit_at_least(stream, config, config.k, config.budget, rng)
}

pub(crate) fn fit_at_least(
    stream: &EventStream,
    config: &EstimatorConfig,
    k: usize,
    budget: PrivacyBudget,
    rng: &mut SeededRng,
) -> Result<Box<dyn Release>> {
    let noise = config.noise;
    Ok(match (config.query, config.level, config.regime) {
        (QueryKind::Cumulative, _, _) => Box::new(cumulative(stream, k, budget, noise, rng)?),
        (QueryKind::FixedWindow, DpLevel::Event, _) => {
            Box::new(fixed_window_event(stream, k, window_of(config)?, budget, noise, rng)?)
        }
        (QueryKind::TimeWindow, DpLevel::Event, _) => {
            Box::new(time_window_event(stream, k, budget, noise, rng)?)
        }
        (QueryKind::FixedWindow, DpLevel::Item, Regime::Bundle) => Box::new(fixed_window_item(
            stream,
            k,
            window_of(config)?,
            budget,
            config.composition,
            noise,
            rng,
        )?),
        (QueryKind::TimeWindow, DpLevel::Item, Regime::Bundle) => {
            Box::new(time_window_item(stream, k, budget, config.composition, noise, rng)?)
        }
        (query, DpLevel::Item, Regime::Singleton) => {
            let block = config
                .block_length
                .unwrap_or_else(|| default_block_length(stream.horizon(), budget));
            Box::new(singleton_wrapper(
                stream,
                query,
                config.window,
                k,
                block,
                budget,
                config.composition,
                noise,
                rng,
            )?)
        }
    })
}

fn window_of(config: &EstimatorConfig) -> Result<usize> {
    config
        .window
        .ok_or_else(|| Error::InvalidConfig("fixed-window queries need a window length".into()))
}
