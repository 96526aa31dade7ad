// Copyright 2026 The winfreq Authors
// SPDX-License-Identifier: Apache-2.0

//! Differentially private counts of the items occurring at least `k` times in
//! a window of an event stream.
//!
//! A stream is a sequence of steps `1..=T`, each carrying a multiset of items
//! from `1..=U`. The estimators reduce windowed `Freq>=k` queries to noisy
//! dyadic range counting over points derived from each item's occurrence list.

pub mod error;
pub mod estimators;
pub mod genbench;
pub mod index;
pub mod io;
pub mod manifest;
pub mod oracle;
pub mod privacy;
pub mod query;
pub mod rangequery;
pub mod stream;

pub use error::{Error, Result};
pub use estimators::{
    fit, fit_with, BudgetLedger, Composition, DpLevel, EstimateTable, EstimatorConfig, LedgerEntry, Release,
};
pub use genbench::{generate, run_experiment, ErrorReport, GeneratorSpec, QuerySelection, SweepSpec};
pub use index::{build_index, OccurrenceIndex};
pub use manifest::RunManifest;
pub use privacy::{NoiseKind, PrivacyBudget, SeededRng};
pub use query::{QueryFamily, QueryKind, WindowQuery};
pub use stream::{compress_time, validate_stream, EventStream, Regime};
