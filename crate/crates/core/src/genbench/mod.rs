// Copyright 2026 The winfreq Authors
// SPDX-License-Identifier: Apache-2.0

//! Stream generators, lower-bound embeddings, and the error-measurement harness.

mod audit;
mod generate;
mod report;
mod sweep;

pub use audit::{audit_pair, dp_ratio_audit, AuditResult};
pub use generate::{generate, generate_hard_marginal, generate_hard_range, GeneratorKind, GeneratorSpec};
pub use report::{
    quantile, run_experiment, select_windows, ErrorReport, ErrorRow, ErrorSummary, QuerySelection, BETA,
};
pub use sweep::{sweep, sweep_point, write_sweep_csv, SweepAxis, SweepRow, SweepSpec};
