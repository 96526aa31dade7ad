// Copyright 2026 The winfreq Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("stream violation at t={t}, item={item}: {reason}")]
    StreamViolation {
        t: usize,
        item: usize,
        reason: String,
    },
    #[error("invalid window [{t1}, {t2}] for horizon {horizon}")]
    InvalidWindow { t1: usize, t2: usize, horizon: usize },
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("invalid privacy budget: {0}")]
    InvalidBudget(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("infeasible generator spec: {0}")]
    InfeasibleSpec(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
