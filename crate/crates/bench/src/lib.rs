// Copyright 2026 The winfreq Authors
// SPDX-License-Identifier: Apache-2.0

//! Fixtures for the mechanism benchmarks.

use winfreq::estimators::{DpLevel, EstimatorConfig};
use winfreq::genbench::{generate, GeneratorKind, GeneratorSpec};
use winfreq::privacy::PrivacyBudget;
use winfreq::query::QueryKind;
use winfreq::stream::{EventStream, Regime};

/// Uniform bundle stream with 64 items and about four events per step.
pub fn bench_stream(horizon: usize) -> EventStream {
    let spec = GeneratorSpec::new(GeneratorKind::Uniform { rate: 4.0 }, horizon, 64, Regime::Bundle, 17);
    generate(&spec).expect("valid generator spec")
}

pub fn bench_config(query: QueryKind, level: DpLevel, window: Option<usize>) -> EstimatorConfig {
    let mut c = EstimatorConfig::new(query, 2, PrivacyBudget::pure(1.0).expect("valid budget"));
    c.level = level;
    c.window = window;
    c.seed = 3;
    c
}
