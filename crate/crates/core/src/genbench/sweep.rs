// Copyright 2026 The winfreq Authors
// SPDX-License-Identifier: Apache-2.0

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::generate::{generate, GeneratorSpec};
use super::report::{run_experiment, ErrorSummary, QuerySelection};
use crate::error::{Error, Result};
use crate::estimators::EstimatorConfig;
use crate::io::csv_writer;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepAxis {
    T,
    W,
    #[serde(rename = "k")]
    K,
    #[serde(rename = "epsilon")]
    Epsilon,
}

impl std::fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::T => "T",
            Self::W => "W",
            Self::K => "k",
            Self::Epsilon => "epsilon",
        })
    }
}

/// A sweep: a base stream recipe and estimator, one axis, and its values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub generator: GeneratorSpec,
    pub config: EstimatorConfig,
    pub trials: usize,
    #[serde(default = "all")]
    pub queries: QuerySelection,
}

fn all() -> QuerySelection {
    QuerySelection::All
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub summary: ErrorSummary,
}

fn as_count(axis: SweepAxis, v: f64) -> Result<usize> {
    if v >= 1.0 && v.fract() == 0.0 {
        Ok(v as usize)
    } else {
        Err(Error::InvalidConfig(format!("{axis} values must be positive integers, got {v}")))
    }
}

/// The stream recipe and estimator for one sweep point.
pub fn sweep_point(spec: &SweepSpec, value: f64) -> Result<(GeneratorSpec, EstimatorConfig)> {
    let (mut generator, mut config) = (spec.generator.clone(), spec.config.clone());
    match spec.axis {
        SweepAxis::T => generator.horizon = as_count(spec.axis, value)?,
        SweepAxis::W => config.window = Some(as_count(spec.axis, value)?),
        SweepAxis::K => {
            config.k = as_count(spec.axis, value)?;
            generator.k = config.k;
        }
        SweepAxis::Epsilon => config.budget.epsilon = value,
    }
    Ok((generator, config))
}

pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    if spec.values.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidConfig("sweep values must be ascending".into()));
    }
    spec.values
        .iter()
        .map(|&value| {
            let (generator, config) = sweep_point(spec, value)?;
            let stream = generate(&generator)?;
            let report = run_experiment(&stream, &config, spec.trials, spec.queries)?;
            Ok(SweepRow {
                value,
                summary: report.summary,
            })
        })
        .collect()
}

/// One summary line per sweep point. Wall-clock time is left out so that
/// reruns are byte-identical.
pub fn write_sweep_csv<W: Write>(axis: SweepAxis, rows: &[SweepRow], w: W) -> Result<()> {
    let mut out = csv_writer(w);
    out.write_record([
        "axis",
        "value",
        "trials",
        "queries",
        "max_error",
        "mean_error",
        "mean_max_error",
        "alpha",
    ])?;
    for r in rows {
        let s = &r.summary;
        out.write_record([
            axis.to_string(),
            r.value.to_string(),
            s.trials.to_string(),
            s.queries_per_trial.to_string(),
            s.max_error.to_string(),
            s.mean_error.to_string(),
            s.mean_max_error.to_string(),
            s.alpha.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}
