// Copyright 2026 The winfreq Authors
// SPDX-License-Identifier: Apache-2.0

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{fit, EstimatorConfig};
use crate::io::csv_writer;
use crate::oracle::exact_answers;
use crate::privacy::{derive_seed, SeededRng};
use crate::query::{QueryFamily, QueryKind};
use crate::stream::EventStream;

/// Failure probability at which the empirical `alpha` is reported.
pub const BETA: f64 = 0.1;

/// Counter reserved for the query-sampling stream; trial seeds use `0..trials`.
const QUERY_SAMPLE_COUNTER: u64 = u64::MAX;

/// Which windows of the family an experiment evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuerySelection {
    All,
    /// This many windows drawn uniformly (with replacement) from the family, the
    /// same set in every trial.
    Sample(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorRow {
    pub trial: usize,
    pub query_kind: QueryKind,
    pub t1: usize,
    pub t2: usize,
    pub k: usize,
    pub estimate: f64,
    pub exact: u64,
    pub abs_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorSummary {
    pub trials: usize,
    pub queries_per_trial: usize,
    pub max_error: f64,
    pub mean_error: f64,
    /// Mean over trials of the per-trial maximum error.
    pub mean_max_error: f64,
    /// Empirical `(1 - BETA)`-quantile of all absolute errors.
    pub alpha: f64,
}

impl ErrorSummary {
    /// Recomputes the summary from rows grouped by trial.
    pub fn from_rows(rows: &[ErrorRow]) -> Self {
        let trials = rows.iter().map(|r| r.trial + 1).max().unwrap_or(0);
        let mut per_trial_max = vec![0f64; trials];
        for r in rows {
            per_trial_max[r.trial] = per_trial_max[r.trial].max(r.abs_error);
        }
        let errors: Vec<f64> = rows.iter().map(|r| r.abs_error).collect();
        let n = errors.len();
        Self {
            trials,
            queries_per_trial: n.checked_div(trials).unwrap_or(0),
            max_error: errors.iter().copied().fold(0.0, f64::max),
            mean_error: if n == 0 { 0.0 } else { errors.iter().sum::<f64>() / n as f64 },
            mean_max_error: if trials == 0 {
                0.0
            } else {
                per_trial_max.iter().sum::<f64>() / trials as f64
            },
            alpha: quantile(errors, 1.0 - BETA),
        }
    }
}

/// The `q`-quantile as the `ceil(q n)`-th smallest value.
pub fn quantile(mut values: Vec<f64>, q: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_by(f64::total_cmp);
    let rank = ((q * values.len() as f64).ceil() as usize).clamp(1, values.len());
    values[rank - 1]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub rows: Vec<ErrorRow>,
    pub summary: ErrorSummary,
    pub wall_clock_secs: f64,
}

impl ErrorReport {
    /// Rows as `query_kind,t1,t2,k,estimate,exact,abs_error`, trial by trial.
    pub fn write_rows_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv_writer(w);
        out.write_record(["query_kind", "t1", "t2", "k", "estimate", "exact", "abs_error"])?;
        for r in &self.rows {
            out.write_record([
                r.query_kind.to_string(),
                r.t1.to_string(),
                r.t2.to_string(),
                r.k.to_string(),
                r.estimate.to_string(),
                r.exact.to_string(),
                r.abs_error.to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// The windows an experiment evaluates, in evaluation order.
pub fn select_windows(family: &QueryFamily, selection: QuerySelection, seed: u64) -> Vec<(usize, usize)> {
    match selection {
        QuerySelection::All => family.iter().collect(),
        QuerySelection::Sample(n) => {
            let mut rng = SeededRng::derive(seed, QUERY_SAMPLE_COUNTER);
            (0..n).map(|_| family.sample(&mut rng)).collect()
        }
    }
}

/// Runs `config` on `stream` for `trials` independent seeds derived from
/// `config.seed` and scores every selected window against the oracle.
pub fn run_experiment(
    stream: &EventStream,
    config: &EstimatorConfig,
    trials: usize,
    selection: QuerySelection,
) -> Result<ErrorReport> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be positive".into()));
    }
    let started = Instant::now();
    config.check(stream.horizon())?;
    let family = QueryFamily::new(config.query, stream.horizon(), config.window)?;
    let windows = select_windows(&family, selection, config.seed);
    let exact = exact_answers(stream, config.k, config.exact_k, &windows)?;
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut trial_config = config.clone();
            trial_config.seed = derive_seed(config.seed, trial as u64);
            let release = fit(stream, &trial_config)?;
            windows
                .iter()
                .zip(&exact)
                .map(|(&(t1, t2), &truth)| {
                    let estimate = release.estimate(t1, t2)?;
                    Ok(ErrorRow {
                        trial,
                        query_kind: config.query,
                        t1,
                        t2,
                        k: config.k,
                        estimate,
                        exact: truth,
                        abs_error: (estimate - truth as f64).abs(),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<ErrorRow> = per_trial.into_iter().flatten().collect();
    let summary = ErrorSummary::from_rows(&rows);
    Ok(ErrorReport {
        rows,
        summary,
        wall_clock_secs: started.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genbench::{generate, GeneratorKind, GeneratorSpec};
    use crate::privacy::{NoiseKind, PrivacyBudget};
    use crate::stream::Regime;

    fn stream() -> EventStream {
        generate(&GeneratorSpec::new(GeneratorKind::Uniform { rate: 1.5 }, 40, 8, Regime::Bundle, 5)).unwrap()
    }

    fn config(query: QueryKind) -> EstimatorConfig {
        let mut c = EstimatorConfig::new(query, 2, PrivacyBudget::pure(1.0).unwrap());
        c.window = Some(6);
        c.seed = 99;
        c
    }

    #[test]
    fn noiseless_error_is_zero() {
        for q in [QueryKind::Cumulative, QueryKind::FixedWindow, QueryKind::TimeWindow] {
            let mut c = config(q);
            c.noise = NoiseKind::None;
            let r = run_experiment(&stream(), &c, 3, QuerySelection::All).unwrap();
            assert_eq!(r.summary.max_error, 0.0);
            assert_eq!(r.summary.trials, 3);
        }
    }

    #[test]
    fn same_seed_same_report() {
        let c = config(QueryKind::TimeWindow);
        let a = run_experiment(&stream(), &c, 4, QuerySelection::Sample(50)).unwrap();
        let b = run_experiment(&stream(), &c, 4, QuerySelection::Sample(50)).unwrap();
        assert_eq!(a.rows, b.rows);
        assert_eq!(a.summary, b.summary);
    }

    #[test]
    fn summary_recomputes_from_rows() {
        let r = run_experiment(&stream(), &config(QueryKind::FixedWindow), 5, QuerySelection::All).unwrap();
        assert_eq!(ErrorSummary::from_rows(&r.rows), r.summary);
        assert_eq!(r.summary.queries_per_trial, 35);
        assert!(r.summary.alpha <= r.summary.max_error);
    }

    #[test]
    fn quantile_rank() {
        let v: Vec<f64> = (1..=10).map(f64::from).collect();
        assert_eq!(quantile(v.clone(), 0.9), 9.0);
        assert_eq!(quantile(v, 1.0), 10.0);
        assert_eq!(quantile(vec![3.0], 0.9), 3.0);
    }

    #[test]
    fn rows_csv_header() {
        let mut c = config(QueryKind::Cumulative);
        c.noise = NoiseKind::None;
        let r = run_experiment(&stream(), &c, 1, QuerySelection::All).unwrap();
        let mut buf = Vec::new();
        r.write_rows_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("query_kind,t1,t2,k,estimate,exact,abs_error\ncumulative,1,1,2,"));
        assert_eq!(text.lines().count(), 41);
    }
}
