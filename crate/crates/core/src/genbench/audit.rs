// Copyright 2026 The winfreq Authors
// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::quantile;
use crate::error::Result;
use crate::estimators::{cumulative, Release};
use crate::privacy::{derive_seed, NoiseKind, PrivacyBudget, SeededRng};
use crate::stream::{EventStream, Regime};

/// Outcome of the coarse-bin likelihood-ratio check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditResult {
    pub epsilon: f64,
    pub runs: usize,
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub neighbor_counts: Vec<u64>,
    pub max_log_ratio: f64,
}

/// A 2-step, 2-item stream and its event-level neighbor (one event removed).
pub fn audit_pair() -> Result<(EventStream, EventStream)> {
    let mut a = EventStream::new(2, 2, Regime::Bundle)?;
    a.add(1, 1, 1)?;
    a.add(2, 2, 1)?;
    let mut b = EventStream::new(2, 2, Regime::Bundle)?;
    b.add(1, 1, 1)?;
    Ok((a, b))
}

fn outputs(stream: &EventStream, epsilon: f64, runs: usize, master: u64) -> Result<Vec<f64>> {
    let budget = PrivacyBudget::pure(epsilon)?;
    (0..runs)
        .into_par_iter()
        .map(|i| {
            let mut rng = SeededRng::new(derive_seed(master, i as u64));
            let r = cumulative(stream, 1, budget, NoiseKind::Laplace, &mut rng)?;
            r.estimate(1, stream.horizon())
        })
        .collect()
}

fn histogram(values: &[f64], edges: &[f64]) -> Vec<u64> {
    let mut counts = vec![0u64; edges.len() + 1];
    for &v in values {
        counts[edges.partition_point(|&e| e <= v)] += 1;
    }
    counts
}

/// Bins the final cumulative estimate of the pure-DP estimator on the audit
/// pair into `bins` buckets and returns the largest `|log(p / p')|`.
///
/// Bucket edges are quantiles of a separate pilot run so every bucket holds a
/// comparable share of the mass.
pub fn dp_ratio_audit(epsilon: f64, runs: usize, bins: usize, seed: u64) -> Result<AuditResult> {
    let (a, b) = audit_pair()?;
    let pilot = outputs(&a, epsilon, runs.min(20_000), derive_seed(seed, 0))?;
    let edges: Vec<f64> = (1..bins)
        .map(|i| quantile(pilot.clone(), i as f64 / bins as f64))
        .collect();
    let counts = histogram(&outputs(&a, epsilon, runs, derive_seed(seed, 1))?, &edges);
    let neighbor_counts = histogram(&outputs(&b, epsilon, runs, derive_seed(seed, 2))?, &edges);
    let max_log_ratio = counts
        .iter()
        .zip(&neighbor_counts)
        .map(|(&p, &q)| ((p.max(1) as f64) / (q.max(1) as f64)).ln().abs())
        .fold(0.0, f64::max);
    Ok(AuditResult {
        epsilon,
        runs,
        edges,
        counts,
        neighbor_counts,
        max_log_ratio,
    })
}
