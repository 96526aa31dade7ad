// Copyright 2026 The winfreq Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact, non-private answers computed directly from raw counts.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::query::{check_window, QueryFamily};
use crate::stream::EventStream;

fn window_counts(stream: &EventStream, t1: usize, t2: usize) -> Result<HashMap<usize, u64>> {
    check_window(t1, t2, stream.horizon())?;
    let mut counts = HashMap::new();
    for (_, u, c) in stream.entries_in(t1, t2) {
        *counts.entry(u).or_insert(0u64) += c;
    }
    Ok(counts)
}

/// Number of items occurring at least `k` times in steps `[t1, t2]`.
pub fn exact_freq_at_least(stream: &EventStream, k: usize, t1: usize, t2: usize) -> Result<u64> {
    if k == 0 {
        return Err(Error::InvalidConfig("k must be at least 1".into()));
    }
    let counts = window_counts(stream, t1, t2)?;
    Ok(counts.values().filter(|&&c| c >= k as u64).count() as u64)
}

/// Number of items occurring exactly `k` times in steps `[t1, t2]`.
pub fn exact_freq_equal(stream: &EventStream, k: usize, t1: usize, t2: usize) -> Result<u64> {
    if k == 0 {
        return Err(Error::InvalidConfig("k must be at least 1".into()));
    }
    let counts = window_counts(stream, t1, t2)?;
    Ok(counts.values().filter(|&&c| c == k as u64).count() as u64)
}

/// Exact answers for a list of windows, sweeping the right end incrementally for
/// each distinct left end. `exact_k` selects `Freq=k` instead of `Freq>=k`.
pub fn exact_answers(
    stream: &EventStream,
    k: usize,
    exact_k: bool,
    windows: &[(usize, usize)],
) -> Result<Vec<u64>> {
    if k == 0 {
        return Err(Error::InvalidConfig("k must be at least 1".into()));
    }
    let k = k as u64;
    let mut order: Vec<usize> = (0..windows.len()).collect();
    order.sort_by_key(|&i| windows[i]);
    for &(t1, t2) in windows {
        check_window(t1, t2, stream.horizon())?;
    }

    let mut out = vec![0u64; windows.len()];
    let mut counts: HashMap<usize, u64> = HashMap::new();
    let (mut at_least, mut equal) = (0u64, 0u64);
    let mut current: Option<(usize, usize)> = None;
    for i in order {
        let (t1, t2) = windows[i];
        let from = match current {
            Some((a, b)) if a == t1 && b <= t2 => b + 1,
            _ => {
                counts.clear();
                at_least = 0;
                equal = 0;
                t1
            }
        };
        if from <= t2 {
            for (_, u, c) in stream.entries_in(from, t2) {
                let entry = counts.entry(u).or_insert(0);
                let before = *entry;
                *entry += c;
                let after = *entry;
                if before < k && after >= k {
                    at_least += 1;
                }
                if before == k {
                    equal -= 1;
                }
                if after == k {
                    equal += 1;
                }
            }
        }
        current = Some((t1, t2));
        out[i] = if exact_k { equal } else { at_least };
    }
    Ok(out)
}

/// Exact answers for every window of a family, in family order.
pub fn exact_family(
    stream: &EventStream,
    k: usize,
    exact_k: bool,
    family: &QueryFamily,
) -> Result<Vec<((usize, usize), u64)>> {
    let windows: Vec<_> = family.iter().collect();
    let values = exact_answers(stream, k, exact_k, &windows)?;
    Ok(windows.into_iter().zip(values).collect())
}
