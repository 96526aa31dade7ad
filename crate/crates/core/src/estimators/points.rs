// Copyright 2026 The winfreq Authors
// SPDX-License-Identifier: Apache-2.0

//! Point sets the estimators hand to the range-counting mechanisms.
//!
//! All three constructions read the sentinel-padded occurrence lists
//! `t^1 <= ... <= t^m` of each item (`k` zeros in front, `k` copies of `T + 1`
//! at the back).

use crate::index::OccurrenceIndex;
use crate::rangequery::Point2D;

/// One point per item at its `k`-th real occurrence; items with fewer than `k`
/// occurrences contribute nothing.
///
/// The `k`-th real occurrence sits at position `2k` of the padded list, after
/// the `k` leading sentinels. A prefix count over `[0, t]` then equals the
/// number of items with at least `k` occurrences in `[1, t]`.
pub fn cumulative_points(index: &OccurrenceIndex) -> Vec<u32> {
    let k = index.k();
    let end = (index.horizon() + 1) as u32;
    index
        .lists()
        .map(|list| list[2 * k - 1])
        .filter(|&t| t < end)
        .collect()
}

/// The two multisets for fixed windows of length `window` over a horizon of at
/// most `2 * window`.
///
/// For each item and each `l` in `1..=m-k` with `t^{l+k} - t^l > W`, `t^l` goes
/// into the first set and `min(t^{l+1}, t^{l+k} - W)` into the second. Counting
/// points strictly below `i` in each, the difference is the number of items
/// with fewer than `k` occurrences in `[i, i + W - 1]`.
pub fn fixed_window_points(index: &OccurrenceIndex, window: usize) -> (Vec<u32>, Vec<u32>) {
    let k = index.k();
    let w = window as u32;
    let (mut x, mut x_shift) = (Vec::new(), Vec::new());
    for list in index.lists() {
        for l in 0..list.len() - k {
            let (start, kth) = (list[l], list[l + k]);
            if kth - start > w {
                x.push(start);
                x_shift.push(list[l + 1].min(kth - w));
            }
        }
    }
    (x, x_shift)
}

/// The two 2d multisets for arbitrary windows.
///
/// For each item and `l` in `1..=m-k`: `(t^l + 1, t^{l+k} - 1)` into the first
/// set and `(t^{l+1} + 1, t^{l+k} - 1)` into the second. First coordinates that
/// reach `T + 2` are clamped to `T + 1`; no query with `i <= T` counts them
/// either way.
pub fn time_window_points(index: &OccurrenceIndex) -> (Vec<Point2D>, Vec<Point2D>) {
    let k = index.k();
    let bound = (index.horizon() + 1) as u32;
    let (mut x, mut x_shift) = (Vec::new(), Vec::new());
    for list in index.lists() {
        for l in 0..list.len() - k {
            let last = list[l + k] - 1;
            x.push(Point2D::new(list[l] + 1, last));
            x_shift.push(Point2D::new((list[l + 1] + 1).min(bound), last));
        }
    }
    (x, x_shift)
}
