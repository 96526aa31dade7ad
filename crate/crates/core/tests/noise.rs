// Copyright 2026 The winfreq Authors
// SPDX-License-Identifier: Apache-2.0

mod common;

#[test]
fn node_and_query_variances_match() {
    let msg = common::noise_calibration(10_000, 12).unwrap_or_else(|e| panic!("{e}"));
    println!("{msg}");
}
