// Copyright 2026 The winfreq Authors
// SPDX-License-Identifier: Apache-2.0

//! Checks shared by the integration suites and the acceptance runner. Each
//! returns `Err` with a description of the first violation.

#![allow(dead_code)]

use rand::Rng;
use winfreq::estimators::points::{cumulative_points, fixed_window_points, time_window_points};
use winfreq::estimators::{fit, Composition, DpLevel, EstimatorConfig, Release};
use winfreq::oracle::{exact_answers, exact_freq_at_least};
use winfreq::privacy::{NoiseKind, PrivacyBudget, SeededRng};
use winfreq::query::{QueryFamily, QueryKind};
use winfreq::rangequery::{Point2D, RangeTree1d, RangeTree2d};
use winfreq::stream::{EventStream, Regime};
use winfreq::OccurrenceIndex;

pub type Check = Result<String, String>;

/// A random stream: bundle steps give each item a count in `0..=3` with
/// probability `density`; singleton steps carry one event with that
/// probability.
pub fn random_stream<R: Rng>(rng: &mut R, horizon: usize, universe: usize, regime: Regime, density: f64) -> EventStream {
    let mut s = EventStream::new(horizon, universe, regime).unwrap();
    for t in 1..=horizon {
        match regime {
            Regime::Bundle => {
                for u in 1..=universe {
                    if rng.random_bool(density) {
                        s.add(t, u, rng.random_range(1..=3)).unwrap();
                    }
                }
            }
            Regime::Singleton => {
                if rng.random_bool(density) {
                    s.add(t, rng.random_range(1..=universe), 1).unwrap();
                }
            }
        }
    }
    s
}

pub fn noiseless(query: QueryKind, k: usize, window: Option<usize>, level: DpLevel, regime: Regime) -> EstimatorConfig {
    let mut c = EstimatorConfig::new(query, k, PrivacyBudget::pure(1.0).unwrap());
    c.window = window;
    c.level = level;
    c.regime = regime;
    c.noise = NoiseKind::None;
    c.composition = Composition::Basic;
    // the singleton wrapper is exact only without compression
    c.block_length = Some(1);
    c
}

/// Compares every query of `config`'s family against the oracle.
pub fn matches_oracle(stream: &EventStream, config: &EstimatorConfig) -> Result<usize, String> {
    let release = fit(stream, config).map_err(|e| format!("{config:?}: {e}"))?;
    let family = QueryFamily::new(config.query, stream.horizon(), config.window).unwrap();
    let windows: Vec<_> = family.iter().collect();
    let exact = exact_answers(stream, config.k, config.exact_k, &windows).unwrap();
    for (&(a, b), &truth) in windows.iter().zip(&exact) {
        let est = release.estimate(a, b).unwrap();
        if est != truth as f64 {
            return Err(format!(
                "{:?}/{:?}/{:?} k={} W={:?} exact_k={} window [{a},{b}]: estimate {est}, exact {truth}\nstream {:?}",
                config.query,
                config.level,
                config.regime,
                config.k,
                config.window,
                config.exact_k,
                stream.entries().collect::<Vec<_>>()
            ));
        }
    }
    Ok(windows.len())
}

/// Every estimator path, plus `Freq=k`, in no-noise mode against the oracle.
pub fn oracle_equivalence(instances: usize, seed: u64) -> Check {
    let mut rng = SeededRng::new(seed);
    let mut queries = 0usize;
    for n in 0..instances {
        let regime = if n % 2 == 0 { Regime::Bundle } else { Regime::Singleton };
        let horizon = rng.random_range(1..=64);
        let universe = rng.random_range(1..=12);
        let k = rng.random_range(1..=4);
        let density = rng.random_range(0.05..0.6);
        let stream = random_stream(&mut rng, horizon, universe, regime, density);
        let window = rng.random_range(1..=horizon);
        let mut configs = Vec::new();
        for level in [DpLevel::Event, DpLevel::Item] {
            configs.push(noiseless(QueryKind::Cumulative, k, None, level, regime));
            configs.push(noiseless(QueryKind::FixedWindow, k, Some(window), level, regime));
            configs.push(noiseless(QueryKind::TimeWindow, k, None, level, regime));
        }
        let mut exact_k = noiseless(QueryKind::TimeWindow, k, None, DpLevel::Event, regime);
        exact_k.exact_k = true;
        configs.push(exact_k);
        let mut exact_k_fixed = noiseless(QueryKind::FixedWindow, k, Some(window), DpLevel::Item, regime);
        exact_k_fixed.exact_k = true;
        configs.push(exact_k_fixed);
        for c in &configs {
            queries += matches_oracle(&stream, c)?;
        }
    }
    Ok(format!("{instances} random instances, {queries} queries exact"))
}

/// Single-item streams over `T <= 6` with per-step counts in `{0, 1, 2}`, every
/// `k <= 3` and every `W`. Covers sentinel-only items, exactly-`k` items,
/// gaps of `W` and `W + 1`, and `t^{l+k} - W = i` hits, which are counted.
pub fn boundary_suite() -> Check {
    let mut hits = 0usize;
    let mut cases = 0usize;
    for horizon in 1..=6usize {
        for code in 0..3usize.pow(horizon as u32) {
            let mut s = EventStream::new(horizon, 1, Regime::Bundle).unwrap();
            let mut c = code;
            for t in 1..=horizon {
                s.add(t, 1, (c % 3) as u64).unwrap();
                c /= 3;
            }
            for k in 1..=3 {
                let index = OccurrenceIndex::build(&s, k).unwrap();
                let list = index.list(1);
                for w in 1..=horizon {
                    for i in 1..=horizon + 1 - w {
                        let star = list.iter().rposition(|&t| (t as usize) < i).unwrap();
                        if list[star + k] as usize == i + w {
                            hits += 1;
                        }
                    }
                    for level in [DpLevel::Event, DpLevel::Item] {
                        matches_oracle(&s, &noiseless(QueryKind::FixedWindow, k, Some(w), level, Regime::Bundle))?;
                        cases += 1;
                    }
                }
                matches_oracle(&s, &noiseless(QueryKind::Cumulative, k, None, DpLevel::Event, Regime::Bundle))?;
                matches_oracle(&s, &noiseless(QueryKind::TimeWindow, k, None, DpLevel::Event, Regime::Bundle))?;
                cases += 2;
            }
        }
    }
    if hits == 0 {
        return Err("boundary suite produced no t^{l+k} - W = i hits".into());
    }
    Ok(format!("{cases} boundary cases, {hits} boundary hits"))
}

/// `t^{l*(u, i) + k}` with `l*` the last padded index below `i`.
fn kth_after(list: &[u32], k: usize, i: usize) -> usize {
    let star = list.iter().rposition(|&t| (t as usize) < i).unwrap();
    list[star + k] as usize
}

/// The two displayed sum-of-indicator identities, through no-noise trees.
pub fn cancellation_identities(instances: usize, seed: u64) -> Check {
    let mut rng = SeededRng::new(seed);
    let none = PrivacyBudget::pure(1.0).unwrap();
    let mut checked = 0usize;
    for _ in 0..instances {
        let w = rng.random_range(1..=24);
        let horizon = rng.random_range(w..=2 * w);
        let universe = rng.random_range(1..=10);
        let k = rng.random_range(1..=4);
        let density = rng.random_range(0.05..0.5);
        let s = random_stream(&mut rng, horizon, universe, Regime::Bundle, density);
        let index = OccurrenceIndex::build(&s, k).unwrap();
        let bound = (horizon + 1) as u32;

        let (xs, xs_shift) = fixed_window_points(&index, w);
        let x = RangeTree1d::build(&xs, bound, none, NoiseKind::None, &mut rng).unwrap();
        let x_shift = RangeTree1d::build(&xs_shift, bound, none, NoiseKind::None, &mut rng).unwrap();
        for i in 1..=horizon + 1 - w {
            let lhs = x.query(0, (i - 1) as u32).unwrap() - x_shift.query(0, (i - 1) as u32).unwrap();
            let rhs = index.lists().filter(|l| kth_after(l, k, i) > i + w - 1).count() as f64;
            if lhs != rhs {
                return Err(format!("fixed-window identity: T={horizon} W={w} k={k} i={i}: {lhs} != {rhs}"));
            }
            checked += 1;
        }

        let (ps, ps_shift) = time_window_points(&index);
        let x = RangeTree2d::build(&ps, bound, none, NoiseKind::None, &mut rng).unwrap();
        let x_shift = RangeTree2d::build(&ps_shift, bound, none, NoiseKind::None, &mut rng).unwrap();
        for i in 1..=horizon {
            for j in i..=horizon {
                let (lo, hi) = (Point2D::new(1, j as u32), Point2D::new(i as u32, bound));
                let lhs = x.query(lo, hi).unwrap() - x_shift.query(lo, hi).unwrap();
                let rhs = index.lists().filter(|l| kth_after(l, k, i) > j).count() as f64;
                if lhs != rhs {
                    return Err(format!("time-window identity: T={horizon} k={k} [{i},{j}]: {lhs} != {rhs}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{instances} instances, {checked} identity evaluations exact"))
}

/// Size of the multiset symmetric difference of two sorted vectors.
pub fn symmetric_difference<T: Ord + Copy>(mut a: Vec<T>, mut b: Vec<T>) -> usize {
    a.sort_unstable();
    b.sort_unstable();
    let (mut i, mut j, mut diff) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                diff += 1;
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                diff += 1;
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    diff + (a.len() - i) + (b.len() - j)
}

/// A copy of `s` with one event added or removed.
pub fn event_neighbor<R: Rng>(rng: &mut R, s: &EventStream) -> EventStream {
    let entries: Vec<_> = s.entries().collect();
    if !entries.is_empty() && rng.random_bool(0.5) {
        let (t0, u0, _) = entries[rng.random_range(0..entries.len())];
        let mut out = EventStream::new(s.horizon(), s.universe(), s.regime()).unwrap();
        for (t, u, c) in entries {
            let c = if (t, u) == (t0, u0) { c - 1 } else { c };
            out.add(t, u, c).unwrap();
        }
        out
    } else {
        let mut out = s.clone();
        out.add(rng.random_range(1..=s.horizon()), rng.random_range(1..=s.universe()), 1).unwrap();
        out
    }
}

/// A copy of `s` with every occurrence of one item replaced at random.
pub fn item_neighbor<R: Rng>(rng: &mut R, s: &EventStream) -> EventStream {
    let target = rng.random_range(1..=s.universe());
    let mut out = EventStream::new(s.horizon(), s.universe(), s.regime()).unwrap();
    for (t, u, c) in s.entries() {
        if u != target {
            out.add(t, u, c).unwrap();
        }
    }
    let density = rng.random_range(0.0..0.8);
    for t in 1..=s.horizon() {
        if rng.random_bool(density) {
            out.add(t, target, rng.random_range(1..=3)).unwrap();
        }
    }
    out
}

/// Point-multiset changes across neighbors stay within the group sizes the
/// tree budgets are inverted for.
pub fn sensitivity_multiplicity(pairs: usize, seed: u64) -> Check {
    let mut rng = SeededRng::new(seed);
    let (mut worst_2d, mut worst_fixed, mut worst_cum) = (0usize, 0usize, 0usize);
    for _ in 0..pairs {
        let k = rng.random_range(1..=4);
        let w = rng.random_range(1..=16);
        let horizon = rng.random_range(w..=2 * w);
        let universe = rng.random_range(1..=8);
        let density = rng.random_range(0.05..0.6);
        let s = random_stream(&mut rng, horizon, universe, Regime::Bundle, density);

        let n = event_neighbor(&mut rng, &s);
        let (a, b) = (OccurrenceIndex::build(&s, k).unwrap(), OccurrenceIndex::build(&n, k).unwrap());
        let ((xa, xa2), (xb, xb2)) = (time_window_points(&a), time_window_points(&b));
        let key = |p: &Point2D| (p.x, p.y);
        let d1 = symmetric_difference(xa.iter().map(key).collect(), xb.iter().map(key).collect());
        let d2 = symmetric_difference(xa2.iter().map(key).collect(), xb2.iter().map(key).collect());
        worst_2d = worst_2d.max(d1).max(d2);
        if d1.max(d2) > 2 * k + 1 {
            return Err(format!("event neighbor changed {} 2d points, k = {k}", d1.max(d2)));
        }
        let (fa, fb) = (fixed_window_points(&a, w), fixed_window_points(&b, w));
        let d = symmetric_difference(fa.0, fb.0).max(symmetric_difference(fa.1, fb.1));
        if d > 2 * k {
            return Err(format!("event neighbor changed {d} fixed-window points, k = {k}"));
        }
        let d = symmetric_difference(cumulative_points(&a), cumulative_points(&b));
        worst_cum = worst_cum.max(d);
        if d > 2 {
            return Err(format!("event neighbor changed {d} cumulative points"));
        }

        let n = item_neighbor(&mut rng, &s);
        let b = OccurrenceIndex::build(&n, k).unwrap();
        let (fa, fb) = (fixed_window_points(&a, w), fixed_window_points(&b, w));
        let d = symmetric_difference(fa.0, fb.0).max(symmetric_difference(fa.1, fb.1));
        worst_fixed = worst_fixed.max(d);
        if d > 2 * k {
            return Err(format!("item neighbor changed {d} fixed-window points, k = {k}, T = {horizon}, W = {w}"));
        }
        let d = symmetric_difference(cumulative_points(&a), cumulative_points(&b));
        worst_cum = worst_cum.max(d);
        if d > 2 {
            return Err(format!("item neighbor changed {d} cumulative points"));
        }
    }
    Ok(format!(
        "{pairs} neighbor pairs; worst changes: 2d {worst_2d}, fixed-window 1d {worst_fixed}, cumulative {worst_cum}"
    ))
}

/// Exact answers of the lower-bound embeddings against their identities.
pub fn hard_instance_identities(instances: usize, seed: u64) -> Check {
    use winfreq::genbench::{generate_hard_marginal, generate_hard_range};
    let mut rng = SeededRng::new(seed);
    for _ in 0..instances {
        let horizon = rng.random_range(1..=40);
        let k = rng.random_range(1..=5);
        let n = rng.random_range(0..=12);
        let points: Vec<usize> = (0..n).map(|_| rng.random_range(1..=horizon)).collect();
        let s = generate_hard_range(&points, k, horizon).map_err(|e| e.to_string())?;
        for t in 1..=horizon {
            let exact = exact_freq_at_least(&s, k, 1, t).unwrap() as usize;
            let r = points.iter().filter(|&&x| x <= t).count();
            if exact != r {
                return Err(format!("hard-range: points {points:?} k={k} t={t}: {exact} != {r}"));
            }
        }

        let w = rng.random_range(1..=6);
        let d = rng.random_range(1..=6);
        let horizon = w * d + rng.random_range(0..=w);
        let vectors: Vec<Vec<u8>> = (0..rng.random_range(1..=10))
            .map(|_| (0..d).map(|_| rng.random_range(0..=1)).collect())
            .collect();
        let s = generate_hard_marginal(&vectors, w, k, horizon).map_err(|e| e.to_string())?;
        for l in 1..=d {
            let exact = exact_freq_at_least(&s, k, w * (l - 1) + 1, w * l).unwrap() as usize;
            let marginal: usize = vectors.iter().map(|v| usize::from(v[l - 1])).sum();
            if exact != marginal {
                return Err(format!("hard-marginal: W={w} k={k} l={l}: {exact} != {marginal}"));
            }
        }
    }
    Ok(format!("{instances} parameter draws per embedding, identities exact"))
}

/// Largest no-noise error of the singleton wrapper relative to its block.
pub fn singleton_error(instances: usize, seed: u64) -> Check {
    let mut rng = SeededRng::new(seed);
    let mut worst = 0.0f64;
    for _ in 0..instances {
        let horizon = rng.random_range(1..=64);
        let universe = rng.random_range(1..=8);
        let k = rng.random_range(1..=3);
        let density = rng.random_range(0.2..1.0);
        let s = random_stream(&mut rng, horizon, universe, Regime::Singleton, density);
        let block = rng.random_range(1..=horizon.min(12));
        let window = rng.random_range(1..=horizon);
        for (query, w) in [(QueryKind::Cumulative, None), (QueryKind::FixedWindow, Some(window)), (QueryKind::TimeWindow, None)] {
            let mut c = noiseless(query, k, w, DpLevel::Item, Regime::Singleton);
            c.block_length = Some(block);
            let release = fit(&s, &c).map_err(|e| e.to_string())?;
            let family = release.family();
            let windows: Vec<_> = family.iter().collect();
            let exact = exact_answers(&s, k, false, &windows).unwrap();
            for (&(a, b), &truth) in windows.iter().zip(&exact) {
                let err = (release.estimate(a, b).unwrap() - truth as f64).abs();
                worst = worst.max(err / block as f64);
                if err > block as f64 {
                    return Err(format!("T'={block} window [{a},{b}] error {err}"));
                }
            }
        }
    }
    Ok(format!("{instances} singleton instances, worst error / T' = {worst:.3}"))
}

/// Sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
}

fn within(measured: f64, expected: f64, tol: f64) -> bool {
    (measured / expected - 1.0).abs() <= tol
}

/// Per-node residual variance against `2 b^2` or `sigma^2`, and per-query
/// variance against node count times per-node variance, for the 1d and 2d
/// trees and the cumulative estimator.
pub fn noise_calibration(samples: usize, seed: u64) -> Check {
    use winfreq::estimators::cumulative;
    let tol = 0.10;
    let mut report = Vec::new();
    let points: Vec<u32> = (0..200).map(|i| (i * 37 % 300) as u32).collect();
    let points_2d: Vec<Point2D> = (0..100u32).map(|i| Point2D::new(i * 7 % 60, i * 13 % 60)).collect();
    for (kind, budget) in [
        (NoiseKind::Laplace, PrivacyBudget::pure(0.7).unwrap()),
        (NoiseKind::Gaussian, PrivacyBudget::new(0.7, 1e-5).unwrap()),
    ] {
        let (mut node, mut query, mut node_2d, mut query_2d) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        let mut expected = (0.0, 0.0, 0.0, 0.0);
        for n in 0..samples {
            let mut rng = SeededRng::derive(seed, n as u64);
            let tree = RangeTree1d::build(&points, 300, budget, kind, &mut rng).unwrap();
            let leaf = (1u64 << tree.depth()) + 5;
            node.push(tree.noisy_count(leaf) - tree.true_count(leaf) as f64);
            let cover = tree.decompose(17, 251).unwrap();
            query.push(tree.query(17, 251).unwrap() - points.iter().filter(|&&p| (17..=251).contains(&p)).count() as f64);
            let var = tree.noise().variance();
            expected.0 = var;
            expected.1 = var * cover.len() as f64;

            let tree = RangeTree2d::build(&points_2d, 60, budget, kind, &mut rng).unwrap();
            node_2d.push(tree.noisy_count(3, 9) - tree.true_count(3, 9) as f64);
            let (lo, hi) = (Point2D::new(5, 11), Point2D::new(50, 41));
            let cover = tree.decompose(lo, hi).unwrap();
            let truth = points_2d.iter().filter(|p| (5..=50).contains(&p.x) && (11..=41).contains(&p.y)).count();
            query_2d.push(tree.query(lo, hi).unwrap() - truth as f64);
            let var = tree.noise().variance();
            expected.2 = var;
            expected.3 = var * cover.len() as f64;
        }
        // Scale from first principles: L + 1 = 10 levels over {0, ..., 300}.
        let mut rng = SeededRng::new(seed);
        let tree = RangeTree1d::build(&[], 300, budget, kind, &mut rng).unwrap();
        let levels = 10.0f64;
        let analytic = match kind {
            NoiseKind::Laplace => 2.0 * (levels / budget.epsilon).powi(2),
            _ => (levels.sqrt() * (2.0 * (1.25 / budget.delta).ln()).sqrt() / budget.epsilon).powi(2),
        };
        if tree.depth() + 1 != 10 || !within(expected.0, analytic, 1e-12) {
            return Err(format!("{kind}: node variance {} != analytic {analytic}", expected.0));
        }
        for (name, xs, exp) in [
            ("1d node", &node, expected.0),
            ("1d query", &query, expected.1),
            ("2d node", &node_2d, expected.2),
            ("2d query", &query_2d, expected.3),
        ] {
            let v = variance(xs);
            if !within(v, exp, tol) {
                return Err(format!("{kind} {name}: variance {v:.4} vs expected {exp:.4}"));
            }
            report.push(format!("{kind} {name} {:.3}", v / exp));
        }

        // Estimator level: cumulative prefix estimates.
        let mut stream = EventStream::new(100, 5, Regime::Bundle).unwrap();
        for t in (1..=100).step_by(7) {
            stream.add(t, t % 5 + 1, 1).unwrap();
        }
        let mut est = Vec::new();
        let mut exp = 0.0;
        for n in 0..samples {
            let mut rng = SeededRng::derive(seed ^ 0x5eed, n as u64);
            let r = cumulative(&stream, 1, budget, kind, &mut rng).unwrap();
            est.push(r.estimate(1, 77).unwrap());
            exp = r.tree().noise().variance() * r.tree().decompose(0, 77).unwrap().len() as f64;
        }
        let v = variance(&est);
        if !within(v, exp, tol) {
            return Err(format!("{kind} cumulative estimate: variance {v:.4} vs expected {exp:.4}"));
        }
        report.push(format!("{kind} cumulative {:.3}", v / exp));
    }
    Ok(format!("{samples} samples; measured/expected variance: {}", report.join(", ")))
}

/// Spot values of the accountant and the group-privacy round trip.
pub fn accountant() -> Check {
    use winfreq::privacy::{advanced_split, basic_split, gaussian_sigma_for, group_forward, group_invert};
    let close = |a: f64, b: f64, tol: f64| (a - b).abs() <= tol * b.abs().max(f64::MIN_POSITIVE);
    let b = |e: f64, d: f64| PrivacyBudget::new(e, d).unwrap();

    let s = basic_split(b(1.0, 0.1), 4);
    if !(close(s.epsilon, 0.25, 1e-15) && close(s.delta, 0.025, 1e-15)) {
        return Err(format!("basic_split((1, 0.1), 4) = {s}"));
    }
    let s = basic_split(b(2.0, 0.0), 8);
    if !(close(s.epsilon, 0.25, 1e-15) && s.delta == 0.0) {
        return Err(format!("basic_split((2, 0), 8) = {s}"));
    }
    let s = advanced_split(b(1.0, 0.1), 16).map_err(|e| e.to_string())?;
    let expected = 1.0 / (2.0 * (32.0 * 20f64.ln()).sqrt());
    if !(close(s.epsilon, expected, 1e-15) && close(s.delta, 0.003125, 1e-15) && (s.epsilon - 0.0510).abs() < 1e-4) {
        return Err(format!("advanced_split((1, 0.1), 16) = {s}"));
    }
    let s = advanced_split(b(0.5, 0.01), 100).map_err(|e| e.to_string())?;
    if !close(s.delta, 5e-5, 1e-15) {
        return Err(format!("advanced_split((0.5, 0.01), 100) = {s}"));
    }
    if advanced_split(b(1.0, 0.0), 4).is_ok() {
        return Err("advanced_split accepted delta = 0".into());
    }
    let g = group_invert(b(1.0, 0.1), 2);
    let expected = 0.1 * 0.5f64.exp_m1() / 1f64.exp_m1();
    if !(close(g.epsilon, 0.5, 1e-15) && close(g.delta, expected, 1e-15)) {
        return Err(format!("group_invert((1, 0.1), 2) = {g}"));
    }
    let mut worst = 0f64;
    for &eps in &[0.01, 0.1, 0.5, 1.0, 3.0] {
        for &delta in &[1e-9, 1e-5, 0.01, 0.3] {
            for m in [1usize, 2, 3, 5, 9, 17, 64] {
                let target = b(eps, delta);
                let inv = group_invert(target, m);
                // forward map written out: (m eps', (e^{m eps'} - 1)/(e^{eps'} - 1) delta')
                let fwd_eps = m as f64 * inv.epsilon;
                let fwd_delta = (fwd_eps.exp() - 1.0) / (inv.epsilon.exp() - 1.0) * inv.delta;
                let lib = group_forward(inv, m);
                for (got, want) in [(fwd_eps, eps), (fwd_delta, delta), (lib.epsilon, eps), (lib.delta, delta)] {
                    let rel = (got - want).abs() / want;
                    worst = worst.max(rel);
                    if rel > 1e-12 {
                        return Err(format!("group round trip eps={eps} delta={delta} m={m}: {got} vs {want}"));
                    }
                }
            }
        }
    }
    let sigma = gaussian_sigma_for(b(1.0, 1e-5), 1.0).map_err(|e| e.to_string())?;
    if !(close(sigma, (2.0 * 125_000f64.ln()).sqrt(), 1e-15) && (sigma - 4.84).abs() < 0.005) {
        return Err(format!("gaussian sigma {sigma}"));
    }
    Ok(format!("spot values exact; group round trip worst relative error {worst:.1e}"))
}
