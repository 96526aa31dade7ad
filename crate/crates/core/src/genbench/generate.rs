// Copyright 2026 The winfreq Authors
// SPDX-License-Identifier: Apache-2.0

use rand::Rng;
use rand_distr::{Distribution, Poisson, Zipf};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::privacy::SeededRng;
use crate::stream::{validate_stream, EventStream, Regime};

/// A reproducible stream recipe.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    #[serde(rename = "T")]
    pub horizon: usize,
    #[serde(rename = "U")]
    pub universe: usize,
    #[serde(default = "one")]
    pub k: usize,
    pub regime: Regime,
    #[serde(default)]
    pub seed: u64,
}

fn one() -> usize {
    1
}

/// Kind-specific parameters. `rate` is the expected number of events per step:
/// a Poisson mean on bundle streams and a Bernoulli probability on singleton
/// streams.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GeneratorKind {
    Uniform {
        rate: f64,
    },
    Zipf {
        rate: f64,
        exponent: f64,
    },
    /// Steps are grouped into bursts of `burst_length`; each burst is active with
    /// probability `burst_probability` and runs at `rate`, otherwise at
    /// `quiet_rate`. Half of an active burst's events go to one hot item.
    Bursty {
        rate: f64,
        #[serde(default)]
        quiet_rate: f64,
        burst_length: usize,
        burst_probability: f64,
    },
    /// Points in `1..=T`, one item per point.
    HardRangeEmbedding {
        points: Vec<usize>,
    },
    /// Bit vectors of a common dimension `d`, one item per vector.
    HardMarginalEmbedding {
        vectors: Vec<Vec<u8>>,
        window: usize,
    },
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, horizon: usize, universe: usize, regime: Regime, seed: u64) -> Self {
        Self {
            kind,
            horizon,
            universe,
            k: 1,
            regime,
            seed,
        }
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<EventStream> {
    let stream = match &spec.kind {
        GeneratorKind::HardRangeEmbedding { points } => {
            require_bundle(spec)?;
            require_universe(spec, points.len())?;
            generate_hard_range(points, spec.k, spec.horizon)?
        }
        GeneratorKind::HardMarginalEmbedding { vectors, window } => {
            require_bundle(spec)?;
            require_universe(spec, vectors.len())?;
            generate_hard_marginal(vectors, *window, spec.k, spec.horizon)?
        }
        kind => random_stream(spec, kind)?,
    };
    validate_stream(&stream)?;
    Ok(stream)
}

fn require_bundle(spec: &GeneratorSpec) -> Result<()> {
    if spec.regime != Regime::Bundle {
        return Err(Error::InfeasibleSpec(
            "hard-instance embeddings are bundle streams".into(),
        ));
    }
    Ok(())
}

fn require_universe(spec: &GeneratorSpec, n: usize) -> Result<()> {
    if spec.universe != n {
        return Err(Error::InfeasibleSpec(format!(
            "U = {} but the embedding has {n} items",
            spec.universe
        )));
    }
    Ok(())
}

fn check_rate(rate: f64, regime: Regime) -> Result<()> {
    if !(rate.is_finite() && rate >= 0.0) {
        return Err(Error::InfeasibleSpec(format!("rate must be non-negative, got {rate}")));
    }
    if regime == Regime::Singleton && rate > 1.0 {
        return Err(Error::InfeasibleSpec(format!(
            "singleton streams carry at most one event per step, rate {rate} > 1"
        )));
    }
    Ok(())
}

fn event_count<R: Rng + ?Sized>(rate: f64, regime: Regime, rng: &mut R) -> u64 {
    match regime {
        Regime::Singleton => u64::from(rng.random_bool(rate)),
        Regime::Bundle if rate == 0.0 => 0,
        Regime::Bundle => Poisson::new(rate).map(|p| p.sample(rng) as u64).unwrap_or(0),
    }
}

fn random_stream(spec: &GeneratorSpec, kind: &GeneratorKind) -> Result<EventStream> {
    let (t_max, u_max, regime) = (spec.horizon, spec.universe, spec.regime);
    let mut stream = EventStream::new(t_max, u_max, regime)?;
    let mut rng = SeededRng::new(spec.seed);
    let uniform_item = |rng: &mut SeededRng| rng.random_range(1..=u_max);
    match *kind {
        GeneratorKind::Uniform { rate } => {
            check_rate(rate, regime)?;
            for t in 1..=t_max {
                for _ in 0..event_count(rate, regime, &mut rng) {
                    stream.add(t, uniform_item(&mut rng), 1)?;
                }
            }
        }
        GeneratorKind::Zipf { rate, exponent } => {
            check_rate(rate, regime)?;
            let zipf = Zipf::new(u_max as f64, exponent)
                .map_err(|e| Error::InfeasibleSpec(format!("zipf exponent {exponent}: {e}")))?;
            for t in 1..=t_max {
                for _ in 0..event_count(rate, regime, &mut rng) {
                    let item = (zipf.sample(&mut rng) as usize).clamp(1, u_max);
                    stream.add(t, item, 1)?;
                }
            }
        }
        GeneratorKind::Bursty {
            rate,
            quiet_rate,
            burst_length,
            burst_probability,
        } => {
            check_rate(rate, regime)?;
            check_rate(quiet_rate, regime)?;
            if burst_length == 0 || !(0.0..=1.0).contains(&burst_probability) {
                return Err(Error::InfeasibleSpec(
                    "bursts need a positive length and a probability in [0, 1]".into(),
                ));
            }
            let mut t = 1;
            while t <= t_max {
                let active = rng.random_bool(burst_probability);
                let hot = uniform_item(&mut rng);
                let step_rate = if active { rate } else { quiet_rate };
                for s in t..(t + burst_length).min(t_max + 1) {
                    for _ in 0..event_count(step_rate, regime, &mut rng) {
                        let item = if active && rng.random_bool(0.5) {
                            hot
                        } else {
                            uniform_item(&mut rng)
                        };
                        stream.add(s, item, 1)?;
                    }
                }
                t += burst_length;
            }
        }
        GeneratorKind::HardRangeEmbedding { .. } | GeneratorKind::HardMarginalEmbedding { .. } => {
            unreachable!("handled by generate")
        }
    }
    Ok(stream)
}

/// Item `j` gets `k - 1` occurrences at step 1 and one more at `points[j]`, so
/// the cumulative `Freq>=k` at `t` counts the points in `[1, t]`.
pub fn generate_hard_range(points: &[usize], k: usize, horizon: usize) -> Result<EventStream> {
    if k == 0 {
        return Err(Error::InvalidConfig("k must be at least 1".into()));
    }
    let mut stream = EventStream::new(horizon, points.len().max(1), Regime::Bundle)?;
    for (j, &x) in points.iter().enumerate() {
        if !(1..=horizon).contains(&x) {
            return Err(Error::InfeasibleSpec(format!("point {x} outside [1, {horizon}]")));
        }
        stream.add(1, j + 1, (k - 1) as u64)?;
        stream.add(x, j + 1, 1)?;
    }
    Ok(stream)
}

/// Item `j` gets `k * x^j_l` occurrences at step `W(l - 1) + 1`, so `Freq>=k`
/// on window `[W(l - 1) + 1, Wl]` is the `l`-th marginal `sum_j x^j_l`.
pub fn generate_hard_marginal(
    vectors: &[Vec<u8>],
    window: usize,
    k: usize,
    horizon: usize,
) -> Result<EventStream> {
    if k == 0 || window == 0 {
        return Err(Error::InvalidConfig("k and W must be at least 1".into()));
    }
    let d = vectors.first().map_or(0, Vec::len);
    if vectors.iter().any(|v| v.len() != d) {
        return Err(Error::InfeasibleSpec("bit vectors differ in dimension".into()));
    }
    if horizon < window * d {
        return Err(Error::InfeasibleSpec(format!(
            "T = {horizon} is shorter than W * d = {}",
            window * d
        )));
    }
    let mut stream = EventStream::new(horizon, vectors.len().max(1), Regime::Bundle)?;
    for (j, v) in vectors.iter().enumerate() {
        for (l, &bit) in v.iter().enumerate() {
            if bit > 1 {
                return Err(Error::InfeasibleSpec(format!("entry {bit} is not a bit")));
            }
            stream.add(window * l + 1, j + 1, k as u64 * u64::from(bit))?;
        }
    }
    Ok(stream)
}
