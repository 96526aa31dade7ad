// Copyright 2026 The winfreq Authors
// SPDX-License-Identifier: Apache-2.0

//! Noise samplers and privacy-budget arithmetic.

use std::fmt;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An `(epsilon, delta)` pair. `delta == 0` means pure DP.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrivacyBudget {
    pub epsilon: f64,
    pub delta: f64,
}

impl PrivacyBudget {
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidBudget(format!("epsilon must be positive, got {epsilon}")));
        }
        if !(0.0..1.0).contains(&delta) {
            return Err(Error::InvalidBudget(format!("delta must lie in [0, 1), got {delta}")));
        }
        Ok(Self { epsilon, delta })
    }

    pub fn pure(epsilon: f64) -> Result<Self> {
        Self::new(epsilon, 0.0)
    }

    pub fn is_pure(&self) -> bool {
        self.delta == 0.0
    }

    /// Half of both parameters.
    pub fn halved(&self) -> Self {
        Self {
            epsilon: self.epsilon / 2.0,
            delta: self.delta / 2.0,
        }
    }
}

impl fmt::Display for PrivacyBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(eps={}, delta={})", self.epsilon, self.delta)
    }
}

/// Per-mechanism budget such that `m` mechanisms composed sequentially meet `target`.
pub fn basic_split(target: PrivacyBudget, m: usize) -> PrivacyBudget {
    let m = m.max(1) as f64;
    PrivacyBudget {
        epsilon: target.epsilon / m,
        delta: target.delta / m,
    }
}

/// Per-mechanism budget `(eps / (2 sqrt(2 m ln(2/delta))), delta / (2m))` under
/// advanced composition. Requires `delta > 0` and `eps <= 1`.
pub fn advanced_split(target: PrivacyBudget, m: usize) -> Result<PrivacyBudget> {
    if target.delta <= 0.0 {
        return Err(Error::InvalidBudget("advanced composition needs delta > 0".into()));
    }
    if target.epsilon > 1.0 {
        return Err(Error::InvalidBudget("advanced composition split assumes epsilon <= 1".into()));
    }
    let m = m.max(1) as f64;
    Ok(PrivacyBudget {
        epsilon: target.epsilon / (2.0 * (2.0 * m * (2.0 / target.delta).ln()).sqrt()),
        delta: target.delta / (2.0 * m),
    })
}

/// The guarantee an `(eps, delta)` mechanism keeps when neighbors are `m` steps
/// apart: `(m eps, delta (e^{m eps} - 1) / (e^eps - 1))`.
pub fn group_forward(budget: PrivacyBudget, m: usize) -> PrivacyBudget {
    let m = m.max(1) as f64;
    let epsilon = m * budget.epsilon;
    PrivacyBudget {
        epsilon,
        delta: budget.delta * epsilon.exp_m1() / budget.epsilon.exp_m1(),
    }
}

/// Exact inverse of [`group_forward`]: the single-step budget that yields
/// `target` against neighbors `m` steps apart.
pub fn group_invert(target: PrivacyBudget, m: usize) -> PrivacyBudget {
    if m <= 1 {
        return target;
    }
    let epsilon = target.epsilon / m as f64;
    PrivacyBudget {
        epsilon,
        delta: target.delta * epsilon.exp_m1() / target.epsilon.exp_m1(),
    }
}

/// Classical Gaussian-mechanism calibration
/// `sigma = sensitivity * sqrt(2 ln(1.25 / delta)) / eps`, valid for `eps <= 1`.
pub fn gaussian_sigma_for(budget: PrivacyBudget, l2_sensitivity: f64) -> Result<f64> {
    if budget.delta <= 0.0 {
        return Err(Error::InvalidBudget("Gaussian noise needs delta > 0".into()));
    }
    if budget.epsilon > 1.0 {
        return Err(Error::InvalidBudget("Gaussian calibration assumes epsilon <= 1".into()));
    }
    if l2_sensitivity.is_nan() || l2_sensitivity <= 0.0 {
        return Err(Error::InvalidBudget("sensitivity must be positive".into()));
    }
    Ok(l2_sensitivity * (2.0 * (1.25 / budget.delta).ln()).sqrt() / budget.epsilon)
}

/// Deterministic generator: identical seeds give identical streams on every platform.
#[derive(Clone, Debug)]
pub struct SeededRng(ChaCha12Rng);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha12Rng::seed_from_u64(seed))
    }

    /// Independent child generator for sub-task `counter`.
    pub fn derive(seed: u64, counter: u64) -> Self {
        Self::new(derive_seed(seed, counter))
    }
}

/// Counter-derived seed; never depends on wall clock.
pub fn derive_seed(master: u64, counter: u64) -> u64 {
    let mut rng = ChaCha12Rng::seed_from_u64(master);
    rng.set_stream(counter);
    rng.next_u64()
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.0.fill_bytes(dst)
    }
}

/// Uniform draw from the open interval (0, 1).
fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Laplace draw with scale `b` by inverse CDF.
pub fn sample_laplace<R: Rng + ?Sized>(b: f64, rng: &mut R) -> f64 {
    let u = open_unit(rng);
    if u < 0.5 {
        b * (2.0 * u).ln()
    } else {
        -b * (2.0 * (1.0 - u)).ln()
    }
}

pub fn sample_gaussian<R: Rng + ?Sized>(sigma: f64, rng: &mut R) -> f64 {
    let z: f64 = StandardNormal.sample(rng);
    sigma * z
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    Laplace,
    Gaussian,
    None,
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoiseKind::Laplace => "laplace",
            NoiseKind::Gaussian => "gaussian",
            NoiseKind::None => "none",
        })
    }
}

/// Noise attached to the nodes of one tree.
///
/// Each node's draw comes from its own ChaCha stream keyed by the tree key, so
/// a node's noise is fixed once the tree is built without storing it, and
/// draws at different nodes are independent.
#[derive(Clone, Debug)]
pub struct NodeNoise {
    kind: NoiseKind,
    scale: f64,
    base: ChaCha12Rng,
}

impl NodeNoise {
    /// `scale` is the Laplace scale or the Gaussian standard deviation.
    pub fn new<R: Rng + ?Sized>(kind: NoiseKind, scale: f64, rng: &mut R) -> Self {
        Self {
            kind,
            scale,
            base: ChaCha12Rng::seed_from_u64(rng.next_u64()),
        }
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Variance of a single node draw.
    pub fn variance(&self) -> f64 {
        match self.kind {
            NoiseKind::Laplace => 2.0 * self.scale * self.scale,
            NoiseKind::Gaussian => self.scale * self.scale,
            NoiseKind::None => 0.0,
        }
    }

    pub fn at(&self, node: u64) -> f64 {
        if self.kind == NoiseKind::None {
            return 0.0;
        }
        let mut rng = self.base.clone();
        rng.set_stream(node);
        rng.set_word_pos(0);
        match self.kind {
            NoiseKind::Laplace => sample_laplace(self.scale, &mut rng),
            NoiseKind::Gaussian => sample_gaussian(self.scale, &mut rng),
            NoiseKind::None => 0.0,
        }
    }
}
