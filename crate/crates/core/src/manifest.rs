// Copyright 2026 The winfreq Authors
// SPDX-License-Identifier: Apache-2.0

//! Experiment manifests: everything needed to re-run a command bit-for-bit.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::estimators::{BudgetLedger, EstimatorConfig};
use crate::genbench::{ErrorSummary, GeneratorSpec, SweepSpec};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Generate,
    Run,
    Oracle,
    Sweep,
}

/// Output options of `run` and `oracle` that are not part of the estimator.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunOptions {
    pub trials: usize,
    pub with_oracle: bool,
    pub clamp: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub version: String,
    pub command: Command,
    pub master_seed: u64,
    #[serde(default)]
    pub config: Option<EstimatorConfig>,
    #[serde(default)]
    pub generator: Option<GeneratorSpec>,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub options: Option<RunOptions>,
    /// Stream CSV files read, each with its JSON sidecar.
    #[serde(default)]
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    /// Nominal and used budget of every sub-instance.
    #[serde(default)]
    pub ledger: BudgetLedger,
    #[serde(default)]
    pub summary: Option<ErrorSummary>,
    pub started_at: f64,
    pub finished_at: f64,
}

/// Seconds since the Unix epoch.
pub fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

impl RunManifest {
    pub fn new(command: Command, master_seed: u64) -> Self {
        let now = unix_now();
        Self {
            version: VERSION.to_string(),
            command,
            master_seed,
            config: None,
            generator: None,
            sweep: None,
            options: None,
            inputs: Vec::new(),
            outputs: Vec::new(),
            ledger: BudgetLedger::default(),
            summary: None,
            started_at: now,
            finished_at: now,
        }
    }

    pub fn finish(&mut self) {
        self.finished_at = unix_now();
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut w, self)?;
        w.write_all(b"\n")?;
        w.flush()?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
    }
}
