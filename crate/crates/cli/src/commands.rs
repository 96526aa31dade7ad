// Copyright 2026 The winfreq Authors
// SPDX-License-Identifier: Apache-2.0

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use winfreq::estimators::{fit, EstimatorConfig};
use winfreq::genbench::{self, ErrorRow, ErrorSummary, GeneratorSpec, SweepSpec};
use winfreq::io::{csv_writer, read_stream, sidecar_path, write_stream};
use winfreq::manifest::{Command, RunManifest, RunOptions};
use winfreq::oracle::exact_answers;
use winfreq::privacy::{derive_seed, NoiseKind, PrivacyBudget};
use winfreq::query::{QueryFamily, QueryKind};
use winfreq::stream::{EventStream, Regime};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    serde_json::from_reader(BufReader::new(file)).with_context(|| format!("parsing {}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn load(input: &Path, meta: Option<&Path>) -> Result<(EventStream, PathBuf)> {
    let meta = meta.map_or_else(|| sidecar_path(input), Path::to_path_buf);
    let stream = read_stream(input, &meta)
        .with_context(|| format!("reading stream {} with sidecar {}", input.display(), meta.display()))?;
    Ok((stream, meta))
}

pub fn generate(spec: &GeneratorSpec, out: &Path, manifest_path: &Path) -> Result<()> {
    let stream = genbench::generate(spec)?;
    let meta = sidecar_path(out);
    write_stream(&stream, out, &meta)?;
    let mut manifest = RunManifest::new(Command::Generate, spec.seed);
    manifest.generator = Some(spec.clone());
    manifest.outputs = vec![out.to_path_buf(), meta];
    manifest.finish();
    manifest.write(manifest_path)?;
    Ok(())
}

pub struct RunJob {
    pub input: PathBuf,
    pub meta: Option<PathBuf>,
    pub config: EstimatorConfig,
    /// Regime the caller expects; must match the stream when given.
    pub regime: Option<Regime>,
    pub trials: usize,
    pub with_oracle: bool,
    pub clamp: bool,
}

pub fn run(job: &RunJob, out: &Path, manifest_path: &Path) -> Result<()> {
    if job.trials == 0 {
        bail!("--trials must be positive");
    }
    let (stream, meta) = load(&job.input, job.meta.as_deref())?;
    if let Some(regime) = job.regime {
        if regime != stream.regime() {
            bail!("--regime {regime} does not match the {} stream", stream.regime());
        }
    }
    let mut config = job.config.clone();
    config.regime = stream.regime();
    config.check(stream.horizon())?;
    let family = QueryFamily::new(config.query, stream.horizon(), config.window)?;
    let windows: Vec<_> = family.iter().collect();
    let exact = if job.with_oracle {
        Some(exact_answers(&stream, config.k, config.exact_k, &windows)?)
    } else {
        None
    };
    let universe = stream.universe() as f64;

    let mut rows = Vec::with_capacity(windows.len() * job.trials);
    let mut ledger = None;
    for trial in 0..job.trials {
        let mut trial_config = config.clone();
        trial_config.seed = derive_seed(config.seed, trial as u64);
        let release = fit(&stream, &trial_config)?;
        ledger.get_or_insert_with(|| release.ledger().clone());
        for (i, &(t1, t2)) in windows.iter().enumerate() {
            let mut estimate = release.estimate(t1, t2)?;
            if job.clamp {
                estimate = estimate.clamp(0.0, universe).round();
            }
            let truth = exact.as_ref().map_or(0, |e| e[i]);
            rows.push(ErrorRow {
                trial,
                query_kind: config.query,
                t1,
                t2,
                k: config.k,
                estimate,
                exact: truth,
                abs_error: (estimate - truth as f64).abs(),
            });
        }
    }

    let mut w = csv_writer(create(out)?);
    let mut header = vec!["query_kind", "t1", "t2", "k", "estimate"];
    if job.with_oracle {
        header.extend(["exact", "abs_error"]);
    }
    w.write_record(&header)?;
    for r in &rows {
        let mut record = vec![
            r.query_kind.to_string(),
            r.t1.to_string(),
            r.t2.to_string(),
            r.k.to_string(),
            r.estimate.to_string(),
        ];
        if job.with_oracle {
            record.extend([r.exact.to_string(), r.abs_error.to_string()]);
        }
        w.write_record(&record)?;
    }
    w.flush()?;

    let mut manifest = RunManifest::new(Command::Run, config.seed);
    manifest.config = Some(config);
    manifest.options = Some(RunOptions {
        trials: job.trials,
        with_oracle: job.with_oracle,
        clamp: job.clamp,
    });
    manifest.inputs = vec![job.input.clone(), meta];
    manifest.outputs = vec![out.to_path_buf()];
    manifest.ledger = ledger.unwrap_or_default();
    if job.with_oracle {
        manifest.summary = Some(ErrorSummary::from_rows(&rows));
    }
    manifest.finish();
    manifest.write(manifest_path)?;
    Ok(())
}

pub struct OracleJob {
    pub input: PathBuf,
    pub meta: Option<PathBuf>,
    pub query: QueryKind,
    pub k: usize,
    pub window: Option<usize>,
    pub exact_k: bool,
}

pub fn oracle(job: &OracleJob, out: &Path, manifest_path: &Path) -> Result<()> {
    let (stream, meta) = load(&job.input, job.meta.as_deref())?;
    let family = QueryFamily::new(job.query, stream.horizon(), job.window)?;
    let rows = winfreq::oracle::exact_family(&stream, job.k, job.exact_k, &family)?;
    let mut w = csv_writer(create(out)?);
    w.write_record(["query_kind", "t1", "t2", "k", "exact"])?;
    for ((t1, t2), v) in rows {
        w.write_record([
            job.query.to_string(),
            t1.to_string(),
            t2.to_string(),
            job.k.to_string(),
            v.to_string(),
        ])?;
    }
    w.flush()?;

    // Only the query fields of the echoed configuration apply to the oracle.
    let mut config = EstimatorConfig::new(job.query, job.k, PrivacyBudget::pure(1.0)?);
    config.window = job.window;
    config.exact_k = job.exact_k;
    config.noise = NoiseKind::None;
    config.regime = stream.regime();
    let mut manifest = RunManifest::new(Command::Oracle, 0);
    manifest.config = Some(config);
    manifest.inputs = vec![job.input.clone(), meta];
    manifest.outputs = vec![out.to_path_buf()];
    manifest.finish();
    manifest.write(manifest_path)?;
    Ok(())
}

pub fn sweep(spec: &SweepSpec, out: &Path, manifest_path: &Path) -> Result<()> {
    let rows = genbench::sweep(spec)?;
    let mut w = create(out)?;
    genbench::write_sweep_csv(spec.axis, &rows, &mut w)?;
    w.flush()?;
    let mut manifest = RunManifest::new(Command::Sweep, spec.config.seed);
    manifest.sweep = Some(spec.clone());
    manifest.outputs = vec![out.to_path_buf()];
    manifest.finish();
    manifest.write(manifest_path)?;
    Ok(())
}

fn redirect(path: &Path, out_dir: Option<&Path>) -> Result<PathBuf> {
    match out_dir {
        None => Ok(path.to_path_buf()),
        Some(dir) => {
            let name = path
                .file_name()
                .with_context(|| format!("output {} has no file name", path.display()))?;
            Ok(dir.join(name))
        }
    }
}

/// Re-runs a recorded command. Outputs land at their recorded paths, or under
/// `out_dir` with the same file names; a fresh manifest is written beside the
/// primary output.
pub fn replay(manifest_path: &Path, out_dir: Option<&Path>) -> Result<()> {
    let m = RunManifest::read(manifest_path)?;
    let Some(primary) = m.outputs.first() else {
        bail!("manifest lists no outputs");
    };
    let out = redirect(primary, out_dir)?;
    let mut fresh = out.as_os_str().to_owned();
    fresh.push(".manifest.json");
    let fresh = PathBuf::from(fresh);
    let missing = |what: &str| anyhow::anyhow!("{:?} manifest lacks {what}", m.command);
    match m.command {
        Command::Generate => generate(m.generator.as_ref().ok_or_else(|| missing("generator"))?, &out, &fresh),
        Command::Sweep => sweep(m.sweep.as_ref().ok_or_else(|| missing("sweep"))?, &out, &fresh),
        Command::Run | Command::Oracle => {
            let config = m.config.clone().ok_or_else(|| missing("config"))?;
            let input = m.inputs.first().cloned().ok_or_else(|| missing("inputs"))?;
            let meta = m.inputs.get(1).cloned();
            if m.command == Command::Oracle {
                let job = OracleJob {
                    input,
                    meta,
                    query: config.query,
                    k: config.k,
                    window: config.window,
                    exact_k: config.exact_k,
                };
                oracle(&job, &out, &fresh)
            } else {
                let options = m.options.clone().ok_or_else(|| missing("options"))?;
                let job = RunJob {
                    input,
                    meta,
                    regime: Some(config.regime),
                    config,
                    trials: options.trials,
                    with_oracle: options.with_oracle,
                    clamp: options.clamp,
                };
                run(&job, &out, &fresh)
            }
        }
    }
}

