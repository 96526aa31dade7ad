// Copyright 2026 The winfreq Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use winfreq::estimators::{Composition, DpLevel, EstimatorConfig};
use winfreq::privacy::{NoiseKind, PrivacyBudget};
use winfreq::query::QueryKind;
use winfreq::stream::Regime;

mod commands;

use commands::{OracleJob, RunJob};

#[derive(Parser)]
#[command(name = "winfreq", version, about = "Private Freq>=k counts over windows of event streams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a stream from a generator spec (JSON).
    Generate {
        #[arg(long)]
        spec: PathBuf,
        /// Stream CSV to write; the sidecar goes next to it with a `.json` extension.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Run an estimator over a stream and write one row per query.
    Run(RunArgs),
    /// Write exact answers for a query family.
    Oracle(OracleArgs),
    /// Run a sweep spec (JSON) and write one summary row per value.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Re-run the command recorded in a manifest.
    Replay {
        #[arg(long)]
        manifest: PathBuf,
        /// Write outputs under this directory instead of their recorded paths.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum QueryArg {
    Cumulative,
    Fixed,
    Time,
}

impl From<QueryArg> for QueryKind {
    fn from(q: QueryArg) -> Self {
        match q {
            QueryArg::Cumulative => QueryKind::Cumulative,
            QueryArg::Fixed => QueryKind::FixedWindow,
            QueryArg::Time => QueryKind::TimeWindow,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Event,
    Item,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Bundle,
    Singleton,
}

#[derive(Clone, Copy, ValueEnum)]
enum CompositionArg {
    Basic,
    Advanced,
}

#[derive(Clone, Copy, ValueEnum)]
enum NoiseArg {
    Laplace,
    Gaussian,
    None,
}

#[derive(Args)]
struct StreamArgs {
    /// Stream CSV (`t,item,count`).
    #[arg(long)]
    input: PathBuf,
    /// Sidecar JSON; defaults to the input path with a `.json` extension.
    #[arg(long)]
    meta: Option<PathBuf>,
}

#[derive(Args)]
struct QueryArgs {
    #[arg(long, value_enum)]
    query: QueryArg,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    window: Option<usize>,
    /// Count items occurring exactly `k` times.
    #[arg(long)]
    exact_k: bool,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    stream: StreamArgs,
    #[command(flatten)]
    query: QueryArgs,
    #[arg(long, value_enum, default_value = "event")]
    level: LevelArg,
    /// Must match the stream's sidecar when given.
    #[arg(long, value_enum)]
    regime: Option<RegimeArg>,
    #[arg(long)]
    epsilon: f64,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, value_enum, default_value = "basic")]
    composition: CompositionArg,
    #[arg(long, value_enum, default_value = "laplace")]
    noise: NoiseArg,
    /// Same as `--noise none`.
    #[arg(long, conflicts_with = "noise")]
    no_noise: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Add `exact` and `abs_error` columns.
    #[arg(long)]
    with_oracle: bool,
    /// Clamp estimates to `[0, U]` and round them on output.
    #[arg(long)]
    clamp: bool,
    /// Singleton time-compression block length.
    #[arg(long)]
    block_length: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    stream: StreamArgs,
    #[command(flatten)]
    query: QueryArgs,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

fn default_manifest(out: &std::path::Path, manifest: Option<PathBuf>) -> PathBuf {
    manifest.unwrap_or_else(|| {
        let mut name = out.as_os_str().to_owned();
        name.push(".manifest.json");
        PathBuf::from(name)
    })
}

fn run_config(args: &RunArgs) -> Result<EstimatorConfig> {
    let noise = if args.no_noise {
        NoiseKind::None
    } else {
        match args.noise {
            NoiseArg::Laplace => NoiseKind::Laplace,
            NoiseArg::Gaussian => NoiseKind::Gaussian,
            NoiseArg::None => NoiseKind::None,
        }
    };
    let composition = match args.composition {
        CompositionArg::Basic => Composition::Basic,
        CompositionArg::Advanced => Composition::Advanced,
    };
    if args.delta.is_none() && noise == NoiseKind::Gaussian {
        bail!("--noise gaussian needs --delta");
    }
    if args.delta.is_none() && composition == Composition::Advanced {
        bail!("--composition advanced needs --delta");
    }
    let budget = PrivacyBudget::new(args.epsilon, args.delta.unwrap_or(0.0))?;
    let mut config = EstimatorConfig::new(args.query.query.into(), args.query.k, budget);
    config.window = args.query.window;
    config.level = match args.level {
        LevelArg::Event => DpLevel::Event,
        LevelArg::Item => DpLevel::Item,
    };
    config.composition = composition;
    config.noise = noise;
    config.seed = args.seed;
    config.block_length = args.block_length;
    config.exact_k = args.query.exact_k;
    Ok(config)
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate { spec, out, manifest } => {
            let manifest = default_manifest(&out, manifest);
            commands::generate(&commands::read_json(&spec)?, &out, &manifest)
        }
        Command::Run(args) => {
            let config = run_config(&args)?;
            let regime = args.regime.map(|r| match r {
                RegimeArg::Bundle => Regime::Bundle,
                RegimeArg::Singleton => Regime::Singleton,
            });
            let manifest = default_manifest(&args.out, args.manifest.clone());
            let job = RunJob {
                input: args.stream.input,
                meta: args.stream.meta,
                config,
                regime,
                trials: args.trials,
                with_oracle: args.with_oracle,
                clamp: args.clamp,
            };
            commands::run(&job, &args.out, &manifest)
        }
        Command::Oracle(args) => {
            let manifest = default_manifest(&args.out, args.manifest);
            let job = OracleJob {
                input: args.stream.input,
                meta: args.stream.meta,
                query: args.query.query.into(),
                k: args.query.k,
                window: args.query.window,
                exact_k: args.query.exact_k,
            };
            commands::oracle(&job, &args.out, &manifest)
        }
        Command::Sweep { spec, out, manifest } => {
            let manifest = default_manifest(&out, manifest);
            commands::sweep(&commands::read_json(&spec)?, &out, &manifest)
        }
        Command::Replay { manifest, out_dir } => commands::replay(&manifest, out_dir.as_deref()),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
