mod config;
mod plot;
mod run;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Parser, Subcommand};

use config::ExperimentConfig;
use run::{AssertionFailed, Runner};

#[derive(Parser)]
#[command(name = "ftgi", version, about = "Fourier temporal ghost imaging experiment runner")]
struct Cli {
    /// Key=value configuration file; flags below override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Detector noise seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Comma-separated spectrum coverage fractions.
    #[arg(long, global = true, value_delimiter = ',')]
    coverage: Option<Vec<f64>>,
    /// Additive Gaussian detector noise, std dev in bucket units.
    #[arg(long, global = true)]
    noise_sigma: Option<f64>,
    /// Probe quantization levels (0 disables quantization).
    #[arg(long, global = true)]
    quantize: Option<u32>,
    /// Emit SVG plots (default).
    #[arg(long, global = true, overrides_with = "no_plot")]
    plot: bool,
    /// Suppress SVG plots.
    #[arg(long, global = true)]
    no_plot: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Acquire sinusoidal objects and check spectral-peak localization.
    SineDemo {
        #[arg(long, value_delimiter = ',', default_value = "11,33,55,88")]
        freqs: Vec<f64>,
    },
    /// Full pipeline for one basic periodic waveform.
    Wave {
        #[arg(long)]
        shape: Option<String>,
        #[arg(long)]
        freq: Option<f64>,
        #[arg(long)]
        duty: Option<f64>,
    },
    /// Full pipeline for one encoded binary word.
    Word {
        #[arg(long)]
        bits: Option<String>,
        #[arg(long)]
        scheme: Option<String>,
        #[arg(long)]
        bit_rate: Option<f64>,
    },
    /// PSNR versus spectrum coverage across shapes and frequencies.
    SweepCoverage {
        #[arg(long, value_delimiter = ',', default_value = "square,sawtooth,pulse")]
        shapes: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "2,5,7,11")]
        freqs: Vec<f64>,
    },
    /// FTGI versus random-probing TGI at matched measurement budgets.
    CompareTgi {
        #[arg(long)]
        bits: Option<String>,
        #[arg(long)]
        scheme: Option<String>,
        #[arg(long)]
        bit_rate: Option<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0.5,0.75,1.0")]
        budgets: Vec<f64>,
    },
    /// Encode, acquire and decode frequency-multiplexed channels.
    Fdm {
        #[arg(long)]
        bit_rate: Option<f64>,
        #[arg(long)]
        scheme: Option<String>,
        #[arg(long, default_value_t = 2)]
        channels: usize,
    },
    /// Reconstruct offline from a saved capture CSV.
    Reconstruct {
        #[arg(long)]
        capture: PathBuf,
    },
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.out = out.clone();
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(coverage) = &cli.coverage {
        cfg.coverages = coverage.clone();
    }
    if let Some(sigma) = cli.noise_sigma {
        cfg.noise_sigma = sigma;
    }
    if let Some(levels) = cli.quantize {
        cfg.quantize = if levels == 0 { None } else { Some(levels) };
    }
    if cli.plot {
        cfg.plot = true;
    }
    if cli.no_plot {
        cfg.plot = false;
    }
    Ok(cfg)
}

fn dispatch(cli: &Cli) -> Result<()> {
    let cfg = load_config(cli)?;
    let runner = Runner::new(cfg);
    let c = &runner.cfg;
    match &cli.command {
        Command::SineDemo { freqs } => runner.sine_demo(freqs),
        Command::Wave { shape, freq, duty } => runner.wave(
            &shape.clone().unwrap_or_else(|| c.shape.clone()),
            freq.unwrap_or(c.freq),
            duty.unwrap_or(c.duty),
        ),
        Command::Word { bits, scheme, bit_rate } => runner.word(
            &bits.clone().unwrap_or_else(|| c.word.clone()),
            &scheme.clone().unwrap_or_else(|| c.scheme.clone()),
            bit_rate.unwrap_or(c.bit_rate),
        ),
        Command::SweepCoverage { shapes, freqs } => runner.sweep_coverage(shapes, freqs),
        Command::CompareTgi { bits, scheme, bit_rate, budgets } => runner.compare_tgi(
            &bits.clone().unwrap_or_else(|| c.word.clone()),
            &scheme.clone().unwrap_or_else(|| c.scheme.clone()),
            bit_rate.unwrap_or(c.bit_rate),
            budgets,
        ),
        Command::Fdm { bit_rate, scheme, channels } => runner.fdm(
            bit_rate.unwrap_or(c.bit_rate),
            &scheme.clone().unwrap_or_else(|| c.scheme.clone()),
            *channels,
        ),
        Command::Reconstruct { capture } => runner.reconstruct_file(capture),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let usage = matches!(
                err.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = err.print();
            std::process::exit(if usage { 0 } else { 1 });
        }
    };
    if let Err(err) = dispatch(&cli) {
        eprintln!("error: {err:#}");
        std::process::exit(if err.is::<AssertionFailed>() { 2 } else { 1 });
    }
}
