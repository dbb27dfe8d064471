//! Flat key=value configuration with one section per module. CLI flags
//! override file values; unknown keys are rejected.

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use ftgi::{DetectorModel, PatternLayout};

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    // [layout]
    pub a: f64,
    pub b: f64,
    pub n_freqs: usize,
    pub freq_step: f64,
    pub quantize: Option<u32>,
    // [detector]
    pub gain: f64,
    pub noise_sigma: f64,
    pub shot_scale: Option<f64>,
    pub adc_bits: Option<u32>,
    pub seed: u64,
    // [object]
    pub shape: String,
    pub freq: f64,
    pub duty: f64,
    pub word: String,
    pub scheme: String,
    pub bit_rate: f64,
    pub duration: f64,
    pub rate: f64,
    // [experiment]
    pub coverages: Vec<f64>,
    pub seeds: Vec<u64>,
    pub out: PathBuf,
    pub plot: bool,
    // [fdm]
    pub carrier1: f64,
    pub band1: (f64, f64),
    pub carrier2: f64,
    pub band2: (f64, f64),
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            a: 0.5,
            b: 0.5,
            n_freqs: 100,
            freq_step: 1.0,
            quantize: None,
            gain: 1.0,
            noise_sigma: 0.0,
            shot_scale: None,
            adc_bits: None,
            seed: 0,
            shape: "square".into(),
            freq: 5.0,
            duty: 0.1,
            word: "1110010110".into(),
            scheme: "rz-gauss".into(),
            bit_rate: 10.0,
            duration: 1.0,
            rate: 800.0,
            coverages: (1..=20).map(|i| i as f64 * 0.05).collect(),
            seeds: (0..20).collect(),
            out: PathBuf::from("out"),
            plot: true,
            carrier1: 25.0,
            band1: (1.0, 49.0),
            carrier2: 75.0,
            band2: (51.0, 99.0),
        }
    }
}

fn parse_list<T: std::str::FromStr>(value: &str) -> Result<Vec<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    value
        .split(',')
        .map(|v| v.trim().parse::<T>().map_err(Into::into))
        .collect::<Result<Vec<T>>>()
        .with_context(|| format!("bad list '{value}'"))
}

fn parse_pair(value: &str) -> Result<(f64, f64)> {
    let parts: Vec<f64> = parse_list(value)?;
    match parts[..] {
        [lo, hi] => Ok((lo, hi)),
        _ => bail!("expected two comma-separated values, got '{value}'"),
    }
}

fn parse_opt<T: std::str::FromStr>(value: &str) -> Result<Option<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    let v = value.trim();
    if v.is_empty() || v == "none" {
        return Ok(None);
    }
    Ok(Some(v.parse::<T>().map_err(anyhow::Error::from)?))
}

impl ExperimentConfig {
    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut section = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                section = name.trim().to_string();
                if !["layout", "detector", "object", "experiment", "fdm"].contains(&section.as_str())
                {
                    bail!("line {}: unknown section [{section}]", lineno + 1);
                }
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .with_context(|| format!("line {}: expected key=value", lineno + 1))?;
            let (key, value) = (key.trim(), value.trim());
            cfg.apply(&section, key, value)
                .with_context(|| format!("line {}", lineno + 1))?;
        }
        Ok(cfg)
    }

    fn apply(&mut self, section: &str, key: &str, value: &str) -> Result<()> {
        match (section, key) {
            ("layout", "a") => self.a = value.parse()?,
            ("layout", "b") => self.b = value.parse()?,
            ("layout", "n_freqs") => self.n_freqs = value.parse()?,
            ("layout", "freq_step") => self.freq_step = value.parse()?,
            ("layout", "quantize") => self.quantize = parse_opt(value)?,
            ("detector", "gain") => self.gain = value.parse()?,
            ("detector", "noise_sigma") => self.noise_sigma = value.parse()?,
            ("detector", "shot_scale") => self.shot_scale = parse_opt(value)?,
            ("detector", "adc_bits") => self.adc_bits = parse_opt(value)?,
            ("detector", "seed") => self.seed = value.parse()?,
            ("object", "shape") => self.shape = value.to_string(),
            ("object", "freq") => self.freq = value.parse()?,
            ("object", "duty") => self.duty = value.parse()?,
            ("object", "word") => self.word = value.to_string(),
            ("object", "scheme") => self.scheme = value.to_string(),
            ("object", "bit_rate") => self.bit_rate = value.parse()?,
            ("object", "duration") => self.duration = value.parse()?,
            ("object", "rate") => self.rate = value.parse()?,
            ("experiment", "coverages") => self.coverages = parse_list(value)?,
            ("experiment", "seeds") => self.seeds = parse_list(value)?,
            ("experiment", "out") => self.out = PathBuf::from(value),
            ("experiment", "plot") => self.plot = value.parse()?,
            ("fdm", "carrier1") => self.carrier1 = value.parse()?,
            ("fdm", "band1") => self.band1 = parse_pair(value)?,
            ("fdm", "carrier2") => self.carrier2 = value.parse()?,
            ("fdm", "band2") => self.band2 = parse_pair(value)?,
            _ => bail!("unknown key '{key}' in section [{section}]"),
        }
        Ok(())
    }

    pub fn layout(&self) -> Result<PatternLayout> {
        let rows = (self.n_freqs as f64).sqrt() as usize;
        let cols = self.n_freqs / rows.max(1);
        Ok(PatternLayout::new(
            self.n_freqs,
            self.freq_step,
            self.a,
            self.b,
            rows,
            cols,
            self.rate,
            self.quantize,
        )?)
    }

    pub fn detector(&self) -> DetectorModel {
        DetectorModel {
            gain: self.gain,
            gaussian_sigma: self.noise_sigma,
            shot_scale: self.shot_scale,
            adc_bits: self.adc_bits,
            seed: self.seed,
        }
    }

    /// Canonical re-serialization, used for the run-manifest hash.
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        let _ = write!(
            s,
            "[layout]\na={}\nb={}\nn_freqs={}\nfreq_step={}\nquantize={:?}\n\
             [detector]\ngain={}\nnoise_sigma={}\nshot_scale={:?}\nadc_bits={:?}\nseed={}\n\
             [object]\nshape={}\nfreq={}\nduty={}\nword={}\nscheme={}\nbit_rate={}\nduration={}\nrate={}\n\
             [experiment]\ncoverages={:?}\nseeds={:?}\nplot={}\n\
             [fdm]\ncarrier1={}\nband1={:?}\ncarrier2={}\nband2={:?}\n",
            self.a,
            self.b,
            self.n_freqs,
            self.freq_step,
            self.quantize,
            self.gain,
            self.noise_sigma,
            self.shot_scale,
            self.adc_bits,
            self.seed,
            self.shape,
            self.freq,
            self.duty,
            self.word,
            self.scheme,
            self.bit_rate,
            self.duration,
            self.rate,
            self.coverages,
            self.seeds,
            self.plot,
            self.carrier1,
            self.band1,
            self.carrier2,
            self.band2,
        );
        s
    }
}
