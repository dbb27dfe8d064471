//! Random-binary-probing temporal ghost imaging baseline with the centered
//! intensity-correlation estimator, matched to the FTGI measurement budget.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::detector::DetectorModel;
use crate::error::{Error, Result};
use crate::io::fmt_num;
use crate::spectral::{Reconstruction, Window};
use crate::waveform::TimeObject;

/// M random binary probe patterns of length N, reproducible from the seed.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomProbeSet {
    patterns: Vec<Vec<u8>>,
    seed: u64,
}

impl RandomProbeSet {
    pub fn patterns(&self) -> &[Vec<u8>] {
        &self.patterns
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// First ⌈fraction·M⌉ patterns, the nested measurement-budget subsets
    /// used for the percentage sweeps.
    pub fn take_fraction(&self, fraction: f64) -> Self {
        let count = ((fraction * self.patterns.len() as f64).ceil() as usize)
            .clamp(1, self.patterns.len());
        Self {
            patterns: self.patterns[..count].to_vec(),
            seed: self.seed,
        }
    }

    /// Builds a set from explicit patterns (used by exhaustive oracles).
    pub fn from_patterns(patterns: Vec<Vec<u8>>) -> Self {
        Self { patterns, seed: 0 }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for p in &self.patterns {
            let row: Vec<String> = p.iter().map(|b| b.to_string()).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// M×N iid Bernoulli(1/2) binary probe matrix, deterministic per seed.
pub fn make_random_probes(m: usize, n: usize, seed: u64) -> RandomProbeSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let patterns = (0..m)
        .map(|_| (0..n).map(|_| rng.gen_range(0..=1u8)).collect())
        .collect();
    RandomProbeSet { patterns, seed }
}

/// One bucket per pattern: D_m = gain · (1/rate) · Σ_t I[t] S_m[t], then the
/// detector noise chain.
pub fn tgi_expose(
    object: &TimeObject,
    probes: &RandomProbeSet,
    model: &DetectorModel,
) -> Result<Vec<f64>> {
    let n = object.len();
    let rate = object.sample_rate();
    let mut buckets = Vec::with_capacity(probes.len());
    for (m, pattern) in probes.patterns().iter().enumerate() {
        if pattern.len() != n {
            return Err(Error::LengthMismatch {
                pattern: pattern.len(),
                object: n,
            });
        }
        let acc: f64 = object
            .samples()
            .iter()
            .zip(pattern)
            .map(|(&i, &s)| i * s as f64)
            .sum();
        let mut bucket = model.gain * acc / rate;
        if model.gaussian_sigma > 0.0 || model.shot_scale.is_some() {
            let mut rng = model.stream(m as u64);
            bucket = model.apply_noise(bucket, &mut rng);
        }
        buckets.push(bucket);
    }
    Ok(buckets)
}

/// Centered cross-correlation estimator:
/// G[t] = (1/M) Σ_m (D_m − mean D)(S_m[t] − mean_m S[t]).
/// `sample_rate` labels the output grid; it does not enter the estimate.
pub fn tgi_correlate(
    buckets: &[f64],
    probes: &RandomProbeSet,
    sample_rate: f64,
) -> Result<Reconstruction> {
    let m = probes.len();
    if buckets.len() != m {
        return Err(Error::UnequalLengths(buckets.len(), m));
    }
    if m < 2 {
        return Err(Error::TooFewMeasurements(m));
    }
    let n = probes.patterns()[0].len();
    let mean_d: f64 = buckets.iter().sum::<f64>() / m as f64;
    let mut mean_s = vec![0.0; n];
    for pattern in probes.patterns() {
        for (acc, &s) in mean_s.iter_mut().zip(pattern) {
            *acc += s as f64;
        }
    }
    for acc in mean_s.iter_mut() {
        *acc /= m as f64;
    }
    let mut ghost = vec![0.0; n];
    for (pattern, &d) in probes.patterns().iter().zip(buckets) {
        let dd = d - mean_d;
        for ((g, &s), &ms) in ghost.iter_mut().zip(pattern).zip(&mean_s) {
            *g += dd * (s as f64 - ms);
        }
    }
    for g in ghost.iter_mut() {
        *g /= m as f64;
    }
    Ok(Reconstruction {
        samples: ghost,
        sample_rate,
        coverage: 1.0,
        window: Window::Rect,
    })
}

/// Buckets rendered as one CSV column for audit.
pub fn buckets_to_csv(buckets: &[f64]) -> String {
    let mut out = String::from("bucket\n");
    for &b in buckets {
        out.push_str(&fmt_num(b));
        out.push('\n');
    }
    out
}
