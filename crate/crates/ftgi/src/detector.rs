//! Single-shot long-exposure bucket measurement: every sub-patch integrates
//! the product of the time object and its probe over the full duration.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};

use crate::error::{Error, Result};
use crate::io::{fmt_num, parse_row};
use crate::probing::{PatternLayout, PHASES};
use crate::waveform::TimeObject;

/// Detector response and noise parameters. Default is a noiseless unit-gain
/// detector; the effective response constant C of the extraction contract
/// equals `gain * duration`.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorModel {
    pub gain: f64,
    /// Additive read-noise standard deviation, in bucket-value units.
    pub gaussian_sigma: f64,
    /// Photons per unit of intensity·second; enables Poisson shot noise.
    pub shot_scale: Option<f64>,
    /// Quantization depth of the ADC, in bits.
    pub adc_bits: Option<u32>,
    pub seed: u64,
}

impl Default for DetectorModel {
    fn default() -> Self {
        Self {
            gain: 1.0,
            gaussian_sigma: 0.0,
            shot_scale: None,
            adc_bits: None,
            seed: 0,
        }
    }
}

impl DetectorModel {
    /// RNG substream for one measurement, derived from the seed and the
    /// measurement index so results do not depend on evaluation order.
    pub(crate) fn stream(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    /// Applies the noise chain (shot, then additive Gaussian) to one bucket.
    pub(crate) fn apply_noise(&self, value: f64, rng: &mut ChaCha8Rng) -> f64 {
        let mut v = value;
        if let Some(scale) = self.shot_scale {
            if scale > 0.0 && v > 0.0 {
                let lambda = v * scale;
                v = Poisson::new(lambda).expect("positive lambda").sample(rng) / scale;
            }
        }
        if self.gaussian_sigma > 0.0 {
            let noise: f64 = Normal::new(0.0, self.gaussian_sigma)
                .expect("valid sigma")
                .sample(rng);
            v += noise;
        }
        v
    }

    fn is_noiseless(&self) -> bool {
        self.gaussian_sigma == 0.0 && self.shot_scale.is_none()
    }
}

/// The matrix of detected bucket values D_kφ from one simulated exposure.
#[derive(Debug, Clone, PartialEq)]
pub struct RawCapture {
    values: Vec<Vec<f64>>,
    layout: PatternLayout,
    duration: f64,
    model: DetectorModel,
}

impl RawCapture {
    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn layout(&self) -> &PatternLayout {
        &self.layout
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn model(&self) -> &DetectorModel {
        &self.model
    }

    /// Bucket value for one (frequency, phase) measurement.
    pub fn bucket(&self, k: usize, phase: f64) -> Result<f64> {
        let (r, c) = self.layout.subpatch_index(k, phase)?;
        Ok(self.values[r][c])
    }

    /// Serializes the bucket grid as bare CSV rows (row-major, no header).
    /// This is the interchange format between acquisition and reconstruction.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in &self.values {
            let line: Vec<String> = row.iter().map(|&v| fmt_num(v)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// Loads a bucket grid saved by [`RawCapture::to_csv`]. The layout,
    /// duration and detector model must be supplied by the caller (the grid
    /// alone does not carry them).
    pub fn from_csv(
        csv: &str,
        layout: PatternLayout,
        duration: f64,
        model: DetectorModel,
    ) -> Result<Self> {
        let mut values = Vec::new();
        for line in csv.lines() {
            if line.trim().is_empty() {
                continue;
            }
            let row = parse_row(line)
                .ok_or_else(|| Error::MalformedCsv(format!("bad row '{line}'")))?;
            values.push(row);
        }
        let (rows, cols) = layout.subpatch_dims();
        if values.len() != rows || values.iter().any(|r| r.len() != cols) {
            return Err(Error::CaptureShape {
                rows: values.len(),
                cols: values.first().map_or(0, |r| r.len()),
                expect_rows: rows,
                expect_cols: cols,
            });
        }
        Ok(Self {
            values,
            layout,
            duration,
            model,
        })
    }
}

/// Simulates one exposure: D_kφ = gain · (1/rate) · Σ_m I[m] · S_kφ(m/rate),
/// a Riemann sum over the shared sample grid, followed by the noise chain
/// (shot, Gaussian, then ADC quantization).
pub fn expose(
    object: &TimeObject,
    layout: &PatternLayout,
    model: &DetectorModel,
) -> Result<RawCapture> {
    if (object.sample_rate() - layout.frame_rate()).abs() > 1e-9 {
        return Err(Error::RateMismatch {
            object: object.sample_rate(),
            layout: layout.frame_rate(),
        });
    }
    let rate = object.sample_rate();
    let (rows, cols) = layout.subpatch_dims();
    let mut values = vec![vec![0.0; cols]; rows];
    for k in 0..layout.n_freqs() {
        for &phase in &PHASES {
            let (r, c) = layout.subpatch_index(k, phase)?;
            let mut acc = 0.0;
            for (m, &i) in object.samples().iter().enumerate() {
                acc += i * layout.probe_value(k, phase, m as f64 / rate)?;
            }
            let bucket = model.gain * acc / rate;
            values[r][c] = if model.is_noiseless() {
                bucket
            } else {
                let mut rng = model.stream((r * cols + c) as u64);
                model.apply_noise(bucket, &mut rng)
            };
        }
    }
    if let Some(bits) = model.adc_bits {
        quantize_adc(&mut values, bits);
    }
    Ok(RawCapture {
        values,
        layout: layout.clone(),
        duration: object.duration(),
        model: model.clone(),
    })
}

/// Uniform quantization over [0, max] of the capture, 2^bits levels.
pub(crate) fn quantize_adc(values: &mut [Vec<f64>], bits: u32) {
    let max = values
        .iter()
        .flatten()
        .cloned()
        .fold(0.0_f64, |a, b| a.max(b.abs()));
    if max == 0.0 {
        return;
    }
    let levels = (1u64 << bits.min(52)) as f64 - 1.0;
    for row in values.iter_mut() {
        for v in row.iter_mut() {
            *v = (*v / max * levels).round() / levels * max;
        }
    }
}
