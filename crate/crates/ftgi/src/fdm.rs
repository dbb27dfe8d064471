//! Frequency-division multiplexing over the acquisition band: binary words
//! are amplitude-modulated onto disjoint carrier bands of one intensity
//! signal, recovered channel by channel from the extracted spectrum.
//!
//! Modulation is double-sideband AM of a nonnegative envelope with an
//! additive DC bias (the minimal scheme an intensity-only source supports).
//! Decoding inverse-transforms only the channel's positive-frequency bins;
//! the magnitude of that analytic band signal is the envelope.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::io::fmt_num;
use crate::spectral::Spectrum;
use crate::waveform::{encode_word, BinaryCode, TimeObject};

/// One FDM channel: its carrier, the spectral band it owns, and the word it
/// transmits.
#[derive(Debug, Clone, PartialEq)]
pub struct FdmChannelSpec {
    pub carrier: f64,
    pub band: (f64, f64),
    pub word: BinaryCode,
}

impl FdmChannelSpec {
    pub fn new(carrier: f64, band: (f64, f64), word: BinaryCode) -> Result<Self> {
        if !(band.0 <= carrier && carrier <= band.1) {
            return Err(Error::InvalidBand {
                f_lo: band.0,
                f_hi: band.1,
            });
        }
        Ok(Self {
            carrier,
            band,
            word,
        })
    }
}

fn check_disjoint(channels: &[FdmChannelSpec]) -> Result<()> {
    for (i, a) in channels.iter().enumerate() {
        for b in &channels[i + 1..] {
            if a.band.0 <= b.band.1 && b.band.0 <= a.band.1 {
                return Err(Error::OverlappingBands);
            }
        }
    }
    Ok(())
}

/// Combines all channels into one nonnegative intensity signal:
/// I(t) = A0 + Σ e_ch(t) cos(2π f_ch t), A0 = channel count, then scaled to
/// peak 1. Returns the signal and the applied scale factor.
pub fn fdm_encode(
    channels: &[FdmChannelSpec],
    duration: f64,
    rate: f64,
) -> Result<(TimeObject, f64)> {
    check_disjoint(channels)?;
    let bias = channels.len() as f64;
    let n = (rate * duration).round() as usize;
    let mut samples = vec![bias; n];
    for ch in channels {
        let envelope = encode_word(&ch.word, duration, rate)?;
        for (m, s) in samples.iter_mut().enumerate() {
            let t = m as f64 / rate;
            *s += envelope.samples()[m] * (TAU * ch.carrier * t).cos();
        }
    }
    if samples.iter().any(|&s| s < 0.0) {
        return Err(Error::NegativeEncode);
    }
    let peak = samples.iter().cloned().fold(0.0_f64, f64::max);
    let scale = 1.0 / peak;
    for s in samples.iter_mut() {
        *s *= scale;
    }
    Ok((TimeObject::new(samples, rate)?, scale))
}

/// Copy of the spectrum with coefficients outside [f_lo, f_hi] zeroed.
/// DC survives only when f_lo = 0.
pub fn slice_band(spec: &Spectrum, f_lo: f64, f_hi: f64) -> Result<Spectrum> {
    let f_max = spec.freq(spec.n_freqs() - 1);
    if !(0.0 <= f_lo && f_lo <= f_hi && f_hi <= f_max) {
        return Err(Error::InvalidBand { f_lo, f_hi });
    }
    let coeffs = spec
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let f = spec.freq(k);
            if f >= f_lo && f <= f_hi {
                c
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    Ok(Spectrum::new(coeffs, spec.freq_step(), spec.duration()))
}

/// Decoded channel: the recovered modulation envelope and the bit decisions
/// sampled at slot centers with a half-peak threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct FdmDecoded {
    pub envelope: Vec<f64>,
    pub bits: Vec<bool>,
    pub sample_rate: f64,
}

impl FdmDecoded {
    pub fn bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    /// CSV with columns t, envelope.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,envelope\n");
        for (m, &v) in self.envelope.iter().enumerate() {
            out.push_str(&format!(
                "{},{}\n",
                fmt_num(m as f64 / self.sample_rate),
                fmt_num(v)
            ));
        }
        out
    }
}

/// Recovers one channel from the extracted spectrum. The channel's band is
/// sliced out and inverse-transformed one-sided (no conjugate bins), giving
/// the complex analytic band signal a(t); the envelope is 2|a(t)| since a
/// carrier-modulated envelope has one-sided magnitude e/2.
pub fn fdm_decode(spec: &Spectrum, channel: &FdmChannelSpec, out_len: usize) -> Result<FdmDecoded> {
    let sliced = slice_band(spec, channel.band.0, channel.band.1)?;
    let any_bin = (0..spec.n_freqs())
        .any(|k| spec.freq(k) >= channel.band.0 && spec.freq(k) <= channel.band.1);
    if !any_bin {
        return Err(Error::EmptyBand);
    }
    let mut bins = vec![Complex64::new(0.0, 0.0); out_len];
    for (k, &c) in sliced.coeffs().iter().enumerate() {
        if k < out_len {
            bins[k] = c;
        }
    }
    FftPlanner::new()
        .plan_fft_inverse(out_len)
        .process(&mut bins);
    let envelope: Vec<f64> = bins.iter().map(|c| 2.0 * c.norm()).collect();
    let sample_rate = out_len as f64 / spec.duration();
    // decide bits from the envelope at slot centers
    let n_bits = (channel.word.bit_rate * spec.duration()).round() as usize;
    let mut sampled = Vec::with_capacity(n_bits);
    for j in 0..n_bits {
        let t = (j as f64 + 0.5) / channel.word.bit_rate;
        let m = ((t * sample_rate).round() as usize).min(out_len - 1);
        sampled.push(envelope[m]);
    }
    let threshold = 0.5 * sampled.iter().cloned().fold(0.0_f64, f64::max);
    let bits = sampled.iter().map(|&v| v > threshold).collect();
    Ok(FdmDecoded {
        envelope,
        bits,
        sample_rate,
    })
}
