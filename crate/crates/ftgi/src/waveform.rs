//! Time objects: sampled, nonnegative intensity waveforms.
//!
//! All generators share the native acquisition grid (800 samples/s over 1 s
//! by default) so that probe patterns and objects line up sample for sample.

use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Default sample rate in Hz, matching the pattern rate of the probing layout.
pub const DEFAULT_RATE: f64 = 800.0;
/// Default exposure duration in seconds.
pub const DEFAULT_DURATION: f64 = 1.0;

/// A sampled intensity waveform I(t). Samples are nonnegative linear
/// intensity values on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeObject {
    samples: Vec<f64>,
    sample_rate: f64,
}

impl TimeObject {
    /// Wraps raw samples, enforcing nonnegativity and a minimum length of 2.
    pub fn new(samples: Vec<f64>, sample_rate: f64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::MalformedCsv("time object needs >= 2 samples".into()));
        }
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(Error::NonFiniteSamples);
        }
        if let Some(&neg) = samples.iter().find(|&&s| s < 0.0) {
            return Err(Error::NegativeIntensity {
                offset: neg,
                amplitude: 0.0,
            });
        }
        Ok(Self {
            samples,
            sample_rate,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Sample instants m / rate.
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        let rate = self.sample_rate;
        (0..self.samples.len()).map(move |m| m as f64 / rate)
    }
}

fn sample_count(duration: f64, rate: f64) -> usize {
    (rate * duration).round() as usize
}

fn check_band(freq: f64, rate: f64) -> Result<()> {
    if freq >= rate / 2.0 {
        return Err(Error::Aliasing {
            freq,
            nyquist: rate / 2.0,
        });
    }
    Ok(())
}

/// Raised sinusoid `offset + amplitude * cos(2π f t)` sampled on the grid.
pub fn make_sinusoid(
    freq: f64,
    duration: f64,
    rate: f64,
    offset: f64,
    amplitude: f64,
) -> Result<TimeObject> {
    check_band(freq, rate)?;
    if !(offset >= amplitude && amplitude >= 0.0) {
        return Err(Error::NegativeIntensity { offset, amplitude });
    }
    let n = sample_count(duration, rate);
    let samples = (0..n)
        .map(|m| offset + amplitude * (TAU * freq * m as f64 / rate).cos())
        // clamp the -1e-16 round-off dips so the invariant holds exactly
        .map(|v| v.max(0.0))
        .collect();
    TimeObject::new(samples, rate)
}

/// Basic periodic waveform shapes, all unit amplitude in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveShape {
    /// Two-level, 50% duty.
    Square,
    /// Linear ramp 0 -> 1 per period.
    Sawtooth,
    /// Value 1 for the first `duty` fraction of each period, else 0.
    Pulse,
}

impl std::str::FromStr for WaveShape {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "square" => Ok(WaveShape::Square),
            "sawtooth" => Ok(WaveShape::Sawtooth),
            "pulse" => Ok(WaveShape::Pulse),
            other => Err(format!("unknown wave shape '{other}'")),
        }
    }
}

/// Periodic test waveform, evaluated left-closed at the sample instants
/// (no band-limiting pre-filter; the source emits the ideal shape).
pub fn make_basic_wave(
    shape: WaveShape,
    freq: f64,
    duty: f64,
    duration: f64,
    rate: f64,
) -> Result<TimeObject> {
    check_band(freq, rate)?;
    if shape == WaveShape::Pulse && !(duty > 0.0 && duty <= 1.0) {
        return Err(Error::InvalidDuty(duty));
    }
    let n = sample_count(duration, rate);
    let samples = (0..n)
        .map(|m| {
            // remainder before dividing keeps integer-Hz phases exact
            let phase = (freq * m as f64).rem_euclid(rate) / rate;
            match shape {
                WaveShape::Square => {
                    if phase < 0.5 {
                        1.0
                    } else {
                        0.0
                    }
                }
                WaveShape::Sawtooth => phase,
                WaveShape::Pulse => {
                    if phase < duty {
                        1.0
                    } else {
                        0.0
                    }
                }
            }
        })
        .collect();
    TimeObject::new(samples, rate)
}

/// Binary line-code scheme used to render a bit word as a waveform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineCode {
    /// Level held across the full bit slot.
    NrzSquare,
    /// '1' is high for the middle 50% of the slot, '0' stays low.
    RzSquare,
    /// '1' is a unit-peak Gaussian centered in the slot.
    RzGauss,
}

impl std::str::FromStr for LineCode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "nrz-square" | "nrz" => Ok(LineCode::NrzSquare),
            "rz-square" => Ok(LineCode::RzSquare),
            "rz-gauss" | "gauss" => Ok(LineCode::RzGauss),
            other => Err(format!("unknown line code '{other}'")),
        }
    }
}

/// An ordered bit word and the scheme/rate used to render it.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryCode {
    pub bits: Vec<bool>,
    pub scheme: LineCode,
    pub bit_rate: f64,
}

impl BinaryCode {
    /// Parses a string of '0'/'1' characters.
    pub fn from_str_bits(bits: &str, scheme: LineCode, bit_rate: f64) -> Result<Self> {
        let parsed: Option<Vec<bool>> = bits
            .chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect();
        match parsed {
            Some(bits) if !bits.is_empty() => Ok(Self {
                bits,
                scheme,
                bit_rate,
            }),
            _ => Err(Error::MalformedCsv(format!("invalid bit string '{bits}'"))),
        }
    }

    pub fn bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// Default Gaussian pulse width for RZ-Gauss, as a fraction of the bit period.
/// At FWHM = half the slot the pulse decays below 1% of peak at the slot
/// edges, so neighbouring bits do not bleed into each other.
pub const DEFAULT_GAUSS_FWHM_FRACTION: f64 = 0.5;

/// Renders a bit word on the sample grid with the default Gaussian width.
pub fn encode_word(code: &BinaryCode, duration: f64, rate: f64) -> Result<TimeObject> {
    encode_word_with(code, duration, rate, DEFAULT_GAUSS_FWHM_FRACTION)
}

/// Renders a bit word, with the RZ-Gauss FWHM given as a fraction of the bit
/// period. Output peak is normalized to 1 (all-zero words stay zero).
pub fn encode_word_with(
    code: &BinaryCode,
    duration: f64,
    rate: f64,
    gauss_fwhm_fraction: f64,
) -> Result<TimeObject> {
    let expected = code.bit_rate * duration;
    if (expected - code.bits.len() as f64).abs() > 1e-9 {
        return Err(Error::BitBudget {
            bits: code.bits.len(),
            bit_rate: code.bit_rate,
            duration,
        });
    }
    let n = sample_count(duration, rate);
    let slot = 1.0 / code.bit_rate;
    let mut samples = vec![0.0; n];
    match code.scheme {
        LineCode::NrzSquare => {
            for (m, s) in samples.iter_mut().enumerate() {
                let t = m as f64 / rate;
                let bit = ((t / slot) as usize).min(code.bits.len() - 1);
                *s = if code.bits[bit] { 1.0 } else { 0.0 };
            }
        }
        LineCode::RzSquare => {
            for (m, s) in samples.iter_mut().enumerate() {
                let t = m as f64 / rate;
                let bit = ((t / slot) as usize).min(code.bits.len() - 1);
                let frac = (t / slot).fract();
                *s = if code.bits[bit] && (0.25..0.75).contains(&frac) {
                    1.0
                } else {
                    0.0
                };
            }
        }
        LineCode::RzGauss => {
            let fwhm = gauss_fwhm_fraction * slot;
            // exp(-4 ln2 (t-c)^2 / fwhm^2) is unit peak with the stated FWHM
            let k = 4.0 * std::f64::consts::LN_2 / (fwhm * fwhm);
            for (bit, &b) in code.bits.iter().enumerate() {
                if !b {
                    continue;
                }
                let center = (bit as f64 + 0.5) * slot;
                for (m, s) in samples.iter_mut().enumerate() {
                    let t = m as f64 / rate;
                    let d = t - center;
                    *s += (-k * d * d).exp();
                }
            }
            let peak = samples.iter().cloned().fold(0.0_f64, f64::max);
            if peak > 0.0 {
                for s in samples.iter_mut() {
                    *s /= peak;
                }
            }
        }
    }
    TimeObject::new(samples, rate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sinusoid_matches_formula() {
        let w = make_sinusoid(11.0, 1.0, 800.0, 1.0, 1.0).unwrap();
        assert_eq!(w.len(), 800);
        for m in 0..800 {
            let expect = 1.0 + (TAU * 11.0 * m as f64 / 800.0).cos();
            assert_abs_diff_eq!(w.samples()[m], expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn sinusoid_dc_case() {
        let w = make_sinusoid(0.0, 1.0, 800.0, 1.0, 0.0).unwrap();
        assert!(w.samples().iter().all(|&s| s == 1.0));
    }

    #[test]
    fn sinusoid_rejects_nyquist() {
        assert!(matches!(
            make_sinusoid(400.0, 1.0, 800.0, 1.0, 1.0),
            Err(Error::Aliasing { .. })
        ));
    }

    #[test]
    fn sinusoid_rejects_negative_intensity() {
        assert!(matches!(
            make_sinusoid(5.0, 1.0, 800.0, 0.5, 1.0),
            Err(Error::NegativeIntensity { .. })
        ));
    }

    #[test]
    fn pulse_wave_duty() {
        let w = make_basic_wave(WaveShape::Pulse, 5.0, 0.10, 1.0, 800.0).unwrap();
        // 5 pulses, each 16 samples high (160 samples per period, 10% duty)
        let high: usize = w.samples().iter().filter(|&&s| s == 1.0).count();
        assert_eq!(high, 5 * 16);
        assert_eq!(w.samples()[0], 1.0);
        assert_eq!(w.samples()[15], 1.0);
        assert_eq!(w.samples()[16], 0.0);
    }

    #[test]
    fn square_wave_two_periods() {
        let w = make_basic_wave(WaveShape::Square, 2.0, 0.5, 1.0, 800.0).unwrap();
        let high: usize = w.samples()[..400].iter().filter(|&&s| s == 1.0).count();
        assert_eq!(high, 200);
        assert_eq!(w.samples()[0], 1.0);
        assert_eq!(w.samples()[200], 0.0);
        assert_eq!(w.samples()[400], 1.0);
    }

    #[test]
    fn sawtooth_single_ramp() {
        let w = make_basic_wave(WaveShape::Sawtooth, 1.0, 0.5, 1.0, 800.0).unwrap();
        for m in 0..800 {
            assert_abs_diff_eq!(w.samples()[m], m as f64 / 800.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn periodicity_when_freq_divides_rate() {
        let w = make_basic_wave(WaveShape::Square, 5.0, 0.5, 1.0, 800.0).unwrap();
        let p = 800 / 5;
        for m in 0..(800 - p) {
            assert_eq!(w.samples()[m], w.samples()[m + p]);
        }
    }

    #[test]
    fn nrz_word_levels() {
        let code = BinaryCode::from_str_bits("1110010110", LineCode::NrzSquare, 10.0).unwrap();
        let w = encode_word(&code, 1.0, 800.0).unwrap();
        // t = 0.05 s (bit 0 = '1'), t = 0.35 s (bit 3 = '0')
        assert_eq!(w.samples()[40], 1.0);
        assert_eq!(w.samples()[280], 0.0);
    }

    #[test]
    fn all_zero_word_is_zero() {
        for scheme in [LineCode::NrzSquare, LineCode::RzSquare, LineCode::RzGauss] {
            let code = BinaryCode::from_str_bits("0000000000", scheme, 10.0).unwrap();
            let w = encode_word(&code, 1.0, 800.0).unwrap();
            assert!(w.samples().iter().all(|&s| s == 0.0));
        }
    }

    #[test]
    fn rz_gauss_single_bit_closed_form() {
        let code = BinaryCode::from_str_bits("1", LineCode::RzGauss, 1.0).unwrap();
        let w = encode_word(&code, 1.0, 800.0).unwrap();
        // peak at t = 0.5 s
        assert_abs_diff_eq!(w.samples()[400], 1.0, epsilon = 1e-9);
        // closed-form value at t = 0.25 s with FWHM = 0.5 s:
        // exp(-4 ln2 * 0.25^2 / 0.5^2) = exp(-ln 2) = 0.5
        assert_abs_diff_eq!(w.samples()[200], 0.5, epsilon = 1e-9);
    }

    #[test]
    fn rz_square_mid_slot() {
        let code = BinaryCode::from_str_bits("10", LineCode::RzSquare, 2.0).unwrap();
        let w = encode_word(&code, 1.0, 800.0).unwrap();
        // slot 0 spans [0, 0.5); high for [0.125, 0.375)
        assert_eq!(w.samples()[0], 0.0);
        assert_eq!(w.samples()[99], 0.0);
        assert_eq!(w.samples()[100], 1.0);
        assert_eq!(w.samples()[299], 1.0);
        assert_eq!(w.samples()[300], 0.0);
        // slot 1 is a '0'
        assert!(w.samples()[400..].iter().all(|&s| s == 0.0));
    }

    #[test]
    fn word_duration_mismatch_rejected() {
        let code = BinaryCode::from_str_bits("101", LineCode::NrzSquare, 10.0).unwrap();
        assert!(matches!(
            encode_word(&code, 1.0, 800.0),
            Err(Error::BitBudget { .. })
        ));
    }

    #[test]
    fn encode_word_injective_per_scheme() {
        for scheme in [LineCode::NrzSquare, LineCode::RzSquare, LineCode::RzGauss] {
            let mut seen: Vec<(String, Vec<f64>)> = Vec::new();
            for word in 0u8..16 {
                let bits: String = (0..4).map(|i| if word >> i & 1 == 1 { '1' } else { '0' }).collect();
                let code = BinaryCode::from_str_bits(&bits, scheme, 4.0).unwrap();
                let w = encode_word(&code, 1.0, 800.0).unwrap();
                for (other, samples) in &seen {
                    assert_ne!(samples, w.samples(), "{bits} vs {other} collide");
                }
                seen.push((bits, w.samples().to_vec()));
            }
        }
    }
}
