//! Spectrum extraction by 4-step phase shifting, Hermitian assembly and
//! inverse-Fourier reconstruction.
//!
//! The normalization contract: F_k equals the Fourier-series coefficient
//! c_k = (1/τ) ∫ I(t) e^{-i2πf_k t} dt of the (noiseless) object, i.e. the
//! length-N DFT of the sampled object at bin k divided by N.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::detector::RawCapture;
use crate::error::{Error, Result};
use crate::io::fmt_num;
use crate::probing::PHASES;

/// One-sided complex Fourier coefficients F_0..F_{n-1}.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    coeffs: Vec<Complex64>,
    freq_step: f64,
    duration: f64,
}

impl Spectrum {
    pub fn new(coeffs: Vec<Complex64>, freq_step: f64, duration: f64) -> Self {
        Self {
            coeffs,
            freq_step,
            duration,
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn freq_step(&self) -> f64 {
        self.freq_step
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn n_freqs(&self) -> usize {
        self.coeffs.len()
    }

    /// Frequency of bin k in Hz.
    pub fn freq(&self, k: usize) -> f64 {
        k as f64 * self.freq_step
    }

    /// Index of the largest-magnitude coefficient, DC excluded.
    pub fn peak_bin(&self) -> usize {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .max_by(|(_, a), (_, b)| a.norm().total_cmp(&b.norm()))
            .map(|(k, _)| k)
            .unwrap_or(0)
    }

    /// CSV with columns freq_hz, re, im, magnitude.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("freq_hz,re,im,magnitude\n");
        for (k, c) in self.coeffs.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                fmt_num(self.freq(k)),
                fmt_num(c.re),
                fmt_num(c.im),
                fmt_num(c.norm())
            ));
        }
        out
    }
}

/// A reconstructed ghost image (real time-domain samples).
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub samples: Vec<f64>,
    pub sample_rate: f64,
    pub coverage: f64,
    pub window: Window,
}

impl Reconstruction {
    /// CSV with columns t, value.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,value\n");
        for (m, &v) in self.samples.iter().enumerate() {
            out.push_str(&format!(
                "{},{}\n",
                fmt_num(m as f64 / self.sample_rate),
                fmt_num(v)
            ));
        }
        out
    }
}

/// Spectral weighting applied before the inverse transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    Rect,
    /// Raised-cosine taper over the top `rolloff` fraction of the kept band.
    RaisedCosine { rolloff: f64 },
}

impl Window {
    pub const DEFAULT_ROLLOFF: f64 = 0.2;

    /// Weight of kept bin k when the band extends to k_max.
    fn weight(&self, k: usize, k_max: usize) -> f64 {
        match *self {
            Window::Rect => 1.0,
            Window::RaisedCosine { rolloff } => {
                let start = ((1.0 - rolloff) * k_max as f64).ceil() as usize;
                if k <= start || k_max == start {
                    1.0
                } else {
                    let span = (k_max - start) as f64;
                    0.5 * (1.0 + (PI * (k - start) as f64 / (span + 1.0)).cos())
                }
            }
        }
    }
}

/// Eq.-style 4-step extraction of one coefficient from the four bucket
/// values at phases 0, π/2, π, 3π/2:
/// `F = [(D0 - Dπ) + i(Dπ/2 - D3π/2)] / (2 B C)`.
pub fn extract_coefficient(
    d0: f64,
    dq: f64,
    dh: f64,
    dt: f64,
    contrast: f64,
    response: f64,
) -> Result<Complex64> {
    if contrast <= 0.0 || response <= 0.0 {
        return Err(Error::NonPositiveScale {
            b: contrast,
            c: response,
        });
    }
    Ok(Complex64::new(d0 - dh, dq - dt) / (2.0 * contrast * response))
}

/// Extracts the full one-sided spectrum from a raw capture. The response
/// constant C is gain × exposure duration, making F_k the Fourier-series
/// coefficient of the object.
pub fn extract_spectrum(capture: &RawCapture) -> Result<Spectrum> {
    let layout = capture.layout();
    let response = capture.model().gain * capture.duration();
    let mut coeffs = Vec::with_capacity(layout.n_freqs());
    for k in 0..layout.n_freqs() {
        let d0 = capture.bucket(k, PHASES[0])?;
        let dq = capture.bucket(k, PHASES[1])?;
        let dh = capture.bucket(k, PHASES[2])?;
        let dt = capture.bucket(k, PHASES[3])?;
        coeffs.push(extract_coefficient(
            d0,
            dq,
            dh,
            dt,
            layout.contrast(),
            response,
        )?);
    }
    Ok(Spectrum::new(coeffs, layout.freq_step(), capture.duration()))
}

/// Highest kept frequency index for a coverage fraction.
pub fn kept_max(n_freqs: usize, coverage: f64) -> Result<usize> {
    if !(coverage > 0.0 && coverage <= 1.0) {
        return Err(Error::InvalidCoverage(coverage));
    }
    Ok((coverage * (n_freqs as f64 - 1.0)).floor() as usize)
}

/// Builds the Hermitian-symmetric transform array in standard bin order:
/// bin 0 holds w_0 F_0, bin k holds w_k F_k for kept k, bin out_len-k holds
/// the conjugate, and everything else is zero.
pub fn assemble_hermitian(
    spec: &Spectrum,
    coverage: f64,
    window: Window,
    out_len: usize,
) -> Result<Vec<Complex64>> {
    let n = spec.n_freqs();
    let min = 2 * n - 1;
    if out_len < min {
        return Err(Error::OutputTooShort { out_len, min });
    }
    let k_max = kept_max(n, coverage)?;
    let mut bins = vec![Complex64::new(0.0, 0.0); out_len];
    // the DC coefficient is real by construction; noise on the quadrature
    // buckets leaves a spurious imaginary part with no conjugate slot, so
    // it is dropped to keep the assembled array Hermitian
    bins[0] = Complex64::new(spec.coeffs()[0].re, 0.0) * window.weight(0, k_max);
    for k in 1..=k_max {
        let w = window.weight(k, k_max);
        bins[k] = spec.coeffs()[k] * w;
        bins[out_len - k] = spec.coeffs()[k].conj() * w;
    }
    Ok(bins)
}

/// Tolerance for the imaginary residue left by the inverse transform,
/// relative to the reconstruction peak.
pub const IMAG_RESIDUE_TOL: f64 = 1e-12;

/// Inverse-transforms the assembled Hermitian array into the real ghost
/// image: R[m] = w_0 F_0 + 2 Σ_{k≥1} w_k Re(F_k e^{i2πkm/out_len}).
pub fn reconstruct(
    spec: &Spectrum,
    coverage: f64,
    window: Window,
    out_len: usize,
) -> Result<Reconstruction> {
    let mut bins = assemble_hermitian(spec, coverage, window, out_len)?;
    FftPlanner::new()
        .plan_fft_inverse(out_len)
        .process(&mut bins);
    let peak = bins.iter().map(|c| c.re.abs()).fold(0.0_f64, f64::max);
    let residue = bins.iter().map(|c| c.im.abs()).fold(0.0_f64, f64::max);
    debug_assert!(
        peak == 0.0 || residue < IMAG_RESIDUE_TOL * peak,
        "imaginary residue {residue} exceeds {IMAG_RESIDUE_TOL} of peak {peak}"
    );
    Ok(Reconstruction {
        samples: bins.into_iter().map(|c| c.re).collect(),
        sample_rate: out_len as f64 / spec.duration(),
        coverage,
        window,
    })
}

/// Largest imaginary residue of the inverse transform relative to the peak;
/// exposed so the realness invariant can be checked without a debug build.
pub fn imag_residue(spec: &Spectrum, coverage: f64, window: Window, out_len: usize) -> Result<f64> {
    let mut bins = assemble_hermitian(spec, coverage, window, out_len)?;
    FftPlanner::new()
        .plan_fft_inverse(out_len)
        .process(&mut bins);
    let peak = bins.iter().map(|c| c.re.abs()).fold(0.0_f64, f64::max);
    let residue = bins.iter().map(|c| c.im.abs()).fold(0.0_f64, f64::max);
    Ok(if peak == 0.0 { 0.0 } else { residue / peak })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detector::{expose, DetectorModel};
    use crate::probing::PatternLayout;
    use crate::waveform::{make_sinusoid, TimeObject};
    use approx::assert_abs_diff_eq;

    /// Independent brute-force DFT: bin k of the samples divided by N.
    fn dft_oracle(samples: &[f64], k: usize) -> Complex64 {
        let n = samples.len() as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, &s) in samples.iter().enumerate() {
            let theta = -2.0 * PI * k as f64 * m as f64 / n;
            acc += s * Complex64::new(theta.cos(), theta.sin());
        }
        acc / n
    }

    #[test]
    fn noisy_dc_imaginary_part_is_discarded() {
        // a noisy capture can leave Im(F_0) != 0; the assembled array must
        // stay Hermitian regardless
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 100];
        coeffs[0] = Complex64::new(0.5, 0.03);
        coeffs[7] = Complex64::new(0.1, -0.2);
        let spec = Spectrum::new(coeffs, 1.0, 1.0);
        let residue = imag_residue(&spec, 1.0, Window::Rect, 800).unwrap();
        assert!(residue < IMAG_RESIDUE_TOL);
    }

    #[test]
    fn extract_coefficient_constant_object() {
        // buckets of a constant unit object: every AC patch reads A = 0.5
        let c = extract_coefficient(0.5, 0.5, 0.5, 0.5, 0.5, 1.0).unwrap();
        assert_abs_diff_eq!(c.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.im, 0.0, epsilon = 1e-15);
        // DC patch: ((A+B) - (A-B)) / 2B = 1 = mean(I)
        let dc = extract_coefficient(1.0, 0.5, 0.0, 0.5, 0.5, 1.0).unwrap();
        assert_abs_diff_eq!(dc.re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn extract_coefficient_cosine_object() {
        // buckets from the 7 Hz raised-cosine detector example
        let c = extract_coefficient(0.75, 0.5, 0.25, 0.5, 0.5, 1.0).unwrap();
        assert_abs_diff_eq!(c.re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(c.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn extract_coefficient_rejects_nonpositive_scale() {
        assert!(extract_coefficient(1.0, 0.0, 0.0, 0.0, 0.0, 1.0).is_err());
        assert!(extract_coefficient(1.0, 0.0, 0.0, 0.0, 0.5, -1.0).is_err());
    }

    #[test]
    fn sinusoid_spectrum_localizes() {
        let layout = PatternLayout::default();
        let object = make_sinusoid(11.0, 1.0, 800.0, 1.0, 1.0).unwrap();
        let capture = expose(&object, &layout, &DetectorModel::default()).unwrap();
        let spec = extract_spectrum(&capture).unwrap();
        assert_abs_diff_eq!(spec.coeffs()[0].re, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(spec.coeffs()[11].norm(), 0.5, epsilon = 1e-10);
        for k in 1..100 {
            if k != 11 {
                assert!(spec.coeffs()[k].norm() < 1e-9);
            }
        }
        assert_eq!(spec.peak_bin(), 11);
    }

    #[test]
    fn spectrum_matches_dft_oracle() {
        let layout = PatternLayout::default();
        let object = make_sinusoid(33.0, 1.0, 800.0, 2.0, 1.5).unwrap();
        let capture = expose(&object, &layout, &DetectorModel::default()).unwrap();
        let spec = extract_spectrum(&capture).unwrap();
        for k in 0..100 {
            let oracle = dft_oracle(object.samples(), k);
            assert!((spec.coeffs()[k] - oracle).norm() <= 1e-9 * oracle.norm().max(1.0));
        }
    }

    #[test]
    fn zero_object_zero_spectrum() {
        let layout = PatternLayout::default();
        let object = TimeObject::new(vec![0.0; 800], 800.0).unwrap();
        let capture = expose(&object, &layout, &DetectorModel::default()).unwrap();
        let spec = extract_spectrum(&capture).unwrap();
        assert!(spec.coeffs().iter().all(|c| c.norm() < 1e-12));
    }

    #[test]
    fn kept_set_endpoints() {
        assert_eq!(kept_max(100, 1.0).unwrap(), 99);
        assert_eq!(kept_max(100, 0.25).unwrap(), 24);
        assert!(kept_max(100, 0.0).is_err());
        assert!(kept_max(100, 1.5).is_err());
    }

    #[test]
    fn hermitian_assembly_small_case() {
        let spec = Spectrum::new(
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.5),
                Complex64::new(0.0, 0.0),
            ],
            1.0,
            1.0,
        );
        let bins = assemble_hermitian(&spec, 1.0, Window::Rect, 5).unwrap();
        assert_eq!(bins[0], Complex64::new(1.0, 0.0));
        assert_eq!(bins[1], Complex64::new(0.0, 0.5));
        assert_eq!(bins[2], Complex64::new(0.0, 0.0));
        assert_eq!(bins[3], Complex64::new(0.0, 0.0));
        assert_eq!(bins[4], Complex64::new(0.0, -0.5));
    }

    #[test]
    fn dc_only_spectrum_reconstructs_constant() {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 100];
        coeffs[0] = Complex64::new(1.0, 0.0);
        let spec = Spectrum::new(coeffs, 1.0, 1.0);
        let recon = reconstruct(&spec, 1.0, Window::Rect, 800).unwrap();
        for &v in &recon.samples {
            assert_abs_diff_eq!(v, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn roundtrip_band_limited_object() {
        let layout = PatternLayout::default();
        let object = make_sinusoid(11.0, 1.0, 800.0, 1.0, 1.0).unwrap();
        let capture = expose(&object, &layout, &DetectorModel::default()).unwrap();
        let spec = extract_spectrum(&capture).unwrap();
        let recon = reconstruct(&spec, 1.0, Window::Rect, 800).unwrap();
        for (r, o) in recon.samples.iter().zip(object.samples()) {
            assert!((r - o).abs() < 1e-9);
        }
    }

    #[test]
    fn dc_level_cancels_in_extraction() {
        let base = PatternLayout::with_levels(0.45, 0.45, None).unwrap();
        let shifted = PatternLayout::with_levels(0.55, 0.45, None).unwrap();
        let object = make_sinusoid(11.0, 1.0, 800.0, 1.0, 1.0).unwrap();
        let model = DetectorModel::default();
        let a = extract_spectrum(&expose(&object, &base, &model).unwrap()).unwrap();
        let b = extract_spectrum(&expose(&object, &shifted, &model).unwrap()).unwrap();
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn imag_residue_small_across_windows() {
        let layout = PatternLayout::default();
        let object = make_sinusoid(11.0, 1.0, 800.0, 1.0, 1.0).unwrap();
        let spec =
            extract_spectrum(&expose(&object, &layout, &DetectorModel::default()).unwrap())
                .unwrap();
        for coverage in [0.25, 0.5, 1.0] {
            for window in [Window::Rect, Window::RaisedCosine { rolloff: 0.2 }] {
                assert!(imag_residue(&spec, coverage, window, 800).unwrap() < IMAG_RESIDUE_TOL);
            }
        }
    }

    #[test]
    fn monotone_error_in_coverage() {
        let layout = PatternLayout::default();
        let object = make_sinusoid(88.0, 1.0, 800.0, 1.0, 1.0).unwrap();
        let spec =
            extract_spectrum(&expose(&object, &layout, &DetectorModel::default()).unwrap())
                .unwrap();
        let mut prev = f64::INFINITY;
        for pct in (5..=100).step_by(5) {
            let recon = reconstruct(&spec, pct as f64 / 100.0, Window::Rect, 800).unwrap();
            let err: f64 = recon
                .samples
                .iter()
                .zip(object.samples())
                .map(|(r, o)| (r - o) * (r - o))
                .sum();
            assert!(err <= prev + 1e-12);
            prev = err;
        }
    }

    #[test]
    fn out_len_too_small_rejected() {
        let spec = Spectrum::new(vec![Complex64::new(1.0, 0.0); 100], 1.0, 1.0);
        assert!(matches!(
            assemble_hermitian(&spec, 1.0, Window::Rect, 100),
            Err(Error::OutputTooShort { .. })
        ));
    }

    #[test]
    fn raised_cosine_tapers_band_edge() {
        let w = Window::RaisedCosine { rolloff: 0.2 };
        assert_eq!(w.weight(0, 99), 1.0);
        assert_eq!(w.weight(79, 99), 1.0);
        let mut prev = 1.0;
        for k in 80..=99 {
            let v = w.weight(k, 99);
            assert!(v <= prev && v > 0.0);
            prev = v;
        }
        assert!(prev < 0.2);
    }
}
