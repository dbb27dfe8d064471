//! Phase-shifting sinusoidal probe signals and the single-shot layout that
//! maps each (frequency, phase) pair to one sensor sub-patch.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

/// The four probing phases of the 4-step scheme, in sub-patch order
/// (top-left, top-right, bottom-left, bottom-right within each patch).
pub const PHASES: [f64; 4] = [0.0, PI / 2.0, PI, 3.0 * PI / 2.0];

/// Index of a phase within [`PHASES`], matched with a small tolerance.
pub fn phase_index(phase: f64) -> Result<usize> {
    PHASES
        .iter()
        .position(|&p| (p - phase).abs() < 1e-9)
        .ok_or(Error::UnknownPhase(phase))
}

/// The probing design: frequency grid, phase set, probe parameters and the
/// spatial multiplexing geometry. Immutable once constructed.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternLayout {
    n_freqs: usize,
    freq_step: f64,
    mean_level: f64,
    contrast: f64,
    patch_rows: usize,
    patch_cols: usize,
    frame_rate: f64,
    quantize_levels: Option<u32>,
}

impl Default for PatternLayout {
    /// 100 frequencies at 1 Hz step on a 10x10 patch grid, 800 patterns/s,
    /// A = B = 0.5 (maximal contrast within [0, 1] reflectance).
    fn default() -> Self {
        Self {
            n_freqs: 100,
            freq_step: 1.0,
            mean_level: 0.5,
            contrast: 0.5,
            patch_rows: 10,
            patch_cols: 10,
            frame_rate: 800.0,
            quantize_levels: None,
        }
    }
}

impl PatternLayout {
    pub fn new(
        n_freqs: usize,
        freq_step: f64,
        mean_level: f64,
        contrast: f64,
        patch_rows: usize,
        patch_cols: usize,
        frame_rate: f64,
        quantize_levels: Option<u32>,
    ) -> Result<Self> {
        if !(mean_level >= contrast && contrast >= 0.0) {
            return Err(Error::InvalidLayout(format!(
                "need A >= B >= 0, got A = {mean_level}, B = {contrast}"
            )));
        }
        if mean_level + contrast > 1.0 + 1e-12 {
            return Err(Error::InvalidLayout(format!(
                "A + B = {} exceeds unit reflectance",
                mean_level + contrast
            )));
        }
        if patch_rows * patch_cols != n_freqs {
            return Err(Error::InvalidLayout(format!(
                "patch grid {patch_rows}x{patch_cols} does not hold {n_freqs} frequencies"
            )));
        }
        let f_max = (n_freqs as f64 - 1.0) * freq_step;
        if f_max >= frame_rate / 2.0 {
            return Err(Error::InvalidLayout(format!(
                "max frequency {f_max} Hz exceeds Nyquist of the {frame_rate} Hz frame rate"
            )));
        }
        Ok(Self {
            n_freqs,
            freq_step,
            mean_level,
            contrast,
            patch_rows,
            patch_cols,
            frame_rate,
            quantize_levels,
        })
    }

    /// Default geometry with the probe levels and quantization overridden.
    pub fn with_levels(mean_level: f64, contrast: f64, quantize_levels: Option<u32>) -> Result<Self> {
        let d = Self::default();
        Self::new(
            d.n_freqs,
            d.freq_step,
            mean_level,
            contrast,
            d.patch_rows,
            d.patch_cols,
            d.frame_rate,
            quantize_levels,
        )
    }

    pub fn n_freqs(&self) -> usize {
        self.n_freqs
    }

    pub fn freq_step(&self) -> f64 {
        self.freq_step
    }

    /// Mean probe level A.
    pub fn mean_level(&self) -> f64 {
        self.mean_level
    }

    /// Probe contrast B.
    pub fn contrast(&self) -> f64 {
        self.contrast
    }

    pub fn frame_rate(&self) -> f64 {
        self.frame_rate
    }

    pub fn quantize_levels(&self) -> Option<u32> {
        self.quantize_levels
    }

    /// Sub-patch grid dimensions (each patch splits 2x2 for the four phases).
    pub fn subpatch_dims(&self) -> (usize, usize) {
        (self.patch_rows * 2, self.patch_cols * 2)
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k >= self.n_freqs {
            return Err(Error::FrequencyIndex {
                k,
                n_freqs: self.n_freqs,
            });
        }
        Ok(())
    }

    /// Probe value S_kφ(t) = A + B cos(2π f_k t + φ), quantized if configured.
    pub fn probe_value(&self, k: usize, phase: f64, t: f64) -> Result<f64> {
        self.check_k(k)?;
        phase_index(phase)?;
        let freq = k as f64 * self.freq_step;
        let v = self.mean_level + self.contrast * (TAU * freq * t + phase).cos();
        Ok(match self.quantize_levels {
            Some(levels) if levels >= 2 => {
                let steps = (levels - 1) as f64;
                (v * steps).round() / steps
            }
            _ => v,
        })
    }

    /// Maps (k, φ) to its sub-patch cell. Patches run row-major by frequency;
    /// within each patch the phases occupy (0: top-left, π/2: top-right,
    /// π: bottom-left, 3π/2: bottom-right).
    pub fn subpatch_index(&self, k: usize, phase: f64) -> Result<(usize, usize)> {
        self.check_k(k)?;
        let p = phase_index(phase)?;
        let patch_row = k / self.patch_cols;
        let patch_col = k % self.patch_cols;
        Ok((2 * patch_row + p / 2, 2 * patch_col + p % 2))
    }

    /// One DMD frame: the full sub-patch grid of probe values at instant
    /// `frame_index / frame_rate`.
    pub fn render_frame(&self, frame_index: usize, duration: f64) -> Result<Vec<Vec<f64>>> {
        let total = (self.frame_rate * duration).round() as usize;
        if frame_index >= total {
            return Err(Error::FrameIndex {
                frame: frame_index,
                total,
            });
        }
        let t = frame_index as f64 / self.frame_rate;
        let (rows, cols) = self.subpatch_dims();
        let mut grid = vec![vec![0.0; cols]; rows];
        for k in 0..self.n_freqs {
            for &phase in &PHASES {
                let (r, c) = self.subpatch_index(k, phase)?;
                grid[r][c] = self.probe_value(k, phase, t)?;
            }
        }
        Ok(grid)
    }
}
