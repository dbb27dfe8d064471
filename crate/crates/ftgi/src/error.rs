use thiserror::Error;

/// Errors produced by waveform generation, acquisition and reconstruction.
#[derive(Debug, Error)]
pub enum Error {
    #[error("frequency {freq} Hz is at or above Nyquist ({nyquist} Hz)")]
    Aliasing { freq: f64, nyquist: f64 },

    #[error("offset {offset} < amplitude {amplitude} would produce negative intensity")]
    NegativeIntensity { offset: f64, amplitude: f64 },

    #[error("invalid duty cycle {0}; must lie in (0, 1]")]
    InvalidDuty(f64),

    #[error("bit count {bits} at {bit_rate} bit/s does not fill {duration} s exactly")]
    BitBudget {
        bits: usize,
        bit_rate: f64,
        duration: f64,
    },

    #[error("invalid layout: {0}")]
    InvalidLayout(String),

    #[error("frequency index {k} out of range (n_freqs = {n_freqs})")]
    FrequencyIndex { k: usize, n_freqs: usize },

    #[error("phase {0} is not one of the four probing phases")]
    UnknownPhase(f64),

    #[error("frame index {frame} out of range ({total} frames)")]
    FrameIndex { frame: usize, total: usize },

    #[error("object sample rate {object} Hz does not match layout frame rate {layout} Hz")]
    RateMismatch { object: f64, layout: f64 },

    #[error("object contains non-finite samples")]
    NonFiniteSamples,

    #[error("capture dimensions {rows}x{cols} do not match layout sub-patch grid {expect_rows}x{expect_cols}")]
    CaptureShape {
        rows: usize,
        cols: usize,
        expect_rows: usize,
        expect_cols: usize,
    },

    #[error("contrast B and response C must be positive (B = {b}, C = {c})")]
    NonPositiveScale { b: f64, c: f64 },

    #[error("spectrum coverage {0} out of range (0, 1]")]
    InvalidCoverage(f64),

    #[error("output length {out_len} too small; need at least {min}")]
    OutputTooShort { out_len: usize, min: usize },

    #[error("probe pattern length {pattern} does not match object length {object}")]
    LengthMismatch { pattern: usize, object: usize },

    #[error("need at least 2 measurements for correlation, got {0}")]
    TooFewMeasurements(usize),

    #[error("cannot normalize a constant sequence")]
    ConstantInput,

    #[error("sequence lengths differ: {0} vs {1}")]
    UnequalLengths(usize, usize),

    #[error("input is not min-max normalized (max = {0})")]
    NotNormalized(f64),

    #[error("channel band [{f_lo}, {f_hi}] Hz is invalid or outside the spectrum")]
    InvalidBand { f_lo: f64, f_hi: f64 },

    #[error("channel bands overlap")]
    OverlappingBands,

    #[error("channel band carries no energy; bits are undecidable")]
    EmptyBand,

    #[error("encoded signal dipped below zero (bias too small)")]
    NegativeEncode,

    #[error("capture CSV is malformed: {0}")]
    MalformedCsv(String),
}

pub type Result<T> = std::result::Result<T, Error>;
