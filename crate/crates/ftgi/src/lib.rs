//! Fourier temporal ghost imaging simulation.
//!
//! The pipeline mirrors a single-shot acquisition rig: a time object
//! (sampled intensity waveform) is multiplied against phase-shifting
//! sinusoidal probe patterns, each (frequency, phase) pair landing on one
//! sensor sub-patch that integrates over the full exposure. 4-step phase
//! shifting turns the bucket grid into one-sided Fourier coefficients, and
//! an inverse transform of the Hermitian-extended spectrum recovers the
//! waveform. A random-binary-probing baseline with correlation
//! reconstruction and a frequency-division-multiplexing decoder sit on the
//! same acquisition path.

pub mod detector;
pub mod error;
pub mod fdm;
pub mod io;
pub mod metrics;
pub mod probing;
pub mod spectral;
pub mod tgi;
pub mod waveform;

pub use detector::{expose, DetectorModel, RawCapture};
pub use error::{Error, Result};
pub use fdm::{fdm_decode, fdm_encode, slice_band, FdmChannelSpec, FdmDecoded};
pub use metrics::{minmax_normalize, psnr, psnr_normalized, PsnrReport};
pub use probing::{PatternLayout, PHASES};
pub use spectral::{
    assemble_hermitian, extract_coefficient, extract_spectrum, reconstruct, Reconstruction,
    Spectrum, Window,
};
pub use tgi::{make_random_probes, tgi_correlate, tgi_expose, RandomProbeSet};
pub use waveform::{
    encode_word, encode_word_with, make_basic_wave, make_sinusoid, BinaryCode, LineCode,
    TimeObject, WaveShape,
};
