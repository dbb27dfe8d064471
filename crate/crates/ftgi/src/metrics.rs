//! Reconstruction quality metrics: min-max normalization and PSNR.
//!
//! Both reconstructions and references are min-max normalized before PSNR
//! so the extraction's 2BC scale and the correlator's arbitrary scale cancel
//! identically; the peak P of the normalized ground truth is then 1.

use crate::error::{Error, Result};

/// PSNR result. `psnr_db` is infinite (with `exact` set) on a perfect match.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsnrReport {
    pub psnr_db: f64,
    pub mse: f64,
    pub length: usize,
    pub exact: bool,
}

/// Affine map of a sequence onto [0, 1].
pub fn minmax_normalize(x: &[f64]) -> Result<Vec<f64>> {
    let min = x.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(max > min) {
        return Err(Error::ConstantInput);
    }
    Ok(x.iter().map(|&v| (v - min) / (max - min)).collect())
}

/// PSNR = 10 log10(P² / MSE) with P = 1 for normalized inputs.
pub fn psnr(recon: &[f64], truth: &[f64]) -> Result<PsnrReport> {
    if recon.len() != truth.len() {
        return Err(Error::UnequalLengths(recon.len(), truth.len()));
    }
    for seq in [recon, truth] {
        let max = seq.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if (max - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized(max));
        }
    }
    let l = recon.len();
    let mse = recon
        .iter()
        .zip(truth)
        .map(|(&r, &g)| (r - g) * (r - g))
        .sum::<f64>()
        / l as f64;
    if mse == 0.0 {
        return Ok(PsnrReport {
            psnr_db: f64::INFINITY,
            mse,
            length: l,
            exact: true,
        });
    }
    Ok(PsnrReport {
        psnr_db: 10.0 * (1.0 / mse).log10(),
        mse,
        length: l,
        exact: false,
    })
}

/// Normalizes both sequences, then compares.
pub fn psnr_normalized(recon: &[f64], truth: &[f64]) -> Result<PsnrReport> {
    psnr(&minmax_normalize(recon)?, &minmax_normalize(truth)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn normalize_basic_cases() {
        assert_eq!(minmax_normalize(&[0.0, 1.0, 2.0]).unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(minmax_normalize(&[-3.0, 1.0]).unwrap(), vec![0.0, 1.0]);
        // idempotent on already-normalized input
        let x = vec![0.0, 0.25, 1.0];
        assert_eq!(minmax_normalize(&x).unwrap(), x);
        assert!(matches!(
            minmax_normalize(&[2.0, 2.0]),
            Err(Error::ConstantInput)
        ));
    }

    #[test]
    fn exact_match_flags_infinite() {
        let x = vec![0.0, 0.5, 1.0];
        let report = psnr(&x, &x).unwrap();
        assert!(report.exact);
        assert!(report.psnr_db.is_infinite());
        assert_eq!(report.mse, 0.0);
    }

    #[test]
    fn uniform_offset_forces_40_db() {
        // interior offset of 0.01 leaves both sequences peaking at 1
        let truth = vec![0.0, 0.49, 0.51, 1.0, 0.5, 0.99];
        let recon = vec![0.01, 0.5, 0.5, 0.99, 0.51, 1.0];
        // hand-picked so every |difference| is exactly 0.01
        let report = psnr(&recon, &truth).unwrap();
        assert_abs_diff_eq!(report.mse, 1e-4, epsilon = 1e-18);
        assert_abs_diff_eq!(report.psnr_db, 40.0, epsilon = 1e-9);
    }

    #[test]
    fn unnormalized_input_rejected() {
        assert!(matches!(
            psnr(&[0.0, 2.0], &[0.0, 1.0]),
            Err(Error::NotNormalized(_))
        ));
        assert!(matches!(
            psnr(&[0.0, 1.0], &[0.0, 0.5]),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn length_mismatch_rejected() {
        assert!(matches!(
            psnr(&[0.0, 1.0], &[0.0, 0.5, 1.0]),
            Err(Error::UnequalLengths(2, 3))
        ));
    }

    proptest! {
        #[test]
        fn psnr_symmetric(values in proptest::collection::vec(0.0f64..1.0, 8..32)) {
            let mut recon = values.clone();
            recon[0] = 0.0;
            recon[1] = 1.0;
            let mut truth: Vec<f64> = values.iter().rev().cloned().collect();
            let last = truth.len() - 1;
            truth[last] = 0.0;
            truth[last - 1] = 1.0;
            let a = psnr(&recon, &truth).unwrap();
            let b = psnr(&truth, &recon).unwrap();
            prop_assert!((a.psnr_db - b.psnr_db).abs() < 1e-12 || (a.exact && b.exact));
        }

        #[test]
        fn psnr_permutation_invariant(seed in 0u64..1000) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let truth = vec![0.0, 0.2, 0.4, 0.6, 0.8, 1.0, 0.3, 0.7];
            let recon = vec![0.05, 0.2, 0.35, 0.6, 0.85, 1.0, 0.0, 0.75];
            let mut order: Vec<usize> = (0..truth.len()).collect();
            order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let truth_p: Vec<f64> = order.iter().map(|&i| truth[i]).collect();
            let recon_p: Vec<f64> = order.iter().map(|&i| recon[i]).collect();
            let a = psnr(&recon, &truth).unwrap();
            let b = psnr(&recon_p, &truth_p).unwrap();
            prop_assert!((a.psnr_db - b.psnr_db).abs() < 1e-12);
        }
    }

    #[test]
    fn monotone_in_pointwise_error() {
        let truth = vec![0.0, 0.5, 1.0, 0.5];
        let close = vec![0.0, 0.51, 1.0, 0.5];
        let far = vec![0.0, 0.6, 1.0, 0.45];
        let a = psnr(&close, &truth).unwrap();
        let b = psnr(&far, &truth).unwrap();
        assert!(a.psnr_db > b.psnr_db);
    }
}
