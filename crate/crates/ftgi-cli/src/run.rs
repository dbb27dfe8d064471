//! Experiment runners. Each run writes its artifacts plus a manifest that
//! records the command, the config hash and the seeds, so a rerun with the
//! same inputs reproduces every file byte for byte.

use std::fmt;
use std::path::Path;

use anyhow::{bail, Context, Result};
use ftgi::io::fmt_num;
use ftgi::{
    encode_word, expose, extract_spectrum, fdm_decode, fdm_encode, make_basic_wave, make_random_probes,
    make_sinusoid, psnr_normalized, reconstruct, tgi_correlate, tgi_expose, BinaryCode,
    DetectorModel, FdmChannelSpec, LineCode, RawCapture, Reconstruction, Spectrum, TimeObject,
    WaveShape, Window,
};
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::plot::{line_plot, Series};

/// A check on computed results failed; maps to exit code 2 rather than the
/// exit-1 configuration errors.
#[derive(Debug)]
pub struct AssertionFailed(pub String);

impl fmt::Display for AssertionFailed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "assertion failed: {}", self.0)
    }
}

impl std::error::Error for AssertionFailed {}

/// Filename-safe rendering of a numeric parameter (5.0 -> "5", 0.5 -> "0p5").
pub fn slug(x: f64) -> String {
    if x.fract() == 0.0 {
        format!("{}", x as i64)
    } else {
        format!("{x}").replace('.', "p")
    }
}

fn parse_as<T: std::str::FromStr<Err = String>>(s: &str, what: &str) -> Result<T> {
    s.parse::<T>()
        .map_err(anyhow::Error::msg)
        .with_context(|| format!("bad {what} '{s}'"))
}

fn waveform_csv(samples: &[f64], rate: f64) -> String {
    let mut out = String::from("t,value\n");
    for (m, &v) in samples.iter().enumerate() {
        out.push_str(&format!("{},{}\n", fmt_num(m as f64 / rate), fmt_num(v)));
    }
    out
}

fn series_from(samples: &[f64], rate: f64) -> Vec<(f64, f64)> {
    samples
        .iter()
        .enumerate()
        .map(|(m, &v)| (m as f64 / rate, v))
        .collect()
}

pub struct Runner {
    pub cfg: ExperimentConfig,
}

impl Runner {
    pub fn new(cfg: ExperimentConfig) -> Self {
        Self { cfg }
    }

    fn write(&self, name: &str, contents: &str) -> Result<()> {
        std::fs::create_dir_all(&self.cfg.out)?;
        let path = self.cfg.out.join(name);
        std::fs::write(&path, contents)
            .with_context(|| format!("cannot write {}", path.display()))?;
        Ok(())
    }

    fn manifest(&self, command: &str) -> Result<()> {
        let hash = Sha256::digest(self.cfg.canonical().as_bytes());
        let seeds: Vec<String> = self.cfg.seeds.iter().map(u64::to_string).collect();
        self.write(
            &format!("{command}_manifest.txt"),
            &format!(
                "command={command}\nconfig_sha256={}\nseed={}\nseeds={}\n",
                hex::encode(hash),
                self.cfg.seed,
                seeds.join(",")
            ),
        )
    }

    fn plot(&self, name: &str, title: &str, y_label: &str, series: &[Series]) -> Result<()> {
        if self.cfg.plot {
            self.write(name, &line_plot(title, "time (s)", y_label, series))?;
        }
        Ok(())
    }

    /// Shared acquisition path: expose, extract, reconstruct, dump artifacts.
    fn pipeline(&self, object: &TimeObject, tag: &str, coverage: f64) -> Result<(Spectrum, Reconstruction)> {
        let layout = self.cfg.layout()?;
        let model = self.cfg.detector();
        let capture = expose(object, &layout, &model)?;
        self.write(&format!("{tag}_capture.csv"), &capture.to_csv())?;
        let spectrum = extract_spectrum(&capture)?;
        self.write(&format!("{tag}_spectrum.csv"), &spectrum.to_csv())?;
        let recon = reconstruct(&spectrum, coverage, Window::Rect, object.len())?;
        self.write(&format!("{tag}_reconstruction.csv"), &recon.to_csv())?;
        let truth = series_from(object.samples(), object.sample_rate());
        let got = series_from(&recon.samples, recon.sample_rate);
        self.plot(
            &format!("{tag}_reconstruction.svg"),
            tag,
            "intensity",
            &[
                Series { label: "object", points: &truth },
                Series { label: "reconstruction", points: &got },
            ],
        )?;
        Ok((spectrum, recon))
    }

    fn psnr_table(&self, tag: &str, rows: &[(String, String, f64)]) -> Result<()> {
        let mut csv = String::from("experiment,param,psnr_db\n");
        for (experiment, param, db) in rows {
            csv.push_str(&format!("{experiment},{param},{}\n", fmt_num(*db)));
        }
        self.write(&format!("{tag}_psnr.csv"), &csv)
    }

    pub fn sine_demo(&self, freqs: &[f64]) -> Result<()> {
        self.manifest("sine_demo")?;
        for &f in freqs {
            let object = make_sinusoid(f, self.cfg.duration, self.cfg.rate, 0.5, 0.5)?;
            let tag = format!("sine_{}hz", slug(f));
            let (spectrum, _) = self.pipeline(&object, &tag, 1.0)?;
            if f == 0.0 {
                println!("{tag}: DC-only object, skipping peak check");
                continue;
            }
            let peak = spectrum.peak_bin();
            if (spectrum.freq(peak) - f).abs() > 1e-9 {
                return Err(AssertionFailed(format!(
                    "{tag}: spectral peak at {} Hz, expected {f} Hz",
                    spectrum.freq(peak)
                ))
                .into());
            }
            let peak_mag = spectrum.coeffs()[peak].norm();
            let floor = spectrum
                .coeffs()
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != 0 && k != peak)
                .map(|(_, c)| c.norm())
                .fold(0.0_f64, f64::max);
            println!(
                "{tag}: peak at {} Hz, side-lobe floor {:.3e} of peak",
                spectrum.freq(peak),
                floor / peak_mag
            );
        }
        Ok(())
    }

    pub fn wave(&self, shape: &str, freq: f64, duty: f64) -> Result<()> {
        self.manifest("wave")?;
        let shape_v: WaveShape = parse_as(shape, "wave shape")?;
        let object = make_basic_wave(shape_v, freq, duty, self.cfg.duration, self.cfg.rate)?;
        let tag = format!("wave_{shape}_{}hz", slug(freq));
        self.write(&format!("{tag}_object.csv"), &waveform_csv(object.samples(), self.cfg.rate))?;
        let (_, recon) = self.pipeline(&object, &tag, 1.0)?;
        let report = psnr_normalized(&recon.samples, object.samples())?;
        self.psnr_table(&tag, &[("wave".into(), format!("{shape}_{}hz", slug(freq)), report.psnr_db)])?;
        println!("{tag}: psnr {:.3} dB", report.psnr_db);
        Ok(())
    }

    pub fn word(&self, bits: &str, scheme: &str, bit_rate: f64) -> Result<()> {
        self.manifest("word")?;
        let scheme_v: LineCode = parse_as(scheme, "line code")?;
        let code = BinaryCode::from_str_bits(bits, scheme_v, bit_rate)?;
        let object = encode_word(&code, self.cfg.duration, self.cfg.rate)?;
        let tag = format!("word_{scheme}_{}bps", slug(bit_rate));
        self.write(&format!("{tag}_object.csv"), &waveform_csv(object.samples(), self.cfg.rate))?;
        let (_, recon) = self.pipeline(&object, &tag, 1.0)?;
        let report = psnr_normalized(&recon.samples, object.samples())?;
        self.psnr_table(&tag, &[("word".into(), format!("{scheme}_{}bps", slug(bit_rate)), report.psnr_db)])?;
        println!("{tag}: bits {bits}, psnr {:.3} dB", report.psnr_db);
        Ok(())
    }

    pub fn sweep_coverage(&self, shapes: &[String], freqs: &[f64]) -> Result<()> {
        self.manifest("sweep_coverage")?;
        if shapes.is_empty() || freqs.is_empty() || self.cfg.coverages.is_empty() {
            bail!("sweep lists must be non-empty");
        }
        let layout = self.cfg.layout()?;
        let model = self.cfg.detector();
        let mut rows = Vec::new();
        for shape in shapes {
            let shape_v: WaveShape = parse_as(shape, "wave shape")?;
            for &freq in freqs {
                let object =
                    make_basic_wave(shape_v, freq, self.cfg.duty, self.cfg.duration, self.cfg.rate)?;
                let capture = expose(&object, &layout, &model)?;
                let spectrum = extract_spectrum(&capture)?;
                for &coverage in &self.cfg.coverages {
                    let recon = reconstruct(&spectrum, coverage, Window::Rect, object.len())?;
                    let report = psnr_normalized(&recon.samples, object.samples())?;
                    rows.push((shape.clone(), freq, coverage, report.psnr_db));
                    if freq == freqs[0] {
                        let truth = series_from(object.samples(), self.cfg.rate);
                        let got = series_from(&recon.samples, recon.sample_rate);
                        let tag = format!(
                            "sweep_{shape}_{}hz_{}pct",
                            slug(freq),
                            slug((coverage * 100.0).round())
                        );
                        self.plot(
                            &format!("{tag}.svg"),
                            &tag,
                            "intensity",
                            &[
                                Series { label: "object", points: &truth },
                                Series { label: "reconstruction", points: &got },
                            ],
                        )?;
                    }
                }
            }
        }
        rows.sort_by(|a, b| {
            (a.0.as_str(), a.1, a.2)
                .partial_cmp(&(b.0.as_str(), b.1, b.2))
                .unwrap()
        });
        let mut csv = String::from("shape,freq_hz,coverage,psnr_db\n");
        for (shape, freq, coverage, db) in &rows {
            csv.push_str(&format!(
                "{shape},{},{},{}\n",
                fmt_num(*freq),
                fmt_num(*coverage),
                fmt_num(*db)
            ));
        }
        self.write("sweep_coverage_psnr.csv", &csv)?;
        println!("sweep_coverage: {} rows", rows.len());
        Ok(())
    }

    pub fn compare_tgi(&self, bits: &str, scheme: &str, bit_rate: f64, budgets: &[f64]) -> Result<()> {
        self.manifest("compare_tgi")?;
        if budgets.iter().any(|&b| !(b > 0.0 && b <= 1.0)) {
            bail!("budgets must lie in (0, 1]");
        }
        let scheme_v: LineCode = parse_as(scheme, "line code")?;
        let code = BinaryCode::from_str_bits(bits, scheme_v, bit_rate)?;
        let object = encode_word(&code, self.cfg.duration, self.cfg.rate)?;
        let layout = self.cfg.layout()?;
        let model = self.cfg.detector();
        let capture = expose(&object, &layout, &model)?;
        let spectrum = extract_spectrum(&capture)?;
        let n_patterns = 4 * layout.n_freqs();

        let mut rows: Vec<(String, f64, u64, f64)> = Vec::new();
        let mut gap_sum = 0.0;
        for &budget in budgets {
            let recon = reconstruct(&spectrum, budget, Window::Rect, object.len())?;
            let ftgi_db = psnr_normalized(&recon.samples, object.samples())?.psnr_db;
            for &seed in &self.cfg.seeds {
                rows.push(("ftgi".into(), budget, seed, ftgi_db));
                let probes = make_random_probes(n_patterns, object.len(), seed).take_fraction(budget);
                let tgi_model = DetectorModel { seed, ..model };
                let buckets = tgi_expose(&object, &probes, &tgi_model)?;
                let ghost = tgi_correlate(&buckets, &probes, self.cfg.rate)?;
                let tgi_db = psnr_normalized(&ghost.samples, object.samples())?.psnr_db;
                rows.push(("tgi".into(), budget, seed, tgi_db));
                gap_sum += ftgi_db - tgi_db;
            }
        }
        let gap_mean = gap_sum / (budgets.len() * self.cfg.seeds.len()) as f64;
        let mut csv = String::from("method,budget,seed,psnr_db\n");
        for (method, budget, seed, db) in &rows {
            csv.push_str(&format!("{method},{},{seed},{}\n", fmt_num(*budget), fmt_num(*db)));
        }
        csv.push_str(&format!("mean_gap,all,all,{}\n", fmt_num(gap_mean)));
        self.write("compare_tgi_psnr.csv", &csv)?;
        println!("compare_tgi: mean FTGI-TGI gap {gap_mean:.3} dB");
        Ok(())
    }

    pub fn fdm(&self, bit_rate: f64, scheme: &str, n_channels: usize) -> Result<()> {
        self.manifest("fdm")?;
        if !(1..=2).contains(&n_channels) {
            bail!("channel count must be 1 or 2");
        }
        let scheme_v: LineCode = parse_as(scheme, "line code")?;
        let n_bits = (bit_rate * self.cfg.duration).floor() as usize;
        if n_bits == 0 || self.cfg.word.is_empty() {
            bail!("bit budget and word must be non-empty");
        }
        let word: String = self.cfg.word.chars().cycle().take(n_bits).collect();
        let geometry = [
            (self.cfg.carrier1, self.cfg.band1),
            (self.cfg.carrier2, self.cfg.band2),
        ];
        let channels: Vec<FdmChannelSpec> = geometry[..n_channels]
            .iter()
            .map(|&(carrier, band)| {
                FdmChannelSpec::new(
                    carrier,
                    band,
                    BinaryCode::from_str_bits(&word, scheme_v, bit_rate)?,
                )
            })
            .collect::<ftgi::Result<_>>()?;

        let (signal, _) = fdm_encode(&channels, self.cfg.duration, self.cfg.rate)?;
        let layout = self.cfg.layout()?;
        let capture = expose(&signal, &layout, &self.cfg.detector())?;
        let spectrum = extract_spectrum(&capture)?;
        let tag = format!("fdm_{scheme}_{}bps", slug(bit_rate));
        self.write(&format!("{tag}_spectrum.csv"), &spectrum.to_csv())?;

        let truth = encode_word(&channels[0].word, self.cfg.duration, self.cfg.rate)?;
        let truth_series = series_from(truth.samples(), self.cfg.rate);
        let mut psnr_rows = Vec::new();
        for (i, channel) in channels.iter().enumerate() {
            let decoded = fdm_decode(&spectrum, channel, signal.len())?;
            let name = format!("{tag}_ch{}", i + 1);
            self.write(&format!("{name}_envelope.csv"), &decoded.to_csv())?;
            let env_series = series_from(&decoded.envelope, decoded.sample_rate);
            self.plot(
                &format!("{name}_envelope.svg"),
                &name,
                "envelope",
                &[
                    Series { label: "transmitted", points: &truth_series },
                    Series { label: "decoded", points: &env_series },
                ],
            )?;
            let report = psnr_normalized(&decoded.envelope, truth.samples())?;
            psnr_rows.push((
                "fdm".to_string(),
                format!("ch{}_{}hz", i + 1, slug(channel.carrier)),
                report.psnr_db,
            ));
            println!(
                "{name}: carrier {} Hz, decoded {} (sent {word}), psnr {:.3} dB",
                channel.carrier,
                decoded.bit_string(),
                report.psnr_db
            );
            if decoded.bit_string() != word {
                return Err(AssertionFailed(format!(
                    "{name}: decoded bits {} do not match transmitted {word}",
                    decoded.bit_string()
                ))
                .into());
            }
        }
        self.psnr_table(&tag, &psnr_rows)?;
        Ok(())
    }

    pub fn reconstruct_file(&self, capture_path: &Path) -> Result<()> {
        self.manifest("reconstruct")?;
        let csv = std::fs::read_to_string(capture_path)
            .with_context(|| format!("cannot read capture {}", capture_path.display()))?;
        let layout = self.cfg.layout()?;
        let capture = RawCapture::from_csv(&csv, layout, self.cfg.duration, self.cfg.detector())?;
        let spectrum = extract_spectrum(&capture)?;
        self.write("reconstruct_spectrum.csv", &spectrum.to_csv())?;
        let out_len = (self.cfg.rate * self.cfg.duration).round() as usize;
        for &coverage in &self.cfg.coverages {
            let recon = reconstruct(&spectrum, coverage, Window::Rect, out_len)?;
            let tag = format!("reconstruct_{}pct", slug((coverage * 100.0).round()));
            self.write(&format!("{tag}.csv"), &recon.to_csv())?;
            let series = series_from(&recon.samples, recon.sample_rate);
            self.plot(
                &format!("{tag}.svg"),
                &tag,
                "intensity",
                &[Series { label: "reconstruction", points: &series }],
            )?;
        }
        println!(
            "reconstruct: {} coverages from {}",
            self.cfg.coverages.len(),
            capture_path.display()
        );
        Ok(())
    }
}
