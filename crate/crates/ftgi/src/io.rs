//! Shared CSV formatting helpers. All numeric output uses 12 significant
//! digits so artifacts are byte-reproducible across runs.

/// Formats a float with 12 significant digits.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        // normalize -0.0
        return "0.00000000000e0".to_string();
    }
    format!("{x:.11e}")
}

/// Parses one CSV line of comma-separated floats.
pub fn parse_row(line: &str) -> Option<Vec<f64>> {
    line.split(',')
        .map(|cell| cell.trim().parse::<f64>().ok())
        .collect()
}
