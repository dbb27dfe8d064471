//! Minimal static SVG line plots. One polyline per series, fixed palette,
//! deterministic output (fixed-precision coordinates, no timestamps).

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 360.0;
const MARGIN: f64 = 50.0;
const PALETTE: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

pub struct Series<'a> {
    pub label: &'a str,
    pub points: &'a [(f64, f64)],
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

pub fn line_plot(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let (x_lo, x_hi) = span(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let (y_lo, y_hi) = span(series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
    let sx = |x: f64| MARGIN + (x - x_lo) / (x_hi - x_lo) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y_lo) / (y_hi - y_lo) * (HEIGHT - 2.0 * MARGIN);

    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n\
         <text x=\"{:.1}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{title}</text>\n",
        WIDTH / 2.0
    );
    // axes box and extent labels
    svg.push_str(&format!(
        "<rect x=\"{m}\" y=\"{m}\" width=\"{w:.1}\" height=\"{h:.1}\" fill=\"none\" stroke=\"#888\"/>\n\
         <text x=\"{m}\" y=\"{by:.1}\" font-size=\"10\">{xlo:.4}</text>\n\
         <text x=\"{rx:.1}\" y=\"{by:.1}\" text-anchor=\"end\" font-size=\"10\">{xhi:.4}</text>\n\
         <text x=\"5\" y=\"{ylo_y:.1}\" font-size=\"10\">{ylo:.4}</text>\n\
         <text x=\"5\" y=\"{yhi_y:.1}\" font-size=\"10\">{yhi:.4}</text>\n\
         <text x=\"{cx:.1}\" y=\"{lx:.1}\" text-anchor=\"middle\" font-size=\"11\">{x_label}</text>\n\
         <text x=\"14\" y=\"{cy:.1}\" text-anchor=\"middle\" font-size=\"11\" \
         transform=\"rotate(-90 14 {cy:.1})\">{y_label}</text>\n",
        m = MARGIN,
        w = WIDTH - 2.0 * MARGIN,
        h = HEIGHT - 2.0 * MARGIN,
        by = HEIGHT - MARGIN + 14.0,
        rx = WIDTH - MARGIN,
        xlo = x_lo,
        xhi = x_hi,
        ylo = y_lo,
        yhi = y_hi,
        ylo_y = HEIGHT - MARGIN,
        yhi_y = MARGIN + 4.0,
        cx = WIDTH / 2.0,
        lx = HEIGHT - 10.0,
        cy = HEIGHT / 2.0,
    ));
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.2\" points=\"{}\"/>\n",
            points.join(" ")
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"10\" fill=\"{color}\">{}</text>\n",
            WIDTH - MARGIN - 120.0,
            MARGIN + 14.0 + 12.0 * i as f64,
            s.label
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plot_is_deterministic_and_well_formed() {
        let pts = [(0.0, 0.0), (0.5, 1.0), (1.0, 0.25)];
        let s = [Series {
            label: "recon",
            points: &pts,
        }];
        let a = line_plot("t", "time (s)", "intensity", &s);
        let b = line_plot("t", "time (s)", "intensity", &s);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.trim_end().ends_with("</svg>"));
        assert_eq!(a.matches("<polyline").count(), 1);
    }

    #[test]
    fn constant_series_does_not_divide_by_zero() {
        let pts = [(0.0, 0.5), (1.0, 0.5)];
        let s = [Series {
            label: "flat",
            points: &pts,
        }];
        let svg = line_plot("flat", "x", "y", &s);
        assert!(!svg.contains("NaN"));
    }
}
