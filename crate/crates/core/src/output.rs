//! CSV and SVG rendering. Floats are written with 17 significant digits so
//! that reruns are byte-identical and values round-trip exactly.

use std::fmt::Write;

use crate::analysis::{CriticalLengthResult, ErrorProfile, LabelledProfile};
use crate::estimation::ReconstructionResult;
use crate::spectral::SpectralData;

pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{x:.16e}")
    }
}

pub fn error_profile_csv(profiles: &[ErrorProfile]) -> String {
    let mut out = String::from("n,mean_delta,std_delta,bound,n_excluded\n");
    for p in profiles {
        writeln!(
            out,
            "{},{},{},{},{}",
            p.site,
            fmt_f64(p.mean_delta),
            fmt_f64(p.std_delta),
            fmt_f64(p.bound),
            p.n_excluded
        )
        .unwrap();
    }
    out
}

pub fn critical_length_csv(results: &[CriticalLengthResult]) -> String {
    let mut out = String::from("epsilon,n_sites,mean_Lc,std_Lc,n_excluded\n");
    for r in results {
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(r.epsilon),
            r.n_sites,
            fmt_f64(r.mean_lc),
            fmt_f64(r.std_lc),
            r.n_excluded
        )
        .unwrap();
    }
    out
}

pub fn topology_compare_csv(variants: &[LabelledProfile]) -> String {
    let mut out = String::from("label,n,mean_delta,std_delta,bound,n_excluded\n");
    for v in variants {
        for p in &v.report.profiles {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                v.label,
                p.site,
                fmt_f64(p.mean_delta),
                fmt_f64(p.std_delta),
                fmt_f64(p.bound),
                p.n_excluded
            )
            .unwrap();
        }
    }
    out
}

/// `k, e_k, w1_k, w2_k` with squared overlaps of sites 1 and 2.
pub fn spectrum_csv(s: &SpectralData) -> String {
    let mut out = String::from("k,e_k,w1_k,w2_k\n");
    for k in 0..s.dim() {
        let w1 = s.vector_entry(0, k).powi(2);
        let w2 = if s.dim() > 1 {
            s.vector_entry(1, k).powi(2)
        } else {
            0.0
        };
        writeln!(
            out,
            "{},{},{},{}",
            k + 1,
            fmt_f64(s.eigenvalues()[k]),
            fmt_f64(w1),
            fmt_f64(w2)
        )
        .unwrap();
    }
    out
}

pub fn reconstruct_csv(true_couplings: &[f64], estimated: &[f64], deltas: &[f64]) -> String {
    let mut out = String::from("n,c_true,c_est,delta\n");
    for (n, ((c, ce), d)) in true_couplings.iter().zip(estimated).zip(deltas).enumerate() {
        writeln!(
            out,
            "{},{},{},{}",
            n + 1,
            fmt_f64(*c),
            fmt_f64(*ce),
            fmt_f64(*d)
        )
        .unwrap();
    }
    out
}

pub fn reconstruction_table(true_couplings: &[f64], rec: &ReconstructionResult) -> String {
    reconstruct_csv(true_couplings, &rec.estimated, &rec.errors_delta)
}

pub fn matrix_csv(rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row.iter().map(|x| fmt_f64(*x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
];

/// Minimal line chart. Non-positive values are dropped on log axes.
pub fn line_chart_svg(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[Series],
    log_x: bool,
    log_y: bool,
) -> String {
    let (w, h, margin) = (640.0, 420.0, 60.0);
    let tx = |v: f64| if log_x { v.log10() } else { v };
    let ty = |v: f64| if log_y { v.log10() } else { v };
    let keep = |&(x, y): &(f64, f64)| {
        (!log_x || x > 0.0) && (!log_y || y > 0.0) && x.is_finite() && y.is_finite()
    };

    let pts: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter().copied().filter(keep))
        .map(|(x, y)| (tx(x), ty(y)))
        .collect();
    let (mut x0, mut x1, mut y0, mut y1) = pts.iter().fold(
        (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        ),
        |(a, b, c, d), &(x, y)| (a.min(x), b.max(x), c.min(y), d.max(y)),
    );
    if pts.is_empty() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 - x0 <= 0.0 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 <= 0.0 {
        y1 = y0 + 1.0;
    }
    let px = |x: f64| margin + (x - x0) / (x1 - x0) * (w - 2.0 * margin);
    let py = |y: f64| h - margin - (y - y0) / (y1 - y0) * (h - 2.0 * margin);

    let mut svg = String::new();
    writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="12">"#).unwrap();
    writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        svg,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        w / 2.0,
        escape(title)
    )
    .unwrap();
    writeln!(
        svg,
        r#"<path d="M{m},{t} L{m},{b} L{r},{b}" stroke="black" fill="none"/>"#,
        m = margin,
        t = margin,
        b = h - margin,
        r = w - margin
    )
    .unwrap();
    let axis_value = |v: f64, log: bool| {
        if log {
            format!("1e{v:.1}")
        } else {
            format!("{v:.3}")
        }
    };
    writeln!(
        svg,
        r#"<text x="{margin}" y="{}" text-anchor="middle">{}</text>"#,
        h - margin + 16.0,
        axis_value(x0, log_x)
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        w - margin,
        h - margin + 16.0,
        axis_value(x1, log_x)
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
        margin - 4.0,
        h - margin,
        axis_value(y0, log_y)
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="{}" y="{margin}" text-anchor="end">{}</text>"#,
        margin - 4.0,
        axis_value(y1, log_y)
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        w / 2.0,
        h - 16.0,
        escape(x_label)
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        h / 2.0,
        h / 2.0,
        escape(y_label)
    )
    .unwrap();

    for (i, s) in series.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = s
            .points
            .iter()
            .copied()
            .filter(keep)
            .map(|(x, y)| format!("{:.2},{:.2}", px(tx(x)), py(ty(y))))
            .collect();
        writeln!(
            svg,
            r#"<polyline points="{}" stroke="{colour}" fill="none" stroke-width="1.5"/>"#,
            coords.join(" ")
        )
        .unwrap();
        let ly = margin + 16.0 * i as f64;
        writeln!(
            svg,
            r#"<text x="{}" y="{ly}" fill="{colour}" text-anchor="end">{}</text>"#,
            w - margin,
            escape(&s.label)
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
