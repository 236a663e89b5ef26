//! Minimal hand-rolled SVG renderers for the report bundle: line charts
//! (convergence, diversity), the critical-difference plot, and the
//! exploration/exploitation area chart. Output is deterministic text.

use std::fmt::Write as _;

use crate::stats::cd_groups;

const W: f64 = 720.0;
const H: f64 = 420.0;
const MARGIN: f64 = 60.0;

const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#393b79", "#637939",
];

fn svg_open(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="16" font-family="sans-serif">{}</text>"#,
        W / 2.0,
        xml_escape(title)
    );
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn axis(out: &mut String, x_label: &str, y_label: &str) {
    let _ = writeln!(
        out,
        r#"<line x1="{m}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/>
<line x1="{m}" y1="{t}" x2="{m}" y2="{b}" stroke="black"/>
<text x="{cx}" y="{ly}" text-anchor="middle" font-size="12" font-family="sans-serif">{xl}</text>
<text x="16" y="{cy}" text-anchor="middle" font-size="12" font-family="sans-serif" transform="rotate(-90 16 {cy})">{yl}</text>"#,
        m = MARGIN,
        b = H - MARGIN,
        r = W - MARGIN / 2.0,
        t = MARGIN / 2.0,
        cx = W / 2.0,
        ly = H - 12.0,
        cy = H / 2.0,
        xl = xml_escape(x_label),
        yl = xml_escape(y_label),
    );
}

/// Multi-series line chart. Each series is (label, points); `log_y` plots
/// log10 of positive values (non-positive values are floored).
pub fn line_chart(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[(String, Vec<(f64, f64)>)],
    log_y: bool,
) -> String {
    let mut out = String::new();
    svg_open(&mut out, title);
    axis(&mut out, x_label, y_label);

    let ys = |v: f64| if log_y { v.max(1e-12).log10() } else { v };
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for (_, pts) in series {
        for &(x, y) in pts {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(ys(y));
            y_max = y_max.max(ys(y));
        }
    }
    if !x_min.is_finite() || x_max <= x_min {
        x_min = 0.0;
        x_max = 1.0;
    }
    if !y_min.is_finite() || y_max <= y_min {
        y_min -= 0.5;
        y_max = y_min + 1.0;
    }
    let px = |x: f64| MARGIN + (x - x_min) / (x_max - x_min) * (W - 1.5 * MARGIN);
    let py = |y: f64| H - MARGIN - (ys(y) - y_min) / (y_max - y_min) * (H - 1.5 * MARGIN);

    for (i, (label, pts)) in series.iter().enumerate() {
        if pts.is_empty() {
            continue;
        }
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            path.join(" ")
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" font-family="sans-serif" fill="{color}">{}</text>"#,
            W - MARGIN / 2.0 + 4.0 - 60.0,
            MARGIN / 2.0 + 14.0 * i as f64 + 10.0,
            xml_escape(label)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Critical-difference plot: a rank axis with one tick per algorithm, the CD
/// ruler, and bars joining groups whose rank spread is within the CD.
pub fn cd_plot(title: &str, names: &[String], ranks: &[f64], cd: f64) -> String {
    assert_eq!(names.len(), ranks.len());
    let k = ranks.len();
    let mut out = String::new();
    svg_open(&mut out, title);

    let lo = 1.0f64;
    let hi = (k as f64).max(ranks.iter().cloned().fold(1.0, f64::max));
    let px = |r: f64| MARGIN + (r - lo) / (hi - lo).max(1e-9) * (W - 2.0 * MARGIN);
    let axis_y = 80.0;

    let _ = writeln!(
        out,
        r#"<line x1="{}" y1="{axis_y}" x2="{}" y2="{axis_y}" stroke="black"/>"#,
        px(lo),
        px(hi)
    );
    for tick in 1..=(hi.floor() as usize) {
        let _ = writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="black"/>
<text x="{x:.2}" y="{}" text-anchor="middle" font-size="10" font-family="sans-serif">{tick}</text>"#,
            axis_y - 4.0,
            axis_y + 4.0,
            axis_y - 8.0,
            x = px(tick as f64),
        );
    }

    // CD ruler
    let _ = writeln!(
        out,
        r#"<line x1="{a:.2}" y1="50" x2="{b:.2}" y2="50" stroke="black" stroke-width="2"/>
<text x="{mid:.2}" y="44" text-anchor="middle" font-size="11" font-family="sans-serif">CD = {cd:.3}</text>"#,
        a = px(lo),
        b = px(lo + cd),
        mid = px(lo + cd / 2.0),
    );

    // one labelled tick per algorithm
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        ranks[a]
            .partial_cmp(&ranks[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    for (slot, &i) in order.iter().enumerate() {
        let x = px(ranks[i]);
        let label_y = axis_y + 40.0 + 16.0 * slot as f64;
        let _ = writeln!(
            out,
            r##"<line class="algo-tick" x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{axis_y}" stroke="#444"/>
<line x1="{x:.2}" y1="{axis_y}" x2="{x:.2}" y2="{ly:.2}" stroke="#bbb" stroke-dasharray="2,2"/>
<text x="{x:.2}" y="{lt:.2}" text-anchor="start" font-size="11" font-family="sans-serif">{} ({:.3})</text>"##,
            axis_y - 10.0,
            xml_escape(&names[i]),
            ranks[i],
            ly = label_y,
            lt = label_y + 4.0,
        );
    }

    // group bars
    for (gi, group) in cd_groups(ranks, cd).iter().enumerate() {
        if group.len() < 2 {
            continue;
        }
        let a = group
            .iter()
            .map(|&i| ranks[i])
            .fold(f64::INFINITY, f64::min);
        let b = group
            .iter()
            .map(|&i| ranks[i])
            .fold(f64::NEG_INFINITY, f64::max);
        let y = axis_y + 10.0 + 6.0 * gi as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{y}" x2="{:.2}" y2="{y}" stroke="black" stroke-width="3"/>"#,
            px(a) - 3.0,
            px(b) + 3.0,
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Stacked area chart of exploration (bottom band) vs exploitation over the
/// generations of one run: `(gen, xpl)` rows, percentages in `[0, 100]`.
pub fn xpl_xpt_area(title: &str, rows: &[(f64, f64)]) -> String {
    let mut out = String::new();
    svg_open(&mut out, title);
    axis(&mut out, "generation", "share of diversity [%]");
    if rows.is_empty() {
        out.push_str("</svg>\n");
        return out;
    }
    let x_min = rows.first().unwrap().0;
    let x_max = rows.last().unwrap().0.max(x_min + 1.0);
    let px = |x: f64| MARGIN + (x - x_min) / (x_max - x_min) * (W - 1.5 * MARGIN);
    let py = |y: f64| H - MARGIN - y / 100.0 * (H - 1.5 * MARGIN);

    let mut xpl_path: Vec<String> = rows
        .iter()
        .map(|&(x, xpl)| format!("{:.2},{:.2}", px(x), py(xpl)))
        .collect();
    xpl_path.push(format!("{:.2},{:.2}", px(x_max), py(0.0)));
    xpl_path.push(format!("{:.2},{:.2}", px(x_min), py(0.0)));
    let _ = writeln!(
        out,
        r##"<polygon fill="#1f77b4" fill-opacity="0.55" stroke="none" points="{}"/>"##,
        xpl_path.join(" ")
    );
    let mut top_path: Vec<String> = rows
        .iter()
        .map(|&(x, xpl)| format!("{:.2},{:.2}", px(x), py(xpl)))
        .collect();
    top_path.insert(0, format!("{:.2},{:.2}", px(x_min), py(100.0)));
    top_path.push(format!("{:.2},{:.2}", px(x_max), py(100.0)));
    let _ = writeln!(
        out,
        r##"<polygon fill="#ff7f0e" fill-opacity="0.45" stroke="none" points="{}"/>"##,
        top_path.join(" ")
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="11" font-family="sans-serif">exploration</text>
<text x="{}" y="{}" font-size="11" font-family="sans-serif">exploitation</text>"#,
        MARGIN + 8.0,
        H - MARGIN - 8.0,
        MARGIN + 8.0,
        MARGIN / 2.0 + 16.0,
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cd_plot_has_one_tick_per_algorithm() {
        let names: Vec<String> = (0..7).map(|i| format!("algo{i}")).collect();
        let ranks: Vec<f64> = (0..7).map(|i| 1.0 + i as f64 * 0.8).collect();
        let svg = cd_plot("ranks", &names, &ranks, 1.5);
        assert_eq!(svg.matches(r#"class="algo-tick""#).count(), 7);
        assert!(svg.contains("CD = 1.500"));
    }

    #[test]
    fn line_chart_renders_each_series() {
        let series = vec![
            ("a".to_string(), vec![(0.0, 1.0), (1.0, 0.1)]),
            ("b".to_string(), vec![(0.0, 2.0), (1.0, 0.5)]),
        ];
        let svg = line_chart("conv", "evals", "error", &series, true);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn area_chart_has_two_bands() {
        let rows: Vec<(f64, f64)> = (0..10)
            .map(|g| (g as f64, 100.0 - 10.0 * g as f64))
            .collect();
        let svg = xpl_xpt_area("trade-off", &rows);
        assert_eq!(svg.matches("<polygon").count(), 2);
    }

    #[test]
    fn outputs_are_deterministic() {
        let series = vec![("x".to_string(), vec![(0.0, 3.0), (2.0, 1.0)])];
        assert_eq!(
            line_chart("t", "x", "y", &series, false),
            line_chart("t", "x", "y", &series, false)
        );
    }
}
