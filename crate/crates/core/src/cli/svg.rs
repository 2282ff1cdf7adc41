//! Static six-panel SVG of compartment trajectories.

use std::fmt::Write;

use crate::model::COMPARTMENTS;

const PANEL_W: f64 = 420.0;
const PANEL_H: f64 = 240.0;
const COLS: usize = 2;
const PAD_L: f64 = 80.0;
const PAD_R: f64 = 20.0;
const PAD_T: f64 = 30.0;
const PAD_B: f64 = 35.0;

fn label(v: f64) -> String {
    if v == 0.0 || (1e-3..1e5).contains(&v.abs()) {
        format!("{}", (v * 1e4).round() / 1e4)
    } else {
        format!("{v:.3e}")
    }
}

fn extent(v: &[f64]) -> (f64, f64) {
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

/// Maps `v` from `[lo, hi]` onto `[0, 1]`; a flat range maps to the middle.
fn unit(v: f64, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        (v - lo) / (hi - lo)
    } else {
        0.5
    }
}

/// One panel per compartment, titled `x1`..`x6`. A single sample is drawn
/// as a marker instead of a line.
pub fn render(t: &[f64], series: &[Vec<f64>; COMPARTMENTS]) -> String {
    let rows = COMPARTMENTS.div_ceil(COLS);
    let (width, height) = (PANEL_W * COLS as f64, PANEL_H * rows as f64);
    let plot_w = PANEL_W - PAD_L - PAD_R;
    let plot_h = PANEL_H - PAD_T - PAD_B;
    let (t_lo, t_hi) = extent(t);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<rect width="{width}" height="{height}" fill="white"/>"#);

    for (i, ys) in series.iter().enumerate() {
        let ox = (i % COLS) as f64 * PANEL_W + PAD_L;
        let oy = (i / COLS) as f64 * PANEL_H + PAD_T;
        let (y_lo, y_hi) = extent(ys);
        let px = |v: f64| ox + unit(v, t_lo, t_hi) * plot_w;
        let py = |v: f64| oy + plot_h - unit(v, y_lo, y_hi) * plot_h;

        let _ = writeln!(out, r#"<g class="panel" id="panel-x{}">"#, i + 1);
        let _ = writeln!(
            out,
            r#"<text class="title" x="{:.2}" y="{:.2}" text-anchor="middle" font-size="14">x{}</text>"#,
            ox + plot_w / 2.0,
            oy - 10.0,
            i + 1
        );
        let _ = writeln!(
            out,
            r#"<rect x="{ox:.2}" y="{oy:.2}" width="{plot_w:.2}" height="{plot_h:.2}" fill="none" stroke="gray"/>"#
        );
        let _ =
            writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, ox - 4.0, oy + 4.0, label(y_hi));
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            ox - 4.0,
            oy + plot_h,
            label(y_lo)
        );
        let _ = writeln!(
            out,
            r#"<text x="{ox:.2}" y="{:.2}" text-anchor="start">{}</text>"#,
            oy + plot_h + 15.0,
            label(t_lo)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            ox + plot_w,
            oy + plot_h + 15.0,
            label(t_hi)
        );

        if t.len() == 1 {
            let _ = writeln!(
                out,
                r#"<circle class="marker" cx="{:.2}" cy="{:.2}" r="3" fill="steelblue"/>"#,
                px(t[0]),
                py(ys[0])
            );
        } else if !t.is_empty() {
            let pts: Vec<String> = t.iter().zip(ys).map(|(&a, &b)| format!("{:.2},{:.2}", px(a), py(b))).collect();
            let _ = writeln!(
                out,
                r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="1.5"/>"#,
                pts.join(" ")
            );
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}
