use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;
use crate::scalar::Scalar;
use crate::sweep::{Plateau, SweepCurve};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const ANNOTATED: usize = 3;
const PLATEAU_COLORS: [&str; ANNOTATED] = ["#2ca02c", "#9467bd", "#8c564b"];

struct Frame {
    t0: f64,
    t1: f64,
    top: f64,
}

impl Frame {
    fn x(&self, t: f64) -> f64 {
        LEFT + (t - self.t0) / (self.t1 - self.t0) * (WIDTH - LEFT - RIGHT)
    }

    /// Class counts use a `log(k + 1)` axis so both `K ≈ N` and `K = 1` stay readable.
    fn y(&self, k: usize) -> f64 {
        let frac = ((k as f64) + 1.0).log10() / (self.top + 1.0).log10();
        HEIGHT - BOTTOM - frac * (HEIGHT - TOP - BOTTOM)
    }
}

fn step_paths<S: Scalar>(curve: &SweepCurve<S>, frame: &Frame, filtered: bool) -> Vec<String> {
    let mut paths = Vec::new();
    let mut cur: Option<(String, usize, f64)> = None;
    let flush = |cur: &mut Option<(String, usize, f64)>, paths: &mut Vec<String>| {
        if let Some((mut p, _, last_x)) = cur.take() {
            let _ = write!(p, " H{last_x:.2}");
            paths.push(p);
        }
    };
    for s in &curve.samples {
        if !s.converged {
            flush(&mut cur, &mut paths);
            continue;
        }
        let k = if filtered { s.k_filtered } else { s.k_raw };
        let x = frame.x(s.t.to_f64_lossless());
        match cur.as_mut() {
            None => cur = Some((format!("M{x:.2},{:.2}", frame.y(k)), k, x)),
            Some((p, ck, last_x)) => {
                if *ck != k {
                    let _ = write!(p, " H{x:.2} V{:.2}", frame.y(k));
                    *ck = k;
                }
                *last_x = x;
            }
        }
    }
    flush(&mut cur, &mut paths);
    paths
}

fn k_ticks(top: usize) -> Vec<usize> {
    let mut ticks = vec![0, 1, 2, 3, 5];
    let mut base = 10;
    while base <= top.max(1) * 2 {
        ticks.extend([base, 2 * base, 5 * base]);
        base *= 10;
    }
    ticks.retain(|&k| k <= top.max(1));
    ticks
}

/// Step plot of `K(t)` with the first three plateaus of `plateaus` highlighted.
///
/// The raw count is solid; when a size filter is active the filtered count is dashed.
pub fn curve_svg<S: Scalar>(curve: &SweepCurve<S>, plateaus: &[Plateau<S>]) -> String {
    let ts: Vec<f64> = curve.samples.iter().map(|s| s.t.to_f64_lossless()).collect();
    let t0 = ts.first().copied().unwrap_or(0.0);
    let mut t1 = ts.last().copied().unwrap_or(1.0);
    if t1 <= t0 {
        t1 = t0 + 1.0;
    }
    let top = curve.samples.iter().map(|s| s.k_raw).max().unwrap_or(1).max(1);
    let frame = Frame { t0, t1, top: top as f64 };
    let show_filtered = curve.min_class_size > 1;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">K(t), alpha = {}, min class size = {}</text>"#,
        WIDTH / 2.0,
        curve.alpha,
        curve.min_class_size
    );

    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, HEIGHT - BOTTOM, TOP);
    let _ = writeln!(
        out,
        r#"<path d="M{x0:.2},{y1:.2} V{y0:.2} H{x1:.2}" fill="none" stroke="black" stroke-width="1"/>"#
    );
    for k in k_ticks(top) {
        let y = frame.y(k);
        let _ = writeln!(
            out,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="#dddddd" stroke-width="1"/><text x="{:.2}" y="{:.2}" text-anchor="end">{k}</text>"##,
            x0,
            x0 - 6.0,
            y + 4.0
        );
    }
    for i in 0..=5 {
        let t = t0 + (t1 - t0) * i as f64 / 5.0;
        let x = frame.x(t);
        let _ = writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}" stroke="black" stroke-width="1"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{t:.3}</text>"#,
            y0 + 5.0,
            y0 + 20.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">interaction threshold t</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        out,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">classes K</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );

    for (i, p) in plateaus.iter().take(ANNOTATED).enumerate() {
        let (xa, xb, y) = (frame.x(p.t_start.to_f64_lossless()), frame.x(p.t_end.to_f64_lossless()), frame.y(p.k));
        let color = PLATEAU_COLORS[i];
        let _ = writeln!(
            out,
            r#"<path d="M{xa:.2},{y:.2} H{xb:.2}" stroke="{color}" stroke-width="8" stroke-opacity="0.35" fill="none"/><text x="{:.2}" y="{:.2}" text-anchor="middle" fill="{color}">K={}</text>"#,
            (xa + xb) / 2.0,
            y - 8.0,
            p.k
        );
    }

    if show_filtered {
        for d in step_paths(curve, &frame, true) {
            let _ = writeln!(
                out,
                r##"<path d="{d}" fill="none" stroke="#ff7f0e" stroke-width="1.5" stroke-dasharray="6,4"/>"##
            );
        }
    }
    for d in step_paths(curve, &frame, false) {
        let _ = writeln!(out, r##"<path d="{d}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>"##);
    }
    for s in curve.samples.iter().filter(|s| !s.converged) {
        let x = frame.x(s.t.to_f64_lossless());
        let _ = writeln!(
            out,
            r##"<circle cx="{x:.2}" cy="{:.2}" r="3" fill="#d62728"/>"##,
            y0 - 3.0
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn render_curve_svg<S: Scalar>(curve: &SweepCurve<S>, plateaus: &[Plateau<S>], path: impl AsRef<Path>) -> Result<()> {
    super::write_file(path.as_ref(), &curve_svg(curve, plateaus))
}
