//! Self-contained SVG plots of trajectories and the singular lines.

use std::fmt::Write as _;
use std::str::FromStr;

use quadint::catalog::SingularLine;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum View {
    Xy,
    Xz,
    Yz,
    /// Fixed-angle oblique projection with `z` up.
    ThreeD,
}

impl FromStr for View {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "xy" => Ok(View::Xy),
            "xz" => Ok(View::Xz),
            "yz" => Ok(View::Yz),
            "3d" => Ok(View::ThreeD),
            other => Err(format!("unknown view '{other}' (expected xy, xz, yz or 3d)")),
        }
    }
}

impl View {
    pub fn name(self) -> &'static str {
        match self {
            View::Xy => "xy",
            View::Xz => "xz",
            View::Yz => "yz",
            View::ThreeD => "3d",
        }
    }

    fn labels(self) -> (&'static str, &'static str) {
        match self {
            View::Xy => ("x", "y"),
            View::Xz => ("x", "z"),
            View::Yz => ("y", "z"),
            View::ThreeD => ("horizontal", "vertical"),
        }
    }

    pub fn project(self, q: [f64; 3]) -> [f64; 2] {
        match self {
            View::Xy => [q[0], q[1]],
            View::Xz => [q[0], q[2]],
            View::Yz => [q[1], q[2]],
            View::ThreeD => {
                let (az, el) = (35f64.to_radians(), 25f64.to_radians());
                let h = -q[0] * az.sin() + q[1] * az.cos();
                let depth = q[0] * az.cos() + q[1] * az.sin();
                [h, q[2] * el.cos() - depth * el.sin()]
            }
        }
    }
}

pub struct Series {
    pub label: String,
    pub points: Vec<[f64; 3]>,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 800.0;
const MARGIN: f64 = 70.0;
const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];

/// Roughly `target` tick positions at 1, 2 or 5 times a power of ten.
pub fn nice_ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let span = (hi - lo).max(1e-12);
    let raw = span / target.max(1) as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| span / s <= target as f64)
        .unwrap_or(10.0 * mag);
    let start = (lo / step).ceil() as i64;
    let end = (hi / step).floor() as i64;
    (start..=end).map(|k| k as f64 * step).collect()
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{:.3}", if v.abs() < 1e-12 { 0.0 } else { v });
    let s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    if s == "-0" { "0".into() } else { s }
}

/// Clips the infinite projected line `p + t·d` to the box.
fn clip_line(p: [f64; 2], d: [f64; 2], lo: [f64; 2], hi: [f64; 2]) -> Option<([f64; 2], [f64; 2])> {
    let (mut t0, mut t1) = (f64::NEG_INFINITY, f64::INFINITY);
    for i in 0..2 {
        if d[i].abs() < 1e-15 {
            if p[i] < lo[i] || p[i] > hi[i] {
                return None;
            }
        } else {
            let (a, b) = ((lo[i] - p[i]) / d[i], (hi[i] - p[i]) / d[i]);
            t0 = t0.max(a.min(b));
            t1 = t1.min(a.max(b));
        }
    }
    if t0 > t1 || !t0.is_finite() || !t1.is_finite() {
        return None;
    }
    Some(([p[0] + t0 * d[0], p[1] + t0 * d[1]], [p[0] + t1 * d[0], p[1] + t1 * d[1]]))
}

/// Renders the plot. With no series the box is `[-2, 2]²` around the lines.
pub fn render_svg(series: &[Series], lines: &[SingularLine], view: View, title: &str) -> String {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for s in series {
        for q in &s.points {
            let p = view.project(*q);
            if p.iter().all(|v| v.is_finite()) {
                for i in 0..2 {
                    lo[i] = lo[i].min(p[i]);
                    hi[i] = hi[i].max(p[i]);
                }
            }
        }
    }
    // keep the line anchors in view so they are always drawn
    for l in lines {
        let p = view.project(l.point);
        for i in 0..2 {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    if !lo[0].is_finite() {
        lo = [-2.0, -2.0];
        hi = [2.0, 2.0];
    }
    // square aspect, 8% padding
    let c = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0];
    let half = ((hi[0] - lo[0]).max(hi[1] - lo[1]) / 2.0).max(0.5) * 1.08;
    let lo = [c[0] - half, c[1] - half];
    let hi = [c[0] + half, c[1] + half];
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let sx = |x: f64| MARGIN + (x - lo[0]) / (hi[0] - lo[0]) * plot_w;
    let sy = |y: f64| HEIGHT - MARGIN - (y - lo[1]) / (hi[1] - lo[1]) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" data-view="{}">
<rect width="100%" height="100%" fill="white"/>
<text x="{}" y="30" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
        view.name(),
        WIDTH / 2.0,
        escape(title)
    );
    let _ = writeln!(svg, r##"<defs><clipPath id="plot-area"><rect x="{MARGIN}" y="{MARGIN}" width="{plot_w}" height="{plot_h}"/></clipPath></defs>"##);

    // axes frame and ticks
    let _ = writeln!(
        svg,
        r#"<g class="axes" stroke="black" fill="none" stroke-width="1"><rect x="{MARGIN}" y="{MARGIN}" width="{plot_w}" height="{plot_h}"/></g>"#
    );
    let _ = writeln!(svg, r#"<g class="ticks" font-family="sans-serif" font-size="12">"#);
    for t in nice_ticks(lo[0], hi[0], 8) {
        let x = sx(t);
        let y0 = HEIGHT - MARGIN;
        let _ = writeln!(svg, r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, y0 + 6.0);
        let _ = writeln!(svg, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, y0 + 20.0, fmt_tick(t));
    }
    for t in nice_ticks(lo[1], hi[1], 8) {
        let y = sy(t);
        let _ = writeln!(svg, r#"<line x1="{:.2}" y1="{y:.2}" x2="{MARGIN:.2}" y2="{y:.2}" stroke="black"/>"#, MARGIN - 6.0);
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, MARGIN - 9.0, y + 4.0, fmt_tick(t));
    }
    let (xl, yl) = view.labels();
    let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">{xl}</text>"#, WIDTH / 2.0, HEIGHT - 25.0);
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{}" text-anchor="middle" font-size="14" transform="rotate(-90 20 {})">{yl}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    svg.push_str("</g>\n");

    // singular lines, dashed
    svg.push_str("<g clip-path=\"url(#plot-area)\">\n");
    for l in lines {
        let p = view.project(l.point);
        let p2 = view.project(l.at(1.0));
        let d = [p2[0] - p[0], p2[1] - p[1]];
        let seg = if d[0].abs() < 1e-15 && d[1].abs() < 1e-15 {
            // seen end-on: a short cross marker at the point
            Some(([p[0] - 0.02 * half, p[1]], [p[0] + 0.02 * half, p[1]]))
        } else {
            clip_line(p, d, lo, hi)
        };
        if let Some((a, b)) = seg {
            let _ = writeln!(
                svg,
                r##"<line class="singular-line" data-point="{},{},{}" data-direction="{},{},{}" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#444444" stroke-width="1.5" stroke-dasharray="8 5"/>"##,
                l.point[0], l.point[1], l.point[2], l.direction[0], l.direction[1], l.direction[2],
                sx(a[0]), sy(a[1]), sx(b[0]), sy(b[1])
            );
        }
    }

    // trajectories
    for (k, s) in series.iter().enumerate() {
        let mut pts = String::new();
        for q in &s.points {
            let p = view.project(*q);
            if p.iter().all(|v| v.is_finite()) {
                let _ = write!(pts, "{:.2},{:.2} ", sx(p[0]), sy(p[1]));
            }
        }
        let _ = writeln!(
            svg,
            r#"<polyline class="trajectory" data-label="{}" fill="none" stroke="{}" stroke-width="0.8" points="{}"/>"#,
            escape(&s.label),
            COLORS[k % COLORS.len()],
            pts.trim_end()
        );
    }
    svg.push_str("</g>\n");

    // legend
    let _ = writeln!(svg, r#"<g class="legend" font-family="sans-serif" font-size="12">"#);
    let mut y = MARGIN + 18.0;
    for (k, s) in series.iter().enumerate() {
        let x = MARGIN + 10.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{x}" y1="{y}" x2="{}" y2="{y}" stroke="{}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            x + 20.0,
            COLORS[k % COLORS.len()],
            x + 26.0,
            y + 4.0,
            escape(&s.label)
        );
        y += 16.0;
    }
    let x = MARGIN + 10.0;
    let _ = writeln!(
        svg,
        r##"<line x1="{x}" y1="{y}" x2="{}" y2="{y}" stroke="#444444" stroke-dasharray="8 5"/><text x="{}" y="{}">singular lines</text>"##,
        x + 20.0,
        x + 26.0,
        y + 4.0
    );
    svg.push_str("</g>\n</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use quadint::catalog::singular_lines;

    #[test]
    fn ticks_are_round() {
        let t = nice_ticks(-1.3, 2.1, 8);
        assert_eq!(t.first().copied(), Some(-1.0));
        assert!(t.windows(2).all(|w| ((w[1] - w[0]) - 0.5).abs() < 1e-12));
        assert_eq!(fmt_tick(-0.0), "0");
        assert_eq!(fmt_tick(1.5), "1.5");
    }

    #[test]
    fn empty_plot_has_axes_and_lines() {
        let lines = singular_lines(0.25, 1.0).unwrap();
        let svg = render_svg(&[], &lines, View::Xy, "empty");
        assert_eq!(svg.matches("class=\"singular-line\"").count(), 2);
        assert_eq!(svg.matches("class=\"trajectory\"").count(), 0);
        assert!(svg.contains("class=\"axes\""));
        assert!(svg.contains("stroke-dasharray"));
    }

    #[test]
    fn clipping() {
        let seg = clip_line([0.0, 1.0], [1.0, 0.0], [-2.0, -2.0], [2.0, 2.0]).unwrap();
        assert_eq!(seg, ([-2.0, 1.0], [2.0, 1.0]));
        assert!(clip_line([0.0, 3.0], [1.0, 0.0], [-2.0, -2.0], [2.0, 2.0]).is_none());
    }
}
