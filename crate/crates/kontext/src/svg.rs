//! Self-contained SVG figures: heatmaps as rect grids, scatter and line
//! plots as paths. Run metadata goes in a `<metadata>` element.

use std::f64::consts::PI;
use std::fmt::Write as _;

use kontext_core::scan::GridSpec;

const WIDTH: f64 = 680.0;
const HEIGHT: f64 = 520.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 130.0;
const TOP: f64 = 44.0;
const BOTTOM: f64 = 56.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

const VIRIDIS: [(f64, [u8; 3]); 9] = [
    (0.0, [68, 1, 84]),
    (0.125, [71, 44, 122]),
    (0.25, [59, 81, 139]),
    (0.375, [44, 113, 142]),
    (0.5, [33, 144, 141]),
    (0.625, [39, 173, 129]),
    (0.75, [92, 200, 99]),
    (0.875, [170, 220, 50]),
    (1.0, [253, 231, 37]),
];

pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

/// Viridis color for `t` in `[0, 1]` (clamped).
pub fn viridis(t: f64) -> String {
    let t = if t.is_finite() {
        t.clamp(0.0, 1.0)
    } else {
        0.0
    };
    let k = VIRIDIS
        .windows(2)
        .position(|w| t <= w[1].0)
        .unwrap_or(VIRIDIS.len() - 2);
    let (t0, c0) = VIRIDIS[k];
    let (t1, c1) = VIRIDIS[k + 1];
    let s = (t - t0) / (t1 - t0);
    let mix = |a: u8, b: u8| (a as f64 + s * (b as f64 - a as f64)).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        mix(c0[0], c1[0]),
        mix(c0[1], c1[1]),
        mix(c0[2], c1[2])
    )
}

struct Canvas {
    body: String,
}

struct Axes {
    x: (f64, f64),
    y: (f64, f64),
    /// Whether `y.0` is drawn at the top.
    y_down: bool,
}

impl Axes {
    fn width() -> f64 {
        WIDTH - LEFT - RIGHT
    }

    fn height() -> f64 {
        HEIGHT - TOP - BOTTOM
    }

    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * Self::width()
    }

    fn py(&self, y: f64) -> f64 {
        let f = (y - self.y.0) / (self.y.1 - self.y.0);
        if self.y_down {
            TOP + f * Self::height()
        } else {
            TOP + (1.0 - f) * Self::height()
        }
    }
}

impl Canvas {
    fn new(meta_json: &str, title: &str) -> Self {
        let mut body = String::new();
        writeln!(
            body,
            r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">
<metadata>{}</metadata>
<rect width="100%" height="100%" fill="white"/>
<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            escape(meta_json),
            LEFT + Axes::width() / 2.0,
            escape(title)
        )
        .unwrap();
        Self { body }
    }

    fn text(&mut self, x: f64, y: f64, anchor: &str, s: &str) {
        writeln!(
            self.body,
            r#"<text x="{x:.1}" y="{y:.1}" text-anchor="{anchor}">{}</text>"#,
            escape(s)
        )
        .unwrap();
    }

    fn frame(
        &mut self,
        axes: &Axes,
        x_ticks: &[(f64, String)],
        y_ticks: &[(f64, String)],
        x_label: &str,
        y_label: &str,
    ) {
        writeln!(
            self.body,
            r#"<rect x="{LEFT}" y="{TOP}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#,
            Axes::width(),
            Axes::height()
        )
        .unwrap();
        let bottom = TOP + Axes::height();
        for (v, label) in x_ticks {
            let x = axes.px(*v);
            writeln!(
                self.body,
                r#"<path d="M{x:.1} {bottom:.1}v5" stroke="black"/>"#
            )
            .unwrap();
            self.text(x, bottom + 18.0, "middle", label);
        }
        for (v, label) in y_ticks {
            let y = axes.py(*v);
            writeln!(self.body, r#"<path d="M{LEFT} {y:.1}h-5" stroke="black"/>"#).unwrap();
            self.text(LEFT - 8.0, y + 4.0, "end", label);
        }
        self.text(LEFT + Axes::width() / 2.0, HEIGHT - 14.0, "middle", x_label);
        let cy = TOP + Axes::height() / 2.0;
        writeln!(
            self.body,
            r#"<text x="18" y="{cy:.1}" text-anchor="middle" transform="rotate(-90 18 {cy:.1})">{}</text>"#,
            escape(y_label)
        )
        .unwrap();
    }

    fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

fn phi_ticks() -> Vec<(f64, String)> {
    [
        (-PI, "−π"),
        (-PI / 2.0, "−π/2"),
        (0.0, "0"),
        (PI / 2.0, "π/2"),
        (PI, "π"),
    ]
    .into_iter()
    .map(|(v, s)| (v, s.to_owned()))
    .collect()
}

fn theta_ticks() -> Vec<(f64, String)> {
    [
        (0.0, "0"),
        (PI / 4.0, "π/4"),
        (PI / 2.0, "π/2"),
        (3.0 * PI / 4.0, "3π/4"),
        (PI, "π"),
    ]
    .into_iter()
    .map(|(v, s)| (v, s.to_owned()))
    .collect()
}

fn linear_ticks(lo: f64, hi: f64, n: usize) -> Vec<(f64, String)> {
    (0..=n)
        .map(|i| {
            let v = lo + (hi - lo) * i as f64 / n as f64;
            (v, crate::formats::fmt_num((v * 1e6).round() / 1e6))
        })
        .collect()
}

/// Heatmap of a row-major grid map over `(φ, θ)`, θ increasing downward,
/// with a colorbar spanning `range`.
pub fn heatmap(
    meta_json: &str,
    title: &str,
    grid: &GridSpec,
    values: &[f64],
    range: (f64, f64),
    label: &str,
) -> String {
    let mut c = Canvas::new(meta_json, title);
    let axes = Axes {
        x: (-PI, PI),
        y: (0.0, PI),
        y_down: true,
    };
    let cw = Axes::width() / grid.n_phi as f64;
    let ch = Axes::height() / grid.n_theta as f64;
    let span = if range.1 > range.0 {
        range.1 - range.0
    } else {
        1.0
    };
    for (i, v) in values.iter().enumerate().take(grid.total()) {
        let (row, col) = (i / grid.n_phi, i % grid.n_phi);
        writeln!(
            c.body,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
            LEFT + col as f64 * cw,
            TOP + row as f64 * ch,
            cw + 0.3,
            ch + 0.3,
            viridis((v - range.0) / span)
        )
        .unwrap();
    }
    c.frame(&axes, &phi_ticks(), &theta_ticks(), "φ", "θ");

    let bar_x = WIDTH - RIGHT + 24.0;
    let steps = 64;
    let h = Axes::height() / steps as f64;
    for s in 0..steps {
        let t = 1.0 - (s as f64 + 0.5) / steps as f64;
        writeln!(
            c.body,
            r#"<rect x="{bar_x}" y="{:.2}" width="18" height="{:.2}" fill="{}"/>"#,
            TOP + s as f64 * h,
            h + 0.3,
            viridis(t)
        )
        .unwrap();
    }
    writeln!(
        c.body,
        r#"<rect x="{bar_x}" y="{TOP}" width="18" height="{:.1}" fill="none" stroke="black"/>"#,
        Axes::height()
    )
    .unwrap();
    for (v, s) in linear_ticks(range.0, range.1, 4) {
        let y = TOP + (1.0 - (v - range.0) / span) * Axes::height();
        c.text(bar_x + 24.0, y + 4.0, "start", &s);
    }
    c.text(bar_x + 9.0, TOP - 8.0, "middle", label);
    c.finish()
}

/// Scatter in the `(φ, θ)` plane, one color per series.
pub fn scatter(meta_json: &str, title: &str, series: &[Vec<(f64, f64)>]) -> String {
    let mut c = Canvas::new(meta_json, title);
    let axes = Axes {
        x: (-PI, PI),
        y: (0.0, PI),
        y_down: true,
    };
    for (k, pts) in series.iter().enumerate() {
        let mut d = String::new();
        for &(phi, theta) in pts {
            write!(d, "M{:.1} {:.1}h0", axes.px(phi), axes.py(theta)).unwrap();
        }
        writeln!(
            c.body,
            r#"<path d="{d}" stroke="{}" stroke-width="2.2" stroke-linecap="round"/>"#,
            PALETTE[k % PALETTE.len()]
        )
        .unwrap();
    }
    c.frame(&axes, &phi_ticks(), &theta_ticks(), "φ", "θ");
    c.finish()
}

/// Polylines with a legend. `y_range` defaults to the data range.
pub fn line_plot(
    meta_json: &str,
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[(String, Vec<(f64, f64)>)],
    y_range: Option<(f64, f64)>,
) -> String {
    let mut c = Canvas::new(meta_json, title);
    let all = series.iter().flat_map(|(_, p)| p.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    let (y0, y1) = y_range.unwrap_or(if y1 > y0 {
        (y0, y1)
    } else {
        (y0 - 0.5, y0 + 0.5)
    });
    let axes = Axes {
        x: (x0, x1),
        y: (y0, y1),
        y_down: false,
    };
    for (k, (label, pts)) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let mut d = String::new();
        for (i, &(x, y)) in pts.iter().enumerate() {
            write!(
                d,
                "{}{:.2} {:.2}",
                if i == 0 { "M" } else { "L" },
                axes.px(x),
                axes.py(y)
            )
            .unwrap();
        }
        writeln!(
            c.body,
            r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="1.6"/>"#
        )
        .unwrap();
        let ly = TOP + 10.0 + 18.0 * k as f64;
        let lx = WIDTH - RIGHT + 14.0;
        writeln!(
            c.body,
            r#"<path d="M{lx} {ly}h18" stroke="{color}" stroke-width="3"/>"#
        )
        .unwrap();
        c.text(lx + 24.0, ly + 4.0, "start", label);
    }
    c.frame(
        &axes,
        &linear_ticks(x0, x1, 4),
        &linear_ticks(y0, y1, 4),
        x_label,
        y_label,
    );
    c.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escapes_markup() {
        assert_eq!(escape(r#"<a & "b">"#), "&lt;a &amp; &quot;b&quot;&gt;");
    }

    #[test]
    fn colormap_endpoints() {
        assert_eq!(viridis(0.0), "#440154");
        assert_eq!(viridis(1.0), "#fde725");
        assert_eq!(viridis(7.0), "#fde725");
        assert_eq!(viridis(f64::NAN), "#440154");
    }

    #[test]
    fn heatmap_has_one_rect_per_cell() {
        let g = GridSpec::new(2, 3).unwrap();
        let s = heatmap(
            "{}",
            "t",
            &g,
            &[0.0, 0.2, 0.4, 0.6, 0.8, 1.0],
            (0.0, 1.0),
            "K",
        );
        assert!(s.starts_with("<?xml"));
        assert!(s.ends_with("</svg>\n"));
        assert!(s.contains("#fde725"));
    }
}
