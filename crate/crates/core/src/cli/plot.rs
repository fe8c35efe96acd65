//! SVG waterfall plot: BER on a log axis against E_b/N₀ in dB.

use std::fmt::Write;

use super::{Row, SweepConfig};

/// Values below this are drawn on the floor.
pub const FLOOR: f64 = 1e-8;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 130.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 3] = ["#1f77b4", "#d62728", "#2ca02c"];

struct Axes {
    x0: f64,
    x1: f64,
    decades: (i32, i32),
}

impl Axes {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, p: f64) -> f64 {
        let (lo, hi) = self.decades;
        let t = (p.max(FLOOR).log10() - lo as f64) / (hi - lo) as f64;
        HEIGHT - BOTTOM - t.clamp(0.0, 1.0) * (HEIGHT - TOP - BOTTOM)
    }
}

/// One polyline per configured source, in configuration order.
pub fn to_svg(rows: &[Row], cfg: &SweepConfig) -> String {
    let (mut x0, mut x1) = rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| {
        (a.min(r.ebn0_db), b.max(r.ebn0_db))
    });
    if !(x0 < x1) {
        x0 -= 1.0;
        x1 += 1.0;
    }
    let top = rows.iter().map(|r| r.ber).fold(FLOOR, f64::max);
    let hi = (top.log10().ceil() as i32).min(0);
    let lo = FLOOR.log10().round() as i32;
    let axes = Axes {
        x0,
        x1,
        decades: (lo, hi.max(lo + 1)),
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let (left, right, y_top, y_bottom) = (LEFT, WIDTH - RIGHT, TOP, HEIGHT - BOTTOM);
    for d in axes.decades.0..=axes.decades.1 {
        let y = axes.py(10f64.powi(d));
        let _ = writeln!(
            s,
            r##"<line x1="{left}" y1="{y:.2}" x2="{right}" y2="{y:.2}" stroke="#ddd"/>"##
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">1e{d}</text>"#,
            left - 6.0,
            y + 4.0
        );
    }
    let ticks = 6;
    for k in 0..=ticks {
        let x = x0 + (x1 - x0) * k as f64 / ticks as f64;
        let px = axes.px(x);
        let _ = writeln!(
            s,
            r##"<line x1="{px:.2}" y1="{y_top}" x2="{px:.2}" y2="{y_bottom}" stroke="#eee"/>"##
        );
        let _ = writeln!(
            s,
            r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{x:.1}</text>"#,
            y_bottom + 18.0
        );
    }
    let _ = writeln!(
        s,
        r#"<rect x="{left}" y="{y_top}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        right - left,
        y_bottom - y_top
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">Eb/N0 (dB)</text>"#,
        (left + right) / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">BER</text>"#,
        (y_top + y_bottom) / 2.0,
        (y_top + y_bottom) / 2.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{left}" y="18">{} over {}</text>"#,
        cfg.modulation.name(),
        cfg.channel.kind()
    );

    for (k, source) in cfg.sources.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let points: Vec<String> = rows
            .iter()
            .filter(|r| r.source == source.name())
            .map(|r| format!("{:.2},{:.2}", axes.px(r.ebn0_db), axes.py(r.ber)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        );
        let ly = y_top + 16.0 + 18.0 * k as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="1.5"/>"#,
            right + 10.0,
            right + 34.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
            right + 40.0,
            ly + 4.0,
            source.name()
        );
    }
    s.push_str("</svg>\n");
    s
}
