//! SVG line chart of win probability by starting position.

use std::fmt::Write as _;

use crate::analysis::Series;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 200.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Upper y-axis limit: the data maximum padded by 10%, rounded up to a
/// multiple of 0.02.
fn y_limit(series: &[Series]) -> f64 {
    let max = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.win_prob))
        .fold(0.0, f64::max);
    ((max * 1.1 / 0.02).ceil() * 0.02).max(0.02)
}

/// Writes a marker shape centred on `(x, y)`, optionally wrapping `body`.
fn marker(out: &mut String, shape: usize, x: f64, y: f64, color: &str, attrs: &str, body: &str) {
    let (tag, geometry) = match shape % 3 {
        0 => ("circle", format!(r#"cx="{x:.2}" cy="{y:.2}" r="4""#)),
        1 => (
            "rect",
            format!(
                r#"x="{:.2}" y="{:.2}" width="8" height="8""#,
                x - 4.0,
                y - 4.0
            ),
        ),
        _ => (
            "polygon",
            format!(
                r#"points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}""#,
                x,
                y - 5.0,
                x - 4.5,
                y + 4.0,
                x + 4.5,
                y + 4.0
            ),
        ),
    };
    let _ = if body.is_empty() {
        writeln!(out, r#"    <{tag} {geometry} fill="{color}"{attrs}/>"#)
    } else {
        writeln!(
            out,
            r#"    <{tag} {geometry} fill="{color}"{attrs}>{body}</{tag}>"#
        )
    };
}

/// Renders one polyline per series. Every marker carries the value as it
/// appeared in the input in `data-win-prob`.
pub fn render_win_by_position(series: &[Series]) -> String {
    let max_pos = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.pos))
        .max()
        .unwrap_or(1)
        .max(2);
    let y_max = y_limit(series);
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |pos: usize| LEFT + (pos as f64 - 1.0) / (max_pos as f64 - 1.0) * plot_w;
    let sy = |v: f64| TOP + plot_h - v / y_max * plot_h;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"  <text x="{:.2}" y="22" text-anchor="middle" font-size="15">Probability of winning by position</text>"#,
        LEFT + plot_w / 2.0
    );

    // Axes, ticks and grid.
    let _ = writeln!(out, r#"  <g class="axes" stroke="black" fill="none">"#);
    let _ = writeln!(
        out,
        r#"    <line x1="{LEFT}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
        TOP + plot_h,
        LEFT + plot_w,
        TOP + plot_h
    );
    let _ = writeln!(
        out,
        r#"    <line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{:.2}"/>"#,
        TOP + plot_h
    );
    let _ = writeln!(out, "  </g>");
    let _ = writeln!(out, r#"  <g class="ticks">"#);
    let x_step = (max_pos as f64 / 20.0).ceil().max(1.0) as usize;
    for pos in (1..=max_pos).filter(|p| (p - 1) % x_step == 0 || *p == max_pos) {
        let x = sx(pos);
        let _ = writeln!(
            out,
            r#"    <text x="{x:.2}" y="{:.2}" text-anchor="middle">{pos}</text>"#,
            TOP + plot_h + 18.0
        );
    }
    for i in 0..=5 {
        let v = y_max * i as f64 / 5.0;
        let y = sy(v);
        let _ = writeln!(
            out,
            r##"    <line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/>"##,
            LEFT + plot_w
        );
        let _ = writeln!(
            out,
            r#"    <text x="{:.2}" y="{:.2}" text-anchor="end">{v:.3}</text>"#,
            LEFT - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(out, "  </g>");
    let _ = writeln!(
        out,
        r#"  <text x="{:.2}" y="{:.2}" text-anchor="middle">Starting position</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        out,
        r#"  <text transform="translate(18 {:.2}) rotate(-90)" text-anchor="middle">Probability of winning</text>"#,
        TOP + plot_h / 2.0
    );

    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let label = escape(&s.label());
        let mut points: Vec<_> = s.points.iter().collect();
        points.sort_by_key(|p| p.pos);
        let _ = writeln!(
            out,
            r#"  <g class="series" data-series="{i}" data-label="{label}" data-n="{}" data-p="{}" data-q="{}" data-mode="{}">"#,
            s.n,
            escape(&s.p),
            escape(&s.q),
            s.mode
        );
        let path: Vec<String> = points
            .iter()
            .map(|p| format!("{:.2},{:.2}", sx(p.pos), sy(p.win_prob)))
            .collect();
        let _ = writeln!(
            out,
            r#"    <polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            path.join(" ")
        );
        for p in points {
            let raw = escape(&p.raw);
            let attrs = format!(r#" data-pos="{}" data-win-prob="{raw}""#, p.pos);
            let body = format!("<title>position {}: {raw}</title>", p.pos);
            marker(&mut out, i, sx(p.pos), sy(p.win_prob), color, &attrs, &body);
        }
        let _ = writeln!(out, "  </g>");

        let ly = TOP + 10.0 + 22.0 * i as f64;
        let lx = WIDTH - RIGHT + 20.0;
        marker(&mut out, i, lx, ly, color, "", "");
        let _ = writeln!(
            out,
            r#"  <text x="{:.2}" y="{:.2}">{label}</text>"#,
            lx + 12.0,
            ly + 4.0
        );
    }
    out.push_str("</svg>\n");
    out
}
