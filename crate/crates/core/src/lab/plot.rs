//! Log-log SVG plots of count series.

use std::fmt::Write as _;

pub const WIDTH: f64 = 640.0;
pub const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 56.0;

fn polyline(points: &[(f64, f64)], stroke: &str, dash: bool) -> String {
    let pts: Vec<String> = points
        .iter()
        .map(|(x, y)| format!("{x:.2},{y:.2}"))
        .collect();
    let dash = if dash {
        " stroke-dasharray=\"6 4\""
    } else {
        ""
    };
    format!(
        "<polyline fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1.5\"{dash} points=\"{}\"/>\n",
        pts.join(" ")
    )
}

/// Plots `(B, N)` on log-log axes, with an optional fitted curve sampled at
/// the same abscissae. Non-positive values are dropped.
pub fn loglog_svg(title: &str, data: &[(f64, f64)], fitted: Option<&[(f64, f64)]>) -> String {
    let logs = |s: &[(f64, f64)]| -> Vec<(f64, f64)> {
        s.iter()
            .filter(|(x, y)| *x > 0.0 && *y > 0.0)
            .map(|(x, y)| (x.log10(), y.log10()))
            .collect()
    };
    let d = logs(data);
    let f = fitted.map(logs).unwrap_or_default();
    let all: Vec<&(f64, f64)> = d.iter().chain(&f).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (0.0f64, 1.0f64, 0.0f64, 1.0f64);
    if !all.is_empty() {
        x0 = all.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        x1 = all.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        y0 = all.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        y1 = all.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    }
    if x1 - x0 < 1e-9 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-9 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);
    let map =
        |s: &[(f64, f64)]| -> Vec<(f64, f64)> { s.iter().map(|&(x, y)| (sx(x), sy(y))).collect() };

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(
        out,
        "<rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    );
    let _ = writeln!(
        out,
        "<text x=\"{:.2}\" y=\"24\" font-family=\"monospace\" font-size=\"14\" text-anchor=\"middle\">{}</text>",
        WIDTH / 2.0,
        escape(title)
    );
    // axes
    let (ax, ay) = (MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        out,
        "<path d=\"M{ax:.2},{:.2} L{ax:.2},{ay:.2} L{:.2},{ay:.2}\" stroke=\"black\" fill=\"none\"/>",
        MARGIN,
        WIDTH - MARGIN
    );
    let label = |v: f64| format!("1e{v:.2}");
    let _ = writeln!(
        out,
        "<text x=\"{ax:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"11\">B {}</text>",
        HEIGHT - MARGIN / 3.0,
        label(x0)
    );
    let _ = writeln!(
        out,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">{}</text>",
        WIDTH - MARGIN,
        HEIGHT - MARGIN / 3.0,
        label(x1)
    );
    let _ = writeln!(
        out,
        "<text x=\"4\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"11\">N {}</text>",
        HEIGHT - MARGIN - 4.0,
        label(y0)
    );
    let _ = writeln!(
        out,
        "<text x=\"4\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"11\">N {}</text>",
        MARGIN - 6.0,
        label(y1)
    );
    if !d.is_empty() {
        out.push_str(&polyline(&map(&d), "black", false));
        for (x, y) in map(&d) {
            let _ = writeln!(
                out,
                "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"2.5\" fill=\"black\"/>"
            );
        }
    }
    if !f.is_empty() {
        out.push_str(&polyline(&map(&f), "#c0392b", true));
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Every coordinate attribute lies inside the declared canvas.
    fn coordinates_in_bounds(svg: &str) -> bool {
        let mut ok = true;
        for attr in [" cx=\"", " cy=\"", " x=\"", " y=\""] {
            for part in svg.split(attr).skip(1) {
                let v: f64 = part.split('"').next().unwrap().parse().unwrap();
                let lim = if attr.contains('x') { WIDTH } else { HEIGHT };
                ok &= (0.0..=lim).contains(&v);
            }
        }
        for part in svg.split("points=\"").skip(1) {
            for pair in part.split('"').next().unwrap().split(' ') {
                let (x, y) = pair.split_once(',').unwrap();
                let (x, y): (f64, f64) = (x.parse().unwrap(), y.parse().unwrap());
                ok &= (0.0..=WIDTH).contains(&x) && (0.0..=HEIGHT).contains(&y);
            }
        }
        ok
    }

    #[test]
    fn svg_is_deterministic_and_in_bounds() {
        let data: Vec<(f64, f64)> = (1..10)
            .map(|k| (4f64.powi(k), 1.2 * 16f64.powi(k)))
            .collect();
        let fit: Vec<(f64, f64)> = data.iter().map(|&(b, _)| (b, 1.25 * b * b)).collect();
        let a = loglog_svg("P1 <Q>", &data, Some(&fit));
        assert_eq!(a, loglog_svg("P1 <Q>", &data, Some(&fit)));
        assert!(a.contains("width=\"640\"") && a.contains("&lt;Q&gt;"));
        assert!(coordinates_in_bounds(&a));
        let flat = loglog_svg("flat", &[(10.0, 5.0)], None);
        assert!(coordinates_in_bounds(&flat));
    }
}
