//! Minimal SVG rendering of an overlay panel.

use std::fmt::Write;

use levy_core::experiment::FigurePanel;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 40.0;

pub fn render(panel: &FigurePanel, title: &str) -> String {
    let (x0, x1) = (panel.grid[0], panel.grid[panel.grid.len() - 1]);
    let all = panel
        .curves
        .iter()
        .flatten()
        .chain(&panel.truth)
        .chain(&panel.band_lower)
        .chain(&panel.band_upper)
        .copied()
        .filter(|v| v.is_finite());
    let (mut y0, mut y1) = all.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !(y1 > y0) {
        y0 -= 1.0;
        y1 += 1.0;
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);
    let polyline = |ys: &[f64], style: &str| {
        let pts: Vec<String> = panel
            .grid
            .iter()
            .zip(ys)
            .map(|(&x, &y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        format!(
            "<polyline fill=\"none\" {style} points=\"{}\"/>\n",
            pts.join(" ")
        )
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "<text x=\"{MARGIN}\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">{title}</text>"
    );
    let _ = writeln!(
        s,
        "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#888\"/>",
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    for c in &panel.curves {
        s.push_str(&polyline(c, "stroke=\"#9ab\" stroke-width=\"0.6\""));
    }
    s.push_str(&polyline(
        &panel.band_lower,
        "stroke=\"#c33\" stroke-width=\"1.2\" stroke-dasharray=\"4 3\"",
    ));
    s.push_str(&polyline(
        &panel.band_upper,
        "stroke=\"#c33\" stroke-width=\"1.2\" stroke-dasharray=\"4 3\"",
    ));
    s.push_str(&polyline(
        &panel.truth,
        "stroke=\"black\" stroke-width=\"1.8\"",
    ));
    s.push_str("</svg>\n");
    s
}
