//! Static SVG line charts for sweep results: one series per noise law
//! (per law and width for the search experiment), with 2-sigma error bars.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::sweep::ResultRow;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 170.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 55.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

/// Render rows from one experiment to a self-contained SVG file.
pub fn emit_chart(rows: &[ResultRow], destination: &Path) -> Result<()> {
    let svg = render_chart(rows)?;
    fs::write(destination, svg).map_err(|e| Error::Io {
        path: destination.display().to_string(),
        source: e,
    })
}

pub fn render_chart(rows: &[ResultRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::EmptyInput { what: "chart rows" });
    }
    let experiment = rows[0].experiment.clone();
    if rows.iter().any(|r| r.experiment != experiment) {
        return Err(Error::config(
            "rows",
            "chart rows must come from a single experiment",
        ));
    }

    let grover = experiment == "grover";
    let (title, x_label, y_label) = match experiment.as_str() {
        "ghz" => ("GHZ parity visibility", "qubits n", "parity visibility"),
        "branch" => (
            "Branch-mass interference",
            "branch mass m",
            "fringe visibility",
        ),
        "grover" => (
            "Grover search under dephasing",
            "iterations t",
            "success probability",
        ),
        _ => ("Sweep results", "size", "metric"),
    };

    // series key: law, or "law n=<size>" when depth is the x-axis
    let mut series: BTreeMap<String, Vec<(f64, f64, f64)>> = BTreeMap::new();
    for r in rows {
        let (key, x) = if grover {
            (
                format!("{} n={}", r.law, r.size),
                r.iterations.unwrap_or(0) as f64,
            )
        } else {
            (r.law.clone(), r.size as f64)
        };
        series.entry(key).or_default().push((x, r.metric, r.stderr));
    }
    for points in series.values_mut() {
        points.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite x"));
    }

    let xs: Vec<f64> = series.values().flatten().map(|p| p.0).collect();
    let mut x_min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let mut x_max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if x_max == x_min {
        x_min -= 1.0;
        x_max += 1.0;
    }
    let y_min = 0.0;
    let y_max = series
        .values()
        .flatten()
        .map(|p| p.1 + 2.0 * p.2)
        .fold(1.0f64, f64::max)
        .max(0.05)
        * 1.05;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = |y: f64| MARGIN_TOP + (y_max - y) / (y_max - y_min) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\">\n"
    ));
    svg.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"24\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        title
    ));

    // axes
    svg.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
        MARGIN_LEFT,
        sy(y_min),
        MARGIN_LEFT + plot_w,
        sy(y_min)
    ));
    svg.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
        MARGIN_LEFT,
        sy(y_min),
        MARGIN_LEFT,
        sy(y_max)
    ));

    // x ticks at integer positions
    let span = (x_max - x_min).max(1.0);
    let stride = (span / 12.0).ceil().max(1.0) as usize;
    let mut x_tick = x_min.ceil() as i64;
    while x_tick as f64 <= x_max {
        let px = sx(x_tick as f64);
        svg.push_str(&format!(
            "<line x1=\"{px:.2}\" y1=\"{:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
            sy(y_min),
            sy(y_min) + 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{px:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">{x_tick}</text>\n",
            sy(y_min) + 20.0
        ));
        x_tick += stride as i64;
    }
    // y ticks at fifths of the range
    for i in 0..=5 {
        let y = y_min + (y_max - y_min) * i as f64 / 5.0;
        let py = sy(y);
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{:.2}\" y2=\"{py:.2}\" stroke=\"black\"/>\n",
            MARGIN_LEFT - 5.0,
            MARGIN_LEFT
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"end\">{y:.2}</text>\n",
            MARGIN_LEFT - 9.0,
            py + 4.0
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 12.0,
        x_label
    ));
    svg.push_str(&format!(
        "<text x=\"18\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\" \
         transform=\"rotate(-90 18 {:.2})\">{}</text>\n",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        y_label
    ));

    for (idx, (key, points)) in series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let dashed = !key.starts_with("constant");
        let dash = if dashed {
            " stroke-dasharray=\"6 3\""
        } else {
            ""
        };

        // 2-sigma error bars
        for &(x, y, e) in points {
            if e > 0.0 {
                let px = sx(x);
                svg.push_str(&format!(
                    "<line x1=\"{px:.2}\" y1=\"{:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" \
                     stroke=\"{color}\" stroke-width=\"1\"/>\n",
                    sy((y - 2.0 * e).max(y_min)),
                    sy((y + 2.0 * e).min(y_max))
                ));
            }
        }
        let coords: Vec<String> = points
            .iter()
            .map(|&(x, y, _)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"{dash} points=\"{}\"/>\n",
            coords.join(" ")
        ));
        for &(x, y, _) in points {
            svg.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{color}\"/>\n",
                sx(x),
                sy(y)
            ));
        }

        // legend entry
        let ly = MARGIN_TOP + 8.0 + idx as f64 * 18.0;
        let lx = WIDTH - MARGIN_RIGHT + 12.0;
        svg.push_str(&format!(
            "<line x1=\"{lx:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" \
             stroke=\"{color}\" stroke-width=\"2\"{dash}/>\n",
            lx + 26.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">{key}</text>\n",
            lx + 32.0,
            ly + 4.0
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
