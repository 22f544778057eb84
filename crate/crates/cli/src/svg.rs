//! ROC-space plots as standalone SVG. Output depends only on the inputs,
//! so identical analyses produce identical files.

use std::fmt::Write;

use rocqe_core::{ConfidenceBand, RocCurve, RocHull};

const SIZE: f64 = 400.0;
const LEFT: f64 = 60.0;
const TOP: f64 = 20.0;
const LEGEND_WIDTH: f64 = 200.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

pub struct Series<'a> {
    pub name: &'a str,
    pub curve: &'a RocCurve,
    pub band: Option<&'a ConfidenceBand>,
}

fn x(fpr: f64) -> f64 {
    LEFT + fpr * SIZE
}

fn y(tpr: f64) -> f64 {
    TOP + (1.0 - tpr) * SIZE
}

fn point(fpr: f64, tpr: f64) -> String {
    format!("{:.2},{:.2}", x(fpr), y(tpr))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub fn render(series: &[Series], hull: Option<&RocHull>) -> String {
    let width = LEFT + SIZE + 20.0 + LEGEND_WIDTH;
    let height = TOP + SIZE + 50.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{width}" height="{height}" fill="white"/>"#
    );

    // Axes, ticks and grid.
    let _ = writeln!(
        s,
        r#"<rect class="frame" x="{LEFT}" y="{TOP}" width="{SIZE}" height="{SIZE}" fill="none" stroke="black"/>"#
    );
    for i in 0..=5 {
        let v = i as f64 / 5.0;
        let _ = writeln!(
            s,
            r##"<line x1="{:.2}" y1="{TOP}" x2="{:.2}" y2="{:.2}" stroke="#e0e0e0"/><text x="{:.2}" y="{:.2}" text-anchor="middle">{v:.1}</text>"##,
            x(v),
            x(v),
            TOP + SIZE,
            x(v),
            TOP + SIZE + 16.0
        );
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#e0e0e0"/><text x="{:.2}" y="{:.2}" text-anchor="end">{v:.1}</text>"##,
            y(v),
            LEFT + SIZE,
            y(v),
            LEFT - 6.0,
            y(v) + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">False positive rate</text>"#,
        LEFT + SIZE / 2.0,
        TOP + SIZE + 36.0
    );
    let _ = writeln!(
        s,
        r#"<text transform="translate(16,{:.2}) rotate(-90)" text-anchor="middle">True positive rate</text>"#,
        TOP + SIZE / 2.0
    );

    let _ = writeln!(
        s,
        r##"<line class="chance" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#808080" stroke-dasharray="4 4"/>"##,
        x(0.0),
        y(0.0),
        x(1.0),
        y(1.0)
    );

    for (i, series) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        if let Some(b) = series.band {
            let upper = b
                .fpr_grid
                .iter()
                .zip(&b.upper_tpr)
                .map(|(&f, &t)| point(f, t));
            let lower = b
                .fpr_grid
                .iter()
                .zip(&b.lower_tpr)
                .rev()
                .map(|(&f, &t)| point(f, t));
            let points: Vec<String> = upper.chain(lower).collect();
            let _ = writeln!(
                s,
                r#"<polygon class="band" data-metric="{}" points="{}" fill="{color}" fill-opacity="0.2" stroke="none"/>"#,
                escape(series.name),
                points.join(" ")
            );
        }
    }
    for (i, series) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = series
            .curve
            .vertices()
            .iter()
            .map(|v| point(v.fpr, v.tpr))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline class="curve" data-metric="{}" points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            escape(series.name),
            points.join(" ")
        );
    }
    if let Some(h) = hull {
        let points: Vec<String> = h.vertices().iter().map(|v| point(v.fpr, v.tpr)).collect();
        let _ = writeln!(
            s,
            r#"<polyline class="hull" points="{}" fill="none" stroke="black" stroke-width="1.5" stroke-dasharray="6 3"/>"#,
            points.join(" ")
        );
    }

    // Legend: (stroke attributes, label) per entry.
    let mut entries: Vec<(String, &str)> = series
        .iter()
        .enumerate()
        .map(|(i, series)| {
            (
                format!(
                    r#"stroke="{}" stroke-width="2""#,
                    PALETTE[i % PALETTE.len()]
                ),
                series.name,
            )
        })
        .collect();
    if hull.is_some() {
        entries.push((
            r#"stroke="black" stroke-dasharray="6 3""#.into(),
            "Convex hull",
        ));
    }
    entries.push((
        r##"stroke="#808080" stroke-dasharray="4 4""##.into(),
        "Random classifier",
    ));
    let lx = LEFT + SIZE + 20.0;
    let _ = writeln!(s, r#"<g class="legend">"#);
    for (i, (stroke, label)) in entries.iter().enumerate() {
        let ly = TOP + 10.0 + 20.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" {stroke}/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 24.0,
            lx + 30.0,
            ly + 4.0,
            escape(label)
        );
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}
