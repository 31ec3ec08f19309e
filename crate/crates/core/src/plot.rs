//! Standalone SVG line charts of emotion arcs.

use std::fmt::Write;

use crate::arcs::EmotionArc;
use crate::emotion::Emotion;
use crate::error::{Error, Result};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 140.0;
const TOP: f64 = 44.0;
const BOTTOM: f64 = 48.0;
const Y_TICKS: usize = 5;
const MAX_X_LABELS: usize = 10;

fn color(e: Emotion) -> &'static str {
    match e {
        Emotion::Anger => "#d62728",
        Emotion::Anticipation => "#ff7f0e",
        Emotion::Disgust => "#8c564b",
        Emotion::Fear => "#2ca02c",
        Emotion::Joy => "#e6b800",
        Emotion::Sadness => "#1f77b4",
        Emotion::Surprise => "#17becf",
        Emotion::Trust => "#9467bd",
    }
}

pub fn escape_xml(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c if (c as u32) < 0x20 && !matches!(c, '\n' | '\t' | '\r') => {}
            c => out.push(c),
        }
    }
    out
}

/// Rounds `max` up to 1, 2, 2.5 or 5 times a power of ten.
fn nice_ceiling(max: f64) -> f64 {
    if max <= 0.0 || !max.is_finite() {
        return 1.0;
    }
    let magnitude = 10f64.powf(max.log10().floor());
    [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|m| m * magnitude)
        .find(|&v| v >= max)
        .unwrap_or(10.0 * magnitude)
}

/// Renders one polyline per emotion in `subset`, using the smoothed series
/// when present. `metadata` is embedded verbatim (escaped) in `<metadata>`.
pub fn emit_arc_svg(arc: &EmotionArc, subset: &[Emotion], metadata: Option<&str>) -> Result<String> {
    if subset.is_empty() {
        return Err(Error::Config("plot needs at least one emotion".into()));
    }
    if let Some(e) = subset.iter().find(|e| !arc.emotions.contains(**e)) {
        return Err(Error::Config(format!("emotion `{e}` is not in the arc's emotion set")));
    }
    let smoothed = arc.smoothed.is_some();
    let series: Vec<(Emotion, Vec<f64>)> = subset
        .iter()
        .map(|&e| {
            let values = if smoothed {
                arc.smoothed_series(e)
            } else {
                arc.series(e)
            };
            (e, values.unwrap_or_default())
        })
        .collect();

    let n = arc.len();
    let y_max = nice_ceiling(
        series
            .iter()
            .flat_map(|(_, v)| v.iter().copied())
            .fold(0.0, f64::max),
    );
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let x_of = |i: usize| {
        if n <= 1 {
            LEFT + plot_w / 2.0
        } else {
            LEFT + plot_w * i as f64 / (n - 1) as f64
        }
    };
    let y_of = |v: f64| TOP + plot_h * (1.0 - v / y_max);

    let title = arc.title.as_deref().unwrap_or(&arc.doc_id);
    let mut svg = String::new();
    // writing to a String cannot fail
    let _ = writeln!(
        svg,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    if let Some(meta) = metadata {
        let _ = writeln!(svg, "<metadata>{}</metadata>", escape_xml(meta));
    }
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="16">{}</text>"#,
        LEFT + plot_w / 2.0,
        escape_xml(title)
    );

    // axes
    let _ = writeln!(svg, r#"<g class="axes" stroke="black" stroke-width="1">"#);
    let _ = writeln!(
        svg,
        r#"<line x1="{LEFT:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
        TOP + plot_h,
        LEFT + plot_w,
        TOP + plot_h
    );
    let _ = writeln!(svg, r#"<line x1="{LEFT:.2}" y1="{TOP:.2}" x2="{LEFT:.2}" y2="{:.2}"/>"#, TOP + plot_h);
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(svg, r#"<g class="ticks" fill="black">"#);
    for k in 0..=Y_TICKS {
        let v = y_max * k as f64 / Y_TICKS as f64;
        let y = y_of(v);
        let _ = writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
            LEFT - 4.0,
            LEFT - 6.0,
            y + 4.0,
            format_tick(v)
        );
    }
    let step = n.div_ceil(MAX_X_LABELS).max(1);
    for i in (0..n).step_by(step) {
        let x = x_of(i);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{i}</text>"#,
            TOP + plot_h,
            TOP + plot_h + 4.0,
            TOP + plot_h + 18.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">chunk</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 8.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">intensity per 10k words{}</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0,
        if smoothed { " (smoothed)" } else { "" }
    );
    let _ = writeln!(svg, "</g>");

    for (e, values) in &series {
        let points: Vec<String> = values
            .iter()
            .enumerate()
            .map(|(i, &v)| format!("{:.2},{:.2}", x_of(i), y_of(v)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline class="series" data-emotion="{e}" fill="none" stroke="{}" stroke-width="2" points="{}"/>"#,
            color(*e),
            points.join(" ")
        );
    }

    let _ = writeln!(svg, r#"<g class="legend">"#);
    for (k, (e, _)) in series.iter().enumerate() {
        let y = TOP + 10.0 + 20.0 * k as f64;
        let x = WIDTH - RIGHT + 16.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{}" stroke-width="3"/><text x="{:.2}" y="{:.2}">{e}</text>"#,
            x + 20.0,
            color(*e),
            x + 26.0,
            y + 4.0
        );
    }
    let _ = writeln!(svg, "</g>");
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn format_tick(v: f64) -> String {
    if v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}
