//! Deterministic text renderings of a sweep: CSV, JSON and a static SVG.

use std::fmt::Write;

use crate::sweep::{Backend, SweepReport};

/// At most 12 significant digits, in whichever of plain or exponent notation
/// is shorter. `-0` prints as `0`.
pub fn format_number(value: f64) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    if !value.is_finite() {
        return format!("{value}");
    }
    let rounded: f64 = format!("{value:.11e}").parse().unwrap_or(value);
    let plain = format!("{rounded}");
    let exp = format!("{rounded:e}");
    if exp.len() < plain.len() {
        exp
    } else {
        plain
    }
}

/// Header `t,backend,p_s1,…,p_sN,p_env`; rows ordered by backend, then time.
pub fn emit_csv(report: &SweepReport) -> String {
    let n = report.spec.params.n_atoms();
    let mut out = String::from("t,backend");
    for i in 1..=n {
        write!(out, ",p_s{i}").unwrap();
    }
    out.push_str(",p_env\n");
    for series in &report.series {
        for pops in &series.populations {
            write!(out, "{},{}", format_number(pops.t), series.backend).unwrap();
            for v in pops.channels() {
                write!(out, ",{}", format_number(v)).unwrap();
            }
            out.push('\n');
        }
    }
    out
}

/// Pretty-printed JSON of the report. Wall-clock timings are only included
/// on request since they differ from run to run.
pub fn emit_json(report: &SweepReport, with_timings: bool) -> String {
    let body = if with_timings {
        serde_json::to_string_pretty(report)
    } else {
        serde_json::to_string_pretty(&report.without_timings())
    };
    let mut text = body.expect("report serializes");
    text.push('\n');
    text
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const PLOT_LEFT: f64 = 70.0;
const PLOT_RIGHT: f64 = 620.0;
const PLOT_TOP: f64 = 40.0;
const PLOT_BOTTOM: f64 = 440.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

fn dash(backend: Backend) -> Option<&'static str> {
    match backend {
        Backend::Analytic => None,
        Backend::Circuit => Some("2,3"),
        Backend::Qme => Some("8,4"),
        Backend::Volterra => Some("12,3,2,3"),
    }
}

/// Tick spacing of 1, 2 or 5 times a power of ten giving about five ticks.
fn tick_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let nice = if norm <= 1.0 + 1e-9 {
        1.0
    } else if norm <= 2.0 + 1e-9 {
        2.0
    } else if norm <= 5.0 + 1e-9 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn px(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".to_string()
    } else {
        s
    }
}

/// Fixed 800×500 line chart: one polyline per (backend, population channel).
/// Channels are told apart by colour and backends by dash pattern.
pub fn emit_svg(report: &SweepReport) -> String {
    let spec = &report.spec;
    let n = spec.params.n_atoms();
    let t_max = spec.t_max;
    let x_of = |t: f64| PLOT_LEFT + (PLOT_RIGHT - PLOT_LEFT) * t / t_max;
    let y_of = |p: f64| PLOT_BOTTOM - (PLOT_BOTTOM - PLOT_TOP) * p;

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#,
        w = WIDTH,
        h = HEIGHT
    )
    .unwrap();
    writeln!(
        out,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle">N={} g={} kappa={}</text>"#,
        px((PLOT_LEFT + PLOT_RIGHT) / 2.0),
        n,
        format_number(spec.params.g()),
        format_number(spec.params.kappa())
    )
    .unwrap();

    // axes
    writeln!(
        out,
        r#"<path d="M{l},{t} L{l},{b} L{r},{b}" fill="none" stroke="black"/>"#,
        l = px(PLOT_LEFT),
        t = px(PLOT_TOP),
        b = px(PLOT_BOTTOM),
        r = px(PLOT_RIGHT)
    )
    .unwrap();
    let step = tick_step(t_max);
    let ticks = (t_max / step * (1.0 + 1e-9)).floor() as usize;
    for i in 0..=ticks {
        let t = i as f64 * step;
        let x = px(x_of(t));
        writeln!(
            out,
            r#"<line x1="{x}" y1="{b}" x2="{x}" y2="{b2}" stroke="black"/><text x="{x}" y="{ty}" text-anchor="middle">{label}</text>"#,
            b = px(PLOT_BOTTOM),
            b2 = px(PLOT_BOTTOM + 5.0),
            ty = px(PLOT_BOTTOM + 18.0),
            label = format_number(t)
        )
        .unwrap();
    }
    for i in 0..=5 {
        let p = i as f64 * 0.2;
        let y = px(y_of(p));
        writeln!(
            out,
            r#"<line x1="{l2}" y1="{y}" x2="{l}" y2="{y}" stroke="black"/><text x="{tx}" y="{y}" text-anchor="end" dominant-baseline="middle">{label}</text>"#,
            l = px(PLOT_LEFT),
            l2 = px(PLOT_LEFT - 5.0),
            tx = px(PLOT_LEFT - 8.0),
            label = format_number(p)
        )
        .unwrap();
    }
    writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">time</text>"#,
        px((PLOT_LEFT + PLOT_RIGHT) / 2.0),
        px(PLOT_BOTTOM + 40.0)
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="18" y="{y}" text-anchor="middle" transform="rotate(-90 18 {y})">population</text>"#,
        y = px((PLOT_TOP + PLOT_BOTTOM) / 2.0)
    )
    .unwrap();

    let channel_name = |c: usize| {
        if c < n {
            format!("p_s{}", c + 1)
        } else {
            "p_env".to_string()
        }
    };

    for series in &report.series {
        for channel in 0..=n {
            let points: Vec<String> = series
                .populations
                .iter()
                .map(|pop| {
                    let v = if channel < n {
                        pop.atom_populations[channel]
                    } else {
                        pop.ground_population
                    };
                    format!("{},{}", px(x_of(pop.t)), px(y_of(v)))
                })
                .collect();
            let dash_attr = dash(series.backend)
                .map(|d| format!(r#" stroke-dasharray="{d}""#))
                .unwrap_or_default();
            writeln!(
                out,
                r#"<polyline data-backend="{}" data-channel="{}" fill="none" stroke="{}" stroke-width="1.5"{} points="{}"/>"#,
                series.backend,
                channel_name(channel),
                PALETTE[channel % PALETTE.len()],
                dash_attr,
                points.join(" ")
            )
            .unwrap();
        }
    }

    // legend: colours for channels, then dash styles for backends
    let lx = PLOT_RIGHT + 25.0;
    let mut ly = PLOT_TOP + 5.0;
    if !report.series.is_empty() {
        for channel in 0..=n {
            writeln!(
                out,
                r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="{}" stroke-width="2"/><text x="{}" y="{y}" dominant-baseline="middle">{}</text>"#,
                px(lx),
                px(lx + 24.0),
                PALETTE[channel % PALETTE.len()],
                px(lx + 30.0),
                channel_name(channel),
                y = px(ly)
            )
            .unwrap();
            ly += 16.0;
        }
        ly += 8.0;
        for series in &report.series {
            let dash_attr = dash(series.backend)
                .map(|d| format!(r#" stroke-dasharray="{d}""#))
                .unwrap_or_default();
            writeln!(
                out,
                r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="black" stroke-width="1.5"{}/><text x="{}" y="{y}" dominant-baseline="middle">{}</text>"#,
                px(lx),
                px(lx + 24.0),
                dash_attr,
                px(lx + 30.0),
                series.backend,
                y = px(ly)
            )
            .unwrap();
            ly += 16.0;
        }
    }
    out.push_str("</svg>\n");
    out
}
