//! Deterministic SVG line charts of aggregate rows.
//!
//! One series per (policy, resample, sigma, block size), x = dimension,
//! y = mean evaluations (or per dimension), with a shaded ±1 standard
//! error band. Identical input produces byte-identical output: series are
//! ordered by key, coordinates are formatted with fixed precision, and no
//! timestamps or random ids are embedded.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use super::aggregate::AggregateRow;
use super::HarnessError;
use crate::problem::ProblemKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotMode {
    /// y = mean evaluations to solve.
    Evals,
    /// y = mean evaluations divided by the dimension.
    EvalsPerDim,
}

impl FromStr for PlotMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "evals" => Ok(PlotMode::Evals),
            "evals-per-dim" => Ok(PlotMode::EvalsPerDim),
            other => Err(format!(
                "unknown plot mode {other:?} (expected \"evals\" or \"evals-per-dim\")"
            )),
        }
    }
}

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 520.0;
const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 236.0;
const MARGIN_TOP: f64 = 44.0;
const MARGIN_BOTTOM: f64 = 56.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

/// Renders the chart; see [`emit_plot_svg`] for the file-writing wrapper.
pub fn render_plot_svg(rows: &[AggregateRow], mode: PlotMode) -> Result<String, HarnessError> {
    if rows.is_empty() {
        return Err(HarnessError::EmptyPlot);
    }
    let problem = rows[0].problem;
    if rows.iter().any(|r| r.problem != problem) {
        return Err(HarnessError::MixedProblems);
    }

    // Series keyed by (policy, resample, sigma, block size).
    #[derive(PartialEq, Eq, PartialOrd, Ord)]
    struct SeriesKey {
        policy: crate::climb::SelectionPolicy,
        resample: u32,
        sigma_bits: u64,
        block_size: Option<usize>,
    }
    let mut series: BTreeMap<SeriesKey, Vec<(f64, f64, f64)>> = BTreeMap::new();
    for r in rows {
        let (y, band) = match mode {
            PlotMode::Evals => (r.mean_evals, r.stderr_evals),
            PlotMode::EvalsPerDim => (r.mean_evals_per_dim, r.stderr_evals / r.dim as f64),
        };
        if !y.is_finite() {
            continue; // nothing solved for this configuration
        }
        series
            .entry(SeriesKey {
                policy: r.policy,
                resample: r.resample,
                sigma_bits: r.noise_sigma.to_bits(),
                block_size: r.block_size,
            })
            .or_default()
            .push((r.dim as f64, y, band.max(0.0)));
    }
    series.retain(|_, pts| !pts.is_empty());
    if series.is_empty() {
        return Err(HarnessError::NoFinitePoints);
    }
    for pts in series.values_mut() {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    }

    let x_min = series
        .values()
        .flatten()
        .map(|p| p.0)
        .fold(f64::INFINITY, f64::min);
    let x_max = series
        .values()
        .flatten()
        .map(|p| p.0)
        .fold(f64::NEG_INFINITY, f64::max);
    let (x_min, x_max) = if x_min == x_max {
        (x_min - 1.0, x_max + 1.0)
    } else {
        (x_min, x_max)
    };
    let y_max = series
        .values()
        .flatten()
        .map(|p| p.1 + p.2)
        .fold(0.0, f64::max)
        .max(1e-9)
        * 1.08;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = |y: f64| MARGIN_TOP + plot_h - y / y_max * plot_h;

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );

    let title = match problem {
        ProblemKind::OneMax => "OneMax",
        ProblemKind::RoyalRoad => "Royal Road",
    };
    let y_label = match mode {
        PlotMode::Evals => "mean evaluations to solve",
        PlotMode::EvalsPerDim => "mean evaluations / dimension",
    };
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{title}: {y_label} (±1 standard error)</text>"#,
        MARGIN_LEFT + plot_w / 2.0
    );

    // Gridlines and y ticks.
    for tick in nice_ticks(y_max) {
        let y = sy(tick);
        let _ = writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd" stroke-width="1"/>"##,
            MARGIN_LEFT,
            MARGIN_LEFT + plot_w
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 6.0,
            y + 4.0,
            fmt_tick(tick)
        );
    }
    // X ticks at the data's dimensions (deduplicated).
    let mut dims: Vec<f64> = series.values().flatten().map(|p| p.0).collect();
    dims.sort_by(f64::total_cmp);
    dims.dedup();
    for &d in &dims {
        let x = sx(d);
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#999999" stroke-width="1"/>"##,
            MARGIN_TOP + plot_h,
            MARGIN_TOP + plot_h + 4.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            MARGIN_TOP + plot_h + 18.0,
            fmt_tick(d)
        );
    }

    // Axes.
    let _ = writeln!(
        svg,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="1.5"/>"#,
        MARGIN_LEFT,
        MARGIN_TOP + plot_h,
        MARGIN_LEFT + plot_w,
        MARGIN_TOP + plot_h
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="1.5"/>"#,
        MARGIN_LEFT, MARGIN_TOP, MARGIN_LEFT,
        MARGIN_TOP + plot_h
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="13" text-anchor="middle">dimension</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 14.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.2}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 18 {:.2})">{y_label}</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );

    // Bands first so the lines draw on top of them.
    for (i, pts) in series.values().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut poly = String::new();
        for &(x, y, band) in pts.iter() {
            let _ = write!(poly, "{:.2},{:.2} ", sx(x), sy((y + band).min(y_max)));
        }
        for &(x, y, band) in pts.iter().rev() {
            let _ = write!(poly, "{:.2},{:.2} ", sx(x), sy((y - band).max(0.0)));
        }
        let _ = writeln!(
            svg,
            r#"<polygon points="{}" fill="{color}" fill-opacity="0.15" stroke="none"/>"#,
            poly.trim_end()
        );
    }
    for (i, (key, pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut points = String::new();
        for &(x, y, _) in pts {
            let _ = write!(points, "{:.2},{:.2} ", sx(x), sy(y));
        }
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            points.trim_end()
        );
        // Legend entry.
        let ly = MARGIN_TOP + 10.0 + i as f64 * 20.0;
        let lx = MARGIN_LEFT + plot_w + 16.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#,
            lx + 22.0
        );
        let mut label = format!(
            "{} r={} sigma={}",
            key.policy,
            key.resample,
            f64::from_bits(key.sigma_bits)
        );
        if let Some(b) = key.block_size {
            let _ = write!(label, " b={b}");
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12">{label}</text>"#,
            lx + 28.0,
            ly + 4.0
        );
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Renders and writes the chart to `path`.
pub fn emit_plot_svg(
    rows: &[AggregateRow],
    mode: PlotMode,
    path: &Path,
) -> Result<(), HarnessError> {
    let svg = render_plot_svg(rows, mode)?;
    std::fs::write(path, svg)?;
    Ok(())
}

/// Round y ticks: 1/2/5 steps covering [0, max].
fn nice_ticks(max: f64) -> Vec<f64> {
    let raw_step = max / 5.0;
    let magnitude = 10f64.powf(raw_step.log10().floor());
    let normalized = raw_step / magnitude;
    let step = if normalized <= 1.0 {
        1.0
    } else if normalized <= 2.0 {
        2.0
    } else if normalized <= 5.0 {
        5.0
    } else {
        10.0
    } * magnitude;
    let mut ticks = Vec::new();
    let mut tick = 0.0;
    while tick <= max * (1.0 + 1e-9) {
        ticks.push(tick);
        tick += step;
    }
    ticks
}

fn fmt_tick(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::climb::SelectionPolicy;

    fn row(dim: usize, mean: f64, stderr: f64) -> AggregateRow {
        AggregateRow {
            policy: SelectionPolicy::Bandit,
            problem: ProblemKind::OneMax,
            dim,
            block_size: None,
            noise_sigma: 1.0,
            resample: 2,
            budget: 1000 * dim as u64,
            mean_evals: mean,
            stderr_evals: stderr,
            solve_rate: 1.0,
            mean_evals_per_dim: mean / dim as f64,
        }
    }

    #[test]
    fn one_series_three_dimensions_yields_one_polyline_with_three_points() {
        let rows = vec![
            row(50, 5000.0, 100.0),
            row(100, 10500.0, 180.0),
            row(200, 22000.0, 300.0),
        ];
        let svg = render_plot_svg(&rows, PlotMode::Evals).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
        let line = svg
            .lines()
            .find(|l| l.starts_with("<polyline"))
            .unwrap();
        let points = line.split("points=\"").nth(1).unwrap();
        let points = points.split('"').next().unwrap();
        assert_eq!(points.split_whitespace().count(), 3, "{points}");
        assert_eq!(svg.matches("<polygon").count(), 1, "one stderr band");
    }

    #[test]
    fn identical_input_renders_identical_bytes() {
        let rows = vec![row(50, 5000.0, 100.0), row(100, 10500.0, 180.0)];
        let a = render_plot_svg(&rows, PlotMode::EvalsPerDim).unwrap();
        let b = render_plot_svg(&rows, PlotMode::EvalsPerDim).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_stderr_band_degenerates_onto_the_line() {
        let rows = vec![row(50, 5000.0, 0.0), row(100, 10000.0, 0.0)];
        let svg = render_plot_svg(&rows, PlotMode::Evals).unwrap();
        let band_line = svg.lines().find(|l| l.starts_with("<polygon")).unwrap();
        let pts = band_line.split("points=\"").nth(1).unwrap();
        let pts: Vec<&str> = pts.split('"').next().unwrap().split_whitespace().collect();
        // Upper edge equals the reversed lower edge when the band is empty.
        assert_eq!(pts[0], pts[3]);
        assert_eq!(pts[1], pts[2]);
    }

    #[test]
    fn empty_and_mixed_inputs_are_rejected() {
        assert!(matches!(
            render_plot_svg(&[], PlotMode::Evals),
            Err(HarnessError::EmptyPlot)
        ));

        let mut other = row(50, 5000.0, 10.0);
        other.problem = ProblemKind::RoyalRoad;
        other.block_size = Some(8);
        let rows = vec![row(50, 5000.0, 10.0), other];
        assert!(matches!(
            render_plot_svg(&rows, PlotMode::Evals),
            Err(HarnessError::MixedProblems)
        ));

        let mut unsolved = row(50, f64::NAN, f64::NAN);
        unsolved.solve_rate = 0.0;
        assert!(matches!(
            render_plot_svg(&[unsolved], PlotMode::Evals),
            Err(HarnessError::NoFinitePoints)
        ));
    }

    #[test]
    fn series_split_by_policy_resample_and_sigma() {
        let mut r1 = row(50, 5000.0, 10.0);
        let mut r2 = row(50, 3000.0, 10.0);
        r2.policy = SelectionPolicy::Uniform;
        let mut r3 = row(50, 2000.0, 10.0);
        r3.resample = 5;
        r1.dim = 50;
        let svg = render_plot_svg(&[r1, r2, r3], PlotMode::Evals).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 3);
        assert!(svg.contains("bandit r=2 sigma=1"));
        assert!(svg.contains("uniform r=2 sigma=1"));
        assert!(svg.contains("bandit r=5 sigma=1"));
    }
}
