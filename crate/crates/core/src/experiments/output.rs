//! CSV rendering, SVG plots, and the model comparison table.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::config::ModelKind;
use crate::error::{Error, Result};
use crate::training::Metric;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn loss_csv(curve: &[f64]) -> String {
    let mut out = String::from("epoch,loss\n");
    for (e, l) in curve.iter().enumerate() {
        let _ = writeln!(out, "{e},{}", fmt17(*l));
    }
    out
}

pub fn fit_csv(xs: &[f64], y_true: &[f64], y_pred: &[f64]) -> Result<String> {
    if xs.len() != y_true.len() || xs.len() != y_pred.len() {
        return Err(Error::Dimension("fit columns differ in length".into()));
    }
    let mut out = String::from("x,y_true,y_pred\n");
    for i in 0..xs.len() {
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt17(xs[i]),
            fmt17(y_true[i]),
            fmt17(y_pred[i])
        );
    }
    Ok(out)
}

/// Two-feature points with their labels and raw predictions.
pub fn points_csv(inputs: &[Vec<f64>], y_true: &[f64], y_pred: &[f64]) -> Result<String> {
    if inputs.len() != y_true.len() || inputs.len() != y_pred.len() {
        return Err(Error::Dimension("point columns differ in length".into()));
    }
    let mut out = String::from("x1,x2,y_true,y_pred\n");
    for i in 0..inputs.len() {
        let [a, b] = inputs[i][..] else {
            return Err(Error::Dimension(format!(
                "expected 2 features, got {}",
                inputs[i].len()
            )));
        };
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt17(a),
            fmt17(b),
            fmt17(y_true[i]),
            fmt17(y_pred[i])
        );
    }
    Ok(out)
}

pub fn accuracy_csv(rows: &[(ModelKind, &str, f64)]) -> String {
    let mut out = String::from("model,split,accuracy\n");
    for (model, split, acc) in rows {
        let _ = writeln!(out, "{model},{split},{}", fmt17(*acc));
    }
    out
}

/// Writes `contents`, creating parent directories.
pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompareRow {
    pub model: ModelKind,
    pub train: f64,
    pub test: f64,
}

/// One row per record, plus `Gap = RQNN - QNN` when both models appear.
pub fn compare_table(rows: &[CompareRow], metric: Metric) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::Empty("comparison records"));
    }
    let m = metric.name();
    let mut out = format!("model,train_{m},test_{m}\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{}", r.model, fmt17(r.train), fmt17(r.test));
    }
    let find = |k| rows.iter().find(|r| r.model == k);
    if let (Some(a), Some(b)) = (find(ModelKind::Rqnn), find(ModelKind::Qnn)) {
        let _ = writeln!(
            out,
            "Gap,{},{}",
            fmt17(a.train - b.train),
            fmt17(a.test - b.test)
        );
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesStyle {
    Line,
    Points,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub label: String,
    pub style: SeriesStyle,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlotSpec {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#17becf",
];
const TICKS: usize = 5;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if hi - lo < 1e-12 {
        let pad = if lo.abs() > 1e-12 {
            lo.abs() * 0.5
        } else {
            1.0
        };
        (lo - pad, hi + pad)
    } else {
        let pad = (hi - lo) * 0.05;
        (lo - pad, hi + pad)
    }
}

/// Standalone SVG text for `spec`; identical input gives identical bytes.
pub fn render_svg(spec: &PlotSpec) -> Result<String> {
    if spec.series.is_empty() {
        return Err(Error::Empty("plot series"));
    }
    let all = || spec.series.iter().flat_map(|s| s.points.iter().copied());
    if all().next().is_none() {
        return Err(Error::Empty("plot points"));
    }
    if all().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::NonFinite("plot point".into()));
    }
    let (x0, x1) = span(all().map(|p| p.0));
    let (y0, y1) = span(all().map(|p| p.1));
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(&spec.title)
    );
    let _ = writeln!(
        out,
        r#"<g stroke="black" stroke-width="1"><line x1="{LEFT}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/><line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{:.2}"/></g>"#,
        TOP + ph,
        LEFT + pw,
        TOP + ph,
        TOP + ph
    );
    for i in 0..=TICKS {
        let f = i as f64 / TICKS as f64;
        let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let (px, py) = (sx(xv), sy(yv));
        let _ = writeln!(
            out,
            r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{xv:.3}</text>"#,
            TOP + ph,
            TOP + ph + 5.0,
            TOP + ph + 18.0
        );
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{yv:.3}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 12.0,
        escape(&spec.x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(&spec.y_label)
    );

    for (k, s) in spec.series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        match s.style {
            SeriesStyle::Line => {
                let pts: Vec<String> = s
                    .points
                    .iter()
                    .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                    .collect();
                let _ = writeln!(
                    out,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                    pts.join(" ")
                );
            }
            SeriesStyle::Points => {
                let _ = writeln!(out, r#"<g fill="{color}">"#);
                for &(x, y) in &s.points {
                    let _ = writeln!(
                        out,
                        r#"<circle cx="{:.2}" cy="{:.2}" r="2"/>"#,
                        sx(x),
                        sy(y)
                    );
                }
                let _ = writeln!(out, "</g>");
            }
        }
        let ly = TOP + 12.0 + 16.0 * k as f64;
        let lx = LEFT + pw - 150.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="3"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn emit_plot(spec: &PlotSpec, path: &Path) -> Result<()> {
    write_file(path, &render_svg(spec)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_row(line: &str) -> Vec<f64> {
        line.split(',')
            .skip(1)
            .map(|v| v.parse().unwrap())
            .collect()
    }

    #[test]
    fn fmt17_round_trips() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0] {
            assert_eq!(fmt17(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
        assert_eq!(fmt17(0.98), "9.7999999999999998e-1");
    }

    #[test]
    fn csv_shapes() {
        assert_eq!(
            loss_csv(&[1.0, 0.5]).lines().collect::<Vec<_>>(),
            [
                "epoch,loss",
                "0,1.0000000000000000e0",
                "1,5.0000000000000000e-1"
            ]
        );
        let fit = fit_csv(&[0.0], &[1.0], &[0.9]).unwrap();
        assert!(fit.starts_with("x,y_true,y_pred\n"));
        assert!(fit_csv(&[0.0], &[1.0], &[]).is_err());
        let acc = accuracy_csv(&[(ModelKind::Rqnn, "test", 0.98)]);
        assert_eq!(
            acc,
            "model,split,accuracy\nrqnn,test,9.7999999999999998e-1\n"
        );
        assert!(points_csv(&[vec![0.1]], &[1.0], &[1.0]).is_err());
    }

    #[test]
    fn table_with_reference_values() {
        let rows = [
            CompareRow {
                model: ModelKind::Qnn,
                train: 0.9000,
                test: 0.8333,
            },
            CompareRow {
                model: ModelKind::Rqnn,
                train: 0.9800,
                test: 0.9867,
            },
        ];
        let t = compare_table(&rows, Metric::Accuracy).unwrap();
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines[0], "model,train_accuracy,test_accuracy");
        assert!(lines[1].starts_with("qnn,") && lines[2].starts_with("rqnn,"));
        assert!(lines[3].starts_with("Gap,"));
        let gap = parse_row(lines[3]);
        assert!((gap[0] - 0.0800).abs() < 1e-12);
        assert!((gap[1] - 0.1534).abs() < 1e-12);
    }

    #[test]
    fn table_gap_arithmetic_and_single_row() {
        let rows = [
            CompareRow {
                model: ModelKind::Qnn,
                train: 0.9,
                test: 0.8,
            },
            CompareRow {
                model: ModelKind::Rqnn,
                train: 0.95,
                test: 0.9,
            },
        ];
        let t = compare_table(&rows, Metric::Accuracy).unwrap();
        let gap = parse_row(t.lines().last().unwrap());
        assert!((gap[0] - 0.05).abs() < 1e-12 && (gap[1] - 0.10).abs() < 1e-12);
        let one = compare_table(&rows[..1], Metric::Accuracy).unwrap();
        assert_eq!(one.lines().count(), 2);
        assert!(!one.contains("Gap"));
        assert!(compare_table(&[], Metric::Accuracy).is_err());
    }

    fn spec(series: Vec<Series>) -> PlotSpec {
        PlotSpec {
            title: "loss <train>".into(),
            x_label: "epoch".into(),
            y_label: "loss".into(),
            series,
        }
    }

    #[test]
    fn svg_structure() {
        assert!(render_svg(&spec(vec![])).is_err());
        let line = Series {
            label: "a".into(),
            style: SeriesStyle::Line,
            points: vec![(0.0, 1.0), (1.0, 0.5)],
        };
        let svg = render_svg(&spec(vec![line.clone()])).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.contains("loss &lt;train&gt;"));
        assert_eq!(svg, render_svg(&spec(vec![line.clone()])).unwrap());
        let flat = Series {
            points: vec![(0.0, 2.0), (0.0, 2.0)],
            ..line.clone()
        };
        assert!(render_svg(&spec(vec![flat])).is_ok());
        let bad = Series {
            points: vec![(0.0, f64::NAN)],
            ..line
        };
        assert!(render_svg(&spec(vec![bad])).is_err());
    }

    #[test]
    fn write_file_reports_path() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("f");
        std::fs::write(&blocker, "x").unwrap();
        let err = write_file(&blocker.join("sub/out.csv"), "x").unwrap_err();
        assert!(err.to_string().contains("sub"));
    }
}
