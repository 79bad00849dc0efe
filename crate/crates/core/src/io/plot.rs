use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::metrics::fisher_z;

use super::results::ResultsTable;

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    /// `(budget_fraction, ordinate)` sorted by fraction.
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub title: String,
    pub series: Vec<Series>,
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];
const PANEL_W: f64 = 460.0;
const PANEL_H: f64 = 360.0;
const MARGIN_L: f64 = 60.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 50.0;

/// PLCC and SROCC panels, one curve per sampler (per dataset when several
/// datasets share the table). Missing statistics are skipped.
pub fn plot_series(table: &ResultsTable, use_fisher: bool) -> Result<Vec<Panel>> {
    if table.rows.is_empty() {
        return Err(Error::EmptyTable);
    }
    let multi = table.rows.iter().any(|r| r.dataset != table.rows[0].dataset);
    let transform = |v: f64| if use_fisher { fisher_z(v) } else { Ok(v) };
    let mut panels = Vec::new();
    for (title, pick) in [
        ("PLCC", (|r| r.plcc_mean) as fn(&super::results::ResultsRow) -> Option<f64>),
        ("SROCC", |r| r.srocc_mean),
    ] {
        let mut series: Vec<Series> = Vec::new();
        for row in &table.rows {
            let label = if multi {
                format!("{}:{}", row.dataset, row.sampler)
            } else {
                row.sampler.clone()
            };
            let idx = match series.iter().position(|s| s.label == label) {
                Some(i) => i,
                None => {
                    series.push(Series {
                        label,
                        points: Vec::new(),
                    });
                    series.len() - 1
                }
            };
            if let Some(v) = pick(row) {
                series[idx].points.push((row.budget_fraction, transform(v)?));
            }
        }
        for s in &mut series {
            s.points.sort_by(|a, b| a.0.total_cmp(&b.0));
        }
        let title = if use_fisher {
            format!("arctanh({title})")
        } else {
            title.to_string()
        };
        panels.push(Panel { title, series });
    }
    Ok(panels)
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-9 {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Static SVG document for the given panels, laid out side by side.
pub fn render_svg(panels: &[Panel]) -> String {
    let labels: Vec<&str> = {
        let mut l: Vec<&str> = Vec::new();
        for p in panels {
            for s in &p.series {
                if !l.contains(&s.label.as_str()) {
                    l.push(&s.label);
                }
            }
        }
        l
    };
    let legend_h = 18.0 * labels.len() as f64 + 10.0;
    let width = PANEL_W * panels.len() as f64;
    let height = PANEL_H + legend_h;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);

    for (k, panel) in panels.iter().enumerate() {
        let x0 = PANEL_W * k as f64;
        let (xlo, xhi) = range(panel.series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
        let (ylo, yhi) = range(panel.series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
        let plot_w = PANEL_W - MARGIN_L - MARGIN_R;
        let plot_h = PANEL_H - MARGIN_T - MARGIN_B;
        let sx = |x: f64| x0 + MARGIN_L + (x - xlo) / (xhi - xlo) * plot_w;
        let sy = |y: f64| MARGIN_T + (yhi - y) / (yhi - ylo) * plot_h;

        let _ = writeln!(svg, r#"<g class="panel" data-title="{}">"#, escape(&panel.title));
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
            x0 + MARGIN_L + plot_w / 2.0,
            escape(&panel.title)
        );
        let _ = writeln!(
            svg,
            r##"<rect x="{:.2}" y="{MARGIN_T}" width="{plot_w:.2}" height="{plot_h:.2}" fill="none" stroke="#333"/>"##,
            x0 + MARGIN_L
        );
        for t in 0..=4 {
            let fx = xlo + (xhi - xlo) * t as f64 / 4.0;
            let fy = ylo + (yhi - ylo) * t as f64 / 4.0;
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{:.0}%</text>"#,
                sx(fx),
                MARGIN_T + plot_h + 16.0,
                fx * 100.0
            );
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{fy:.3}</text>"#,
                x0 + MARGIN_L - 6.0,
                sy(fy) + 4.0
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">pairs compared (fraction of complete design)</text>"#,
            x0 + MARGIN_L + plot_w / 2.0,
            PANEL_H - 12.0
        );
        for s in &panel.series {
            let color = PALETTE[labels.iter().position(|l| *l == s.label).unwrap_or(0) % PALETTE.len()];
            let path: Vec<String> =
                s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                path.join(" ")
            );
            for &(x, y) in &s.points {
                let _ = writeln!(
                    svg,
                    r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}" data-series="{}" data-x="{x:.4}" data-y="{y:.6}"/>"#,
                    sx(x),
                    sy(y),
                    escape(&s.label)
                );
            }
        }
        let _ = writeln!(svg, "</g>");
    }

    for (k, label) in labels.iter().enumerate() {
        let y = PANEL_H + 10.0 + 18.0 * k as f64;
        let color = PALETTE[k % PALETTE.len()];
        let _ = writeln!(
            svg,
            r#"<line x1="{MARGIN_L}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="2"/>"#,
            MARGIN_L + 24.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
            MARGIN_L + 30.0,
            y + 4.0,
            escape(label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn emit_plot(table: &ResultsTable, path: &Path, use_fisher: bool) -> Result<()> {
    let svg = render_svg(&plot_series(table, use_fisher)?);
    std::fs::write(path, svg).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::results::ResultsRow;

    fn table() -> ResultsTable {
        let row = |sampler: &str, f: f64, plcc: f64| ResultsRow {
            dataset: "d".into(),
            sampler: sampler.into(),
            budget_fraction: f,
            plcc_mean: Some(plcc),
            plcc_std: Some(0.0),
            srocc_mean: Some(plcc),
            srocc_std: Some(0.0),
            repetitions: 1,
            references: 1,
        };
        ResultsTable {
            rows: vec![row("asap", 0.1, 0.5), row("asap", 0.2, 0.9), row("swiss", 0.1, 0.4)],
        }
    }

    #[test]
    fn fisher_ordinates() {
        let panels = plot_series(&table(), true).unwrap();
        assert_eq!(panels.len(), 2);
        let asap = &panels[0].series[0];
        assert_eq!(asap.label, "asap");
        assert!((asap.points[0].1 - 0.549306).abs() < 1e-6);
        let svg = render_svg(&panels);
        assert!(svg.contains(r#"data-series="asap" data-x="0.1000" data-y="0.549306""#));
    }

    #[test]
    fn plain_plot_has_one_curve_per_sampler() {
        let panels = plot_series(&table(), false).unwrap();
        assert_eq!(panels[0].series.len(), 2);
        let svg = render_svg(&panels);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<polyline").count(), 4);
        assert_eq!(svg, render_svg(&plot_series(&table(), false).unwrap()));
    }

    #[test]
    fn empty_table_is_an_error() {
        assert!(matches!(plot_series(&ResultsTable::default(), false), Err(Error::EmptyTable)));
    }
}
