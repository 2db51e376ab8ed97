//! Artifact writers: CSV with an embedded config header, JSON, and minimal
//! SVG polygon markup.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

/// Key=value pairs echoed at the top of every artifact; rerunning an emitted
/// header reproduces the artifact byte-for-byte.
#[derive(Debug, Clone, Default)]
pub struct ConfigEcho {
    pairs: Vec<(String, String)>,
}

impl ConfigEcho {
    pub fn new(subcommand: &str) -> Self {
        let mut echo = ConfigEcho::default();
        echo.push("subcommand", subcommand);
        echo.push("version", env!("CARGO_PKG_VERSION"));
        echo
    }

    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.pairs.push((key.to_string(), value.to_string()));
    }

    pub fn header_lines(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.pairs {
            out.push_str(&format!("# {k}={v}\n"));
        }
        out
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.pairs
    }
}

/// Parse `key=value` lines; `# ` prefixes (artifact headers) are accepted.
pub fn parse_config_file(path: &Path) -> Result<Vec<(String, String)>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut pairs = Vec::new();
    for line in text.lines() {
        let line = line.trim().trim_start_matches('#').trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            // CSV body and column header lines end the config section
            break;
        };
        pairs.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(pairs)
}

pub fn write_csv(
    out_dir: &Path,
    name: &str,
    echo: &ConfigEcho,
    columns: &[&str],
    rows: &[Vec<String>],
) -> Result<PathBuf> {
    fs::create_dir_all(out_dir)?;
    let path = out_dir.join(format!("{name}.csv"));
    let mut body = echo.header_lines();
    body.push_str(&columns.join(","));
    body.push('\n');
    for row in rows {
        body.push_str(&row.join(","));
        body.push('\n');
    }
    fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

pub fn write_json(out_dir: &Path, name: &str, value: &serde_json::Value) -> Result<PathBuf> {
    fs::create_dir_all(out_dir)?;
    let path = out_dir.join(format!("{name}.json"));
    fs::write(&path, format!("{}\n", serde_json::to_string_pretty(value)?))?;
    Ok(path)
}

/// Render closed polygons into a standalone SVG 1.1 document.
pub fn polygon_svg(polygons: &[(&[(f64, f64)], &str)]) -> String {
    let mut x0 = f64::INFINITY;
    let mut x1 = f64::NEG_INFINITY;
    let mut y0 = f64::INFINITY;
    let mut y1 = f64::NEG_INFINITY;
    for (poly, _) in polygons {
        for &(x, y) in *poly {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
    }
    let pad = 0.05 * ((x1 - x0).max(y1 - y0)).max(1e-9);
    let (x0, x1, y0, y1) = (x0 - pad, x1 + pad, y0 - pad, y1 + pad);
    let scale = 600.0 / (x1 - x0).max(y1 - y0);
    let width = (x1 - x0) * scale;
    let height = (y1 - y0) * scale;
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.2} {height:.2}\">\n"
    );
    for (poly, color) in polygons {
        if poly.len() < 2 {
            continue;
        }
        let pts: Vec<String> = poly
            .iter()
            .map(|&(x, y)| format!("{:.3},{:.3}", (x - x0) * scale, (y1 - y) * scale))
            .collect();
        svg.push_str(&format!(
            "  <polygon points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            pts.join(" ")
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v}")
    }
}
