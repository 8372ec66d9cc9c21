//! On-disk layouts: point CSVs with optional flag column, report tables, hashes.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use psi_growth_core::hull::BallSample;
use psi_growth_core::stats::EstimateReport;
use psi_growth_core::{PointConfiguration, Region, SpaceTimePoint};
use sha2::{Digest, Sha256};

/// 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Points as rows of coordinates, as read back from a CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct PointTable {
    pub d: usize,
    pub rows: Vec<Vec<f64>>,
    pub flags: Option<Vec<bool>>,
}

fn write_rows(d: usize, rows: impl ExactSizeIterator<Item = Vec<f64>>, flags: Option<&[bool]>) -> String {
    let mut out = String::new();
    writeln!(out, "d,count").unwrap();
    writeln!(out, "{d},{}", rows.len()).unwrap();
    for (i, row) in rows.enumerate() {
        let mut line = row.iter().map(|v| num(*v)).collect::<Vec<_>>().join(",");
        if let Some(f) = flags {
            line.push_str(if f[i] { ",1" } else { ",0" });
        }
        writeln!(out, "{line}").unwrap();
    }
    out
}

/// Space-time points as `x1,...,x{d-1},h`, with a trailing 0/1 column when flags are given.
pub fn config_csv(config: &PointConfiguration, flags: Option<&[bool]>) -> String {
    let rows = (0..config.len()).map(|i| {
        let mut r = config.x(i).to_vec();
        r.push(config.h(i));
        r
    });
    write_rows(config.d, rows.collect::<Vec<_>>().into_iter(), flags)
}

/// Ball points as `x1,...,xd`.
pub fn ball_csv(sample: &BallSample, flags: Option<&[bool]>) -> String {
    let rows = (0..sample.len()).map(|i| sample.point(i).to_vec());
    write_rows(sample.d, rows.collect::<Vec<_>>().into_iter(), flags)
}

/// Parses either layout; `coords` is the number of numeric columns per row.
pub fn parse_points(text: &str, coords: impl Fn(usize) -> usize) -> Result<PointTable> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("d,count") {
        bail!("missing `d,count` header");
    }
    let head = lines.next().context("missing dimension line")?;
    let (d, count) = head.split_once(',').context("dimension line needs `d,count`")?;
    let d: usize = d.trim().parse().context("bad d")?;
    let count: usize = count.trim().parse().context("bad count")?;
    let width = coords(d);
    let mut rows = Vec::with_capacity(count);
    let mut flags = Vec::new();
    let mut flagged = None;
    for (n, line) in lines.filter(|l| !l.trim().is_empty()).enumerate() {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        let has_flag = match cells.len() {
            c if c == width => false,
            c if c == width + 1 => true,
            c => bail!("row {}: expected {width} or {} columns, got {c}", n + 1, width + 1),
        };
        if *flagged.get_or_insert(has_flag) != has_flag {
            bail!("row {}: flag column present on some rows only", n + 1);
        }
        let row = cells[..width]
            .iter()
            .map(|c| c.parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .with_context(|| format!("row {}: bad number", n + 1))?;
        rows.push(row);
        if has_flag {
            flags.push(match cells[width] {
                "1" => true,
                "0" => false,
                other => bail!("row {}: flag must be 0 or 1, got {other}", n + 1),
            });
        }
    }
    if rows.len() != count {
        bail!("header announces {count} rows, found {}", rows.len());
    }
    Ok(PointTable { d, rows, flags: flagged.filter(|f| *f).map(|_| flags) })
}

pub fn read_config_csv(text: &str) -> Result<(PointConfiguration, Option<Vec<bool>>)> {
    let t = parse_points(text, |d| d)?;
    let pts = t
        .rows
        .iter()
        .map(|r| SpaceTimePoint::new(r[..r.len() - 1].to_vec(), r[r.len() - 1]))
        .collect::<Result<Vec<_>, _>>()?;
    let config = if pts.is_empty() {
        PointConfiguration::empty(t.d, Region::Unspecified)
    } else {
        PointConfiguration::from_points(t.d, &pts, Region::Unspecified)?
    };
    Ok((config, t.flags))
}

pub fn read_ball_csv(text: &str) -> Result<(BallSample, Option<Vec<bool>>)> {
    let t = parse_points(text, |d| d)?;
    Ok((BallSample::from_points(t.d, &t.rows)?, t.flags))
}

/// Per-λ table with the slope of the log mean over the grid points so far.
pub fn report_csv(report: &EstimateReport) -> String {
    let mut out = String::new();
    writeln!(out, "function,lambda,R,mean,se_mean,var,se_var,slope_so_far").unwrap();
    for (f, label) in report.labels.iter().enumerate() {
        for (k, e) in report.per_lambda.iter().enumerate() {
            let s = &e.summaries[f];
            let slope = slope_so_far(report, f, k).map(num).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                csv_text(label),
                num(e.lambda),
                e.replicates,
                num(s.mean),
                num(s.se_mean),
                num(s.var),
                num(s.se_var),
                slope
            )
            .unwrap();
        }
    }
    out
}

/// Least-squares slope of `log mean` against `log λ` over grid points `0..=k`.
fn slope_so_far(report: &EstimateReport, f: usize, k: usize) -> Option<f64> {
    if k == 0 {
        return None;
    }
    let pts: Vec<(f64, f64)> = report.per_lambda[..=k]
        .iter()
        .filter(|e| e.summaries[f].mean > 0.0)
        .map(|e| (e.lambda.ln(), e.summaries[f].mean.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    Some(sxy / sxx)
}

/// `log λ, log mean, log var` per test function; non-positive values are left empty.
pub fn plot_csv(report: &EstimateReport) -> String {
    let log = |v: f64| if v > 0.0 { num(v.ln()) } else { String::new() };
    let mut out = String::new();
    writeln!(out, "function,log_lambda,log_mean,log_var").unwrap();
    for (f, label) in report.labels.iter().enumerate() {
        for e in &report.per_lambda {
            let s = &e.summaries[f];
            writeln!(out, "{},{},{},{}", csv_text(label), num(e.lambda.ln()), log(s.mean), log(s.var)).unwrap();
        }
    }
    out
}

pub fn csv_text(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn write_file(dir: &Path, name: &str, contents: &[u8]) -> Result<()> {
    std::fs::write(dir.join(name), contents).with_context(|| format!("cannot write {}", dir.join(name).display()))
}
