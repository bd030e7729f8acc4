//! CSV and SVG renderings of scenario statistics.
//!
//! Reals are written in the shortest decimal form that parses back to the
//! same `f64` (at most 17 significant digits), so artifacts diff cleanly
//! and carry full precision.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use blockfade_core::nalgebra::DMatrix;
use blockfade_core::{EmpiricalCdf, Histogram1D, Histogram2D, UserCorrelationMatrix};
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::svg::{heatmap, line_chart, Series};

pub const HISTOGRAM_CSV: &str = "histogram.csv";
pub const EIGENCDF_CSV: &str = "eigencdf.csv";
pub const XCORR_CSV: &str = "xcorr_hist.csv";
pub const POWER_PROFILE_CSV: &str = "power_profile.csv";
pub const CORRELATION_CSV: &str = "correlation_matrix.csv";
pub const RAW_CHANNEL_CSV: &str = "raw_channel.csv";
pub const MANIFEST_CSV: &str = "manifest.csv";
pub const CONFIG_JSON: &str = "config.json";

pub const RAW_CHANNEL_HEADER: &str = "realization,t,f,antenna,user,re,im";

/// A named file of a report bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    /// Data rows for CSV files, lines otherwise.
    pub rows: usize,
    pub content: String,
}

impl Artifact {
    pub fn csv(name: &str, header: Option<&str>, body: String) -> Self {
        let rows = body.lines().count();
        let content = match header {
            Some(h) => format!("{h}\n{body}"),
            None => body,
        };
        Self {
            name: name.to_string(),
            rows,
            content,
        }
    }

    pub fn text(name: &str, content: String) -> Self {
        Self {
            name: name.to_string(),
            rows: content.lines().count(),
            content,
        }
    }

    pub fn sha256(&self) -> String {
        hex::encode(Sha256::digest(self.content.as_bytes()))
    }

    /// Data rows of a CSV artifact, header skipped.
    pub fn data_lines(&self) -> impl Iterator<Item = &str> {
        self.content
            .lines()
            .skip(usize::from(self.name != CORRELATION_CSV))
    }
}

pub fn real(x: f64) -> String {
    format!("{x:?}")
}

/// One row per distinct sample value.
pub fn cdf_csv(name: &str, value_column: &str, cdf: &EmpiricalCdf) -> Artifact {
    let mut body = String::new();
    for (v, p) in cdf.steps() {
        let _ = writeln!(body, "{},{}", real(v), real(p));
    }
    Artifact::csv(name, Some(&format!("{value_column},cdf")), body)
}

pub fn histogram_csv(h: &Histogram2D) -> Artifact {
    let mut body = String::new();
    for (re, im, count) in h.rows() {
        let _ = writeln!(body, "{},{},{count}", real(re), real(im));
    }
    Artifact::csv(HISTOGRAM_CSV, Some("re_center,im_center,count"), body)
}

pub fn xcorr_csv(h: &Histogram1D) -> Artifact {
    let mut body = String::new();
    for (k, count) in h.counts.iter().enumerate() {
        let _ = writeln!(body, "{},{count}", real(h.center(k)));
    }
    Artifact::csv(XCORR_CSV, Some("magnitude_center,count"), body)
}

/// `profile[(i, j)]` is the mean power of user `j` at antenna `i`.
pub fn power_profile_csv(profile: &DMatrix<f64>) -> Artifact {
    let mut body = String::new();
    for i in 0..profile.nrows() {
        for j in 0..profile.ncols() {
            let _ = writeln!(body, "{i},{j},{}", real(profile[(i, j)]));
        }
    }
    Artifact::csv(
        POWER_PROFILE_CSV,
        Some("antenna_index,user_index,mean_power"),
        body,
    )
}

pub fn correlation_csv(m: &UserCorrelationMatrix) -> Artifact {
    let mut body = String::new();
    for row in m.rho.row_iter() {
        let cells: Vec<String> = row.iter().map(|&v| real(v)).collect();
        let _ = writeln!(body, "{}", cells.join(","));
    }
    Artifact::csv(CORRELATION_CSV, None, body)
}

/// `artifact,rows,sha256` for every artifact, in the given order.
pub fn manifest_csv(artifacts: &[Artifact]) -> Artifact {
    let mut body = String::new();
    for a in artifacts {
        let _ = writeln!(body, "{},{},{}", a.name, a.rows, a.sha256());
    }
    Artifact::csv(MANIFEST_CSV, Some("artifact,rows,sha256"), body)
}

pub fn histogram_svg(h: &Histogram2D) -> Artifact {
    let n = h.bins;
    // y axis points up: top row is the highest imaginary bin
    let m = DMatrix::from_fn(n, n, |r, c| h.count(c, n - 1 - r) as f64);
    let a = h.half_width;
    Artifact::text(
        "histogram.svg",
        heatmap("Channel coefficients", "Re h", "Im h", &m, (-a, a), (-a, a)),
    )
}

pub fn eigencdf_svg(cdf: &EmpiricalCdf) -> Artifact {
    let mut points = Vec::new();
    let mut prev = 0.0;
    for (v, p) in cdf.steps() {
        points.push((v, prev));
        points.push((v, p));
        prev = p;
    }
    let series = [Series {
        label: "eigenvalues".into(),
        points,
    }];
    Artifact::text(
        "eigencdf.svg",
        line_chart("Eigenvalue CDF", "eigenvalue", "CDF", &series),
    )
}

pub fn xcorr_svg(h: &Histogram1D) -> Artifact {
    let total = h.total().max(1) as f64;
    let points = h
        .counts
        .iter()
        .enumerate()
        .map(|(k, &c)| (h.center(k), c as f64 / total))
        .collect();
    let series = [Series {
        label: "|g_ij|".into(),
        points,
    }];
    Artifact::text(
        "xcorr_hist.svg",
        line_chart(
            "Off-diagonal Gram magnitudes",
            "|g_ij|",
            "fraction",
            &series,
        ),
    )
}

pub fn power_profile_svg(profile: &DMatrix<f64>) -> Artifact {
    let series: Vec<Series> = (0..profile.ncols())
        .map(|j| Series {
            label: format!("user {j}"),
            points: (0..profile.nrows())
                .map(|i| (i as f64, profile[(i, j)]))
                .collect(),
        })
        .collect();
    Artifact::text(
        "power_profile.svg",
        line_chart(
            "Mean power along the array",
            "antenna index",
            "mean |h|^2",
            &series,
        ),
    )
}

pub fn correlation_svg(m: &UserCorrelationMatrix) -> Artifact {
    let k = m.n_users() as f64;
    Artifact::text(
        "correlation_matrix.svg",
        heatmap(
            "User cross-correlation",
            "user",
            "user",
            &m.rho,
            (0.0, k),
            (k, 0.0),
        ),
    )
}

/// Writes every artifact into `dir`, creating it if needed.
pub fn write_artifacts(artifacts: &[Artifact], dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    for a in artifacts {
        let path = dir.join(&a.name);
        fs::write(&path, a.content.as_bytes()).map_err(|e| CliError::io(path, e))?;
    }
    Ok(())
}
