//! Empirical distributions: step CDFs and uniform-bin histograms.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Bin count used when none is configured.
pub const DEFAULT_BINS: usize = 64;

/// Right-continuous empirical CDF.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyInput("samples"));
        }
        if let Some(bad) = samples.iter().find(|v| v.is_nan()) {
            return Err(Error::invalid("samples", "must not contain NaN", bad));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self { sorted: samples })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.sorted
    }

    /// Fraction of samples `<= x`.
    pub fn query(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.sorted.len() as f64
    }

    /// Smallest sample `v` with `query(v) >= p`, for `p` in `[0, 1]`.
    pub fn quantile(&self, p: f64) -> f64 {
        let n = self.sorted.len();
        // absorb rounding in p·n so that quantile(k/n) is the k-th sample
        let rank = (p.clamp(0.0, 1.0) * n as f64 - 1e-9).ceil() as usize;
        self.sorted[rank.clamp(1, n) - 1]
    }

    pub fn interquartile_range(&self) -> f64 {
        self.quantile(0.75) - self.quantile(0.25)
    }

    /// One `(value, cdf)` point per distinct sample value.
    pub fn steps(&self) -> Vec<(f64, f64)> {
        let n = self.sorted.len() as f64;
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (i, &v) in self.sorted.iter().enumerate() {
            let cdf = (i + 1) as f64 / n;
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 = cdf,
                _ => out.push((v, cdf)),
            }
        }
        out
    }
}

pub fn empirical_cdf(samples: &[f64]) -> Result<EmpiricalCdf> {
    EmpiricalCdf::new(samples.to_vec())
}

#[inline]
fn bin_index(x: f64, lo: f64, width: f64, bins: usize) -> usize {
    let k = ((x - lo) / width).floor();
    if k <= 0.0 {
        0
    } else {
        (k as usize).min(bins - 1)
    }
}

/// 2-D histogram of complex values on a square `[-a, a]²`.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram2D {
    pub half_width: f64,
    pub bins: usize,
    /// Row-major by real-part bin, then imaginary-part bin.
    pub counts: Vec<u64>,
}

impl Histogram2D {
    pub fn bin_width(&self) -> f64 {
        2.0 * self.half_width / self.bins as f64
    }

    /// Bin edges, shared by both axes.
    pub fn edges(&self) -> Vec<f64> {
        let w = self.bin_width();
        (0..=self.bins)
            .map(|k| -self.half_width + w * k as f64)
            .collect()
    }

    pub fn center(&self, k: usize) -> f64 {
        -self.half_width + self.bin_width() * (k as f64 + 0.5)
    }

    pub fn count(&self, re_bin: usize, im_bin: usize) -> u64 {
        self.counts[re_bin * self.bins + im_bin]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `(re_center, im_center, count)` in storage order.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, u64)> + '_ {
        (0..self.bins).flat_map(move |a| {
            (0..self.bins).map(move |b| (self.center(a), self.center(b), self.count(a, b)))
        })
    }
}

/// Bins complex values on the smallest origin-centred square that holds them.
pub fn coefficient_histogram(values: &[Complex64], bins: usize) -> Result<Histogram2D> {
    if values.is_empty() {
        return Err(Error::EmptyInput("values"));
    }
    if bins == 0 {
        return Err(Error::invalid("bins", "must be at least 1", bins));
    }
    let mut half_width = values
        .iter()
        .fold(0.0_f64, |m, z| m.max(z.re.abs()).max(z.im.abs()));
    if !half_width.is_finite() {
        return Err(Error::invalid("values", "must be finite", half_width));
    }
    if half_width == 0.0 {
        half_width = 1.0;
    }
    let width = 2.0 * half_width / bins as f64;
    let mut counts = vec![0u64; bins * bins];
    for z in values {
        let a = bin_index(z.re, -half_width, width, bins);
        let b = bin_index(z.im, -half_width, width, bins);
        counts[a * bins + b] += 1;
    }
    Ok(Histogram2D {
        half_width,
        bins,
        counts,
    })
}

/// 1-D histogram of nonnegative magnitudes on `[0, max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram1D {
    pub upper: f64,
    pub counts: Vec<u64>,
}

impl Histogram1D {
    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn center(&self, k: usize) -> f64 {
        self.upper / self.bins() as f64 * (k as f64 + 0.5)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

pub fn magnitude_histogram(values: &[f64], bins: usize) -> Result<Histogram1D> {
    if values.is_empty() {
        return Err(Error::EmptyInput("values"));
    }
    if bins == 0 {
        return Err(Error::invalid("bins", "must be at least 1", bins));
    }
    if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::invalid(
            "values",
            "must be finite and nonnegative",
            bad,
        ));
    }
    let mut upper = values.iter().copied().fold(0.0, f64::max);
    if upper == 0.0 {
        upper = 1.0;
    }
    let width = upper / bins as f64;
    let mut counts = vec![0u64; bins];
    for &v in values {
        counts[bin_index(v, 0.0, width, bins)] += 1;
    }
    Ok(Histogram1D { upper, counts })
}
