//! Statistics of the user channel vectors: Gram matrix, cross-correlation
//! and average power along the array.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::eigen::eigenvalues_hermitian;
use crate::assembly::ChannelBlock;
use crate::error::{Error, Result};
use crate::stochastic::ComplexMatrix;

/// `G = (1/N)·HᴴH` and its partition into diagonal and off-diagonal parts.
#[derive(Debug, Clone, PartialEq)]
pub struct GramStats {
    pub g: ComplexMatrix,
    /// `|g_ij|` for every unordered pair `i < j`, row by row.
    pub offdiag_mags: Vec<f64>,
    pub diag: Vec<f64>,
}

impl GramStats {
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        eigenvalues_hermitian(&self.g)
    }
}

pub fn gram(block: &ChannelBlock) -> GramStats {
    gram_of(&block.h)
}

pub(crate) fn gram_of(h: &ComplexMatrix) -> GramStats {
    let (n, k) = h.shape();
    let scale = 1.0 / n as f64;
    let mut g = DMatrix::<Complex64>::zeros(k, k);
    let mut offdiag_mags = Vec::with_capacity(k * k.saturating_sub(1) / 2);
    let mut diag = Vec::with_capacity(k);
    for i in 0..k {
        let hi = h.column(i);
        let d = hi.iter().map(|z| z.norm_sqr()).sum::<f64>() * scale;
        g[(i, i)] = Complex64::new(d, 0.0);
        diag.push(d);
        for j in i + 1..k {
            let v = hi.dotc(&h.column(j)) * scale;
            g[(i, j)] = v;
            g[(j, i)] = v.conj();
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            offdiag_mags.push(g[(i, j)].norm());
        }
    }
    GramStats {
        g,
        offdiag_mags,
        diag,
    }
}

/// Fraction of off-diagonal magnitudes strictly above `threshold`.
pub fn offdiag_exceedance(stats: &[GramStats], threshold: f64) -> f64 {
    let (mut above, mut total) = (0usize, 0usize);
    for s in stats {
        above += s.offdiag_mags.iter().filter(|&&m| m > threshold).count();
        total += s.offdiag_mags.len();
    }
    if total == 0 {
        0.0
    } else {
        above as f64 / total as f64
    }
}

/// Mean normalized inner product `E[|h_iᴴh_j| / (‖h_i‖·‖h_j‖)]` between users.
#[derive(Debug, Clone, PartialEq)]
pub struct UserCorrelationMatrix {
    pub rho: DMatrix<f64>,
}

impl UserCorrelationMatrix {
    pub fn n_users(&self) -> usize {
        self.rho.nrows()
    }

    pub fn mean_offdiag(&self) -> f64 {
        let k = self.n_users();
        let mut sum = 0.0;
        for i in 0..k {
            for j in i + 1..k {
                sum += self.rho[(i, j)];
            }
        }
        sum / (k * (k - 1) / 2) as f64
    }
}

/// Running sum behind [`user_correlation`]; partial sums over disjoint
/// realization ranges can be merged.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationAccumulator {
    sum: DMatrix<f64>,
    count: u64,
}

impl CorrelationAccumulator {
    pub fn new(n_users: usize) -> Self {
        Self {
            sum: DMatrix::zeros(n_users, n_users),
            count: 0,
        }
    }

    pub fn add(&mut self, block: &ChannelBlock) -> Result<()> {
        let h = &block.h;
        let k = self.sum.nrows();
        if h.ncols() != k {
            return Err(Error::DimensionMismatch {
                what: "users",
                expected: k,
                found: h.ncols(),
            });
        }
        let norms: Vec<f64> = (0..k).map(|j| h.column(j).norm()).collect();
        if let Some(user) = norms.iter().position(|&v| v == 0.0) {
            return Err(Error::DegenerateUser { user });
        }
        for i in 0..k {
            for j in i + 1..k {
                let v = h.column(i).dotc(&h.column(j)).norm() / (norms[i] * norms[j]);
                self.sum[(i, j)] += v;
            }
        }
        self.count += 1;
        Ok(())
    }

    pub fn merge(&mut self, other: &Self) {
        self.sum += &other.sum;
        self.count += other.count;
    }

    pub fn finish(&self) -> Result<UserCorrelationMatrix> {
        let k = self.sum.nrows();
        if self.count == 0 {
            return Err(Error::EmptyInput("realizations"));
        }
        if k < 2 {
            return Err(Error::invalid(
                "users",
                "correlation needs at least 2 users",
                k,
            ));
        }
        let n = self.count as f64;
        let rho = DMatrix::from_fn(k, k, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Equal => 1.0,
            std::cmp::Ordering::Less => (self.sum[(i, j)] / n).min(1.0),
            std::cmp::Ordering::Greater => (self.sum[(j, i)] / n).min(1.0),
        });
        Ok(UserCorrelationMatrix { rho })
    }
}

pub fn user_correlation(blocks: &[ChannelBlock]) -> Result<UserCorrelationMatrix> {
    let first = blocks.first().ok_or(Error::EmptyInput("realizations"))?;
    let mut acc = CorrelationAccumulator::new(first.n_users());
    for b in blocks {
        acc.add(b)?;
    }
    acc.finish()
}

/// Running per-antenna, per-user sum of `|h_ij|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerAccumulator {
    sum: DMatrix<f64>,
    count: u64,
}

impl PowerAccumulator {
    pub fn new(n_antennas: usize, n_users: usize) -> Self {
        Self {
            sum: DMatrix::zeros(n_antennas, n_users),
            count: 0,
        }
    }

    pub fn add(&mut self, block: &ChannelBlock) -> Result<()> {
        if block.h.shape() != self.sum.shape() {
            return Err(Error::DimensionMismatch {
                what: "channel block antennas x users",
                expected: self.sum.len(),
                found: block.h.len(),
            });
        }
        self.sum.zip_apply(&block.h, |acc, z| *acc += z.norm_sqr());
        self.count += 1;
        Ok(())
    }

    pub fn merge(&mut self, other: &Self) {
        self.sum += &other.sum;
        self.count += other.count;
    }

    pub fn finish(&self) -> Result<DMatrix<f64>> {
        if self.count == 0 {
            return Err(Error::EmptyInput("realizations"));
        }
        Ok(&self.sum / self.count as f64)
    }
}

/// Mean `|h_ij|²` over all blocks, as an N×K matrix.
pub fn power_profile(blocks: &[ChannelBlock]) -> Result<DMatrix<f64>> {
    let first = blocks.first().ok_or(Error::EmptyInput("realizations"))?;
    let mut acc = PowerAccumulator::new(first.n_antennas(), first.n_users());
    for b in blocks {
        acc.add(b)?;
    }
    acc.finish()
}
