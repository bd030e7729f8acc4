//! Correlated variation of the channel across resource blocks.
//!
//! Each `(antenna, user, cluster)` link owns a `t_max × f_max` grid of
//! zero-mean unit-variance complex Gaussians. At most one grid dimension is
//! correlated: along time the columns are `CN(0, Σ_col)` draws (Doppler
//! spread), along frequency the rows are `CN(0, Σ_row)` draws (delay spread).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::analytics::eigenvalues_hermitian;
use crate::error::{Error, Result};
use crate::rng::Substream;
use crate::spatial::ResourceGrid;

/// Largest accepted deviation from Hermitian symmetry or unit diagonal.
pub const STRUCTURE_TOLERANCE: f64 = 1e-10;
/// Smallest accepted eigenvalue (or Cholesky pivot) of a covariance matrix.
pub const PSD_TOLERANCE: f64 = -1e-10;
/// Added to the covariance diagonal before factorization.
pub const CHOLESKY_JITTER: f64 = 1e-12;

pub type ComplexMatrix = DMatrix<Complex64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CorrelationMode {
    /// Every grid entry independent.
    #[default]
    None,
    /// Correlated along the RB time index.
    Time,
    /// Correlated along the RB frequency index.
    Frequency,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CorrelationModel {
    /// `Σ[a, b] = ρ^|a − b|`.
    Exponential { rho: f64 },
    /// A Hermitian PSD matrix with unit diagonal, e.g. a sampled Jakes profile.
    Custom(ComplexMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSpec {
    pub mode: CorrelationMode,
    pub model: CorrelationModel,
    /// Size of the correlated dimension.
    pub length: usize,
}

impl Default for CorrelationSpec {
    fn default() -> Self {
        Self::none()
    }
}

impl CorrelationSpec {
    pub fn none() -> Self {
        Self {
            mode: CorrelationMode::None,
            model: CorrelationModel::Exponential { rho: 0.0 },
            length: 1,
        }
    }

    pub fn exponential(mode: CorrelationMode, rho: f64, length: usize) -> Self {
        Self {
            mode,
            model: CorrelationModel::Exponential { rho },
            length,
        }
    }

    pub fn custom(mode: CorrelationMode, matrix: ComplexMatrix) -> Self {
        let length = matrix.nrows();
        Self {
            mode,
            model: CorrelationModel::Custom(matrix),
            length,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.length == 0 {
            return Err(Error::invalid("length", "must be at least 1", self.length));
        }
        match &self.model {
            CorrelationModel::Exponential { rho } => {
                if !(0.0..1.0).contains(rho) {
                    return Err(Error::invalid("rho", "must lie in [0, 1)", rho));
                }
            }
            CorrelationModel::Custom(m) => {
                if m.nrows() != m.ncols() {
                    return Err(Error::DimensionMismatch {
                        what: "custom covariance columns",
                        expected: m.nrows(),
                        found: m.ncols(),
                    });
                }
                if m.nrows() != self.length {
                    return Err(Error::DimensionMismatch {
                        what: "custom covariance",
                        expected: self.length,
                        found: m.nrows(),
                    });
                }
                check_hermitian(m, STRUCTURE_TOLERANCE)?;
                for i in 0..m.nrows() {
                    let d = m[(i, i)];
                    if (d.re - 1.0).abs() > STRUCTURE_TOLERANCE || d.im.abs() > STRUCTURE_TOLERANCE
                    {
                        return Err(Error::NotUnitDiagonal {
                            index: i,
                            value: d.re,
                        });
                    }
                }
                let eig = eigenvalues_hermitian(m)?;
                if let Some((index, &value)) =
                    eig.iter().enumerate().find(|(_, &v)| v < PSD_TOLERANCE)
                {
                    return Err(Error::NotPositiveSemidefinite { index, value });
                }
            }
        }
        Ok(())
    }

    /// Length the correlated dimension must have on `grid`, if any.
    fn expected_length(&self, grid: &ResourceGrid) -> Option<usize> {
        match self.mode {
            CorrelationMode::None => None,
            CorrelationMode::Time => Some(grid.t_max),
            CorrelationMode::Frequency => Some(grid.f_max),
        }
    }

    pub fn check_grid(&self, grid: &ResourceGrid) -> Result<()> {
        match self.expected_length(grid) {
            Some(expected) if expected != self.length => Err(Error::DimensionMismatch {
                what: "correlation length",
                expected,
                found: self.length,
            }),
            _ => Ok(()),
        }
    }
}

pub(crate) fn check_hermitian(m: &ComplexMatrix, tol: f64) -> Result<()> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch {
            what: "square matrix",
            expected: n,
            found: m.ncols(),
        });
    }
    let scale = m.iter().fold(1.0_f64, |acc, z| acc.max(z.norm()));
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    if worst > tol * scale {
        Err(Error::NotHermitian { deviation: worst })
    } else {
        Ok(())
    }
}

/// Covariance matrix of the correlated RB dimension.
pub fn build_covariance(spec: &CorrelationSpec) -> Result<ComplexMatrix> {
    spec.validate()?;
    Ok(match &spec.model {
        CorrelationModel::Exponential { rho } => {
            let n = spec.length;
            DMatrix::from_fn(n, n, |a, b| {
                Complex64::new(rho.powi(a.abs_diff(b) as i32), 0.0)
            })
        }
        CorrelationModel::Custom(m) => m.clone(),
    })
}

/// Lower-triangular `L` with `L·Lᴴ = Σ + jitter·I` and real nonnegative
/// diagonal. Pivots in `[PSD_TOLERANCE, 0]` are treated as exact zeros.
pub fn cholesky(sigma: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_hermitian(sigma, STRUCTURE_TOLERANCE)?;
    let n = sigma.nrows();
    let mut l = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..n {
        let mut pivot = sigma[(j, j)].re + CHOLESKY_JITTER;
        for k in 0..j {
            pivot -= l[(j, k)].norm_sqr();
        }
        if pivot < PSD_TOLERANCE {
            return Err(Error::NotPositiveSemidefinite {
                index: j,
                value: pivot,
            });
        }
        if pivot <= 0.0 {
            continue;
        }
        let d = pivot.sqrt();
        l[(j, j)] = Complex64::new(d, 0.0);
        for i in j + 1..n {
            let mut acc = sigma[(i, j)];
            for k in 0..j {
                acc -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = acc / d;
        }
    }
    Ok(l)
}

/// Fading values of one link over the whole resource grid, indexed `(t, f)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QGrid {
    pub values: ComplexMatrix,
}

impl QGrid {
    #[inline]
    pub fn at(&self, t: usize, f: usize) -> Complex64 {
        self.values[(t, f)]
    }
}

/// Samples [`QGrid`]s with a covariance factor computed once.
#[derive(Debug, Clone)]
pub struct QSampler {
    mode: CorrelationMode,
    grid: ResourceGrid,
    factor: Option<ComplexMatrix>,
}

impl QSampler {
    pub fn new(spec: &CorrelationSpec, grid: ResourceGrid) -> Result<Self> {
        grid.validate()?;
        spec.check_grid(&grid)?;
        let factor = match spec.mode {
            CorrelationMode::None => None,
            _ => Some(cholesky(&build_covariance(spec)?)?),
        };
        Ok(Self {
            mode: spec.mode,
            grid,
            factor,
        })
    }

    pub fn grid(&self) -> &ResourceGrid {
        &self.grid
    }

    /// Draws one grid. Along the correlated dimension each vector is `L·z`
    /// with `z` i.i.d. CN(0, 1); vectors are drawn in index order.
    pub fn sample(&self, rng: &mut Substream) -> QGrid {
        let (t_max, f_max) = (self.grid.t_max, self.grid.f_max);
        let mut values = DMatrix::<Complex64>::zeros(t_max, f_max);
        match (&self.factor, self.mode) {
            (Some(l), CorrelationMode::Time) => {
                let mut z = vec![Complex64::default(); t_max];
                for f in 0..f_max {
                    rng.fill_complex_normal(&mut z);
                    for t in 0..t_max {
                        values[(t, f)] = lower_row_dot(l, t, &z);
                    }
                }
            }
            (Some(l), CorrelationMode::Frequency) => {
                let mut z = vec![Complex64::default(); f_max];
                for t in 0..t_max {
                    rng.fill_complex_normal(&mut z);
                    for f in 0..f_max {
                        values[(t, f)] = lower_row_dot(l, f, &z);
                    }
                }
            }
            _ => {
                for f in 0..f_max {
                    for t in 0..t_max {
                        values[(t, f)] = rng.complex_normal();
                    }
                }
            }
        }
        QGrid { values }
    }
}

#[inline]
fn lower_row_dot(l: &ComplexMatrix, row: usize, z: &[Complex64]) -> Complex64 {
    (0..=row).map(|k| l[(row, k)] * z[k]).sum()
}

/// One-off sampling of a single grid.
pub fn sample_q_grid(
    spec: &CorrelationSpec,
    grid: ResourceGrid,
    rng: &mut Substream,
) -> Result<QGrid> {
    Ok(QSampler::new(spec, grid)?.sample(rng))
}
