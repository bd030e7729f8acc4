//! Channel statistics: Gram matrices, eigenvalue distributions, coefficient
//! histograms, user cross-correlation and power along the array.

mod distribution;
mod eigen;
mod gram;

pub use distribution::{
    coefficient_histogram, empirical_cdf, magnitude_histogram, EmpiricalCdf, Histogram1D,
    Histogram2D, DEFAULT_BINS,
};
pub use eigen::{eigenvalues_hermitian, MAX_SWEEPS, OFF_DIAGONAL_TOLERANCE};
pub use gram::{
    gram, offdiag_exceedance, power_profile, user_correlation, CorrelationAccumulator, GramStats,
    PowerAccumulator, UserCorrelationMatrix,
};
