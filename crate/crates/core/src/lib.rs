//! Statistical block-fading channel model for multiuser massive MIMO.
//!
//! The channel of resource block `(t, f)` is
//!
//! ```text
//! H(t, f) = Σ_c { P_c + R_c ∘ Q_c(t, f) }
//! ```
//!
//! where `P_c` holds the deterministic phase ramp of cluster `c` across the
//! array, `R_c` its spatial standard deviation (set by angular spread), and
//! `Q_c` unit-variance complex Gaussians correlated along time or frequency.
//!
//! ```
//! use blockfade_core::{
//!     ArrayGeometry, ChannelModel, ClusterSpec, CorrelationSpec, Direction, ResourceGrid,
//!     StreamSeed, UserSpec,
//! };
//!
//! let user = UserSpec::new(vec![ClusterSpec::new(Direction::Random, 0.1, 1.0)]);
//! let model = ChannelModel::new(
//!     ArrayGeometry::quarter_wave(128)?,
//!     vec![user.clone(), user],
//!     ResourceGrid::default(),
//!     CorrelationSpec::none(),
//! )?;
//! let realization = model.realize(StreamSeed(7), 0)?;
//! let stats = blockfade_core::gram(&realization.blocks[0]);
//! assert_eq!(stats.offdiag_mags.len(), 1);
//! # Ok::<(), blockfade_core::Error>(())
//! ```

pub mod analytics;
pub mod assembly;
pub mod error;
pub mod model;
pub mod rng;
pub mod spatial;
pub mod stochastic;

pub use analytics::{
    coefficient_histogram, eigenvalues_hermitian, empirical_cdf, gram, magnitude_histogram,
    offdiag_exceedance, power_profile, user_correlation, EmpiricalCdf, GramStats, Histogram1D,
    Histogram2D, UserCorrelationMatrix,
};
pub use assembly::{
    assemble_channel, qpsk_symbols, synthesize_uplink, ChannelBlock, LinkGrids, UplinkFrame,
};
pub use error::{Error, Result};
pub use model::{ChannelModel, Realization};
pub use rng::{StreamSeed, Substream};
pub use spatial::{
    build_spatial_pair, build_user_pairs, phase_ramp, spread_to_std, ArrayGeometry, ClusterSpec,
    Direction, MeanPower, PhaseOffset, ResourceGrid, SpatialPair, UserSpec,
};
pub use stochastic::{
    build_covariance, cholesky, sample_q_grid, ComplexMatrix, CorrelationMode, CorrelationModel,
    CorrelationSpec, QGrid, QSampler,
};

pub use nalgebra;
pub use num_complex::{self, Complex64};
