//! Composition of per-RB channel matrices and uplink received frames.
//!
//! `h_ij(t, f) = Σ_c [ p_ijc + r_ijc · q_ijc(t, f) ]`. No normalization is
//! applied on top of the cluster powers.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rng::Substream;
use crate::spatial::SpatialPair;
use crate::stochastic::{ComplexMatrix, QGrid, QSampler};

/// The N×K channel of one resource block. `t` and `f` are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelBlock {
    pub t: usize,
    pub f: usize,
    pub h: ComplexMatrix,
}

impl ChannelBlock {
    pub fn n_antennas(&self) -> usize {
        self.h.nrows()
    }

    pub fn n_users(&self) -> usize {
        self.h.ncols()
    }
}

/// Fading grids for every `(antenna, user, cluster)` link of one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkGrids {
    n_antennas: usize,
    clusters_per_user: Vec<usize>,
    offsets: Vec<usize>,
    grids: Vec<QGrid>,
}

impl LinkGrids {
    /// `grids` is ordered user-major, then cluster, then antenna.
    pub fn new(
        n_antennas: usize,
        clusters_per_user: Vec<usize>,
        grids: Vec<QGrid>,
    ) -> Result<Self> {
        let offsets = prefix_offsets(&clusters_per_user);
        let expected = n_antennas * clusters_per_user.iter().sum::<usize>();
        if grids.len() != expected {
            return Err(Error::DimensionMismatch {
                what: "link grids",
                expected,
                found: grids.len(),
            });
        }
        if let Some(first) = grids.first() {
            let shape = first.values.shape();
            if let Some(bad) = grids.iter().find(|g| g.values.shape() != shape) {
                return Err(Error::DimensionMismatch {
                    what: "grid blocks",
                    expected: shape.0 * shape.1,
                    found: bad.values.len(),
                });
            }
        }
        Ok(Self {
            n_antennas,
            clusters_per_user,
            offsets,
            grids,
        })
    }

    /// Draws every link grid, taking the stream for link `(i, j, c)` from
    /// `stream`.
    pub fn sample(
        sampler: &QSampler,
        n_antennas: usize,
        clusters_per_user: &[usize],
        mut stream: impl FnMut(usize, usize, usize) -> Substream,
    ) -> Self {
        let mut grids = Vec::with_capacity(n_antennas * clusters_per_user.iter().sum::<usize>());
        for (j, &nc) in clusters_per_user.iter().enumerate() {
            for c in 0..nc {
                for i in 0..n_antennas {
                    grids.push(sampler.sample(&mut stream(i, j, c)));
                }
            }
        }
        Self {
            n_antennas,
            clusters_per_user: clusters_per_user.to_vec(),
            offsets: prefix_offsets(clusters_per_user),
            grids,
        }
    }

    pub fn n_antennas(&self) -> usize {
        self.n_antennas
    }

    pub fn n_users(&self) -> usize {
        self.clusters_per_user.len()
    }

    pub fn clusters_per_user(&self) -> &[usize] {
        &self.clusters_per_user
    }

    pub fn grid_shape(&self) -> Option<(usize, usize)> {
        self.grids.first().map(|g| g.values.shape())
    }

    #[inline]
    pub fn get(&self, antenna: usize, user: usize, cluster: usize) -> &QGrid {
        &self.grids[(self.offsets[user] + cluster) * self.n_antennas + antenna]
    }
}

fn prefix_offsets(counts: &[usize]) -> Vec<usize> {
    counts
        .iter()
        .scan(0, |acc, &c| {
            let start = *acc;
            *acc += c;
            Some(start)
        })
        .collect()
}

/// Channel matrix of resource block `(t, f)`; `pairs[j][c]` is the spatial
/// pair of cluster `c` of user `j`.
pub fn assemble_channel(
    pairs: &[Vec<SpatialPair>],
    grids: &LinkGrids,
    t: usize,
    f: usize,
) -> Result<ChannelBlock> {
    let n = grids.n_antennas();
    if pairs.len() != grids.n_users() {
        return Err(Error::DimensionMismatch {
            what: "users",
            expected: grids.n_users(),
            found: pairs.len(),
        });
    }
    for (user_pairs, &nc) in pairs.iter().zip(grids.clusters_per_user()) {
        if user_pairs.len() != nc {
            return Err(Error::DimensionMismatch {
                what: "clusters",
                expected: nc,
                found: user_pairs.len(),
            });
        }
        if let Some(bad) = user_pairs.iter().find(|p| p.p.len() != n || p.r.len() != n) {
            return Err(Error::DimensionMismatch {
                what: "antennas",
                expected: n,
                found: bad.p.len().min(bad.r.len()),
            });
        }
    }
    if let Some((t_max, f_max)) = grids.grid_shape() {
        if t >= t_max {
            return Err(Error::DimensionMismatch {
                what: "RB time index bound",
                expected: t_max,
                found: t + 1,
            });
        }
        if f >= f_max {
            return Err(Error::DimensionMismatch {
                what: "RB frequency index bound",
                expected: f_max,
                found: f + 1,
            });
        }
    }

    let mut h = DMatrix::<Complex64>::zeros(n, pairs.len());
    for (j, user_pairs) in pairs.iter().enumerate() {
        for (c, pair) in user_pairs.iter().enumerate() {
            for i in 0..n {
                let r = pair.r[i];
                let mut v = pair.p[i];
                if r != 0.0 {
                    v += grids.get(i, j, c).at(t, f) * r;
                }
                h[(i, j)] += v;
            }
        }
    }
    Ok(ChannelBlock { t, f, h })
}

/// Mean symbol energy tolerance applied to frames with at least
/// [`ENERGY_CHECK_MIN_SYMBOLS`] symbols.
pub const ENERGY_TOLERANCE: f64 = 0.01;
pub const ENERGY_CHECK_MIN_SYMBOLS: usize = 100;

/// `Y = H·X + W` for one resource block.
#[derive(Debug, Clone, PartialEq)]
pub struct UplinkFrame {
    pub y: ComplexMatrix,
    pub x: ComplexMatrix,
    pub noise_var: f64,
}

impl UplinkFrame {
    /// Checks the unit mean symbol energy of `x` when it has at least
    /// [`ENERGY_CHECK_MIN_SYMBOLS`] columns.
    pub fn new(y: ComplexMatrix, x: ComplexMatrix, noise_var: f64) -> Result<Self> {
        if x.ncols() >= ENERGY_CHECK_MIN_SYMBOLS {
            let mean_energy = x.norm_squared() / x.len() as f64;
            if (mean_energy - 1.0).abs() > ENERGY_TOLERANCE {
                return Err(Error::SymbolEnergy { mean_energy });
            }
        }
        Ok(Self { y, x, noise_var })
    }
}

/// Unit-modulus QPSK symbols `(±1 ± i)/√2`, K×T.
pub fn qpsk_symbols(n_users: usize, n_symbols: usize, rng: &mut Substream) -> ComplexMatrix {
    let a = std::f64::consts::FRAC_1_SQRT_2;
    let mut bits = 0u64;
    let mut left = 0;
    DMatrix::from_fn(n_users, n_symbols, |_, _| {
        if left == 0 {
            bits = rng.next_u64();
            left = 32;
        }
        let re = if bits & 1 == 0 { a } else { -a };
        let im = if bits & 2 == 0 { a } else { -a };
        bits >>= 2;
        left -= 1;
        Complex64::new(re, im)
    })
}

/// Received block `y = h·x + w` with `w` i.i.d. CN(0, σ²).
pub fn synthesize_uplink(
    block: &ChannelBlock,
    x: &ComplexMatrix,
    noise_var: f64,
    rng: &mut Substream,
) -> Result<UplinkFrame> {
    if !(noise_var.is_finite() && noise_var >= 0.0) {
        return Err(Error::invalid(
            "noise_var",
            "must be finite and >= 0",
            noise_var,
        ));
    }
    if x.nrows() != block.n_users() {
        return Err(Error::DimensionMismatch {
            what: "transmit streams",
            expected: block.n_users(),
            found: x.nrows(),
        });
    }
    if x.ncols() == 0 {
        return Err(Error::EmptyInput("transmit symbols"));
    }
    let mut y = &block.h * x;
    if noise_var > 0.0 {
        let sigma = noise_var.sqrt();
        // column-major: all antennas of symbol 0, then symbol 1, ...
        for w in y.iter_mut() {
            *w += rng.complex_normal() * sigma;
        }
    }
    UplinkFrame::new(y, x.clone(), noise_var)
}
