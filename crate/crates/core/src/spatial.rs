//! Deterministic spatial structure of the channel.
//!
//! A cluster seen from a uniform linear array contributes a complex mean
//! `p_i` whose phase advances linearly along the array (slope
//! `2π·(d/λ)·cos θ`) and a real standard deviation `r_i` that grows with the
//! cluster's angular spread. The two always split the cluster power:
//! `|p_i|² + r_i² = β_i`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Substream;

/// Quarter-wavelength antenna spacing.
pub const DEFAULT_SPACING_RATIO: f64 = 0.25;

fn default_spacing_ratio() -> f64 {
    DEFAULT_SPACING_RATIO
}

/// Uniform linear array at the base station.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrayGeometry {
    pub n_antennas: usize,
    /// Antenna spacing as a fraction of the wavelength (d/λ).
    #[serde(default = "default_spacing_ratio")]
    pub spacing_ratio: f64,
}

impl ArrayGeometry {
    pub fn new(n_antennas: usize, spacing_ratio: f64) -> Result<Self> {
        let geometry = Self {
            n_antennas,
            spacing_ratio,
        };
        geometry.validate()?;
        Ok(geometry)
    }

    /// Array with the default λ/4 spacing.
    pub fn quarter_wave(n_antennas: usize) -> Result<Self> {
        Self::new(n_antennas, DEFAULT_SPACING_RATIO)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_antennas == 0 {
            return Err(Error::invalid(
                "n_antennas",
                "must be at least 1",
                self.n_antennas,
            ));
        }
        if !(self.spacing_ratio.is_finite() && self.spacing_ratio > 0.0) {
            return Err(Error::invalid(
                "spacing_ratio",
                "must be a finite positive real",
                self.spacing_ratio,
            ));
        }
        Ok(())
    }

    /// Phase advance between adjacent antennas for a plane wave from `theta`.
    pub fn phase_slope(&self, theta: f64) -> f64 {
        TAU * self.spacing_ratio * theta.cos()
    }
}

/// Direction of a cluster relative to the array axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "AngleOrMarker", into = "AngleOrMarker")]
pub enum Direction {
    /// Fixed angle in radians, in `[0, π)`.
    Fixed(f64),
    /// Drawn uniformly on `[0, π)` independently for this cluster.
    Random,
    /// The bearing of the owning user, drawn uniformly on `[0, π)` once per
    /// user and shared by every cluster of that user marked `Shared`.
    Shared,
}

/// Common phase of a cluster's mean vector at the first antenna.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "AngleOrRandom", into = "AngleOrRandom")]
pub enum PhaseOffset {
    Fixed(f64),
    /// Uniform on `[0, 2π)`; makes the cluster's mean uncorrelated with the
    /// other clusters of the same link.
    Random,
}

impl Default for PhaseOffset {
    fn default() -> Self {
        PhaseOffset::Fixed(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Marker {
    Random,
    Shared,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum AngleOrMarker {
    Angle(f64),
    Marker(Marker),
}

impl From<AngleOrMarker> for Direction {
    fn from(v: AngleOrMarker) -> Self {
        match v {
            AngleOrMarker::Angle(a) => Direction::Fixed(a),
            AngleOrMarker::Marker(Marker::Random) => Direction::Random,
            AngleOrMarker::Marker(Marker::Shared) => Direction::Shared,
        }
    }
}

impl From<Direction> for AngleOrMarker {
    fn from(d: Direction) -> Self {
        match d {
            Direction::Fixed(a) => AngleOrMarker::Angle(a),
            Direction::Random => AngleOrMarker::Marker(Marker::Random),
            Direction::Shared => AngleOrMarker::Marker(Marker::Shared),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RandomMarker {
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum AngleOrRandom {
    Angle(f64),
    Marker(RandomMarker),
}

impl From<AngleOrRandom> for PhaseOffset {
    fn from(v: AngleOrRandom) -> Self {
        match v {
            AngleOrRandom::Angle(a) => PhaseOffset::Fixed(a),
            AngleOrRandom::Marker(RandomMarker::Random) => PhaseOffset::Random,
        }
    }
}

impl From<PhaseOffset> for AngleOrRandom {
    fn from(p: PhaseOffset) -> Self {
        match p {
            PhaseOffset::Fixed(a) => AngleOrRandom::Angle(a),
            PhaseOffset::Random => AngleOrRandom::Marker(RandomMarker::Random),
        }
    }
}

/// Mean received power of a cluster: one value for the whole array or one
/// value per antenna.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeanPower {
    Scalar(f64),
    PerAntenna(Vec<f64>),
}

impl MeanPower {
    #[inline]
    pub fn at(&self, antenna: usize) -> f64 {
        match self {
            MeanPower::Scalar(b) => *b,
            MeanPower::PerAntenna(v) => v[antenna],
        }
    }
}

impl From<f64> for MeanPower {
    fn from(b: f64) -> Self {
        MeanPower::Scalar(b)
    }
}

/// One cluster of scatterers as seen by one user link.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClusterSpec {
    pub direction: Direction,
    /// 0 is a point source (fully deterministic), 1 is isotropic (i.i.d.).
    pub spread_fraction: f64,
    pub mean_power: MeanPower,
    #[serde(default)]
    pub phase_offset: PhaseOffset,
}

impl ClusterSpec {
    pub fn new(
        direction: Direction,
        spread_fraction: f64,
        mean_power: impl Into<MeanPower>,
    ) -> Self {
        Self {
            direction,
            spread_fraction,
            mean_power: mean_power.into(),
            phase_offset: PhaseOffset::default(),
        }
    }

    pub fn with_phase_offset(mut self, phase_offset: PhaseOffset) -> Self {
        self.phase_offset = phase_offset;
        self
    }

    pub fn validate(&self, n_antennas: usize) -> Result<()> {
        if let Direction::Fixed(theta) = self.direction {
            if !(0.0..PI).contains(&theta) {
                return Err(Error::invalid("direction", "must lie in [0, π)", theta));
            }
        }
        let s = self.spread_fraction;
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::invalid("spread_fraction", "must lie in [0, 1]", s));
        }
        match &self.mean_power {
            MeanPower::Scalar(b) => check_power(*b)?,
            MeanPower::PerAntenna(v) => {
                if v.len() != n_antennas {
                    return Err(Error::DimensionMismatch {
                        what: "mean_power",
                        expected: n_antennas,
                        found: v.len(),
                    });
                }
                v.iter().try_for_each(|&b| check_power(b))?;
            }
        }
        if let PhaseOffset::Fixed(phi) = self.phase_offset {
            if !phi.is_finite() {
                return Err(Error::invalid(
                    "phase_offset",
                    "must be a finite angle or \"random\"",
                    phi,
                ));
            }
        }
        Ok(())
    }
}

fn check_power(b: f64) -> Result<()> {
    if b.is_finite() && b > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid("mean_power", "must be finite and > 0", b))
    }
}

/// The clusters that connect one user to the array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UserSpec {
    pub clusters: Vec<ClusterSpec>,
}

impl UserSpec {
    pub fn new(clusters: Vec<ClusterSpec>) -> Self {
        Self { clusters }
    }

    pub fn validate(&self, n_antennas: usize) -> Result<()> {
        if self.clusters.is_empty() {
            return Err(Error::EmptyInput("clusters"));
        }
        self.clusters
            .iter()
            .try_for_each(|c| c.validate(n_antennas))
    }

    /// Total mean power at `antenna`, summed over clusters.
    pub fn total_power(&self, antenna: usize) -> f64 {
        self.clusters.iter().map(|c| c.mean_power.at(antenna)).sum()
    }
}

/// Block-fading resource grid: `t_max × f_max` resource blocks of
/// `symbols_per_rb` symbols each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResourceGrid {
    pub t_max: usize,
    pub f_max: usize,
    pub symbols_per_rb: usize,
}

impl Default for ResourceGrid {
    fn default() -> Self {
        Self {
            t_max: 1,
            f_max: 1,
            symbols_per_rb: 1,
        }
    }
}

impl ResourceGrid {
    pub fn new(t_max: usize, f_max: usize, symbols_per_rb: usize) -> Result<Self> {
        let grid = Self {
            t_max,
            f_max,
            symbols_per_rb,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        for (field, v) in [
            ("t_max", self.t_max),
            ("f_max", self.f_max),
            ("symbols_per_rb", self.symbols_per_rb),
        ] {
            if v == 0 {
                return Err(Error::invalid(field, "must be at least 1", v));
            }
        }
        Ok(())
    }

    pub fn n_blocks(&self) -> usize {
        self.t_max * self.f_max
    }
}

/// Spatial mean and spatial standard deviation of one cluster across the
/// array, for one user.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialPair {
    pub p: Vec<Complex64>,
    pub r: Vec<f64>,
}

impl SpatialPair {
    pub fn n_antennas(&self) -> usize {
        self.p.len()
    }

    /// `|p_i|² + r_i²`, the mean power carried at each antenna.
    pub fn power(&self) -> Vec<f64> {
        self.p
            .iter()
            .zip(&self.r)
            .map(|(p, r)| p.norm_sqr() + r * r)
            .collect()
    }
}

/// Phase of a plane wave from `theta` at each antenna, reduced to `[0, 2π)`.
pub fn phase_ramp(theta: f64, geometry: &ArrayGeometry) -> Vec<f64> {
    let slope = geometry.phase_slope(theta);
    (0..geometry.n_antennas)
        .map(|i| wrap_phase(slope * i as f64))
        .collect()
}

fn wrap_phase(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    // rem_euclid may round up to exactly TAU for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Spatial standard deviation for a cluster of power `beta` and spread
/// fraction `s`: `r = s·√β`.
pub fn spread_to_std(beta: f64, s: f64) -> Result<f64> {
    check_power(beta)?;
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::invalid("spread_fraction", "must lie in [0, 1]", s));
    }
    Ok(s * beta.sqrt())
}

/// Draws a direction uniformly on `[0, π)`.
pub fn random_direction(rng: &mut Substream) -> f64 {
    PI * rng.uniform()
}

/// Builds the `(p, r)` pair of one cluster.
///
/// `Random` and `Shared` directions are both drawn from `rng` here; use
/// [`build_user_pairs`] to share one bearing across a user's clusters. When
/// both are random, the direction is drawn before the phase offset.
pub fn build_spatial_pair(
    cluster: &ClusterSpec,
    geometry: &ArrayGeometry,
    rng: &mut Substream,
) -> Result<SpatialPair> {
    resolved_pair(cluster, geometry, None, rng)
}

/// Builds the pairs of every cluster of `user`.
///
/// The user bearing is always drawn first (whether or not a cluster uses it),
/// then each cluster draws its own random quantities in order.
pub fn build_user_pairs(
    user: &UserSpec,
    geometry: &ArrayGeometry,
    rng: &mut Substream,
) -> Result<Vec<SpatialPair>> {
    let bearing = random_direction(rng);
    user.clusters
        .iter()
        .map(|c| resolved_pair(c, geometry, Some(bearing), rng))
        .collect()
}

fn resolved_pair(
    cluster: &ClusterSpec,
    geometry: &ArrayGeometry,
    bearing: Option<f64>,
    rng: &mut Substream,
) -> Result<SpatialPair> {
    geometry.validate()?;
    cluster.validate(geometry.n_antennas)?;
    let theta = match (cluster.direction, bearing) {
        (Direction::Fixed(theta), _) => theta,
        (Direction::Shared, Some(b)) => b,
        (Direction::Random, _) | (Direction::Shared, None) => random_direction(rng),
    };
    let offset = match cluster.phase_offset {
        PhaseOffset::Fixed(phi) => phi,
        PhaseOffset::Random => TAU * rng.uniform(),
    };
    Ok(pair_for_direction(cluster, geometry, theta, offset))
}

fn pair_for_direction(
    cluster: &ClusterSpec,
    geometry: &ArrayGeometry,
    theta: f64,
    offset: f64,
) -> SpatialPair {
    let s = cluster.spread_fraction;
    let slope = geometry.phase_slope(theta);
    let n = geometry.n_antennas;
    let mut p = Vec::with_capacity(n);
    let mut r = Vec::with_capacity(n);
    for i in 0..n {
        let beta = cluster.mean_power.at(i);
        let std = s * beta.sqrt();
        let magnitude = (beta - std * std).max(0.0).sqrt();
        let phase = wrap_phase(slope * i as f64 + offset);
        p.push(Complex64::from_polar(magnitude, phase));
        r.push(std);
    }
    SpatialPair { p, r }
}
