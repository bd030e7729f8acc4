//! Seeded realization of a full multiuser channel over a resource grid.

use crate::assembly::{assemble_channel, ChannelBlock, LinkGrids};
use crate::error::{Error, Result};
use crate::rng::{domain, StreamSeed};
use crate::spatial::{build_user_pairs, ArrayGeometry, ResourceGrid, SpatialPair, UserSpec};
use crate::stochastic::{CorrelationSpec, QSampler};

/// A validated channel configuration.
///
/// Random quantities of realization `r` come from these substreams:
///
/// | quantity                       | path                        |
/// |--------------------------------|-----------------------------|
/// | directions and phase offsets   | `[SPATIAL, r, user]`        |
/// | fading grid of link (i, j, c)  | `[FADING, r, j, c, i]`      |
#[derive(Debug, Clone)]
pub struct ChannelModel {
    geometry: ArrayGeometry,
    users: Vec<UserSpec>,
    grid: ResourceGrid,
    correlation: CorrelationSpec,
    sampler: QSampler,
    clusters_per_user: Vec<usize>,
}

/// Spatial pairs and per-RB channel matrices of one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub index: u64,
    /// `pairs[j][c]`.
    pub pairs: Vec<Vec<SpatialPair>>,
    /// Time-major: `(0, 0), (0, 1), …, (1, 0), …`.
    pub blocks: Vec<ChannelBlock>,
}

impl ChannelModel {
    pub fn new(
        geometry: ArrayGeometry,
        users: Vec<UserSpec>,
        grid: ResourceGrid,
        correlation: CorrelationSpec,
    ) -> Result<Self> {
        geometry.validate()?;
        if users.is_empty() {
            return Err(Error::EmptyInput("users"));
        }
        for u in &users {
            u.validate(geometry.n_antennas)?;
        }
        let sampler = QSampler::new(&correlation, grid)?;
        let clusters_per_user = users.iter().map(|u| u.clusters.len()).collect();
        Ok(Self {
            geometry,
            users,
            grid,
            correlation,
            sampler,
            clusters_per_user,
        })
    }

    pub fn geometry(&self) -> &ArrayGeometry {
        &self.geometry
    }

    pub fn users(&self) -> &[UserSpec] {
        &self.users
    }

    pub fn grid(&self) -> &ResourceGrid {
        &self.grid
    }

    pub fn correlation(&self) -> &CorrelationSpec {
        &self.correlation
    }

    pub fn n_antennas(&self) -> usize {
        self.geometry.n_antennas
    }

    pub fn n_users(&self) -> usize {
        self.users.len()
    }

    pub fn spatial_pairs(
        &self,
        seed: StreamSeed,
        realization: u64,
    ) -> Result<Vec<Vec<SpatialPair>>> {
        self.users
            .iter()
            .enumerate()
            .map(|(j, user)| {
                let mut rng = seed.substream(&[domain::SPATIAL, realization, j as u64]);
                build_user_pairs(user, &self.geometry, &mut rng)
            })
            .collect()
    }

    pub fn link_grids(&self, seed: StreamSeed, realization: u64) -> LinkGrids {
        LinkGrids::sample(
            &self.sampler,
            self.n_antennas(),
            &self.clusters_per_user,
            |i, j, c| seed.substream(&[domain::FADING, realization, j as u64, c as u64, i as u64]),
        )
    }

    pub fn realize(&self, seed: StreamSeed, realization: u64) -> Result<Realization> {
        let pairs = self.spatial_pairs(seed, realization)?;
        let grids = self.link_grids(seed, realization);
        let mut blocks = Vec::with_capacity(self.grid.n_blocks());
        for t in 0..self.grid.t_max {
            for f in 0..self.grid.f_max {
                blocks.push(assemble_channel(&pairs, &grids, t, f)?);
            }
        }
        Ok(Realization {
            index: realization,
            pairs,
            blocks,
        })
    }
}
