//! Named scenarios.
//!
//! LOS and NLOS users have three clusters with mean power split
//! {0.5, 0.3, 0.2} (total 1). LOS spread fractions are {0.05, 0.1, 0.15} and
//! NLOS spread fractions {0.6, 0.8, 1.0}. The clusters of a user share one
//! uniformly drawn bearing and each cluster gets a uniform random phase.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use blockfade_core::{
    ArrayGeometry, ClusterSpec, Direction, MeanPower, PhaseOffset, ResourceGrid, UserSpec,
};

use crate::config::{ConfigError, CorrelationConfig, OutputKind, ScenarioConfig, DEFAULT_BINS};

/// Seed shared by every preset.
pub const PRESET_SEED: u64 = 2016;
pub const PRESET_REALIZATIONS: u64 = 1000;

pub const CLUSTER_POWERS: [f64; 3] = [0.5, 0.3, 0.2];
pub const LOS_SPREADS: [f64; 3] = [0.05, 0.1, 0.15];
pub const NLOS_SPREADS: [f64; 3] = [0.6, 0.8, 1.0];

/// Relative depth of the per-antenna power ripple in `fig6`.
pub const FIG6_RIPPLE: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    Iid,
    Nlos,
    Los,
    PaperA,
    PaperB,
    PaperC,
    PaperD,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
}

impl Preset {
    pub const ALL: [Preset; 12] = [
        Preset::Iid,
        Preset::Nlos,
        Preset::Los,
        Preset::PaperA,
        Preset::PaperB,
        Preset::PaperC,
        Preset::PaperD,
        Preset::Fig2,
        Preset::Fig3,
        Preset::Fig4,
        Preset::Fig5,
        Preset::Fig6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Iid => "iid",
            Preset::Nlos => "nlos",
            Preset::Los => "los",
            Preset::PaperA => "paper-A",
            Preset::PaperB => "paper-B",
            Preset::PaperC => "paper-C",
            Preset::PaperD => "paper-D",
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Fig6 => "fig6",
        }
    }

    pub fn names() -> Vec<&'static str> {
        Self::ALL.iter().map(|p| p.name()).collect()
    }

    pub fn config(self) -> ScenarioConfig {
        use OutputKind::*;
        let correlation_outputs = vec![CorrelationMatrix, CrossCorrelation, Eigencdf];
        match self {
            Preset::Iid => scenario(
                128,
                vec![single_cluster(1.0); 6],
                PRESET_REALIZATIONS,
                vec![
                    Eigencdf,
                    CrossCorrelation,
                    CorrelationMatrix,
                    Histogram,
                    PowerProfile,
                ],
            ),
            Preset::Nlos => scenario(
                128,
                vec![nlos_user(); 6],
                PRESET_REALIZATIONS,
                vec![Eigencdf, CorrelationMatrix],
            ),
            Preset::Los => scenario(
                128,
                vec![los_user(); 6],
                PRESET_REALIZATIONS,
                vec![Eigencdf, CorrelationMatrix],
            ),
            Preset::PaperA => scenario(
                128,
                vec![nlos_user(); 3],
                PRESET_REALIZATIONS,
                correlation_outputs,
            ),
            Preset::PaperB => scenario(
                128,
                vec![los_user(); 3],
                PRESET_REALIZATIONS,
                correlation_outputs,
            ),
            Preset::PaperC => scenario(
                20,
                vec![nlos_user(); 3],
                PRESET_REALIZATIONS,
                correlation_outputs,
            ),
            Preset::PaperD => scenario(
                20,
                vec![los_user(); 3],
                PRESET_REALIZATIONS,
                correlation_outputs,
            ),
            Preset::Fig2 => scenario(
                128,
                vec![single_cluster(0.1)],
                PRESET_REALIZATIONS,
                vec![Histogram],
            ),
            Preset::Fig3 => scenario(
                128,
                vec![single_cluster(0.5)],
                PRESET_REALIZATIONS,
                vec![Histogram],
            ),
            Preset::Fig4 => scenario(
                128,
                vec![single_cluster(0.1); 2],
                2000,
                vec![CrossCorrelation],
            ),
            Preset::Fig5 => scenario(
                20,
                vec![nlos_user(); 6],
                PRESET_REALIZATIONS,
                vec![Eigencdf],
            ),
            Preset::Fig6 => scenario(
                128,
                (0..6).map(|j| rippled_user(j, 6, 128)).collect(),
                PRESET_REALIZATIONS,
                vec![PowerProfile],
            ),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| ConfigError::UnknownPreset(s.to_string()))
    }
}

fn scenario(
    n: usize,
    users: Vec<UserSpec>,
    realizations: u64,
    outputs: Vec<OutputKind>,
) -> ScenarioConfig {
    ScenarioConfig {
        seed: PRESET_SEED,
        geometry: ArrayGeometry::quarter_wave(n).expect("preset array size is positive"),
        users,
        grid: ResourceGrid::default(),
        correlation: CorrelationConfig::default(),
        realizations,
        outputs,
        bins: DEFAULT_BINS,
    }
}

/// One cluster of unit power in a random direction.
pub fn single_cluster(spread: f64) -> UserSpec {
    UserSpec::new(vec![ClusterSpec::new(Direction::Random, spread, 1.0)])
}

fn three_cluster_user(spreads: [f64; 3]) -> UserSpec {
    UserSpec::new(
        spreads
            .iter()
            .zip(CLUSTER_POWERS)
            .map(|(&s, beta)| {
                ClusterSpec::new(Direction::Shared, s, beta).with_phase_offset(PhaseOffset::Random)
            })
            .collect(),
    )
}

pub fn nlos_user() -> UserSpec {
    three_cluster_user(NLOS_SPREADS)
}

pub fn los_user() -> UserSpec {
    three_cluster_user(LOS_SPREADS)
}

/// NLOS user whose cluster powers ripple along the array:
/// `β_c(i) = w_c · (1 + a·cos(2π·i/N + φ_jc))` with `φ_jc = 2π(3j + c)/(3K)`.
fn rippled_user(j: usize, k: usize, n: usize) -> UserSpec {
    let mut user = nlos_user();
    for (c, cluster) in user.clusters.iter_mut().enumerate() {
        let phase = TAU * (3 * j + c) as f64 / (3 * k) as f64;
        let w = CLUSTER_POWERS[c];
        cluster.mean_power = MeanPower::PerAntenna(
            (0..n)
                .map(|i| w * (1.0 + FIG6_RIPPLE * (TAU * i as f64 / n as f64 + phase).cos()))
                .collect(),
        );
    }
    user
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
            p.config().validate().unwrap();
        }
        assert!("paper-a".parse::<Preset>().is_err());
    }

    #[test]
    fn paper_presets_differ_only_in_size_and_spread() {
        let cfgs: Vec<_> = [
            Preset::PaperA,
            Preset::PaperB,
            Preset::PaperC,
            Preset::PaperD,
        ]
        .map(Preset::config)
        .into();
        let sizes: Vec<usize> = cfgs.iter().map(|c| c.geometry.n_antennas).collect();
        assert_eq!(sizes, vec![128, 128, 20, 20]);
        for (c, spreads) in cfgs
            .iter()
            .zip([NLOS_SPREADS, LOS_SPREADS, NLOS_SPREADS, LOS_SPREADS])
        {
            assert_eq!(c.seed, PRESET_SEED);
            assert_eq!(c.realizations, 1000);
            assert_eq!(c.n_users(), 3);
            for u in &c.users {
                let s: Vec<f64> = u.clusters.iter().map(|c| c.spread_fraction).collect();
                assert_eq!(s, spreads);
            }
            let mut normalized = c.clone();
            normalized.geometry = cfgs[0].geometry;
            normalized.users = cfgs[0].users.clone();
            assert_eq!(normalized, cfgs[0]);
        }
    }

    #[test]
    fn fig5_and_fig6_use_six_users() {
        assert_eq!(Preset::Fig5.config().n_users(), 6);
        let fig6 = Preset::Fig6.config();
        assert_eq!(fig6.n_users(), 6);
        assert!(fig6.users.iter().all(|u| u.clusters.len() == 3));
    }

    #[test]
    fn fig6_mean_total_power_is_one() {
        let c = Preset::Fig6.config();
        for u in &c.users {
            let n = c.geometry.n_antennas;
            let mean = (0..n).map(|i| u.total_power(i)).sum::<f64>() / n as f64;
            assert!((mean - 1.0).abs() < 1e-12);
        }
    }
}
