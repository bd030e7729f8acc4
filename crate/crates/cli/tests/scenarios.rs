use blockfade::config::{CorrelationConfig, ModeName, OutputKind, ScenarioConfig};
use blockfade::{parse_config, run_scenario, Preset};
use blockfade_core::{
    ArrayGeometry, ClusterSpec, Direction, MeanPower, PhaseOffset, ResourceGrid, UserSpec,
};
use proptest::prelude::*;

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

fn mean_offdiag(csv: &str) -> f64 {
    let m = rows(csv);
    let k = m.len();
    let mut sum = 0.0;
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if i != j {
                sum += v;
            }
        }
    }
    sum / (k * (k - 1)) as f64
}

#[test]
fn fig2_histogram_mass_sits_on_the_ring() {
    let report = run_scenario(&Preset::Fig2.config(), 4).unwrap();
    let csv = &report.artifact("histogram.csv").unwrap().content;
    let (mut inside, mut total) = (0.0, 0.0);
    for r in rows(csv.split_once('\n').unwrap().1) {
        let radius = r[0].hypot(r[1]);
        total += r[2];
        if (0.7..=1.3).contains(&radius) {
            inside += r[2];
        }
    }
    assert_eq!(total, 128_000.0);
    assert!(inside / total >= 0.99, "{}", inside / total);
}

#[test]
fn los_correlation_below_nlos() {
    let a = run_scenario(&Preset::PaperA.config(), 4).unwrap();
    let b = run_scenario(&Preset::PaperB.config(), 4).unwrap();
    let ra = mean_offdiag(&a.artifact("correlation_matrix.csv").unwrap().content);
    let rb = mean_offdiag(&b.artifact("correlation_matrix.csv").unwrap().content);
    assert!(rb < ra, "paper-B {rb} vs paper-A {ra}");
}

#[test]
fn same_seed_one_and_eight_threads_byte_identical() {
    let mut config = parse_config(include_str!("../scenarios/two-users-time.json")).unwrap();
    config.seed = 7;
    config.outputs.push(OutputKind::RawChannel);
    let one = run_scenario(&config, 1).unwrap();
    let eight = run_scenario(&config, 8).unwrap();
    assert_eq!(one.artifacts, eight.artifacts);
    assert_eq!(one.manifest().sha256(), eight.manifest().sha256());
}

#[test]
fn manifest_row_counts_match_contents() {
    let report = run_scenario(&Preset::PaperC.config(), 2).unwrap();
    for line in report.manifest().content.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        let artifact = report.artifact(cells[0]).unwrap();
        assert_eq!(artifact.rows.to_string(), cells[1]);
        if cells[0].ends_with(".csv") {
            assert_eq!(artifact.data_lines().count(), artifact.rows);
        }
    }
}

fn angle() -> impl Strategy<Value = Direction> {
    prop_oneof![
        (0.0..std::f64::consts::PI).prop_map(Direction::Fixed),
        Just(Direction::Random),
        Just(Direction::Shared),
    ]
}

fn cluster(n: usize) -> impl Strategy<Value = ClusterSpec> {
    (
        angle(),
        0.0..=1.0f64,
        prop_oneof![
            (0.01..5.0f64).prop_map(MeanPower::Scalar),
            prop::collection::vec(0.01..5.0f64, n).prop_map(MeanPower::PerAntenna),
        ],
        prop_oneof![
            (-10.0..10.0f64).prop_map(PhaseOffset::Fixed),
            Just(PhaseOffset::Random)
        ],
    )
        .prop_map(|(d, s, p, o)| ClusterSpec::new(d, s, p).with_phase_offset(o))
}

fn config() -> impl Strategy<Value = ScenarioConfig> {
    (1usize..6, 1usize..4, 1usize..4, 0.05..2.0f64).prop_flat_map(|(n, k, t, spacing)| {
        let users = prop::collection::vec(
            prop::collection::vec(cluster(n), 1..3).prop_map(UserSpec::new),
            k,
        );
        let correlation = prop_oneof![
            Just(CorrelationConfig::default()),
            (0.0..0.99f64).prop_map(|rho| CorrelationConfig::exponential(ModeName::Time, rho)),
        ];
        let outputs = if k >= 2 {
            prop::sample::subsequence(OutputKind::ALL.to_vec(), 0..=6).boxed()
        } else {
            prop::sample::subsequence(
                vec![
                    OutputKind::Histogram,
                    OutputKind::Eigencdf,
                    OutputKind::PowerProfile,
                    OutputKind::RawChannel,
                ],
                0..=4,
            )
            .boxed()
        };
        (
            any::<u64>(),
            users,
            correlation,
            1u64..100,
            outputs,
            1usize..200,
        )
            .prop_map(
                move |(seed, users, correlation, realizations, outputs, bins)| ScenarioConfig {
                    seed,
                    geometry: ArrayGeometry::new(n, spacing).unwrap(),
                    users,
                    grid: ResourceGrid::new(t, 2, 1).unwrap(),
                    correlation,
                    realizations,
                    outputs,
                    bins,
                },
            )
    })
}

proptest! {
    #[test]
    fn config_echo_round_trips(c in config()) {
        prop_assert!(c.validate().is_ok());
        prop_assert_eq!(parse_config(&c.to_json()).unwrap(), c);
    }
}
