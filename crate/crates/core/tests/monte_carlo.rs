//! Statistical checks of the sampled channel against closed-form moments.

use blockfade_core::rng::domain;
use blockfade_core::*;
use nalgebra::DMatrix;

fn c0() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

#[test]
fn iid_grid_moments() {
    let grid = ResourceGrid::new(100, 100, 1).unwrap();
    let sampler = QSampler::new(&CorrelationSpec::none(), grid).unwrap();
    let mut samples = Vec::with_capacity(100_000);
    for link in 0..10 {
        let q = sampler.sample(&mut StreamSeed(21).substream(&[link]));
        samples.extend(q.values.iter().copied());
    }
    let n = samples.len() as f64;
    let mean: Complex64 = samples.iter().sum::<Complex64>() / n;
    let power = samples.iter().map(|z| z.norm_sqr()).sum::<f64>() / n;
    let pseudo: Complex64 = samples.iter().map(|z| z * z).sum::<Complex64>() / n;
    assert!(mean.norm() < 5.0 / n.sqrt(), "mean {mean}");
    assert!((power - 1.0).abs() < 0.02, "power {power}");
    // circular symmetry: E[q²] = 0
    assert!(pseudo.norm() < 0.02, "pseudo-variance {pseudo}");
}

fn sample_columns(rho: f64, length: usize, columns: usize, seed: u64) -> Vec<Vec<Complex64>> {
    let grid = ResourceGrid::new(length, columns, 1).unwrap();
    let spec = CorrelationSpec::exponential(CorrelationMode::Time, rho, length);
    let q = sample_q_grid(
        &spec,
        grid,
        &mut StreamSeed(seed).substream(&[domain::FADING]),
    )
    .unwrap();
    (0..columns)
        .map(|f| (0..length).map(|t| q.at(t, f)).collect())
        .collect()
}

fn sample_covariance(cols: &[Vec<Complex64>]) -> DMatrix<Complex64> {
    let n = cols[0].len();
    let mut s = DMatrix::from_element(n, n, c0());
    for v in cols {
        for a in 0..n {
            for b in 0..n {
                s[(a, b)] += v[a] * v[b].conj();
            }
        }
    }
    s / Complex64::new(cols.len() as f64, 0.0)
}

#[test]
fn lag_one_autocorrelation_along_time() {
    let cols = sample_columns(0.9, 64, 10_000, 3);
    let (mut num, mut den) = (c0(), 0.0);
    for v in &cols {
        for t in 0..63 {
            num += v[t + 1] * v[t].conj();
        }
        den += v[..63].iter().map(|z| z.norm_sqr()).sum::<f64>();
    }
    let lag1 = num.re / den;
    assert!(
        (0.87..=0.93).contains(&lag1),
        "lag-1 autocorrelation {lag1}"
    );
}

#[test]
fn covariance_recovery() {
    for (k, rho) in [0.0, 0.5, 0.9].into_iter().enumerate() {
        let cols = sample_columns(rho, 4, 10_000, 40 + k as u64);
        let sample = sample_covariance(&cols);
        let target =
            build_covariance(&CorrelationSpec::exponential(CorrelationMode::Time, rho, 4)).unwrap();
        let err = (sample - target)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(err <= 0.05, "rho={rho}: max error {err}");
    }
}

#[test]
fn frequency_mode_correlates_rows() {
    let grid = ResourceGrid::new(5_000, 3, 1).unwrap();
    let spec = CorrelationSpec::exponential(CorrelationMode::Frequency, 0.5, 3);
    let q = sample_q_grid(&spec, grid, &mut StreamSeed(8).substream(&[1])).unwrap();
    let rows: Vec<Vec<Complex64>> = (0..5_000)
        .map(|t| (0..3).map(|f| q.at(t, f)).collect())
        .collect();
    let s = sample_covariance(&rows);
    let target = build_covariance(&spec).unwrap();
    let err = (s - target).iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!(err < 0.06, "max error {err}");
    // columns (time direction) stay uncorrelated
    let (mut acc, mut pw) = (c0(), 0.0);
    for t in 0..4_999 {
        acc += q.at(t + 1, 0) * q.at(t, 0).conj();
        pw += q.at(t, 0).norm_sqr();
    }
    assert!((acc / pw).norm() < 0.05);
}

#[test]
fn distinct_links_are_independent() {
    let grid = ResourceGrid::new(10_000, 1, 1).unwrap();
    let sampler = QSampler::new(&CorrelationSpec::none(), grid).unwrap();
    let seed = StreamSeed(77);
    let paths: [[u64; 5]; 4] = [
        [2, 0, 0, 0, 0],
        [2, 0, 0, 0, 1],
        [2, 0, 1, 0, 0],
        [2, 1, 0, 0, 0],
    ];
    let grids: Vec<QGrid> = paths
        .iter()
        .map(|p| sampler.sample(&mut seed.substream(p)))
        .collect();
    for a in 0..grids.len() {
        for b in a + 1..grids.len() {
            let x: Complex64 = grids[a]
                .values
                .iter()
                .zip(grids[b].values.iter())
                .map(|(u, v)| u * v.conj())
                .sum();
            let rho = x.norm() / 10_000.0;
            assert!(rho <= 0.05, "links {a},{b}: {rho}");
        }
    }
}

fn single_cluster_model(
    n: usize,
    k: usize,
    spread: f64,
    power: MeanPower,
    direction: Direction,
) -> ChannelModel {
    let user = UserSpec::new(vec![ClusterSpec::new(direction, spread, power)]);
    ChannelModel::new(
        ArrayGeometry::quarter_wave(n).unwrap(),
        vec![user; k],
        ResourceGrid::default(),
        CorrelationSpec::none(),
    )
    .unwrap()
}

#[test]
fn small_spread_moments_around_the_mean() {
    let model = single_cluster_model(4, 2, 0.1, MeanPower::Scalar(1.0), Direction::Fixed(0.9));
    let seed = StreamSeed(5);
    let reals: Vec<Realization> = (0..10_000)
        .map(|r| model.realize(seed, r).unwrap())
        .collect();
    let p = &reals[0].pairs;
    for (j, user) in p.iter().enumerate() {
        for i in 0..4 {
            let vals: Vec<Complex64> = reals.iter().map(|r| r.blocks[0].h[(i, j)]).collect();
            let n = vals.len() as f64;
            let mean = vals.iter().sum::<Complex64>() / n;
            let var = vals.iter().map(|z| (z - mean).norm_sqr()).sum::<f64>() / (n - 1.0);
            assert!(
                (mean - user[0].p[i]).norm() < 0.01,
                "mean {mean} vs {}",
                user[0].p[i]
            );
            assert!((var.sqrt() - 0.1).abs() < 0.005, "std {}", var.sqrt());
        }
    }
}

#[test]
fn per_link_power_is_conserved() {
    // three clusters of uncorrelated phase sum to the total configured power
    let clusters = vec![
        ClusterSpec::new(Direction::Shared, 0.2, 0.5).with_phase_offset(PhaseOffset::Random),
        ClusterSpec::new(Direction::Shared, 0.6, 0.3).with_phase_offset(PhaseOffset::Random),
        ClusterSpec::new(Direction::Random, 1.0, 0.2).with_phase_offset(PhaseOffset::Random),
    ];
    let model = ChannelModel::new(
        ArrayGeometry::quarter_wave(8).unwrap(),
        vec![UserSpec::new(clusters); 2],
        ResourceGrid::default(),
        CorrelationSpec::none(),
    )
    .unwrap();
    let blocks: Vec<ChannelBlock> = (0..10_000)
        .map(|r| model.realize(StreamSeed(13), r).unwrap().blocks.remove(0))
        .collect();
    let profile = power_profile(&blocks).unwrap();
    for v in profile.iter() {
        assert!((v - 1.0).abs() <= 0.03, "power {v}");
    }
    let mean = profile.mean();
    assert!((mean - 1.0).abs() < 0.03, "mean power {mean}");
}

#[test]
fn power_ramp_is_recovered() {
    let n = 16;
    let ramp: Vec<f64> = (0..n).map(|i| 0.5 + i as f64 / (n - 1) as f64).collect();
    let model = single_cluster_model(
        n,
        1,
        1.0,
        MeanPower::PerAntenna(ramp.clone()),
        Direction::Random,
    );
    let blocks: Vec<ChannelBlock> = (0..10_000)
        .map(|r| model.realize(StreamSeed(17), r).unwrap().blocks.remove(0))
        .collect();
    let profile = power_profile(&blocks).unwrap();
    for (i, want) in ramp.iter().enumerate() {
        let got = profile[(i, 0)];
        assert!(
            (got - want).abs() <= 0.05 * want,
            "antenna {i}: {got} vs {want}"
        );
    }
}

#[test]
fn flat_iid_profile() {
    let model = single_cluster_model(8, 2, 1.0, MeanPower::Scalar(1.0), Direction::Random);
    let blocks: Vec<ChannelBlock> = (0..10_000)
        .map(|r| model.realize(StreamSeed(23), r).unwrap().blocks.remove(0))
        .collect();
    let profile = power_profile(&blocks).unwrap();
    assert!(profile.iter().all(|v| (v - 1.0).abs() <= 0.05), "{profile}");
}

#[test]
fn deterministic_single_cluster_profile_is_exact() {
    let model = single_cluster_model(8, 2, 0.0, MeanPower::Scalar(1.7), Direction::Random);
    let blocks: Vec<ChannelBlock> = (0..50)
        .map(|r| model.realize(StreamSeed(1), r).unwrap().blocks.remove(0))
        .collect();
    let profile = power_profile(&blocks).unwrap();
    assert!(profile.iter().all(|v| (v - 1.7).abs() < 1e-12));
}

#[test]
fn uplink_power_accounting() {
    // β_ij = 1, K = 4 unit-power streams, σ² = 0.1: E|y|² = K + σ²
    let k = 4;
    let model = single_cluster_model(16, k, 1.0, MeanPower::Scalar(1.0), Direction::Random);
    let seed = StreamSeed(31);
    let (mut sum, mut count) = (0.0, 0usize);
    for r in 0..625 {
        let block = model.realize(seed, r).unwrap().blocks.remove(0);
        let x = qpsk_symbols(k, 10, &mut seed.substream(&[domain::SYMBOLS, r]));
        let frame =
            synthesize_uplink(&block, &x, 0.1, &mut seed.substream(&[domain::NOISE, r])).unwrap();
        sum += frame.y.norm_squared();
        count += frame.y.len();
    }
    assert!(count >= 100_000);
    let mean = sum / count as f64;
    assert!(
        (mean - (k as f64 + 0.1)).abs() <= 0.03 * (k as f64 + 0.1),
        "E|y|² = {mean}"
    );
}

#[test]
fn iid_offdiagonal_gram_power() {
    let model = single_cluster_model(128, 2, 1.0, MeanPower::Scalar(1.0), Direction::Random);
    let stats: Vec<GramStats> = (0..1_000)
        .map(|r| gram(&model.realize(StreamSeed(41), r).unwrap().blocks[0]))
        .collect();
    let mean_sq = stats.iter().map(|s| s.offdiag_mags[0].powi(2)).sum::<f64>() / stats.len() as f64;
    assert!(
        (mean_sq - 1.0 / 128.0).abs() <= 0.1 / 128.0,
        "E|g|² = {mean_sq}"
    );
}

#[test]
fn exponential_power_median() {
    let mut s = StreamSeed(51).substream(&[]);
    let powers: Vec<f64> = (0..10_000).map(|_| s.complex_normal().norm_sqr()).collect();
    let cdf = empirical_cdf(&powers).unwrap();
    assert!((cdf.query(0.693) - 0.5).abs() < 0.02);
}

#[test]
fn ring_band_for_small_spread() {
    let model = single_cluster_model(128, 1, 0.1, MeanPower::Scalar(1.0), Direction::Random);
    let mut total = 0usize;
    let mut inside = 0usize;
    for r in 0..100 {
        for z in model.realize(StreamSeed(61), r).unwrap().blocks[0].h.iter() {
            total += 1;
            if (0.7..=1.3).contains(&z.norm()) {
                inside += 1;
            }
        }
    }
    assert!(inside as f64 >= 0.99 * total as f64, "{inside}/{total}");
}

#[test]
fn threaded_generation_is_bitwise_identical() {
    let model = ChannelModel::new(
        ArrayGeometry::quarter_wave(32).unwrap(),
        vec![
            UserSpec::new(vec![
                ClusterSpec::new(Direction::Shared, 0.3, 0.6)
                    .with_phase_offset(PhaseOffset::Random),
                ClusterSpec::new(Direction::Random, 0.9, 0.4),
            ]);
            3
        ],
        ResourceGrid::new(4, 2, 1).unwrap(),
        CorrelationSpec::exponential(CorrelationMode::Time, 0.7, 4),
    )
    .unwrap();
    let seed = StreamSeed(2024);
    let sequential: Vec<Realization> = (0..40).map(|r| model.realize(seed, r).unwrap()).collect();
    let mut threaded: Vec<Option<Realization>> = vec![None; 40];
    std::thread::scope(|scope| {
        for (t, chunk) in threaded.chunks_mut(7).enumerate() {
            let model = &model;
            scope.spawn(move || {
                // reverse order within each worker
                for (k, slot) in chunk.iter_mut().enumerate().rev() {
                    *slot = Some(model.realize(seed, (t * 7 + k) as u64).unwrap());
                }
            });
        }
    });
    for (a, b) in sequential.iter().zip(threaded) {
        assert_eq!(Some(a), b.as_ref());
    }
}
