//! Scenario execution.
//!
//! Realizations are generated on a worker pool. Each realization is reduced
//! to a partial summary that depends only on `(seed, index)`; partials are
//! then folded in index order, so every statistic is bitwise independent of
//! the thread count.

use std::fmt::Write as _;
use std::path::Path;

use blockfade_core::analytics::{CorrelationAccumulator, PowerAccumulator};
use blockfade_core::nalgebra::DMatrix;
use blockfade_core::{
    coefficient_histogram, empirical_cdf, gram, magnitude_histogram, ChannelModel, Complex64,
    EmpiricalCdf, Histogram1D, Histogram2D, StreamSeed, UserCorrelationMatrix,
};
use rayon::prelude::*;

use crate::config::{OutputKind, ScenarioConfig};
use crate::emit::{self, Artifact};
use crate::error::CliError;

/// Off-diagonal Gram magnitudes and their histogram.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossCorrelation {
    pub magnitudes: Vec<f64>,
    pub histogram: Histogram1D,
}

/// Statistics gathered over all realizations; `None` when not requested.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Statistics {
    pub histogram: Option<Histogram2D>,
    pub cross_correlation: Option<CrossCorrelation>,
    pub eigenvalues: Option<EmpiricalCdf>,
    pub power_profile: Option<DMatrix<f64>>,
    pub correlation: Option<UserCorrelationMatrix>,
    raw_channel: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub config: ScenarioConfig,
    pub statistics: Statistics,
    /// Data artifacts, then `config.json`, then `manifest.csv`.
    pub artifacts: Vec<Artifact>,
}

impl Report {
    pub fn artifact(&self, name: &str) -> Option<&Artifact> {
        self.artifacts.iter().find(|a| a.name == name)
    }

    pub fn manifest(&self) -> &Artifact {
        self.artifacts.last().expect("report has a manifest")
    }

    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        emit::write_artifacts(&self.artifacts, dir)
    }
}

struct Partial {
    coefficients: Vec<Complex64>,
    magnitudes: Vec<f64>,
    eigenvalues: Vec<f64>,
    correlation: Option<CorrelationAccumulator>,
    power: Option<PowerAccumulator>,
    raw: String,
}

fn summarize(config: &ScenarioConfig, model: &ChannelModel, r: u64) -> Result<Partial, CliError> {
    let realization = model.realize(StreamSeed(config.seed), r)?;
    let (n, k) = (model.n_antennas(), model.n_users());
    let mut p = Partial {
        coefficients: Vec::new(),
        magnitudes: Vec::new(),
        eigenvalues: Vec::new(),
        correlation: config
            .wants(OutputKind::CorrelationMatrix)
            .then(|| CorrelationAccumulator::new(k)),
        power: config
            .wants(OutputKind::PowerProfile)
            .then(|| PowerAccumulator::new(n, k)),
        raw: String::new(),
    };
    let want_gram =
        config.wants(OutputKind::CrossCorrelation) || config.wants(OutputKind::Eigencdf);
    for block in &realization.blocks {
        if config.wants(OutputKind::Histogram) {
            p.coefficients.extend(block.h.iter());
        }
        if want_gram {
            let g = gram(block);
            if config.wants(OutputKind::Eigencdf) {
                p.eigenvalues.extend(g.eigenvalues()?);
            }
            if config.wants(OutputKind::CrossCorrelation) {
                p.magnitudes.extend_from_slice(&g.offdiag_mags);
            }
        }
        if let Some(acc) = p.correlation.as_mut() {
            acc.add(block)?;
        }
        if let Some(acc) = p.power.as_mut() {
            acc.add(block)?;
        }
        if config.wants(OutputKind::RawChannel) {
            for j in 0..k {
                for i in 0..n {
                    let z = block.h[(i, j)];
                    let _ = writeln!(
                        p.raw,
                        "{r},{},{},{i},{j},{},{}",
                        block.t,
                        block.f,
                        emit::real(z.re),
                        emit::real(z.im)
                    );
                }
            }
        }
    }
    Ok(p)
}

fn thread_pool(threads: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| CliError::ThreadPool(e.to_string()))
}

/// Runs every realization of `config` on `threads` workers and gathers the
/// requested statistics.
pub fn compute_statistics(config: &ScenarioConfig, threads: usize) -> Result<Statistics, CliError> {
    config.validate()?;
    let model = config.model()?;
    let partials: Vec<Partial> = thread_pool(threads)?.install(|| {
        (0..config.realizations)
            .into_par_iter()
            .map(|r| summarize(config, &model, r))
            .collect::<Result<_, _>>()
    })?;

    let (n, k) = (model.n_antennas(), model.n_users());
    let mut coefficients = Vec::new();
    let mut magnitudes = Vec::new();
    let mut eigenvalues = Vec::new();
    let mut correlation = CorrelationAccumulator::new(k);
    let mut power = PowerAccumulator::new(n, k);
    let mut raw = String::new();
    for p in &partials {
        coefficients.extend_from_slice(&p.coefficients);
        magnitudes.extend_from_slice(&p.magnitudes);
        eigenvalues.extend_from_slice(&p.eigenvalues);
        if let Some(acc) = &p.correlation {
            correlation.merge(acc);
        }
        if let Some(acc) = &p.power {
            power.merge(acc);
        }
        raw.push_str(&p.raw);
    }
    drop(partials);

    let mut stats = Statistics::default();
    for output in &config.outputs {
        match output {
            OutputKind::Histogram => {
                stats.histogram = Some(coefficient_histogram(&coefficients, config.bins)?);
            }
            OutputKind::CrossCorrelation => {
                let histogram = magnitude_histogram(&magnitudes, config.bins)?;
                stats.cross_correlation = Some(CrossCorrelation {
                    magnitudes: std::mem::take(&mut magnitudes),
                    histogram,
                });
            }
            OutputKind::Eigencdf => stats.eigenvalues = Some(empirical_cdf(&eigenvalues)?),
            OutputKind::PowerProfile => stats.power_profile = Some(power.finish()?),
            OutputKind::CorrelationMatrix => stats.correlation = Some(correlation.finish()?),
            OutputKind::RawChannel => stats.raw_channel = Some(std::mem::take(&mut raw)),
        }
    }
    Ok(stats)
}

/// CSV and SVG artifacts for the requested outputs, in request order.
pub fn render(config: &ScenarioConfig, stats: &Statistics) -> Vec<Artifact> {
    let mut artifacts = Vec::new();
    for output in &config.outputs {
        match output {
            OutputKind::Histogram => {
                if let Some(h) = &stats.histogram {
                    artifacts.push(emit::histogram_csv(h));
                    artifacts.push(emit::histogram_svg(h));
                }
            }
            OutputKind::CrossCorrelation => {
                if let Some(x) = &stats.cross_correlation {
                    artifacts.push(emit::xcorr_csv(&x.histogram));
                    artifacts.push(emit::xcorr_svg(&x.histogram));
                }
            }
            OutputKind::Eigencdf => {
                if let Some(cdf) = &stats.eigenvalues {
                    artifacts.push(emit::cdf_csv(emit::EIGENCDF_CSV, "eigenvalue", cdf));
                    artifacts.push(emit::eigencdf_svg(cdf));
                }
            }
            OutputKind::PowerProfile => {
                if let Some(p) = &stats.power_profile {
                    artifacts.push(emit::power_profile_csv(p));
                    artifacts.push(emit::power_profile_svg(p));
                }
            }
            OutputKind::CorrelationMatrix => {
                if let Some(m) = &stats.correlation {
                    artifacts.push(emit::correlation_csv(m));
                    artifacts.push(emit::correlation_svg(m));
                }
            }
            OutputKind::RawChannel => {
                if let Some(raw) = &stats.raw_channel {
                    artifacts.push(Artifact::csv(
                        emit::RAW_CHANNEL_CSV,
                        Some(emit::RAW_CHANNEL_HEADER),
                        raw.clone(),
                    ));
                }
            }
        }
    }
    artifacts
}

/// Runs `config` and renders the full report bundle, manifest included.
pub fn run_scenario(config: &ScenarioConfig, threads: usize) -> Result<Report, CliError> {
    let statistics = compute_statistics(config, threads)?;
    let mut artifacts = render(config, &statistics);
    artifacts.push(Artifact::text(emit::CONFIG_JSON, config.to_json()));
    let manifest = emit::manifest_csv(&artifacts);
    artifacts.push(manifest);
    Ok(Report {
        config: config.clone(),
        statistics,
        artifacts,
    })
}
