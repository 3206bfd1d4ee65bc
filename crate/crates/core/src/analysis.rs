//! Ensemble statistics over many random instances: per-site error profiles,
//! the `n^p eps max(d)` envelope, critical lengths and topology comparisons.
//!
//! Instances run on the ambient rayon pool. Results are collected in
//! instance order and reduced sequentially, so aggregates do not depend on
//! the number of worker threads.

use rayon::prelude::*;
use serde::Serialize;

use crate::ensemble::{EnsembleConfig, TopologyMode};
use crate::error::{Error, Result};
use crate::estimation::nearest_neighbor_pipeline;

pub const DEFAULT_EXPONENT: f64 = 7.0 / 6.0;
pub const DEFAULT_THRESHOLD: f64 = 0.122;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnsatzParams {
    pub p: f64,
    pub max_d: f64,
    pub epsilon: f64,
}

impl AnsatzParams {
    pub fn new(max_d: f64, epsilon: f64) -> Self {
        AnsatzParams {
            p: DEFAULT_EXPONENT,
            max_d,
            epsilon,
        }
    }
}

/// `n^p * eps * max_d`.
pub fn ansatz_bound(n: usize, params: &AnsatzParams) -> f64 {
    (n as f64).powf(params.p) * params.epsilon * params.max_d
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorProfile {
    pub site: usize,
    pub mean_delta: f64,
    /// Sample standard deviation (`n - 1` denominator); 0 for one instance.
    pub std_delta: f64,
    pub bound: f64,
    pub instance_count: usize,
    /// Instances that broke down before this site or failed to decompose.
    pub n_excluded: usize,
}

/// Per-instance `Delta_n` sequence, shorter than `N - 1` after a breakdown.
pub type InstanceOutcome = std::result::Result<Vec<f64>, Error>;

/// Runs every instance of `config` at `epsilon` with the given topology.
pub fn instance_deltas(
    config: &EnsembleConfig,
    topology: &TopologyMode,
    epsilon: f64,
) -> Result<Vec<InstanceOutcome>> {
    config.validate()?;
    topology.validate(config.n_sites)?;
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(Error::Validation(format!(
            "epsilon must be finite and non-negative, got {epsilon}"
        )));
    }
    let eps_index = config.epsilon_index(epsilon);
    Ok((0..config.instances)
        .into_par_iter()
        .map(|i| {
            let (chain, pert) = config.sample_instance(topology, i, eps_index, epsilon)?;
            nearest_neighbor_pipeline(&chain, &pert).map(|out| out.reconstruction.errors_delta)
        })
        .collect())
}

fn mean_and_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

/// Mean and spread of `Delta_n` per site over the instances that reached it.
pub fn aggregate_profile(
    outcomes: &[InstanceOutcome],
    n_sites: usize,
    params: &AnsatzParams,
) -> Vec<ErrorProfile> {
    (1..n_sites)
        .map(|site| {
            let values: Vec<f64> = outcomes
                .iter()
                .filter_map(|o| o.as_ref().ok().and_then(|d| d.get(site - 1).copied()))
                .collect();
            let (mean_delta, std_delta) = mean_and_std(&values);
            ErrorProfile {
                site,
                mean_delta,
                std_delta,
                bound: ansatz_bound(site, params),
                instance_count: values.len(),
                n_excluded: outcomes.len() - values.len(),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileReport {
    pub epsilon: f64,
    pub profiles: Vec<ErrorProfile>,
    /// Instances dropped entirely because decomposition failed.
    pub skipped: usize,
}

fn report(config: &EnsembleConfig, topology: &TopologyMode, epsilon: f64) -> Result<ProfileReport> {
    let outcomes = instance_deltas(config, topology, epsilon)?;
    let params = AnsatzParams::new(config.max_d(), epsilon);
    Ok(ProfileReport {
        epsilon,
        profiles: aggregate_profile(&outcomes, config.n_sites, &params),
        skipped: outcomes.iter().filter(|o| o.is_err()).count(),
    })
}

/// Ensemble-averaged `Delta_n` at one perturbation strength.
pub fn error_profile(config: &EnsembleConfig, epsilon: f64) -> Result<ProfileReport> {
    report(config, &config.topology, epsilon)
}

/// One plus the number of leading couplings estimated within `threshold`.
/// Couplings missing from `deltas` (breakdown) count as failures, so an
/// unbroken pass over all `N - 1` couplings gives `N`.
pub fn critical_length(deltas: &[f64], threshold: f64) -> usize {
    1 + deltas.iter().take_while(|&&d| d <= threshold).count()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalLengthResult {
    pub epsilon: f64,
    pub n_sites: usize,
    pub threshold: f64,
    pub mean_lc: f64,
    pub std_lc: f64,
    pub instance_count: usize,
    pub n_excluded: usize,
}

pub fn summarize_critical_lengths(
    outcomes: &[InstanceOutcome],
    epsilon: f64,
    n_sites: usize,
    threshold: f64,
) -> CriticalLengthResult {
    let lengths: Vec<f64> = outcomes
        .iter()
        .filter_map(|o| o.as_ref().ok())
        .map(|d| critical_length(d, threshold) as f64)
        .collect();
    let (mean_lc, std_lc) = mean_and_std(&lengths);
    CriticalLengthResult {
        epsilon,
        n_sites,
        threshold,
        mean_lc,
        std_lc,
        instance_count: lengths.len(),
        n_excluded: outcomes.len() - lengths.len(),
    }
}

/// Mean critical length at every grid point of `config.epsilon_grid`.
pub fn critical_length_sweep(
    config: &EnsembleConfig,
    threshold: f64,
) -> Result<Vec<CriticalLengthResult>> {
    if !(threshold > 0.0) {
        return Err(Error::Validation(format!(
            "threshold must be positive, got {threshold}"
        )));
    }
    config.validate()?;
    if config.epsilon_grid.is_empty() {
        return Err(Error::Validation("epsilon grid is empty".into()));
    }
    config
        .epsilon_grid
        .iter()
        .map(|&eps| {
            let outcomes = instance_deltas(config, &config.topology, eps)?;
            Ok(summarize_critical_lengths(
                &outcomes,
                eps,
                config.n_sites,
                threshold,
            ))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabelledProfile {
    pub label: String,
    pub report: ProfileReport,
}

/// Error profiles for several topologies with paired instance streams: the
/// nearest-neighbour couplings of instance `i` are identical across variants.
pub fn topology_compare(
    config: &EnsembleConfig,
    variants: &[(String, TopologyMode)],
    epsilon: f64,
) -> Result<Vec<LabelledProfile>> {
    config.validate()?;
    for (label, mode) in variants {
        mode.validate(config.n_sites)
            .map_err(|e| Error::Validation(format!("variant '{label}': {e}")))?;
    }
    variants
        .iter()
        .map(|(label, mode)| {
            Ok(LabelledProfile {
                label: label.clone(),
                report: report(config, mode, epsilon)?,
            })
        })
        .collect()
}

/// Site average of `mean_delta` and of `std_delta`.
pub fn site_averages(profiles: &[ErrorProfile]) -> (f64, f64) {
    let n = profiles.len() as f64;
    (
        profiles.iter().map(|p| p.mean_delta).sum::<f64>() / n,
        profiles.iter().map(|p| p.std_delta).sum::<f64>() / n,
    )
}
