//! Coupling reconstruction from spectral data.
//!
//! Two recursions are provided. The nearest-neighbour scheme needs the
//! spectrum and the overlaps of a single end site; applied to a Hamiltonian
//! that secretly has longer-range couplings it still runs, but returns
//! biased couplings `c_n^eps` together with "estimated" overlap rows that are
//! no longer the true overlaps. The next-nearest scheme needs the overlaps
//! of sites 1 and 2 and recovers both coupling families exactly.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::model::{build_perturbed_hamiltonian, ChainSpec, PerturbationSpec};
use crate::spectral::{eigendecompose, SpectralData};

/// Relative floor on squared couplings; below `BREAKDOWN_RELATIVE * sum(e_k^2) / N`
/// the recursion would divide by numerical noise and is stopped.
pub const BREAKDOWN_RELATIVE: f64 = 1e-14;

/// Tolerance on `sum_k <n|e_k>^2 = 1` for input overlap rows.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconstructionResult {
    /// `c_1^eps, c_2^eps, ...`
    pub estimated: Vec<f64>,
    /// Row `n - 1` is `<n|e_k>_eps` for every `k`; row 0 is the input.
    pub estimated_overlaps: Vec<Vec<f64>>,
    /// 1-based index of the coupling whose square fell below the floor.
    pub breakdown_at: Option<usize>,
    /// `Delta_n`, filled by [`ReconstructionResult::attach_errors`].
    pub errors_delta: Vec<f64>,
}

impl ReconstructionResult {
    pub fn attach_errors(&mut self, true_couplings: &[f64]) -> Result<()> {
        self.errors_delta = estimation_errors(true_couplings, &self.estimated)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtendedReconstructionResult {
    pub estimated_c: Vec<f64>,
    pub estimated_d: Vec<f64>,
    /// 1-based index `n` of the extra coupling `d_n` that fell below the floor.
    pub breakdown_at: Option<usize>,
}

fn breakdown_floor(eigenvalues: &[f64]) -> f64 {
    let n = eigenvalues.len() as f64;
    BREAKDOWN_RELATIVE * eigenvalues.iter().map(|e| e * e).sum::<f64>() / n
}

fn check_row(name: &str, row: &[f64], n: usize) -> Result<()> {
    if row.len() != n {
        return invalid(format!("{name} has length {}, expected {n}", row.len()));
    }
    if row.iter().any(|x| !x.is_finite()) {
        return invalid(format!("{name} contains non-finite values"));
    }
    let norm: f64 = row.iter().map(|x| x * x).sum();
    if (norm - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return invalid(format!(
            "{name} is not normalised: sum of squares is {norm}"
        ));
    }
    Ok(())
}

fn check_spectrum(eigenvalues: &[f64]) -> Result<()> {
    if eigenvalues.is_empty() {
        return invalid("empty spectrum");
    }
    if eigenvalues.iter().any(|x| !x.is_finite()) {
        return invalid("spectrum contains non-finite values");
    }
    Ok(())
}

/// Nearest-neighbour recursion from the spectrum and the signed overlaps of
/// site 1. Computes at most `max_terms` couplings.
pub fn reconstruct_nearest_neighbor(
    eigenvalues: &[f64],
    site1_overlaps: &[f64],
    max_terms: usize,
) -> Result<ReconstructionResult> {
    check_spectrum(eigenvalues)?;
    let n = eigenvalues.len();
    check_row("site-1 overlaps", site1_overlaps, n)?;
    if max_terms > n - 1 {
        return invalid(format!("max_terms {max_terms} exceeds N - 1 = {}", n - 1));
    }
    let floor = breakdown_floor(eigenvalues);

    let mut estimated = Vec::with_capacity(max_terms);
    let mut rows = vec![site1_overlaps.to_vec()];
    let mut breakdown_at = None;
    let mut previous: Option<f64> = None;

    for site in 1..=max_terms {
        let current = &rows[site - 1];
        let residual: Vec<f64> = match previous {
            None => eigenvalues
                .iter()
                .zip(current)
                .map(|(e, v)| e * v)
                .collect(),
            Some(c_prev) => {
                let before = &rows[site - 2];
                eigenvalues
                    .iter()
                    .zip(current)
                    .zip(before)
                    .map(|((e, v), u)| e * v - c_prev * u)
                    .collect()
            }
        };
        let c_sq: f64 = residual.iter().map(|r| r * r).sum();
        if !(c_sq > floor) {
            breakdown_at = Some(site);
            break;
        }
        let c = c_sq.sqrt();
        estimated.push(c);
        rows.push(residual.into_iter().map(|r| r / c).collect());
        previous = Some(c);
    }

    Ok(ReconstructionResult {
        estimated,
        estimated_overlaps: rows,
        breakdown_at,
        errors_delta: Vec::new(),
    })
}

/// Next-nearest-neighbour recursion from the spectrum and the signed
/// overlaps of sites 1 and 2.
///
/// Row `n + 2` follows from `<n|H = c_{n-1}<n-1| + c_n<n+1| + eps d_{n-2}<n-2| + eps d_n<n+2|`,
/// so every step subtracts the three known neighbours of site `n`.
pub fn reconstruct_next_nearest(
    eigenvalues: &[f64],
    site1_overlaps: &[f64],
    site2_overlaps: &[f64],
    epsilon: f64,
) -> Result<ExtendedReconstructionResult> {
    check_spectrum(eigenvalues)?;
    let n = eigenvalues.len();
    if n < 2 {
        return invalid("need at least 2 sites");
    }
    check_row("site-1 overlaps", site1_overlaps, n)?;
    check_row("site-2 overlaps", site2_overlaps, n)?;
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return invalid(format!(
            "epsilon must be positive for the next-nearest recursion (got {epsilon}); \
             use the nearest-neighbour recursion for an unperturbed chain"
        ));
    }
    let floor = breakdown_floor(eigenvalues);

    let mut c: Vec<f64> = Vec::with_capacity(n - 1);
    let mut d: Vec<f64> = Vec::with_capacity(n.saturating_sub(2));
    // rows[m] holds <m+1|e_k>
    let mut rows: Vec<Vec<f64>> = vec![site1_overlaps.to_vec(), site2_overlaps.to_vec()];
    let mut breakdown_at = None;

    for site in 1..=n - 1 {
        let cur = &rows[site - 1];
        let next = &rows[site];
        let c_n: f64 = eigenvalues
            .iter()
            .zip(cur)
            .zip(next)
            .map(|((e, a), b)| e * a * b)
            .sum();
        c.push(c_n);
        if site == n - 1 {
            break;
        }

        let mut residual: Vec<f64> = eigenvalues
            .iter()
            .zip(cur)
            .zip(next)
            .map(|((e, a), b)| e * a - c_n * b)
            .collect();
        if site >= 2 {
            let c_prev = c[site - 2];
            for (r, u) in residual.iter_mut().zip(&rows[site - 2]) {
                *r -= c_prev * u;
            }
        }
        if site >= 3 {
            let w = epsilon * d[site - 3];
            for (r, u) in residual.iter_mut().zip(&rows[site - 3]) {
                *r -= w * u;
            }
        }

        let w_sq: f64 = residual.iter().map(|r| r * r).sum();
        if !(w_sq > floor) {
            breakdown_at = Some(site);
            break;
        }
        let w = w_sq.sqrt();
        d.push(w / epsilon);
        rows.push(residual.into_iter().map(|r| r / w).collect());
    }

    Ok(ExtendedReconstructionResult {
        estimated_c: c,
        estimated_d: d,
        breakdown_at,
    })
}

/// `Delta_n = sqrt(|(c_n^eps)^2 - c_n^2|)` for each estimated coupling.
pub fn estimation_errors(true_couplings: &[f64], estimated: &[f64]) -> Result<Vec<f64>> {
    if estimated.len() > true_couplings.len() {
        return invalid(format!(
            "{} estimated couplings but only {} true couplings",
            estimated.len(),
            true_couplings.len()
        ));
    }
    Ok(true_couplings
        .iter()
        .zip(estimated)
        .map(|(c, ce)| (ce * ce - c * c).abs().sqrt())
        .collect())
}

/// One system through the full nearest-neighbour pipeline.
#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub spectrum: SpectralData,
    pub reconstruction: ReconstructionResult,
}

/// Assemble `H^eps`, diagonalise, run the nearest-neighbour recursion from
/// site 1 over all `N - 1` couplings and attach `Delta_n` against the truth.
pub fn nearest_neighbor_pipeline(
    chain: &ChainSpec,
    pert: &PerturbationSpec,
) -> Result<PipelineOutput> {
    let h = build_perturbed_hamiltonian(chain, pert)?;
    let spectrum = eigendecompose(&h)?;
    let mut reconstruction = reconstruct_nearest_neighbor(
        spectrum.eigenvalues(),
        &spectrum.site_overlaps(1)?,
        chain.n_sites - 1,
    )?;
    reconstruction.attach_errors(&chain.nearest)?;
    Ok(PipelineOutput {
        spectrum,
        reconstruction,
    })
}

/// Same as [`nearest_neighbor_pipeline`] but with the next-nearest recursion,
/// which needs a positive `epsilon`.
pub fn next_nearest_pipeline(
    chain: &ChainSpec,
    pert: &PerturbationSpec,
) -> Result<ExtendedReconstructionResult> {
    let h = build_perturbed_hamiltonian(chain, pert)?;
    let spectrum = eigendecompose(&h)?;
    reconstruct_next_nearest(
        spectrum.eigenvalues(),
        &spectrum.site_overlaps(1)?,
        &spectrum.site_overlaps(2)?,
        pert.epsilon,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::nnn_perturbation;
    use crate::Error;
    use proptest::prelude::*;

    #[test]
    fn path_three_from_closed_form_data() {
        let r2 = 2f64.sqrt();
        let e = [-r2, 0.0, r2];
        let v1 = [0.5, -1.0 / r2, 0.5];
        let out = reconstruct_nearest_neighbor(&e, &v1, 2).unwrap();
        assert_eq!(out.estimated.len(), 2);
        for c in &out.estimated {
            assert!((c - 1.0).abs() < 1e-10);
        }
        assert_eq!(out.breakdown_at, None);
        assert_eq!(out.estimated_overlaps.len(), 3);
    }

    #[test]
    fn first_coupling_picks_up_next_nearest_weight() {
        let chain = ChainSpec::new(vec![1.0, 1.0]).unwrap();
        let out =
            nearest_neighbor_pipeline(&chain, &nnn_perturbation(&[1.0], 0.1).unwrap()).unwrap();
        assert!((out.reconstruction.estimated[0] - 1.01f64.sqrt()).abs() < 1e-12);
        assert!((out.reconstruction.errors_delta[0] - 0.1).abs() < 1e-10);
    }

    #[test]
    fn delta_one_from_definition() {
        let delta = estimation_errors(&[1.0], &[(1.0f64 + 0.01 * 0.25).sqrt()]).unwrap();
        assert!((delta[0] - 0.05).abs() < 1e-13);
        assert_eq!(
            estimation_errors(&[1.0, 1.0], &[1.0, 1.0]).unwrap(),
            vec![0.0, 0.0]
        );
        assert_eq!(
            estimation_errors(&[1.0, 2.0], &[]).unwrap(),
            Vec::<f64>::new()
        );
        assert!(estimation_errors(&[1.0], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn unnormalised_input_rejected() {
        let err = reconstruct_nearest_neighbor(&[-1.0, 1.0], &[0.5, 0.5], 1).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
        assert!(reconstruct_nearest_neighbor(&[-1.0, 1.0], &[0.6, 0.8], 2).is_err());
    }

    #[test]
    fn zero_spectrum_breaks_down_gracefully() {
        let out = reconstruct_nearest_neighbor(&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0], 2).unwrap();
        assert_eq!(out.breakdown_at, Some(1));
        assert!(out.estimated.is_empty());
    }

    #[test]
    fn reducible_chain_breaks_down_after_first_block() {
        // block-diagonal spectrum: site 1 only sees the 2x2 block {-1, 1}
        let e = [-1.0, -0.5, 0.5, 1.0];
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let out = reconstruct_nearest_neighbor(&e, &[s, 0.0, 0.0, s], 3).unwrap();
        assert_eq!(out.breakdown_at, Some(2));
        assert_eq!(out.estimated.len(), 1);
        assert!((out.estimated[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn next_nearest_three_sites() {
        let chain = ChainSpec::new(vec![1.0, 1.0]).unwrap();
        let out = next_nearest_pipeline(&chain, &nnn_perturbation(&[1.0], 0.1).unwrap()).unwrap();
        assert_eq!(out.breakdown_at, None);
        assert!((out.estimated_c[0] - 1.0).abs() < 1e-8);
        assert!((out.estimated_c[1] - 1.0).abs() < 1e-8);
        assert!((out.estimated_d[0] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn next_nearest_five_sites() {
        let chain = ChainSpec::new(vec![1.0; 4]).unwrap();
        let out =
            next_nearest_pipeline(&chain, &nnn_perturbation(&[0.5; 3], 0.01).unwrap()).unwrap();
        assert_eq!(out.estimated_c.len(), 4);
        assert_eq!(out.estimated_d.len(), 3);
        for c in &out.estimated_c {
            assert!((c - 1.0).abs() < 1e-7, "{c}");
        }
        for d in &out.estimated_d {
            assert!((d - 0.5).abs() < 1e-7, "{d}");
        }
    }

    #[test]
    fn next_nearest_rejects_zero_epsilon() {
        let chain = ChainSpec::new(vec![1.0; 4]).unwrap();
        let err =
            next_nearest_pipeline(&chain, &nnn_perturbation(&[0.5; 3], 0.0).unwrap()).unwrap_err();
        match err {
            Error::Validation(msg) => assert!(msg.contains("nearest-neighbour recursion")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn second_coupling_matches_expansion() {
        // Delta_2 against its leading term eps (d2 + d1 c3 / c1) = 2e-3
        let eps = 1e-3;
        let chain = ChainSpec::new(vec![1.0; 5]).unwrap();
        let out =
            nearest_neighbor_pipeline(&chain, &nnn_perturbation(&[1.0; 4], eps).unwrap()).unwrap();
        let delta2 = out.reconstruction.errors_delta[1];
        assert!((delta2 - 2e-3).abs() < 10.0 * eps * eps, "{delta2}");
    }

    fn nnn_instance(max_n: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (5usize..=max_n).prop_flat_map(|n| {
            (
                prop::collection::vec(0.95f64..=1.05, n - 1),
                prop::collection::vec(0.95f64..=1.05, n - 2),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn exact_without_perturbation(c in (2usize..=30).prop_flat_map(|n| prop::collection::vec(0.8f64..1.2, n - 1))) {
            let chain = ChainSpec::new(c.clone()).unwrap();
            let out = nearest_neighbor_pipeline(&chain, &PerturbationSpec::none()).unwrap();
            prop_assert_eq!(out.reconstruction.breakdown_at, None);
            for (got, want) in out.reconstruction.estimated.iter().zip(&c) {
                prop_assert!((got - want).abs() < 1e-8);
            }
        }

        #[test]
        fn column_sign_flips_do_not_matter((c, d) in nnn_instance(12), eps in 1e-4f64..0.1, flips in prop::collection::vec(any::<bool>(), 12)) {
            let chain = ChainSpec::new(c).unwrap();
            let h = build_perturbed_hamiltonian(&chain, &nnn_perturbation(&d, eps).unwrap()).unwrap();
            let s = eigendecompose(&h).unwrap();
            let mut flipped = s.clone();
            for (k, &f) in flips.iter().enumerate().take(s.dim()) {
                if f {
                    flipped = flipped.with_flipped_column(k);
                }
            }
            let n = s.dim();
            let a = reconstruct_nearest_neighbor(s.eigenvalues(), &s.site_overlaps(1).unwrap(), n - 1).unwrap();
            let b = reconstruct_nearest_neighbor(flipped.eigenvalues(), &flipped.site_overlaps(1).unwrap(), n - 1).unwrap();
            prop_assert_eq!(a.estimated, b.estimated);
            let a = reconstruct_next_nearest(s.eigenvalues(), &s.site_overlaps(1).unwrap(), &s.site_overlaps(2).unwrap(), eps).unwrap();
            let b = reconstruct_next_nearest(flipped.eigenvalues(), &flipped.site_overlaps(1).unwrap(), &flipped.site_overlaps(2).unwrap(), eps).unwrap();
            for (x, y) in a.estimated_c.iter().zip(&b.estimated_c) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }

        #[test]
        fn first_coupling_identity_is_exact((c, d) in nnn_instance(20), eps in 0.0f64..1.0) {
            let chain = ChainSpec::new(c.clone()).unwrap();
            let out = nearest_neighbor_pipeline(&chain, &nnn_perturbation(&d, eps).unwrap()).unwrap();
            let c1e = out.reconstruction.estimated[0];
            prop_assert!((c1e * c1e - c[0] * c[0] - eps * eps * d[0] * d[0]).abs() < 1e-10);
        }

        #[test]
        fn first_error_equals_eps_d1((c, d) in nnn_instance(20), eps in 1e-2f64..0.5) {
            let chain = ChainSpec::new(c).unwrap();
            let out = nearest_neighbor_pipeline(&chain, &nnn_perturbation(&d, eps).unwrap()).unwrap();
            prop_assert!((out.reconstruction.errors_delta[0] / (eps * d[0]) - 1.0).abs() < 1e-10);
        }
    }
}
