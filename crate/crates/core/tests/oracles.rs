//! Pipeline results against independent references: closed forms, moments
//! computed from the matrix itself, and a second eigensolver.

use chainrecon::estimation::{nearest_neighbor_pipeline, next_nearest_pipeline};
use chainrecon::model::{
    build_perturbed_hamiltonian, nnn_perturbation, ChainSpec, HamiltonianMatrix, PerturbationSpec,
};
use chainrecon::spectral::eigendecompose;
use proptest::prelude::*;

fn matvec(h: &HamiltonianMatrix, v: &[f64]) -> Vec<f64> {
    (0..h.dim())
        .map(|r| (0..h.dim()).map(|c| h.get(r, c) * v[c]).sum())
        .collect()
}

/// `<1|H^p|1>` for p = 2 and 4 by repeated products.
fn site_one_moments(h: &HamiltonianMatrix) -> (f64, f64) {
    let mut v = vec![0.0; h.dim()];
    v[0] = 1.0;
    let hv = matvec(h, &v);
    let h2v = matvec(h, &hv);
    let m2 = hv.iter().map(|x| x * x).sum();
    let m4 = h2v.iter().map(|x| x * x).sum();
    (m2, m4)
}

fn instance() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (6usize..=14).prop_flat_map(|n| {
        (
            prop::collection::vec(0.9f64..1.1, n - 1),
            prop::collection::vec(0.5f64..1.5, n - 2),
        )
    })
}

/// The next-nearest recursion divides by `eps d_n` at every step, so
/// round-off grows geometrically along the chain.
fn short_instance() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (3usize..=7).prop_flat_map(|n| {
        (
            prop::collection::vec(0.9f64..1.1, n - 1),
            prop::collection::vec(0.5f64..1.5, n - 2),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn second_coupling_matches_moment_ratio((c, d) in instance(), eps in 1e-3f64..0.3) {
        let chain = ChainSpec::new(c).unwrap();
        let pert = nnn_perturbation(&d, eps).unwrap();
        let (m2, m4) = site_one_moments(&build_perturbed_hamiltonian(&chain, &pert).unwrap());
        let est = nearest_neighbor_pipeline(&chain, &pert).unwrap().reconstruction.estimated;
        prop_assert!((est[0] * est[0] - m2).abs() < 1e-12);
        prop_assert!((est[1] * est[1] - (m4 / m2 - m2)).abs() < 1e-11);
    }

    #[test]
    fn second_error_matches_closed_form((c, d) in instance(), eps in 1e-2f64..0.3) {
        let chain = ChainSpec::new(c.clone()).unwrap();
        let pert = nnn_perturbation(&d, eps).unwrap();
        let delta = nearest_neighbor_pipeline(&chain, &pert).unwrap().reconstruction.errors_delta;
        let (e2, e4) = (eps * eps, eps.powi(4));
        let num = e2 * (c[0] * d[1] + d[0] * c[2]).powi(2) + e4 * d[0] * d[0] * d[2] * d[2];
        let expected = (num / (c[0] * c[0] + e2 * d[0] * d[0])).sqrt();
        prop_assert!((delta[1] / expected - 1.0).abs() < 1e-8, "{} vs {}", delta[1], expected);
    }

    #[test]
    fn eigenvalues_agree_with_reference_solver((c, d) in instance(), eps in 0.0f64..0.5) {
        let h = build_perturbed_hamiltonian(&ChainSpec::new(c).unwrap(), &nnn_perturbation(&d, eps).unwrap()).unwrap();
        let ours = eigendecompose(&h).unwrap();
        let n = h.dim();
        let mut reference: Vec<f64> = nalgebra::DMatrix::from_row_slice(n, n, h.as_slice())
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        reference.sort_by(f64::total_cmp);
        for (a, b) in ours.eigenvalues().iter().zip(&reference) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn next_nearest_recovers_both_coupling_sets((c, d) in short_instance(), eps in 0.1f64..0.5) {
        let chain = ChainSpec::new(c.clone()).unwrap();
        let rec = next_nearest_pipeline(&chain, &nnn_perturbation(&d, eps).unwrap()).unwrap();
        prop_assert_eq!(rec.breakdown_at, None);
        for (x, y) in rec.estimated_c.iter().zip(&c) {
            prop_assert!((x - y).abs() < 1e-6);
        }
        for (x, y) in rec.estimated_d.iter().zip(&d) {
            prop_assert!((x - y).abs() < 1e-6);
        }
    }
}

#[test]
fn uniform_path_spectrum_is_cosine_band() {
    for n in [2, 5, 17, 40] {
        let chain = ChainSpec::new(vec![1.0; n - 1]).unwrap();
        let out = nearest_neighbor_pipeline(&chain, &PerturbationSpec::none()).unwrap();
        let pi = std::f64::consts::PI;
        for (k, e) in out.spectrum.eigenvalues().iter().enumerate() {
            let expected = -2.0 * ((k + 1) as f64 * pi / (n + 1) as f64).cos();
            assert!(
                (e - expected).abs() < 1e-12,
                "N={n} k={k}: {e} vs {expected}"
            );
        }
        for c in &out.reconstruction.estimated {
            assert!((c - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn uniform_chain_errors_at_small_sites() {
    // Unit c and d: Delta_1 = eps, Delta_2 = 2 eps and Delta_3 = 4 eps to
    // leading order.
    let n = 12;
    let eps = 1e-5;
    let chain = ChainSpec::new(vec![1.0; n - 1]).unwrap();
    let pert = nnn_perturbation(&vec![1.0; n - 2], eps).unwrap();
    let delta = nearest_neighbor_pipeline(&chain, &pert)
        .unwrap()
        .reconstruction
        .errors_delta;
    for (site, factor) in [(1, 1.0), (2, 2.0), (3, 4.0)] {
        assert!(
            (delta[site - 1] / (factor * eps) - 1.0).abs() < 1e-4,
            "site {site}: {}",
            delta[site - 1]
        );
    }
}
