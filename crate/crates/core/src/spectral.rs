//! Eigendecomposition of real symmetric Hamiltonians.
//!
//! Householder reduction to tridiagonal form followed by implicit-shift QL
//! iteration, after the Algol procedures `tred2`/`tql2` of Martin, Reinsch,
//! Bowdler and Wilkinson. Output is normalised so that it is a pure function
//! of the input bits: eigenvalues ascending, and each eigenvector column
//! flipped so that its first entry of largest magnitude is non-negative.

use crate::error::{invalid, Error, Result};
use crate::model::HamiltonianMatrix;

/// Maximum QL sweeps spent on a single eigenvalue.
const MAX_QL_ITERATIONS: usize = 64;

/// Adjacent eigenvalues closer than this mark the decomposition as suspect.
pub const DEGENERACY_GAP: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    dim: usize,
    eigenvalues: Vec<f64>,
    /// Row-major; column `k` is the `k`-th eigenvector, so entry `(n, k)` is
    /// the overlap of site `n + 1` with eigenvector `k + 1`.
    eigenvectors: Vec<f64>,
    near_degenerate: bool,
}

impl SpectralData {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// 0-based `(row, column)` entry of the eigenvector matrix.
    #[inline]
    pub fn vector_entry(&self, row: usize, col: usize) -> f64 {
        self.eigenvectors[row * self.dim + col]
    }

    /// Set when two eigenvalues lie within [`DEGENERACY_GAP`]; estimation on
    /// such data remains defined but should be treated with suspicion.
    pub fn near_degenerate(&self) -> bool {
        self.near_degenerate
    }

    /// Overlaps of site `site` (1-based) with every eigenvector.
    pub fn site_overlaps(&self, site: usize) -> Result<Vec<f64>> {
        self.check_site(site)?;
        let start = (site - 1) * self.dim;
        Ok(self.eigenvectors[start..start + self.dim].to_vec())
    }

    /// `sum_k e_k^power * |<site|e_k>|^2`, i.e. `<site| H^power |site>`.
    pub fn moment(&self, site: usize, power: u32) -> Result<f64> {
        let row = self.site_overlaps(site)?;
        Ok(self
            .eigenvalues
            .iter()
            .zip(&row)
            .map(|(e, v)| e.powi(power as i32) * v * v)
            .sum())
    }

    /// Negates eigenvector column `k` (0-based). Only useful for exercising
    /// sign invariance of downstream code.
    pub fn with_flipped_column(mut self, k: usize) -> Self {
        for row in 0..self.dim {
            self.eigenvectors[row * self.dim + k] = -self.eigenvectors[row * self.dim + k];
        }
        self
    }

    /// `max_k max_n |(H v_k - e_k v_k)_n| / max(1, |e_k|)`.
    pub fn max_relative_residual(&self, h: &HamiltonianMatrix) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let scale = self.eigenvalues[k].abs().max(1.0);
            for r in 0..n {
                let hv: f64 = (0..n).map(|c| h.get(r, c) * self.vector_entry(c, k)).sum();
                let res = (hv - self.eigenvalues[k] * self.vector_entry(r, k)).abs() / scale;
                worst = worst.max(res);
            }
        }
        worst
    }

    /// `max_{j,k} |<e_j|e_k> - delta_jk|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for k in j..n {
                let dot: f64 = (0..n)
                    .map(|r| self.vector_entry(r, j) * self.vector_entry(r, k))
                    .sum();
                let target = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site < 1 || site > self.dim {
            return invalid(format!("site {site} outside 1..={}", self.dim));
        }
        Ok(())
    }
}

pub fn eigendecompose(h: &HamiltonianMatrix) -> Result<SpectralData> {
    let n = h.dim();
    if n == 0 {
        return invalid("cannot decompose an empty matrix");
    }
    for r in 0..n {
        for c in 0..n {
            let x = h.get(r, c);
            if !x.is_finite() {
                return invalid(format!("entry ({}, {}) is not finite", r + 1, c + 1));
            }
            if c > r && x != h.get(c, r) {
                return invalid(format!("matrix is not symmetric at ({}, {})", r + 1, c + 1));
            }
        }
    }

    let mut v: Vec<Vec<f64>> = h.rows();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut v, &mut d, &mut e);
    ql_implicit(&mut v, &mut d, &mut e)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]).then(a.cmp(&b)));

    let eigenvalues: Vec<f64> = order.iter().map(|&k| d[k]).collect();
    let mut eigenvectors = vec![0.0; n * n];
    for (col, &k) in order.iter().enumerate() {
        let mut pivot = 0;
        for r in 1..n {
            if v[r][k].abs() > v[pivot][k].abs() {
                pivot = r;
            }
        }
        let sign = if v[pivot][k] < 0.0 { -1.0 } else { 1.0 };
        for r in 0..n {
            // adding 0.0 turns -0.0 into +0.0 so the output bits are canonical
            eigenvectors[r * n + col] = sign * v[r][k] + 0.0;
        }
    }
    let near_degenerate = eigenvalues.windows(2).any(|w| w[1] - w[0] < DEGENERACY_GAP);

    Ok(SpectralData {
        dim: n,
        eigenvalues,
        eigenvectors,
        near_degenerate,
    })
}

/// Householder reduction. On return `d` holds the diagonal, `e[1..]` the
/// subdiagonal, and `v` the accumulated orthogonal transform.
fn tridiagonalize(v: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    d.copy_from_slice(&v[n - 1]);

    for i in (1..n).rev() {
        let scale: f64 = d[..i].iter().map(|x| x.abs()).sum();
        let mut h = 0.0;
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
                v[j][i] = 0.0;
            }
        } else {
            for x in d[..i].iter_mut() {
                *x /= scale;
                h += *x * *x;
            }
            let f = d[i - 1];
            let g = if f > 0.0 { -h.sqrt() } else { h.sqrt() };
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            e[..i].fill(0.0);

            for j in 0..i {
                let f = d[j];
                v[j][i] = f;
                let mut g = e[j] + v[j][j] * f;
                for k in j + 1..i {
                    g += v[k][j] * d[k];
                    e[k] += v[k][j] * f;
                }
                e[j] = g;
            }
            let mut f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                let f = d[j];
                let g = e[j];
                for k in j..i {
                    v[k][j] -= f * e[k] + g * d[k];
                }
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
            }
        }
        d[i] = h;
    }

    for i in 0..n - 1 {
        v[n - 1][i] = v[i][i];
        v[i][i] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[k][i + 1] / h;
            }
            for j in 0..=i {
                let g: f64 = (0..=i).map(|k| v[k][i + 1] * v[k][j]).sum();
                for k in 0..=i {
                    v[k][j] -= g * d[k];
                }
            }
        }
        for row in v.iter_mut().take(i + 1) {
            row[i + 1] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[n - 1][j];
        v[n - 1][j] = 0.0;
    }
    v[n - 1][n - 1] = 1.0;
    e[0] = 0.0;
}

/// Implicit-shift QL on the tridiagonal `(d, e)`, rotating the columns of `v`.
fn ql_implicit(v: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }

        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_ITERATIONS {
                    return Err(Error::NoConvergence {
                        index: l + 1,
                        iterations: MAX_QL_ITERATIONS,
                    });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for x in d[l + 2..].iter_mut() {
                    *x -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for row in v.iter_mut() {
                        let h = row[i + 1];
                        row[i + 1] = s * row[i] + c * h;
                        row[i] = c * row[i] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        build_chain_hamiltonian, build_perturbed_hamiltonian, nnn_perturbation, ChainSpec,
    };

    fn p3() -> HamiltonianMatrix {
        build_chain_hamiltonian(&ChainSpec::new(vec![1.0, 1.0]).unwrap()).unwrap()
    }

    #[test]
    fn two_by_two() {
        let h = HamiltonianMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let s = eigendecompose(&h).unwrap();
        assert!((s.eigenvalues()[0] + 1.0).abs() < 1e-14);
        assert!((s.eigenvalues()[1] - 1.0).abs() < 1e-14);
        let w: Vec<f64> = s.site_overlaps(1).unwrap().iter().map(|x| x * x).collect();
        assert!((w[0] - 0.5).abs() < 1e-14 && (w[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn path_three_closed_form() {
        // characteristic polynomial lambda^3 - 2 lambda
        let s = eigendecompose(&p3()).unwrap();
        let r2 = 2f64.sqrt();
        for (got, want) in s.eigenvalues().iter().zip([-r2, 0.0, r2]) {
            assert!((got - want).abs() < 1e-14, "{got} vs {want}");
        }
        let row = s.site_overlaps(1).unwrap();
        let sq: Vec<f64> = row.iter().map(|x| x * x).collect();
        for (got, want) in sq.iter().zip([0.25, 0.5, 0.25]) {
            assert!((got - want).abs() < 1e-14);
        }
        assert!((row[1].abs() - 1.0 / r2).abs() < 1e-14);
        assert!((s.moment(1, 2).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_matrix_gives_identity() {
        let s = eigendecompose(&HamiltonianMatrix::zeros(3)).unwrap();
        assert_eq!(s.eigenvalues(), &[0.0, 0.0, 0.0]);
        for r in 0..3 {
            for c in 0..3 {
                assert_eq!(s.vector_entry(r, c), if r == c { 1.0 } else { 0.0 });
            }
        }
        assert!(s.near_degenerate());
    }

    #[test]
    fn one_by_one() {
        let s = eigendecompose(&HamiltonianMatrix::zeros(1)).unwrap();
        assert_eq!(s.eigenvalues(), &[0.0]);
        assert_eq!(s.vector_entry(0, 0), 1.0);
    }

    #[test]
    fn second_moment_matches_first_row_norm() {
        let spec = ChainSpec::new(vec![1.0, 1.0]).unwrap();
        let h =
            build_perturbed_hamiltonian(&spec, &nnn_perturbation(&[1.0], 0.1).unwrap()).unwrap();
        let s = eigendecompose(&h).unwrap();
        assert!((s.moment(1, 2).unwrap() - 1.01).abs() < 1e-14);
        assert!((s.moment(1, 0).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn site_range_checked() {
        let s = eigendecompose(&p3()).unwrap();
        assert!(s.site_overlaps(0).is_err());
        assert!(s.site_overlaps(4).is_err());
        assert!(s.moment(0, 2).is_err());
    }

    #[test]
    fn rejects_asymmetric_and_nonfinite() {
        let h = HamiltonianMatrix::from_rows(&[vec![0.0, 1.0], vec![0.5, 0.0]]).unwrap();
        assert!(matches!(eigendecompose(&h), Err(Error::Validation(_))));
        let h = HamiltonianMatrix::from_rows(&[vec![0.0, f64::NAN], vec![f64::NAN, 0.0]]).unwrap();
        assert!(matches!(eigendecompose(&h), Err(Error::Validation(_))));
    }

    #[test]
    fn sign_convention_holds() {
        let spec = ChainSpec::new(vec![0.9, 1.1, 1.0, 0.97, 1.02]).unwrap();
        let h = build_perturbed_hamiltonian(
            &spec,
            &nnn_perturbation(&[1.0, 0.5, 0.8, 1.0], 0.05).unwrap(),
        )
        .unwrap();
        let s = eigendecompose(&h).unwrap();
        for k in 0..s.dim() {
            let mut pivot = 0;
            for r in 1..s.dim() {
                if s.vector_entry(r, k).abs() > s.vector_entry(pivot, k).abs() {
                    pivot = r;
                }
            }
            assert!(s.vector_entry(pivot, k) >= 0.0);
        }
        assert!(!s.near_degenerate());
        assert!(s.max_relative_residual(&h) < 1e-12);
        assert!(s.orthonormality_defect() < 1e-12);
    }
}
