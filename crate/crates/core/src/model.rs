//! Coupling specifications and dense Hamiltonian assembly.
//!
//! Sites are 1-indexed everywhere a value crosses the library boundary
//! (JSON documents, error messages, edge triples). Matrices are stored
//! 0-indexed internally.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Nearest-neighbour chain: `nearest[n - 1]` couples sites `n` and `n + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub n_sites: usize,
    pub nearest: Vec<f64>,
}

impl ChainSpec {
    pub fn new(nearest: Vec<f64>) -> Result<Self> {
        let spec = ChainSpec {
            n_sites: nearest.len() + 1,
            nearest,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 2 {
            return invalid(format!(
                "a chain needs at least 2 sites, got {}",
                self.n_sites
            ));
        }
        if self.nearest.len() != self.n_sites - 1 {
            return invalid(format!(
                "expected {} nearest-neighbour couplings for {} sites, got {}",
                self.n_sites - 1,
                self.n_sites,
                self.nearest.len()
            ));
        }
        for (i, &c) in self.nearest.iter().enumerate() {
            if !(c.is_finite() && c > 0.0) {
                return invalid(format!(
                    "coupling at index {} must be positive and finite, got {c}",
                    i + 1
                ));
            }
        }
        Ok(())
    }
}

/// An extra coupling between sites `i < j` with `j - i >= 2`, 1-indexed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(usize, usize, f64)", into = "(usize, usize, f64)")]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub d: f64,
}

impl From<(usize, usize, f64)> for Edge {
    fn from((i, j, d): (usize, usize, f64)) -> Self {
        Edge { i, j, d }
    }
}

impl From<Edge> for (usize, usize, f64) {
    fn from(e: Edge) -> Self {
        (e.i, e.j, e.d)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    pub epsilon: f64,
    pub edges: Vec<Edge>,
}

impl PerturbationSpec {
    pub fn none() -> Self {
        PerturbationSpec {
            epsilon: 0.0,
            edges: Vec::new(),
        }
    }

    /// Checks every edge against an `n_sites` chain.
    pub fn validate(&self, n_sites: usize) -> Result<()> {
        if !(self.epsilon.is_finite() && self.epsilon >= 0.0) {
            return invalid(format!(
                "epsilon must be finite and non-negative, got {}",
                self.epsilon
            ));
        }
        let mut seen = HashSet::with_capacity(self.edges.len());
        for (k, e) in self.edges.iter().enumerate() {
            if e.i < 1 || e.j > n_sites || e.i >= e.j {
                return invalid(format!(
                    "edge {} ({}, {}) must satisfy 1 <= i < j <= {n_sites}",
                    k + 1,
                    e.i,
                    e.j
                ));
            }
            if e.j - e.i < 2 {
                return invalid(format!(
                    "edge {} ({}, {}) joins nearest neighbours; extra edges need j - i >= 2",
                    k + 1,
                    e.i,
                    e.j
                ));
            }
            if !(e.d.is_finite() && e.d > 0.0) {
                return invalid(format!(
                    "edge {} ({}, {}) weight must be positive, got {}",
                    k + 1,
                    e.i,
                    e.j,
                    e.d
                ));
            }
            if !seen.insert((e.i, e.j)) {
                return invalid(format!("duplicate edge ({}, {})", e.i, e.j));
            }
        }
        Ok(())
    }

    pub fn max_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.d).fold(0.0, f64::max)
    }
}

/// Dense real symmetric matrix with zero diagonal, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl HamiltonianMatrix {
    pub fn zeros(dim: usize) -> Self {
        HamiltonianMatrix {
            dim,
            entries: vec![0.0; dim * dim],
        }
    }

    /// Builds a matrix from row-major data. Accepts any square input; the
    /// eigensolver is responsible for rejecting asymmetric or non-finite data.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return invalid(format!(
                    "row {} has {} entries, expected {dim}",
                    r + 1,
                    row.len()
                ));
            }
            entries.extend_from_slice(row);
        }
        Ok(HamiltonianMatrix { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// 0-based access.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim + col]
    }

    /// Sets both `(a, b)` and `(b, a)`, 0-based.
    #[inline]
    pub(crate) fn set_pair(&mut self, a: usize, b: usize, value: f64) {
        self.entries[a * self.dim + b] = value;
        self.entries[b * self.dim + a] = value;
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries
            .chunks(self.dim.max(1))
            .map(<[f64]>::to_vec)
            .collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.entries.iter().map(|x| x * x).sum()
    }
}

impl fmt::Display for HamiltonianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.entries.chunks(self.dim.max(1)) {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>10.6}")).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

pub fn build_chain_hamiltonian(spec: &ChainSpec) -> Result<HamiltonianMatrix> {
    spec.validate()?;
    let mut h = HamiltonianMatrix::zeros(spec.n_sites);
    for (n, &c) in spec.nearest.iter().enumerate() {
        h.set_pair(n, n + 1, c);
    }
    Ok(h)
}

/// `H_C + epsilon * H_D`, where `H_D` carries the extra edges of `pert`.
pub fn build_perturbed_hamiltonian(
    spec: &ChainSpec,
    pert: &PerturbationSpec,
) -> Result<HamiltonianMatrix> {
    let mut h = build_chain_hamiltonian(spec)?;
    pert.validate(spec.n_sites)?;
    for e in &pert.edges {
        h.set_pair(e.i - 1, e.j - 1, pert.epsilon * e.d);
    }
    Ok(h)
}

/// Next-nearest-neighbour topology: edges `(l, l + 2, d_l)` for `l = 1..=N-2`.
pub fn nnn_perturbation(d_values: &[f64], epsilon: f64) -> Result<PerturbationSpec> {
    let edges = d_values
        .iter()
        .enumerate()
        .map(|(l, &d)| Edge {
            i: l + 1,
            j: l + 3,
            d,
        })
        .collect();
    let pert = PerturbationSpec { epsilon, edges };
    pert.validate(d_values.len() + 2)?;
    Ok(pert)
}

/// JSON form of a chain plus optional perturbation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub n_sites: usize,
    pub nearest: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<PerturbationSpec>,
}

impl SystemSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SystemSpec = serde_json::from_str(text)
            .map_err(|e| crate::Error::Validation(format!("malformed spec JSON: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.chain().validate()?;
        self.perturbation().validate(self.n_sites)
    }

    pub fn chain(&self) -> ChainSpec {
        ChainSpec {
            n_sites: self.n_sites,
            nearest: self.nearest.clone(),
        }
    }

    pub fn perturbation(&self) -> PerturbationSpec {
        self.perturbation
            .clone()
            .unwrap_or_else(PerturbationSpec::none)
    }

    pub fn hamiltonian(&self) -> Result<HamiltonianMatrix> {
        build_perturbed_hamiltonian(&self.chain(), &self.perturbation())
    }
}
