//! Zero forcing on coupling graphs.
//!
//! A blue vertex forces its only white neighbour blue. The closure of an
//! initial set is the fixed point of that rule; a set whose closure is the
//! whole graph identifies enough probe sites to reconstruct every coupling.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::{ChainSpec, PerturbationSpec};

pub const DEFAULT_BRUTE_FORCE_CAP: usize = 16;

/// Undirected simple graph on vertices `1..=n_vertices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingGraph {
    n_vertices: usize,
    neighbours: Vec<BTreeSet<usize>>,
}

impl CouplingGraph {
    pub fn new(n_vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut neighbours = vec![BTreeSet::new(); n_vertices];
        for &(a, b) in edges {
            if a < 1 || b < 1 || a > n_vertices || b > n_vertices {
                return invalid(format!("edge ({a}, {b}) outside vertices 1..={n_vertices}"));
            }
            if a == b {
                return invalid(format!("self-loop at vertex {a}"));
            }
            neighbours[a - 1].insert(b - 1);
            neighbours[b - 1].insert(a - 1);
        }
        Ok(CouplingGraph {
            n_vertices,
            neighbours,
        })
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|v| (v, v + 1)).collect();
        Self::new(n, &edges).expect("path edges are valid")
    }

    pub fn cycle(n: usize) -> Self {
        let mut edges: Vec<_> = (1..n).map(|v| (v, v + 1)).collect();
        if n > 2 {
            edges.push((n, 1));
        }
        Self::new(n, &edges).expect("cycle edges are valid")
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (1..=n)
            .flat_map(|a| (a + 1..=n).map(move |b| (a, b)))
            .collect();
        Self::new(n, &edges).expect("complete edges are valid")
    }

    /// Path plus every `(l, l + 2)` edge.
    pub fn next_nearest_chain(n: usize) -> Self {
        let mut edges: Vec<_> = (1..n).map(|v| (v, v + 1)).collect();
        edges.extend((1..n.saturating_sub(1)).map(|v| (v, v + 2)));
        Self::new(n, &edges).expect("next-nearest edges are valid")
    }

    /// Topology of a chain with the extra edges of `pert`.
    pub fn from_system(chain: &ChainSpec, pert: &PerturbationSpec) -> Result<Self> {
        let mut edges: Vec<_> = (1..chain.n_sites).map(|v| (v, v + 1)).collect();
        if pert.epsilon > 0.0 {
            edges.extend(pert.edges.iter().map(|e| (e.i, e.j)));
        }
        Self::new(chain.n_sites, &edges)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// 1-based neighbours of 1-based `v`.
    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.neighbours[v - 1].iter().map(|u| u + 1)
    }

    /// Unordered edges as `(a, b)` with `a < b`, 1-based.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, ns) in self.neighbours.iter().enumerate() {
            for &b in ns.range(a + 1..) {
                out.push((a + 1, b + 1));
            }
        }
        out
    }

    fn check_subset(&self, set: &BTreeSet<usize>) -> Result<()> {
        match set.iter().find(|&&v| v < 1 || v > self.n_vertices) {
            Some(v) => invalid(format!("vertex {v} outside 1..={}", self.n_vertices)),
            None => Ok(()),
        }
    }
}

/// Fixed point of the forcing rule, by repeated full sweeps.
pub fn zero_forcing_closure(
    graph: &CouplingGraph,
    initial_blue: &BTreeSet<usize>,
) -> Result<BTreeSet<usize>> {
    graph.check_subset(initial_blue)?;
    let mut blue = vec![false; graph.n_vertices];
    for &v in initial_blue {
        blue[v - 1] = true;
    }
    loop {
        let mut changed = false;
        for v in 0..graph.n_vertices {
            if !blue[v] {
                continue;
            }
            let mut white = graph.neighbours[v].iter().filter(|&&u| !blue[u]);
            if let (Some(&only), None) = (white.next(), white.next()) {
                blue[only] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok((1..=graph.n_vertices).filter(|v| blue[v - 1]).collect())
}

pub fn is_zero_forcing_set(graph: &CouplingGraph, candidate: &BTreeSet<usize>) -> Result<bool> {
    Ok(zero_forcing_closure(graph, candidate)?.len() == graph.n_vertices)
}

/// Smallest zero forcing set size, by exhaustive search over subsets of
/// increasing size. Refuses graphs larger than `cap`.
pub fn minimum_zero_forcing_number(graph: &CouplingGraph, cap: usize) -> Result<usize> {
    let n = graph.n_vertices;
    if n > cap {
        return Err(Error::UnsupportedSize { n, cap });
    }
    if n == 0 {
        return Ok(0);
    }
    for k in 1..=n {
        if let Some(found) = first_forcing_subset(graph, k)? {
            debug_assert_eq!(found.len(), k);
            return Ok(k);
        }
    }
    unreachable!("the full vertex set is always zero forcing")
}

/// A minimum zero forcing set (lexicographically first of minimum size).
pub fn minimum_zero_forcing_set(graph: &CouplingGraph, cap: usize) -> Result<BTreeSet<usize>> {
    let k = minimum_zero_forcing_number(graph, cap)?;
    Ok(first_forcing_subset(graph, k)?.unwrap_or_default())
}

fn first_forcing_subset(graph: &CouplingGraph, k: usize) -> Result<Option<BTreeSet<usize>>> {
    let n = graph.n_vertices;
    // Gosper's hack over k-bit masks in increasing numeric order.
    let mut mask: u64 = (1u64 << k) - 1;
    let limit = 1u64 << n;
    while mask < limit {
        let set: BTreeSet<usize> = (0..n)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| b + 1)
            .collect();
        if is_zero_forcing_set(graph, &set)? {
            return Ok(Some(set));
        }
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
    Ok(None)
}

/// JSON input for the `zero-forcing` subcommand.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphDocument {
    pub n_vertices: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(default)]
    pub initial: Vec<usize>,
}

impl GraphDocument {
    pub fn graph(&self) -> Result<CouplingGraph> {
        CouplingGraph::new(self.n_vertices, &self.edges)
    }
}
