//! Free boundary conditions: open chains, trees and forests.
//!
//! Without loops the bond variables `σ_a σ_b` are independent under the Gibbs
//! measure, so `Z/2^sites = ∏ cosh J_e`, `ω_e = tanh J_e` and every truncated
//! two-bond correlation vanishes identically.

use crate::chain::{check_finite, Method, ObservableReport, PairObservables};
use crate::error::{Error, Result};
use crate::logsigned::{ln_cosh, LogSigned};

/// A loop-free graph with one coupling per edge. Sites are 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeGraph {
    n_sites: usize,
    edges: Vec<(usize, usize)>,
    couplings: Vec<f64>,
}

impl TreeGraph {
    /// Open chain `1 - 2 - ... - (len+1)` with bond `i` joining sites `i`, `i+1`.
    pub fn open_chain(couplings: &[f64]) -> Result<Self> {
        let edges = (1..=couplings.len()).map(|i| (i, i + 1)).collect();
        Self::from_edges(couplings.len() + 1, edges, couplings.to_vec())
    }

    /// Builds from a parent array: `parents[i]` is the parent of site `i+1`,
    /// `None` for a root. Edges (and couplings) follow the order of the
    /// non-root sites.
    pub fn from_parents(parents: &[Option<usize>], couplings: &[f64]) -> Result<Self> {
        let n = parents.len();
        for (i, p) in parents.iter().enumerate() {
            if let Some(p) = *p {
                if p == 0 || p > n {
                    return Err(Error::InvalidGraph(format!(
                        "parent {p} of site {} is not a site",
                        i + 1
                    )));
                }
            }
        }
        // following parent pointers from any site must terminate
        for start in 0..n {
            let mut seen = vec![false; n];
            let mut cur = start;
            while let Some(p) = parents[cur] {
                if seen[cur] {
                    return Err(Error::Cycle(cur + 1));
                }
                seen[cur] = true;
                cur = p - 1;
            }
        }
        let edges: Vec<(usize, usize)> = parents
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.map(|p| (p, i + 1)))
            .collect();
        Self::from_edges(n, edges, couplings.to_vec())
    }

    /// Builds from an edge list, rejecting any cycle (including repeated edges).
    pub fn from_edges(n_sites: usize, edges: Vec<(usize, usize)>, couplings: Vec<f64>) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::InvalidGraph("no bonds".into()));
        }
        if edges.len() != couplings.len() {
            return Err(Error::InvalidGraph(format!(
                "{} edges but {} couplings",
                edges.len(),
                couplings.len()
            )));
        }
        check_finite(&couplings)?;
        let mut dsu = DisjointSets::new(n_sites);
        for &(a, b) in &edges {
            if a == 0 || b == 0 || a > n_sites || b > n_sites {
                return Err(Error::InvalidGraph(format!("edge ({a}, {b}) leaves 1..={n_sites}")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at site {a}")));
            }
            if !dsu.union(a - 1, b - 1) {
                return Err(Error::Cycle(b));
            }
        }
        Ok(TreeGraph {
            n_sites,
            edges,
            couplings,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// False when `a` and `b` were already connected.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Factorized observables of a loop-free graph.
pub fn free_boundary_observables(t: &TreeGraph) -> ObservableReport {
    let js = &t.couplings;
    let n = js.len();
    let omega: Vec<f64> = js.iter().map(|j| j.tanh()).collect();
    let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for h in 0..n {
        for k in h + 1..n {
            pairs.push(PairObservables {
                h: h + 1,
                k: k + 1,
                omega_pair: omega[h] * omega[k],
                truncated: 0.0,
            });
        }
    }
    ObservableReport {
        z: LogSigned::new(1, js.iter().map(|&j| ln_cosh(j)).sum()),
        omega,
        pairs,
        method: Method::ClosedForm,
    }
}
