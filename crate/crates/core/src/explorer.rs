//! Brute force on small bond graphs and scans for positive averaged
//! truncated correlations outside the periodic-chain setting.
//!
//! Two scans are provided: a periodic chain with one extra chord between
//! non-adjacent sites under symmetric `±J` disorder, and a periodic chain
//! whose couplings have zero mean but an asymmetric two-point law. A third,
//! the plain chain with symmetric disorder, is the control and must never
//! produce a record.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::chain::{check_finite, CouplingVector, Moments, ObservableReport};
use crate::disorder::{exact_average_tables, BondLaw};
use crate::error::{invalid, Error, Result};
use crate::inequalities::{Sign, DEFAULT_REL_TOLERANCE};
use crate::reduce::pairwise_reduce;

pub const MAX_SITES: usize = 12;
pub const MAX_BONDS: usize = 14;

/// Sites and bonds of a small connected graph; sites are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topology {
    pub n_sites: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Topology {
    pub fn new(n_sites: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n_sites < 2 {
            return Err(Error::InvalidGraph(format!("{n_sites} sites")));
        }
        if n_sites > MAX_SITES {
            return Err(Error::TooLarge {
                what: "graph sites",
                max: MAX_SITES,
                got: n_sites,
            });
        }
        if edges.is_empty() {
            return Err(Error::InvalidGraph("no bonds".into()));
        }
        if edges.len() > MAX_BONDS {
            return Err(Error::TooLarge {
                what: "graph bonds",
                max: MAX_BONDS,
                got: edges.len(),
            });
        }
        let mut adjacency = vec![Vec::new(); n_sites];
        for &(a, b) in &edges {
            if a == 0 || b == 0 || a > n_sites || b > n_sites {
                return Err(Error::InvalidGraph(format!("bond ({a}, {b}) leaves 1..={n_sites}")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at site {a}")));
            }
            adjacency[a - 1].push(b - 1);
            adjacency[b - 1].push(a - 1);
        }
        let mut seen = vec![false; n_sites];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if let Some(lost) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidGraph(format!("site {} is disconnected from site 1", lost + 1)));
        }
        Ok(Topology { n_sites, edges })
    }

    /// Ring `1 - 2 - … - n - 1`, bond `i` joining `i` and `i+1`.
    pub fn periodic_chain(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGraph(format!("a simple ring needs 3 sites, got {n}")));
        }
        Self::new(n, (1..=n).map(|i| (i, i % n + 1)).collect())
    }

    /// Ring plus one chord between non-adjacent sites; the chord is bond
    /// `n + 1`.
    pub fn chain_with_chord(n: usize, chord: (usize, usize)) -> Result<Self> {
        let (a, b) = chord;
        if a == 0 || b == 0 || a > n || b > n {
            return Err(Error::InvalidGraph(format!("chord ({a}, {b}) leaves 1..={n}")));
        }
        let gap = a.abs_diff(b);
        if gap == 0 || gap == 1 || gap == n - 1 {
            return Err(Error::InvalidGraph(format!(
                "chord ({a}, {b}) joins adjacent sites of the {n}-ring"
            )));
        }
        let mut edges: Vec<(usize, usize)> = (1..=n).map(|i| (i, i % n + 1)).collect();
        edges.push((a.min(b), a.max(b)));
        Self::new(n, edges)
    }

    pub fn bonds(&self) -> usize {
        self.edges.len()
    }

    fn describe(&self) -> String {
        let edges: Vec<String> = self.edges.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        format!("{} sites [{}]", self.n_sites, edges.join(" "))
    }
}

/// Topology with one law per bond.
#[derive(Debug, Clone, PartialEq)]
pub struct BondGraph {
    topology: Topology,
    laws: Vec<BondLaw>,
}

impl BondGraph {
    pub fn new(topology: Topology, laws: Vec<BondLaw>) -> Result<Self> {
        if laws.len() != topology.bonds() {
            return Err(Error::InvalidGraph(format!(
                "{} bonds but {} laws",
                topology.bonds(),
                laws.len()
            )));
        }
        if let Some(i) = laws.iter().position(|l| !l.is_discrete()) {
            return Err(Error::ContinuousLaw(i + 1));
        }
        Ok(BondGraph { topology, laws })
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn laws(&self) -> &[BondLaw] {
        &self.laws
    }

    fn tables(&self) -> Vec<[(f64, f64); 2]> {
        self.laws.iter().map(|l| l.outcomes().expect("discrete")).collect()
    }
}

/// All observables of one realization on `topology`, by summing over the
/// `2^sites` spin configurations (site 1 pinned up).
pub fn graph_observables(topology: &Topology, couplings: &[f64]) -> Result<ObservableReport> {
    let bonds = topology.bonds();
    if couplings.len() != bonds {
        return Err(Error::InvalidGraph(format!("{bonds} bonds but {} couplings", couplings.len())));
    }
    check_finite(couplings)?;
    let n = topology.n_sites;
    let shift: f64 = couplings.iter().map(|j| j.abs()).sum();
    let edges = &topology.edges;

    let leaf = |range: Range<u64>| {
        let mut acc = Moments::zeros(bonds);
        let mut spins = vec![1.0f64; n];
        let mut b = vec![0.0f64; bonds];
        for m in range {
            for (i, s) in spins.iter_mut().enumerate().skip(1) {
                *s = if (m >> (i - 1)) & 1 == 1 { -1.0 } else { 1.0 };
            }
            let mut energy = 0.0;
            for (e, &(x, y)) in edges.iter().enumerate() {
                b[e] = spins[x - 1] * spins[y - 1];
                energy += couplings[e] * b[e];
            }
            acc.add((energy - shift).exp(), &b);
        }
        acc
    };
    let moments = pairwise_reduce(0..1u64 << (n - 1), &leaf);
    Ok(moments.into_report(bonds, shift, (n as f64 - 1.0) * std::f64::consts::LN_2))
}

/// Exact `⟨J_h J_k (ω_hk − ω_h ω_k)⟩` for a bond pair, with `⟨|…|⟩` as
/// scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairAverage {
    pub h: usize,
    pub k: usize,
    pub value: f64,
    pub scale: f64,
}

fn pair_averages_tables(topology: &Topology, tables: &[[(f64, f64); 2]]) -> Result<Vec<PairAverage>> {
    let bonds = topology.bonds();
    let pairs: Vec<(usize, usize)> = (1..=bonds)
        .flat_map(|h| (h + 1..=bonds).map(move |k| (h, k)))
        .collect();
    let out = exact_average_tables(tables, 2 * pairs.len(), |c, out| {
        let js = c.as_slice();
        let report = graph_observables(topology, js)?;
        for (i, p) in report.pairs.iter().enumerate() {
            let v = js[p.h - 1] * js[p.k - 1] * p.truncated;
            out[2 * i] = v;
            out[2 * i + 1] = v.abs();
        }
        Ok(())
    })?;
    Ok(pairs
        .iter()
        .enumerate()
        .map(|(i, &(h, k))| PairAverage {
            h,
            k,
            value: out[2 * i],
            scale: out[2 * i + 1],
        })
        .collect())
}

/// Quenched averages of the truncated correlation for every bond pair.
///
/// A one-bond graph cannot be enumerated through [`CouplingVector`], which
/// needs two bonds, so at least two bonds are required.
pub fn pair_averages(graph: &BondGraph) -> Result<Vec<PairAverage>> {
    if graph.topology.bonds() < 2 {
        return Err(Error::InvalidGraph("need at least two bonds for pairs".into()));
    }
    pair_averages_tables(&graph.topology, &graph.tables())
}

/// A bond pair whose averaged truncated correlation came out strictly
/// positive. Serializes as one JSON object per line with keys `graph`,
/// `laws`, `pair`, `value`, `tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub graph: Topology,
    /// Two atoms `[[low, p_low], [high, p_high]]` per bond.
    pub laws: Vec<[(f64, f64); 2]>,
    pub pair: (usize, usize),
    pub value: f64,
    pub tolerance: f64,
}

impl ViolationRecord {
    pub fn verdict(&self) -> Sign {
        Sign::classify(self.value, self.tolerance)
    }

    /// Recomputes the stored average from the stored graph and laws.
    pub fn replay(&self) -> Result<f64> {
        let topology = Topology::new(self.graph.n_sites, self.graph.edges.clone())?;
        if self.laws.len() != topology.bonds() {
            return Err(Error::InvalidGraph("law count does not match bonds".into()));
        }
        let (h, k) = self.pair;
        pair_averages_tables(&topology, &self.laws)?
            .into_iter()
            .find(|p| (p.h, p.k) == (h.min(k), h.max(k)))
            .map(|p| p.value)
            .ok_or_else(|| invalid("pair", format!("({h}, {k}) is not a bond pair")))
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

/// Result of one scan, kept even when nothing was found.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSummary {
    pub search: String,
    /// Grid points evaluated.
    pub points: usize,
    /// Bond pairs examined over all points.
    pub pairs_checked: usize,
    /// Largest averaged truncated correlation seen.
    pub max_value: f64,
    pub records: Vec<ViolationRecord>,
}

impl ScanSummary {
    fn new(search: impl Into<String>) -> Self {
        ScanSummary {
            search: search.into(),
            points: 0,
            pairs_checked: 0,
            max_value: f64::NEG_INFINITY,
            records: Vec::new(),
        }
    }

    pub fn none_found(&self) -> bool {
        self.records.is_empty()
    }

    fn absorb(&mut self, graph: &BondGraph, rel_tolerance: f64) -> Result<()> {
        let averages = pair_averages(graph)?;
        self.points += 1;
        self.pairs_checked += averages.len();
        for p in averages {
            self.max_value = self.max_value.max(p.value);
            let tolerance = rel_tolerance * p.scale;
            if Sign::classify(p.value, tolerance) == Sign::Positive {
                self.records.push(ViolationRecord {
                    graph: graph.topology.clone(),
                    laws: graph.tables(),
                    pair: (p.h, p.k),
                    value: p.value,
                    tolerance,
                });
            }
        }
        Ok(())
    }

    fn merge(&mut self, other: ScanSummary) {
        self.points += other.points;
        self.pairs_checked += other.pairs_checked;
        self.max_value = self.max_value.max(other.max_value);
        self.records.extend(other.records);
    }

    /// Machine-readable line for an empty scan.
    pub fn none_found_line(&self) -> String {
        serde_json::json!({
            "none_found_in_grid": true,
            "search": self.search,
            "points": self.points,
            "pairs_checked": self.pairs_checked,
            "max_value": self.max_value,
        })
        .to_string()
    }

    /// Records as JSON lines, or a single "none found" line.
    pub fn to_json_lines(&self) -> String {
        if self.records.is_empty() {
            return self.none_found_line() + "\n";
        }
        self.records.iter().map(|r| r.to_json_line() + "\n").collect()
    }
}

fn symmetric_two_point(m: f64) -> Result<BondLaw> {
    if !(m.is_finite() && m >= 0.0) {
        return Err(invalid("magnitude_grid", format!("{m} must be finite and non-negative")));
    }
    BondLaw::two_point(m, -m, 0.5)
}

/// Ring of `base_n` sites plus `chord`, all bonds `±J` with probability 1/2.
/// Every `(ring magnitude, chord magnitude)` pair of `magnitude_grid` is
/// evaluated; zero magnitudes are allowed.
pub fn search_chord_violation(base_n: usize, chord: (usize, usize), magnitude_grid: &[f64]) -> Result<ScanSummary> {
    let topology = Topology::chain_with_chord(base_n, chord)?;
    if magnitude_grid.is_empty() {
        return Err(invalid("magnitude_grid", "empty"));
    }
    let mut summary = ScanSummary::new(format!("chord {}-{} on {base_n}-ring", chord.0, chord.1));
    for &ring in magnitude_grid {
        for &extra in magnitude_grid {
            let mut laws = vec![symmetric_two_point(ring)?; base_n];
            laws.push(symmetric_two_point(extra)?);
            summary.absorb(&BondGraph::new(topology.clone(), laws)?, DEFAULT_REL_TOLERANCE)?;
        }
    }
    Ok(summary)
}

/// Periodic chain of `n` bonds with i.i.d. zero-mean laws `+a` / `−b`, one
/// scan point per `(a, b)` in `grid`.
pub fn search_asymmetric_violation(n: usize, grid: &[(f64, f64)]) -> Result<ScanSummary> {
    let topology = Topology::periodic_chain(n)?;
    if grid.is_empty() {
        return Err(invalid("grid", "empty"));
    }
    let mut summary = ScanSummary::new(format!("zero-mean asymmetric two-point on {n}-ring"));
    for &(a, b) in grid {
        let law = BondLaw::zero_mean_two_point(a, b)?;
        summary.absorb(&BondGraph::new(topology.clone(), vec![law; n])?, DEFAULT_REL_TOLERANCE)?;
    }
    Ok(summary)
}

/// Plain ring with symmetric `±J` disorder, uniform magnitude per point.
pub fn search_chain_control(n: usize, magnitude_grid: &[f64]) -> Result<ScanSummary> {
    let topology = Topology::periodic_chain(n)?;
    let mut summary = ScanSummary::new(format!("control: symmetric {n}-ring"));
    for &m in magnitude_grid {
        let laws = vec![symmetric_two_point(m)?; n];
        summary.absorb(&BondGraph::new(topology.clone(), laws)?, DEFAULT_REL_TOLERANCE)?;
    }
    Ok(summary)
}

/// Default grids of the three scans.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExploreGrids {
    pub chord_ring_sizes: Vec<usize>,
    pub magnitudes: Vec<f64>,
    pub asymmetric_ring_sizes: Vec<usize>,
    pub asymmetric_values: Vec<f64>,
}

impl Default for ExploreGrids {
    fn default() -> Self {
        ExploreGrids {
            chord_ring_sizes: vec![4, 5, 6],
            magnitudes: vec![0.5, 1.0, 2.0, 4.0],
            asymmetric_ring_sizes: vec![3, 4, 5, 6],
            asymmetric_values: vec![0.25, 0.5, 1.0, 2.0, 4.0],
        }
    }
}

/// Chord scan over every non-adjacent chord of every ring size.
pub fn default_chord_scan(grids: &ExploreGrids) -> Result<ScanSummary> {
    let mut total = ScanSummary::new("chord");
    for &n in &grids.chord_ring_sizes {
        for a in 1..=n {
            for b in a + 2..=n {
                if a == 1 && b == n {
                    continue;
                }
                total.merge(search_chord_violation(n, (a, b), &grids.magnitudes)?);
            }
        }
    }
    Ok(total)
}

/// Asymmetric scan over all `(a, b)` value pairs, including the symmetric
/// `a = b` points.
pub fn default_asymmetric_scan(grids: &ExploreGrids) -> Result<ScanSummary> {
    let pairs: Vec<(f64, f64)> = grids
        .asymmetric_values
        .iter()
        .flat_map(|&a| grids.asymmetric_values.iter().map(move |&b| (a, b)))
        .collect();
    let mut total = ScanSummary::new("asymmetric");
    for &n in &grids.asymmetric_ring_sizes {
        total.merge(search_asymmetric_violation(n, &pairs)?);
    }
    Ok(total)
}

/// Control scan on plain rings of the chord-scan sizes.
pub fn default_control_scan(grids: &ExploreGrids) -> Result<ScanSummary> {
    let mut total = ScanSummary::new("control");
    for &n in &grids.chord_ring_sizes {
        total.merge(search_chain_control(n, &grids.magnitudes)?);
    }
    Ok(total)
}

/// Human-readable one-line description of a record.
pub fn describe(record: &ViolationRecord) -> String {
    format!(
        "{}: pair ({}, {}) average {:e} > tol {:e}",
        record.graph.describe(),
        record.pair.0,
        record.pair.1,
        record.value,
        record.tolerance
    )
}

/// Brute-force observables of a periodic chain given as a [`CouplingVector`]
/// (ring topology needs at least three sites).
pub fn chain_as_graph(c: &CouplingVector) -> Result<ObservableReport> {
    graph_observables(&Topology::periodic_chain(c.len())?, c.as_slice())
}
