//! Centrality vs. population, single-link-failure sweeps, node affinity,
//! and the adjacency/Laplacian comparison.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::Matrix;
use crate::walk::{average_populations, Generator, InitialState, PopulationVector, WalkConfig};

/// Deltas smaller than this in magnitude are reported as near-zero.
pub const NEAR_ZERO_DELTA: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityRow {
    pub node: usize,
    pub centrality: f64,
    pub population: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityReport {
    pub rows: Vec<CentralityRow>,
    /// `None` when either column is constant.
    pub spearman_rho: Option<f64>,
}

/// Degree centrality next to time-averaged population for every node.
pub fn centrality_population_report(g: &Graph, cfg: &WalkConfig) -> Result<CentralityReport> {
    let centrality = g.degree_centralities()?;
    let populations = average_populations(g, cfg)?;
    let spearman_rho = spearman(&centrality, populations.as_slice());
    let rows = centrality
        .iter()
        .zip(populations.as_slice())
        .enumerate()
        .map(|(j, (&c, &p))| CentralityRow {
            node: j + 1,
            centrality: c,
            population: p,
        })
        .collect();
    Ok(CentralityReport { rows, spearman_rho })
}

/// Values closer than this are tied when ranking.
const RANK_TIE_TOLERANCE: f64 = 1e-12;

/// 1-based ranks with ties sharing their average rank.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len()
            && values[order[end]] - values[order[end - 1]] <= RANK_TIE_TOLERANCE
        {
            end += 1;
        }
        // Positions start..end hold ranks start+1..=end.
        let rank = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len());
    let rx = average_ranks(x);
    let ry = average_ranks(y);
    pearson(&rx, &ry)
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    if x.len() < 2 {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Outcome of removing one edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRemoval {
    /// 1-based edge index in the baseline graph.
    pub edge: usize,
    /// 1-based endpoints.
    pub pair: (usize, usize),
    pub populations: PopulationVector,
    /// `populations - baseline`.
    pub deltas: Vec<f64>,
    pub near_zero_count: usize,
    /// The graph without this edge is disconnected.
    pub disconnected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config: WalkConfig,
    pub baseline: PopulationVector,
    pub per_edge: Vec<EdgeRemoval>,
    /// `flow_signs[k][j]` is +1 when node `j` gained population after
    /// removing edge `k + 1` (or the change was exactly zero), −1 otherwise.
    pub flow_signs: Vec<Vec<i8>>,
}

impl SweepResult {
    pub fn node_count(&self) -> usize {
        self.baseline.len()
    }

    pub fn edge_count(&self) -> usize {
        self.per_edge.len()
    }

    pub fn removal_of(&self, u: usize, v: usize) -> Option<&EdgeRemoval> {
        let key = (u.min(v), u.max(v));
        self.per_edge.iter().find(|r| r.pair == key)
    }
}

pub fn flow_sign(delta: f64) -> i8 {
    if delta >= 0.0 {
        1
    } else {
        -1
    }
}

/// Populations on `g` and on every single-edge removal of it, using the
/// global rayon pool.
pub fn edge_removal_sweep(g: &Graph, cfg: &WalkConfig) -> Result<SweepResult> {
    sweep_in_order(g, cfg, |k| per_edge(g, cfg, k))
}

/// As [`edge_removal_sweep`] on a dedicated pool of `jobs` workers. The
/// result does not depend on `jobs`.
pub fn edge_removal_sweep_with_jobs(g: &Graph, cfg: &WalkConfig, jobs: usize) -> Result<SweepResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot start worker pool: {e}")))?;
    pool.install(|| edge_removal_sweep(g, cfg))
}

fn per_edge(g: &Graph, cfg: &WalkConfig, k: usize) -> Result<(usize, Graph, PopulationVector)> {
    let h = g.remove_edge(k)?;
    let p = average_populations(&h, cfg)?;
    Ok((k, h, p))
}

fn sweep_in_order<F>(g: &Graph, cfg: &WalkConfig, run: F) -> Result<SweepResult>
where
    F: Fn(usize) -> Result<(usize, Graph, PopulationVector)> + Sync,
{
    if g.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    let baseline = average_populations(g, cfg)?;
    // `collect` keeps edge-index order regardless of scheduling.
    let runs: Vec<_> = (1..=g.edge_count())
        .into_par_iter()
        .map(&run)
        .collect::<Result<_>>()?;

    let mut per_edge = Vec::with_capacity(runs.len());
    let mut flow_signs = Vec::with_capacity(runs.len());
    for (k, h, populations) in runs {
        let deltas = populations.delta_from(&baseline);
        flow_signs.push(deltas.iter().map(|&d| flow_sign(d)).collect());
        per_edge.push(EdgeRemoval {
            edge: k,
            pair: g.edge(k)?,
            near_zero_count: deltas.iter().filter(|d| d.abs() < NEAR_ZERO_DELTA).count(),
            disconnected: !h.is_connected(),
            populations,
            deltas,
        });
    }
    Ok(SweepResult {
        config: *cfg,
        baseline,
        per_edge,
        flow_signs,
    })
}

/// `α_ij = (1/K) Σ_k θ_i(k) θ_j(k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinityMatrix {
    alpha: Matrix,
    edges: usize,
}

impl AffinityMatrix {
    pub fn node_count(&self) -> usize {
        self.alpha.dim()
    }

    /// Number of removals averaged over.
    pub fn edge_count(&self) -> usize {
        self.edges
    }

    /// `α` between 1-based nodes `i` and `j`.
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.alpha[(i - 1, j - 1)]
    }

    pub fn matrix(&self) -> &Matrix {
        &self.alpha
    }
}

pub fn affinity(s: &SweepResult) -> AffinityMatrix {
    affinity_from_signs(&s.flow_signs, s.node_count())
}

/// Affinity from a `K × N` matrix of ±1 flow signs. Each entry is an exact
/// integer count divided by `K`, filled symmetrically.
pub fn affinity_from_signs(signs: &[Vec<i8>], n: usize) -> AffinityMatrix {
    let k = signs.len();
    let mut alpha = Matrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let agreement: i64 = signs.iter().map(|row| i64::from(row[i] * row[j])).sum();
            let a = if k == 0 { 0.0 } else { agreement as f64 / k as f64 };
            alpha[(i, j)] = a;
            alpha[(j, i)] = a;
        }
    }
    AffinityMatrix { alpha, edges: k }
}

/// Nodes split by the sign of their affinity with a reference node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bipartition {
    pub reference: usize,
    /// Zero-based; `true` when `α(reference, j) > 0`.
    pub with_reference: Vec<bool>,
    /// Nodes with `α(reference, j) = 0`, counted against the reference.
    pub ambiguous: usize,
}

impl Bipartition {
    /// Number of nodes on which this split agrees with a two-valued labeling,
    /// where "same label as the reference" means "with the reference".
    pub fn agreement_with(&self, labels: &[usize]) -> usize {
        let ref_label = labels[self.reference - 1];
        self.with_reference
            .iter()
            .zip(labels)
            .filter(|(&with, &label)| with == (label == ref_label))
            .count()
    }
}

pub fn partition_by_reference(a: &AffinityMatrix, reference: usize) -> Result<Bipartition> {
    let n = a.node_count();
    if reference == 0 || reference > n {
        return Err(Error::NodeOutOfRange {
            label: reference,
            n,
        });
    }
    let mut ambiguous = 0;
    let with_reference = (1..=n)
        .map(|j| {
            let v = a.value(reference, j);
            if j != reference && v == 0.0 {
                ambiguous += 1;
            }
            j == reference || v > 0.0
        })
        .collect();
    Ok(Bipartition {
        reference,
        with_reference,
        ambiguous,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorComparison {
    pub start: usize,
    pub adjacency: PopulationVector,
    pub laplacian: PopulationVector,
    pub max_gap: f64,
}

/// Both walks from the basis state of 1-based node `start`, with the time
/// grid of `cfg`. The generator and initial state of `cfg` are ignored.
pub fn compare_generators(g: &Graph, start: usize, cfg: &WalkConfig) -> Result<GeneratorComparison> {
    g.check_node(start)?;
    let cfg = cfg.with_initial(InitialState::Localized(start));
    let adjacency = average_populations(g, &cfg.with_generator(Generator::Adjacency))?;
    let laplacian = average_populations(g, &cfg.with_generator(Generator::Laplacian))?;
    let max_gap = adjacency.max_abs_diff(&laplacian);
    Ok(GeneratorComparison {
        start,
        adjacency,
        laplacian,
        max_gap,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityAgreement {
    pub community: usize,
    pub members: usize,
    /// Mean over removals of the fraction of members sharing the community's
    /// majority flow sign.
    pub agreement: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignAgreement {
    pub per_community: Vec<CommunityAgreement>,
    /// Member-weighted mean of the per-community agreements.
    pub overall: f64,
}

/// How uniformly each community's members move together across a sweep.
pub fn sign_agreement(flow_signs: &[Vec<i8>], labels: &[usize]) -> Result<SignAgreement> {
    if let Some(row) = flow_signs.iter().find(|row| row.len() != labels.len()) {
        return Err(Error::DimensionMismatch {
            expected: labels.len(),
            actual: row.len(),
        });
    }
    let mut communities: Vec<usize> = labels.to_vec();
    communities.sort_unstable();
    communities.dedup();

    let mut per_community = Vec::with_capacity(communities.len());
    let mut agreeing_total = 0usize;
    let mut total = 0usize;
    for &c in &communities {
        let members: Vec<usize> = (0..labels.len()).filter(|&j| labels[j] == c).collect();
        let mut agreeing = 0usize;
        for row in flow_signs {
            let up = members.iter().filter(|&&j| row[j] > 0).count();
            agreeing += up.max(members.len() - up);
        }
        let slots = members.len() * flow_signs.len();
        agreeing_total += agreeing;
        total += slots;
        per_community.push(CommunityAgreement {
            community: c,
            members: members.len(),
            agreement: if slots == 0 { 1.0 } else { agreeing as f64 / slots as f64 },
        });
    }
    Ok(SignAgreement {
        per_community,
        overall: if total == 0 { 1.0 } else { agreeing_total as f64 / total as f64 },
    })
}

/// Community-level coherence of the adjacency sweep (uniform start) next to
/// the Laplacian sweep from a localized start.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseContrast {
    pub start: usize,
    pub adjacency: SignAgreement,
    pub laplacian: SignAgreement,
}

/// Sweeps `g` with the Laplacian walk started at `start` and reports the
/// within-community flow-sign agreement against `labels`, alongside the
/// same measure for the adjacency walk from the uniform state. The time
/// grid comes from `cfg`.
pub fn laplacian_sweep_noncorrelation(
    g: &Graph,
    start: usize,
    cfg: &WalkConfig,
    labels: Option<&[usize]>,
) -> Result<ResponseContrast> {
    let labels = labels.ok_or(Error::MissingLabels)?;
    if labels.len() != g.node_count() {
        return Err(Error::DimensionMismatch {
            expected: g.node_count(),
            actual: labels.len(),
        });
    }
    g.check_node(start)?;
    let lap_cfg = cfg
        .with_generator(Generator::Laplacian)
        .with_initial(InitialState::Localized(start));
    let adj_cfg = cfg
        .with_generator(Generator::Adjacency)
        .with_initial(InitialState::Uniform);
    let laplacian = edge_removal_sweep(g, &lap_cfg)?;
    let adjacency = edge_removal_sweep(g, &adj_cfg)?;
    Ok(ResponseContrast {
        start,
        adjacency: sign_agreement(&adjacency.flow_signs, labels)?,
        laplacian: sign_agreement(&laplacian.flow_signs, labels)?,
    })
}
