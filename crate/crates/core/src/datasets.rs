//! Benchmark networks: Zachary's karate club, edge-list files, and a
//! seeded planted-partition generator.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A graph with an optional ground-truth community id per node (zero-based
/// node index, community ids starting at 0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledNetwork {
    pub graph: Graph,
    pub labels: Option<Vec<usize>>,
}

/// Zachary's karate club, 1-based pairs, as published.
pub const KARATE_EDGES: &[(usize, usize)] = &[
    (1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (1, 7), (1, 8), (1, 9), (1, 11), (1, 12),
    (1, 13), (1, 14), (1, 18), (1, 20), (1, 22), (1, 32), (2, 3), (2, 4), (2, 8), (2, 14),
    (2, 18), (2, 20), (2, 22), (2, 31), (3, 4), (3, 8), (3, 9), (3, 10), (3, 14), (3, 28),
    (3, 29), (3, 33), (4, 8), (4, 13), (4, 14), (5, 7), (5, 11), (6, 7), (6, 11), (6, 17),
    (7, 17), (9, 31), (9, 33), (9, 34), (10, 34), (14, 34), (15, 33), (15, 34), (16, 33), (16, 34),
    (19, 33), (19, 34), (20, 34), (21, 33), (21, 34), (23, 33), (23, 34), (24, 26), (24, 28), (24, 30),
    (24, 33), (24, 34), (25, 26), (25, 28), (25, 32), (26, 32), (27, 30), (27, 34), (28, 34), (29, 32),
    (29, 34), (30, 33), (30, 34), (31, 33), (31, 34), (32, 33), (32, 34), (33, 34),
];

/// Members (1-based) who sided with the instructor, node 1, after the split.
/// Everyone else followed the administrator, node 34.
pub const KARATE_INSTRUCTOR_FACTION: &[usize] =
    &[1, 2, 3, 4, 5, 6, 7, 8, 9, 11, 12, 13, 14, 17, 18, 20, 22];

/// Karate club with the two-faction split as labels: 0 for node 1's side,
/// 1 for node 34's.
pub fn karate_club() -> LabeledNetwork {
    let graph = Graph::from_edge_list(KARATE_EDGES, Some(34)).expect("embedded karate edge list is simple");
    let labels = (1..=34)
        .map(|j| usize::from(!KARATE_INSTRUCTOR_FACTION.contains(&j)))
        .collect();
    LabeledNetwork {
        graph,
        labels: Some(labels),
    }
}

/// Node count of the bottlenose dolphin social network, for checking a
/// user-supplied copy of that file.
pub const DOLPHINS_NODE_COUNT: usize = 62;

/// Parses the edge-list text format. Errors carry 1-based line numbers.
pub fn parse_edge_list(text: &str, source: &Path) -> Result<Graph> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: source.to_path_buf(),
        line,
        message,
    };

    let mut pairs = Vec::new();
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_err(
                line_no,
                format!("expected two node labels, found {} field(s)", fields.len()),
            ));
        }
        let mut ends = [0usize; 2];
        for (slot, field) in ends.iter_mut().zip(&fields) {
            *slot = match field.parse::<usize>() {
                Ok(v) if v >= 1 => v,
                _ => {
                    return Err(parse_err(
                        line_no,
                        format!("'{field}' is not a positive integer node label"),
                    ))
                }
            };
        }
        if ends[0] == ends[1] {
            return Err(parse_err(line_no, format!("self-loop ({}, {})", ends[0], ends[1])));
        }
        pairs.push((ends[0], ends[1]));
        lines.push(line_no);
    }

    Graph::from_edge_list(&pairs, None).map_err(|e| match e {
        Error::DuplicateEdge(u, v) => {
            let line = pairs
                .iter()
                .zip(&lines)
                .filter(|((a, b), _)| (*a.min(b), *a.max(b)) == (u, v))
                .nth(1)
                .map(|(_, &l)| l)
                .unwrap_or(0);
            parse_err(line, format!("duplicate edge ({u}, {v})"))
        }
        other => other,
    })
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<LabeledNetwork> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(LabeledNetwork {
        graph: parse_edge_list(&text, path)?,
        labels: None,
    })
}

/// Labels sidecar: `node_id community_id` per line, 1-based node ids.
pub fn labels_to_text(labels: &[usize]) -> String {
    let mut out = String::new();
    for (j, c) in labels.iter().enumerate() {
        let _ = writeln!(out, "{} {}", j + 1, c);
    }
    out
}

/// Reads a labels sidecar for a graph of `n` nodes. Every node must be labeled exactly once.
pub fn parse_labels(text: &str, n: usize, source: &Path) -> Result<Vec<usize>> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: source.to_path_buf(),
        line,
        message,
    };
    let mut labels = vec![None; n];
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parsed = match fields.as_slice() {
            [node, community] => node.parse::<usize>().ok().zip(community.parse::<usize>().ok()),
            _ => None,
        };
        let (node, community) =
            parsed.ok_or_else(|| parse_err(i + 1, "expected 'node_id community_id'".into()))?;
        if node == 0 || node > n {
            return Err(parse_err(i + 1, format!("node {node} out of range 1..={n}")));
        }
        if labels[node - 1].replace(community).is_some() {
            return Err(parse_err(i + 1, format!("node {node} labeled twice")));
        }
    }
    labels
        .into_iter()
        .enumerate()
        .map(|(j, l)| l.ok_or_else(|| parse_err(0, format!("node {} has no label", j + 1))))
        .collect()
}

pub fn load_labels(path: impl AsRef<Path>, n: usize) -> Result<Vec<usize>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_labels(&text, n, path)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub communities: usize,
    /// Nodes per community.
    pub size: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub seed: u64,
}

impl GeneratorParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if self.communities < 2 {
            return bad(format!("need at least 2 communities, got {}", self.communities));
        }
        if self.size == 0 {
            return bad("community size must be positive".into());
        }
        match self.communities.checked_mul(self.size) {
            Some(total) if total <= 10_000 => {}
            _ => return bad("communities * size must not exceed 10000".into()),
        }
        let (p_in, p_out) = (self.p_in, self.p_out);
        if !(0.0..=1.0).contains(&p_out) || !(0.0..=1.0).contains(&p_in) {
            return bad(format!("probabilities must lie in [0, 1], got p_in={p_in}, p_out={p_out}"));
        }
        if p_in <= 0.0 || p_out > p_in {
            return bad(format!(
                "need p_in > 0 and p_out <= p_in, got p_in={p_in}, p_out={p_out}"
            ));
        }
        Ok(())
    }
}

/// Output of [`planted_partition`].
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedNetwork {
    pub network: LabeledNetwork,
    /// Seed of the attempt that produced `network`.
    pub seed_used: u64,
    pub connected: bool,
}

/// Retries after the first attempt when the draw is disconnected.
pub const MAX_RETRIES: u64 = 100;

/// Planted-partition random graph.
///
/// Node `j` (zero-based) belongs to community `j / size`. Pairs `(u, v)`,
/// `u < v`, are visited in lexicographic order and each consumes one
/// `next_u64` from ChaCha8 seeded with `seed_from_u64(seed)`; the pair is an
/// edge when `(x >> 11) * 2⁻⁵³ < p`. A disconnected draw is retried with
/// `seed + 1`, `seed + 2`, … up to [`MAX_RETRIES`] times; the last attempt is
/// returned flagged when none connect.
pub fn planted_partition(params: &GeneratorParams) -> Result<GeneratedNetwork> {
    params.validate()?;
    let mut seed = params.seed;
    let mut attempt = 0;
    loop {
        let graph = draw_planted_partition(params, seed);
        let connected = graph.is_connected();
        if connected || attempt == MAX_RETRIES {
            let labels = (0..graph.node_count()).map(|j| j / params.size).collect();
            return Ok(GeneratedNetwork {
                network: LabeledNetwork {
                    graph,
                    labels: Some(labels),
                },
                seed_used: seed,
                connected,
            });
        }
        attempt += 1;
        seed = seed.wrapping_add(1);
    }
}

fn draw_planted_partition(params: &GeneratorParams, seed: u64) -> Graph {
    let n = params.communities * params.size;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let p = if u / params.size == v / params.size {
                params.p_in
            } else {
                params.p_out
            };
            let x = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            if x < p {
                pairs.push((u + 1, v + 1));
            }
        }
    }
    Graph::from_edge_list(&pairs, Some(n)).expect("generated pairs are simple")
}
