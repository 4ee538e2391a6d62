//! Deterministic graph generators: fixed families, seeded random models,
//! subdivision construction with ground-truth witnesses, planted search
//! instances, and rejection-sampled forbidden-pattern-free families.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::graph::{BipartiteLayout, Graph};
use crate::patterns::forbidden_pattern_check;
use crate::witness::{Occurrence, SubdivisionSpec, SubdivisionWitness};

pub fn complete(n: usize) -> Graph {
    let edges = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v)));
    Graph::new(n, edges).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}

pub fn path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
}

/// Complete bipartite K_{s,t}: left side 0..s, right side s..s+t.
pub fn biclique(s: usize, t: usize) -> Graph {
    let edges = (0..s).flat_map(|u| (s..s + t).map(move |v| (u, v)));
    Graph::new(s + t, edges).unwrap()
}

pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::new(10, edges).unwrap()
}

/// Subdivides each edge of `pattern` (in canonical edge order) by the
/// corresponding number of new vertices. Branch vertices keep their ids;
/// subdivision vertices are appended in edge order. Returns the graph and
/// the identity ground-truth witness.
pub fn subdivision(pattern: &Graph, lengths: &[u32]) -> Result<(Graph, SubdivisionWitness)> {
    let pattern_edges: Vec<(usize, usize)> = pattern.edges().collect();
    if lengths.len() != pattern_edges.len() {
        return Err(Error::InvalidSpec(format!(
            "need {} per-edge lengths, got {}",
            pattern_edges.len(),
            lengths.len()
        )));
    }
    let mut n = pattern.n();
    let mut edges = Vec::new();
    let mut paths = BTreeMap::new();
    for (&(u, v), &len) in pattern_edges.iter().zip(lengths) {
        let mut path = vec![u];
        for _ in 0..len {
            path.push(n);
            n += 1;
        }
        path.push(v);
        for w in path.windows(2) {
            edges.push((w[0], w[1]));
        }
        paths.insert((u, v), path);
    }
    let graph = Graph::new(n, edges)?;
    let witness = SubdivisionWitness {
        branch_map: (0..pattern.n()).collect(),
        paths,
    };
    Ok((graph, witness))
}

/// G(n, p) with a fixed seed; pairs are sampled in canonical order so the
/// output is a pure function of (n, p, seed).
pub fn random_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidSpec(format!("edge probability {p} out of [0,1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

/// Random bipartite graph over sides 0..a and a..a+b.
pub fn random_bipartite(a: usize, b: usize, p: f64, seed: u64) -> Result<(Graph, BipartiteLayout)> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidSpec(format!("edge probability {p} out of [0,1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..a {
        for v in a..a + b {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    let g = Graph::new(a + b, edges)?;
    Ok((g, BipartiteLayout::new(0..a, a..a + b)))
}

/// Noise knobs for planted instances: extra host vertices plus extra host
/// edges, both added around the planted subdivision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HostNoise {
    pub extra_vertices: usize,
    pub edge_prob: f64,
}

impl HostNoise {
    pub fn none() -> HostNoise {
        HostNoise { extra_vertices: 0, edge_prob: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedInstance {
    pub graph: Graph,
    pub pattern: Graph,
    pub witness: SubdivisionWitness,
    /// The claim the ground truth is guaranteed to satisfy even with noise.
    pub spec: SubdivisionSpec,
    pub lengths: Vec<u32>,
}

/// Plants a subdivision of `pattern` with per-edge lengths drawn from
/// 0..=k (or all exactly k with `exact_depth`), then layers noise on top.
/// Noise only adds vertices and edges, so the ground-truth witness stays
/// valid in subgraph mode.
pub fn planted(
    pattern: &Graph,
    k: u32,
    exact_depth: bool,
    noise: HostNoise,
    seed: u64,
) -> Result<PlantedInstance> {
    if !(0.0..=1.0).contains(&noise.edge_prob) {
        return Err(Error::InvalidSpec("noise edge probability out of [0,1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lengths: Vec<u32> = (0..pattern.m())
        .map(|_| if exact_depth { k } else { rng.gen_range(0..=k) })
        .collect();
    let (core, witness) = subdivision(pattern, &lengths)?;
    let n = core.n() + noise.extra_vertices;
    let mut edges: Vec<(usize, usize)> = core.edges().collect();
    if noise.edge_prob > 0.0 {
        for u in 0..n {
            for v in (u + 1)..n {
                if u < core.n() && v < core.n() && core.has_edge(u, v) {
                    continue;
                }
                if rng.gen_bool(noise.edge_prob) {
                    edges.push((u, v));
                }
            }
        }
    }
    let graph = Graph::new(n, edges)?;
    Ok(PlantedInstance {
        graph,
        pattern: pattern.clone(),
        witness,
        spec: SubdivisionSpec::at_most(k, Occurrence::Subgraph),
        lengths,
    })
}

/// Rejection-samples `count` graphs of order `n` that avoid K_s, K_{s,s},
/// and subdivisions of `pattern`, all as induced subgraphs. Fails rather
/// than looping when the attempt cap runs out.
#[allow(clippy::too_many_arguments)]
pub fn filtered_family(
    pattern: &Graph,
    s: usize,
    n: usize,
    count: usize,
    seed: u64,
    edge_prob: f64,
    max_attempts_per_member: usize,
    cfg: &Config,
) -> Result<Vec<Graph>> {
    let mut out = Vec::with_capacity(count);
    let mut attempt_seed = seed;
    for member in 0..count {
        let mut accepted = None;
        for _ in 0..max_attempts_per_member {
            let g = random_gnp(n, edge_prob, attempt_seed)?;
            attempt_seed = attempt_seed.wrapping_add(1);
            let report = forbidden_pattern_check(&g, pattern, s, cfg)?;
            if report.in_class() {
                accepted = Some(g);
                break;
            }
        }
        match accepted {
            Some(g) => out.push(g),
            None => {
                return Err(Error::InvalidSpec(format!(
                    "rejection sampling failed for member {member} after \
                     {max_attempts_per_member} attempts"
                )))
            }
        }
    }
    Ok(out)
}

/// Declarative generator spec, the CLI-facing surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    Complete { n: usize },
    Biclique { s: usize, t: usize },
    Cycle { n: usize },
    Path { n: usize },
    Subdivision { pattern: Graph, lengths: Vec<u32> },
    RandomGnp { n: usize, p: f64, seed: u64 },
    RandomBipartite { a: usize, b: usize, p: f64, seed: u64 },
    Planted { pattern: Graph, k: u32, exact_depth: bool, noise: HostNoise, seed: u64 },
    FilteredFamily {
        pattern: Graph,
        s: usize,
        n: usize,
        count: usize,
        seed: u64,
        edge_prob: f64,
        max_attempts: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum GenOutput {
    Single(Graph),
    WithWitness(Box<PlantedInstance>),
    Family(Vec<Graph>),
}

pub fn generate(spec: &GeneratorSpec, cfg: &Config) -> Result<GenOutput> {
    Ok(match spec {
        GeneratorSpec::Complete { n } => GenOutput::Single(complete(*n)),
        GeneratorSpec::Biclique { s, t } => GenOutput::Single(biclique(*s, *t)),
        GeneratorSpec::Cycle { n } => {
            if *n < 3 {
                return Err(Error::InvalidSpec("cycle needs n >= 3".into()));
            }
            GenOutput::Single(cycle(*n))
        }
        GeneratorSpec::Path { n } => GenOutput::Single(path(*n)),
        GeneratorSpec::Subdivision { pattern, lengths } => {
            let (g, witness) = subdivision(pattern, lengths)?;
            let k = lengths.iter().copied().max().unwrap_or(0);
            GenOutput::WithWitness(Box::new(PlantedInstance {
                graph: g,
                pattern: pattern.clone(),
                witness,
                spec: SubdivisionSpec::at_most(k, Occurrence::Induced),
                lengths: lengths.clone(),
            }))
        }
        GeneratorSpec::RandomGnp { n, p, seed } => GenOutput::Single(random_gnp(*n, *p, *seed)?),
        GeneratorSpec::RandomBipartite { a, b, p, seed } => {
            GenOutput::Single(random_bipartite(*a, *b, *p, *seed)?.0)
        }
        GeneratorSpec::Planted { pattern, k, exact_depth, noise, seed } => {
            GenOutput::WithWitness(Box::new(planted(pattern, *k, *exact_depth, *noise, *seed)?))
        }
        GeneratorSpec::FilteredFamily { pattern, s, n, count, seed, edge_prob, max_attempts } => {
            GenOutput::Family(filtered_family(
                pattern,
                *s,
                *n,
                *count,
                *seed,
                *edge_prob,
                *max_attempts,
                cfg,
            )?)
        }
    })
}
