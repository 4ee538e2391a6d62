//! Subdivision occurrence specs, witnesses, and the full re-checker.
//!
//! A witness maps pattern vertices to distinct host vertices and pattern
//! edges to internally disjoint host paths. The verifier re-derives every
//! clause from scratch and reports all violations, so a witness plus an
//! empty violation list is a machine-checkable certificate.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::graph::Graph;

/// How long the subdivision paths may be, counted in internal vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "k", rename_all = "snake_case")]
pub enum DepthMode {
    AtMost(u32),
    Exactly(u32),
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Occurrence {
    Subgraph,
    Induced,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionSpec {
    pub depth: DepthMode,
    pub occurrence: Occurrence,
}

impl SubdivisionSpec {
    pub fn at_most(k: u32, occurrence: Occurrence) -> Self {
        SubdivisionSpec { depth: DepthMode::AtMost(k), occurrence }
    }
    pub fn exactly(k: u32, occurrence: Occurrence) -> Self {
        SubdivisionSpec { depth: DepthMode::Exactly(k), occurrence }
    }
    pub fn unbounded(occurrence: Occurrence) -> Self {
        SubdivisionSpec { depth: DepthMode::Unbounded, occurrence }
    }
}

/// Witness for one subdivision occurrence: `branch_map[u]` is the host
/// image of pattern vertex `u`; `paths[(u,v)]` (with `u<v`) is the full
/// host path from `branch_map[u]` to `branch_map[v]`, endpoints included.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionWitness {
    pub branch_map: Vec<usize>,
    #[serde(with = "paths_as_entries")]
    pub paths: BTreeMap<(usize, usize), Vec<usize>>,
}

/// JSON maps need string keys; the path map serializes as a sorted entry
/// list `[[[u,v],[path...]], ...]` instead.
mod paths_as_entries {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<(usize, usize), Vec<usize>>,
        ser: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<(&(usize, usize), &Vec<usize>)> = map.iter().collect();
        serde::Serialize::serialize(&entries, ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> std::result::Result<BTreeMap<(usize, usize), Vec<usize>>, D::Error> {
        let entries: Vec<((usize, usize), Vec<usize>)> = serde::Deserialize::deserialize(de)?;
        Ok(entries.into_iter().collect())
    }
}

impl SubdivisionWitness {
    /// All internal (non-endpoint) vertices across all paths, in path order.
    pub fn internal_vertices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for path in self.paths.values() {
            if path.len() > 2 {
                out.extend_from_slice(&path[1..path.len() - 1]);
            }
        }
        out
    }

    /// Branch images plus all path vertices.
    pub fn used_vertices(&self) -> BTreeSet<usize> {
        let mut used: BTreeSet<usize> = self.branch_map.iter().copied().collect();
        for path in self.paths.values() {
            used.extend(path.iter().copied());
        }
        used
    }
}

/// One violated witness clause. `verify_witness` returns every violation,
/// not just the first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    BranchOutOfRange { pattern_vertex: usize, host_vertex: usize },
    BranchNotInjective { a: usize, b: usize },
    BranchMapWrongLength { expected: usize, got: usize },
    MissingPath { edge: (usize, usize) },
    UnexpectedPath { edge: (usize, usize) },
    EndpointMismatch { edge: (usize, usize) },
    NotAPath { edge: (usize, usize), position: usize },
    RepeatedVertex { edge: (usize, usize), vertex: usize },
    VertexOutOfRange { edge: (usize, usize), vertex: usize },
    InternalHitsBranch { edge: (usize, usize), vertex: usize },
    InternalOverlap { first: (usize, usize), second: (usize, usize), vertex: usize },
    DepthExceeded { edge: (usize, usize), internal: usize, max: u32 },
    DepthMismatch { edge: (usize, usize), internal: usize, expected: u32 },
    ExtraEdge { u: usize, v: usize },
}

/// Re-checks every clause of the witness contract against `g` and the
/// pattern `h` under `spec`. Empty result = valid witness.
pub fn verify_witness(
    g: &Graph,
    h: &Graph,
    spec: SubdivisionSpec,
    w: &SubdivisionWitness,
) -> Vec<Violation> {
    let mut violations = Vec::new();

    if w.branch_map.len() != h.n() {
        violations.push(Violation::BranchMapWrongLength {
            expected: h.n(),
            got: w.branch_map.len(),
        });
        return violations;
    }
    for (u, &x) in w.branch_map.iter().enumerate() {
        if x >= g.n() {
            violations.push(Violation::BranchOutOfRange { pattern_vertex: u, host_vertex: x });
        }
    }
    for a in 0..w.branch_map.len() {
        for b in (a + 1)..w.branch_map.len() {
            if w.branch_map[a] == w.branch_map[b] {
                violations.push(Violation::BranchNotInjective { a, b });
            }
        }
    }
    if violations.iter().any(|v| matches!(v, Violation::BranchOutOfRange { .. })) {
        return violations;
    }

    let pattern_edges: BTreeSet<(usize, usize)> = h.edges().collect();
    for edge in pattern_edges.iter() {
        if !w.paths.contains_key(edge) {
            violations.push(Violation::MissingPath { edge: *edge });
        }
    }
    for edge in w.paths.keys() {
        if !pattern_edges.contains(edge) {
            violations.push(Violation::UnexpectedPath { edge: *edge });
        }
    }

    let branch_set: BTreeSet<usize> = w.branch_map.iter().copied().collect();
    // pathwise checks
    for (&edge, path) in &w.paths {
        if !pattern_edges.contains(&edge) {
            continue;
        }
        let (u, v) = edge;
        let mut ok_range = true;
        for &x in path {
            if x >= g.n() {
                violations.push(Violation::VertexOutOfRange { edge, vertex: x });
                ok_range = false;
            }
        }
        if !ok_range {
            continue;
        }
        if path.len() < 2
            || path[0] != w.branch_map[u]
            || *path.last().unwrap() != w.branch_map[v]
        {
            violations.push(Violation::EndpointMismatch { edge });
            continue;
        }
        for i in 0..path.len() - 1 {
            if !g.has_edge(path[i], path[i + 1]) {
                violations.push(Violation::NotAPath { edge, position: i });
            }
        }
        let mut seen = BTreeSet::new();
        for &x in path {
            if !seen.insert(x) {
                violations.push(Violation::RepeatedVertex { edge, vertex: x });
            }
        }
        let internal = &path[1..path.len() - 1];
        for &x in internal {
            if branch_set.contains(&x) {
                violations.push(Violation::InternalHitsBranch { edge, vertex: x });
            }
        }
        let count = internal.len();
        match spec.depth {
            DepthMode::AtMost(k) if count > k as usize => {
                violations.push(Violation::DepthExceeded { edge, internal: count, max: k });
            }
            DepthMode::Exactly(k) if count != k as usize => {
                violations.push(Violation::DepthMismatch { edge, internal: count, expected: k });
            }
            _ => {}
        }
    }

    // pairwise internal disjointness
    let keys: Vec<(usize, usize)> = w.paths.keys().copied().collect();
    for i in 0..keys.len() {
        for j in (i + 1)..keys.len() {
            let pa = &w.paths[&keys[i]];
            let pb = &w.paths[&keys[j]];
            if pa.len() < 2 || pb.len() < 2 {
                continue;
            }
            let ia: BTreeSet<usize> = pa[1..pa.len() - 1].iter().copied().collect();
            for &x in &pb[1..pb.len() - 1] {
                if ia.contains(&x) {
                    violations.push(Violation::InternalOverlap {
                        first: keys[i],
                        second: keys[j],
                        vertex: x,
                    });
                }
            }
        }
    }

    // induced occurrence: the used vertex set induces exactly the path edges
    if spec.occurrence == Occurrence::Induced {
        let used = w.used_vertices();
        let mut path_edges: BTreeSet<(usize, usize)> = BTreeSet::new();
        for (edge, path) in &w.paths {
            if !pattern_edges.contains(edge) {
                continue;
            }
            for i in 0..path.len().saturating_sub(1) {
                let (a, b) = (path[i], path[i + 1]);
                path_edges.insert((a.min(b), a.max(b)));
            }
        }
        for (u, v) in g.edges() {
            if used.contains(&u) && used.contains(&v) && !path_edges.contains(&(u, v)) {
                violations.push(Violation::ExtraEdge { u, v });
            }
        }
    }

    violations
}

/// The pattern graph a witness claims to subdivide, reconstructed from its
/// own path map (vertices 0..branch_map.len(), edges = path keys).
pub fn witness_pattern(w: &SubdivisionWitness) -> crate::error::Result<Graph> {
    Graph::new(w.branch_map.len(), w.paths.keys().copied())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{complete, cycle};

    fn c6_k3_witness() -> SubdivisionWitness {
        // C6 is the 1-subdivision of K3: branch vertices 0,2,4
        let mut paths = BTreeMap::new();
        paths.insert((0, 1), vec![0, 1, 2]);
        paths.insert((0, 2), vec![0, 5, 4]);
        paths.insert((1, 2), vec![2, 3, 4]);
        SubdivisionWitness { branch_map: vec![0, 2, 4], paths }
    }

    #[test]
    fn valid_witness_passes() {
        let g = cycle(6);
        let h = complete(3);
        let spec = SubdivisionSpec::at_most(1, Occurrence::Subgraph);
        assert!(verify_witness(&g, &h, spec, &c6_k3_witness()).is_empty());
        let spec = SubdivisionSpec::exactly(1, Occurrence::Induced);
        assert!(verify_witness(&g, &h, spec, &c6_k3_witness()).is_empty());
    }

    #[test]
    fn shared_internal_is_reported() {
        let g = cycle(6);
        let h = complete(3);
        let mut w = c6_k3_witness();
        w.paths.insert((0, 2), vec![0, 1, 4]); // reuses internal 1 from path (0,1)
        let spec = SubdivisionSpec::at_most(1, Occurrence::Subgraph);
        let violations = verify_witness(&g, &h, spec, &w);
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::InternalOverlap { vertex: 1, .. })));
    }

    #[test]
    fn chord_breaks_induced_mode() {
        // C6 plus a chord between two path interiors
        let mut edges: Vec<(usize, usize)> = cycle(6).edges().collect();
        edges.push((1, 3));
        let g = Graph::new(6, edges).unwrap();
        let h = complete(3);
        let w = c6_k3_witness();
        let spec = SubdivisionSpec::at_most(1, Occurrence::Induced);
        let violations = verify_witness(&g, &h, spec, &w);
        assert_eq!(violations, vec![Violation::ExtraEdge { u: 1, v: 3 }]);
        // subgraph mode does not care
        let spec = SubdivisionSpec::at_most(1, Occurrence::Subgraph);
        assert!(verify_witness(&g, &h, spec, &w).is_empty());
    }

    #[test]
    fn depth_clauses() {
        let g = cycle(6);
        let h = complete(3);
        let w = c6_k3_witness();
        let violations =
            verify_witness(&g, &h, SubdivisionSpec::at_most(0, Occurrence::Subgraph), &w);
        assert_eq!(violations.len(), 3);
        assert!(violations.iter().all(|v| matches!(v, Violation::DepthExceeded { .. })));
        let violations =
            verify_witness(&g, &h, SubdivisionSpec::exactly(2, Occurrence::Subgraph), &w);
        assert!(violations.iter().all(|v| matches!(v, Violation::DepthMismatch { .. })));
    }
}
