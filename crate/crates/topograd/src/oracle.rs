//! Brute-force reference implementations and the small-graph corpus.
//!
//! Everything here is deliberately written along a different path from the
//! optimized modules: subset scans instead of flow, unpruned injection
//! enumeration instead of the ordered backtracker, and pattern-by-pattern
//! scans instead of branch-set packing. These are the oracles the
//! acceptance suite compares against.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{Graph, Rational};
use crate::mad::MadResult;
use crate::witness::{DepthMode, Occurrence, SubdivisionSpec};

/// Maximum average degree by scanning all nonempty vertex subsets.
pub fn mad_by_enumeration(g: &Graph) -> Result<MadResult> {
    if g.n() == 0 {
        return Err(Error::DegenerateInput("maximum average degree of the empty graph".into()));
    }
    if g.n() > 24 {
        return Err(Error::invalid("subset oracle supports at most 24 vertices"));
    }
    let n = g.n();
    let masks: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w))
        .collect();
    let mut best_e = 0u64;
    let mut best_s = 1u64;
    let mut best_mask = 1u64;
    for mask in 1u64..(1 << n) {
        let mut e = 0u64;
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            e += (masks[v] & rest).count_ones() as u64;
        }
        let s = mask.count_ones() as u64;
        if e * best_s > best_e * s {
            best_e = e;
            best_s = s;
            best_mask = mask;
        }
    }
    let witness: BTreeSet<usize> = (0..n).filter(|&v| best_mask & (1 << v) != 0).collect();
    Ok(MadResult {
        value: Rational::new(BigInt::from(2 * best_e), BigInt::from(best_s)),
        witness,
    })
}

/// Existence of a subdivision occurrence by enumerating every injective
/// branch map in index order and every simple path system, with the
/// induced condition checked on the completed system.
pub fn embeds_naive(g: &Graph, h: &Graph, spec: SubdivisionSpec) -> bool {
    if h.n() == 0 {
        return true;
    }
    if h.n() > g.n() {
        return false;
    }
    let mut image = vec![usize::MAX; h.n()];
    assign_naive(g, h, spec, 0, &mut image)
}

fn assign_naive(g: &Graph, h: &Graph, spec: SubdivisionSpec, u: usize, image: &mut Vec<usize>) -> bool {
    if u == h.n() {
        let edges: Vec<(usize, usize)> = h.edges().collect();
        let used: BTreeSet<usize> = image.iter().copied().collect();
        let mut paths: Vec<Vec<usize>> = Vec::new();
        return route_naive(g, spec, image, &edges, 0, used, &mut paths);
    }
    for x in 0..g.n() {
        if image[..u].contains(&x) {
            continue;
        }
        image[u] = x;
        if assign_naive(g, h, spec, u + 1, image) {
            return true;
        }
    }
    image[u] = usize::MAX;
    false
}

fn route_naive(
    g: &Graph,
    spec: SubdivisionSpec,
    image: &[usize],
    edges: &[(usize, usize)],
    idx: usize,
    used: BTreeSet<usize>,
    paths: &mut Vec<Vec<usize>>,
) -> bool {
    if idx == edges.len() {
        return finish_naive(g, spec, image, paths);
    }
    let (u, v) = edges[idx];
    let (x, y) = (image[u], image[v]);
    // enumerate every simple path from x to y avoiding `used` internally
    let mut partial = vec![x];
    path_naive(g, spec, image, edges, idx, &used, &mut partial, y, paths)
}

#[allow(clippy::too_many_arguments)]
fn path_naive(
    g: &Graph,
    spec: SubdivisionSpec,
    image: &[usize],
    edges: &[(usize, usize)],
    idx: usize,
    used: &BTreeSet<usize>,
    partial: &mut Vec<usize>,
    target: usize,
    paths: &mut Vec<Vec<usize>>,
) -> bool {
    let cur = *partial.last().unwrap();
    let internal = partial.len() - 1;
    let depth_ok = |count: usize| match spec.depth {
        DepthMode::AtMost(k) => count <= k as usize,
        DepthMode::Exactly(k) => count == k as usize,
        DepthMode::Unbounded => true,
    };
    if g.has_edge(cur, target) && depth_ok(internal) {
        let mut full = partial.clone();
        full.push(target);
        let mut next_used = used.clone();
        next_used.extend(full[1..full.len() - 1].iter().copied());
        paths.push(full);
        if route_naive(g, spec, image, edges, idx + 1, next_used, paths) {
            return true;
        }
        paths.pop();
    }
    let can_extend = match spec.depth {
        DepthMode::AtMost(k) => internal < k as usize,
        DepthMode::Exactly(k) => internal < k as usize,
        DepthMode::Unbounded => true,
    };
    if can_extend {
        for &w in g.neighbors(cur) {
            if w == target || used.contains(&w) || partial.contains(&w) {
                continue;
            }
            partial.push(w);
            if path_naive(g, spec, image, edges, idx, used, partial, target, paths) {
                return true;
            }
            partial.pop();
        }
    }
    false
}

fn finish_naive(g: &Graph, spec: SubdivisionSpec, image: &[usize], paths: &[Vec<usize>]) -> bool {
    if spec.occurrence == Occurrence::Subgraph {
        return true;
    }
    let mut union: BTreeSet<usize> = image.iter().copied().collect();
    let mut path_edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for path in paths {
        union.extend(path.iter().copied());
        for w in path.windows(2) {
            path_edges.insert((w[0].min(w[1]), w[0].max(w[1])));
        }
    }
    for (u, v) in g.edges() {
        if union.contains(&u) && union.contains(&v) && !path_edges.contains(&(u, v)) {
            return false;
        }
    }
    true
}

/// Density measure by scanning every connected pattern up to |V(G)|
/// vertices (descending by average degree, so the first hit is the max).
pub fn nabla_naive(g: &Graph, k: u32, measure: crate::density::Measure) -> Result<Rational> {
    if g.n() == 0 {
        return Err(Error::DegenerateInput("density of the empty graph".into()));
    }
    if g.n() > 7 {
        return Err(Error::invalid("pattern-scan oracle supports at most 7 vertices"));
    }
    let spec = measure.spec(k);
    let mut patterns: Vec<Graph> = Vec::new();
    for b in 1..=g.n() {
        patterns.extend(enumerate_graphs(b, true));
    }
    patterns.sort_by(|a, b| {
        let (la, lb) = (a.m() * b.n(), b.m() * a.n());
        lb.cmp(&la).then(a.n().cmp(&b.n()))
    });
    for h in &patterns {
        if embeds_naive(g, h, spec) {
            return h.average_degree();
        }
    }
    Ok(Rational::zero())
}

/// All graphs on `n` vertices up to isomorphism (optionally connected
/// only), by vertex augmentation with canonical-form deduplication.
/// Intended for n <= 8.
pub fn enumerate_graphs(n: usize, connected_only: bool) -> Vec<Graph> {
    assert!((1..=8).contains(&n), "corpus enumeration supports 1..=8 vertices");
    let mut level: BTreeSet<u64> = [0u64].into_iter().collect(); // K1
    for size in 2..=n {
        let perms = permutations(size);
        let mut next: BTreeSet<u64> = BTreeSet::new();
        for &code in &level {
            let edges = decode_edges(code, size - 1);
            for nbhd in 0..(1u64 << (size - 1)) {
                let mut new_edges = edges.clone();
                for v in 0..size - 1 {
                    if nbhd & (1 << v) != 0 {
                        new_edges.push((v, size - 1));
                    }
                }
                next.insert(canonical_code(&new_edges, size, &perms));
            }
        }
        level = next;
    }
    level
        .into_iter()
        .map(|code| Graph::new(n, decode_edges(code, n)).unwrap())
        .filter(|g| !connected_only || g.is_connected())
        .collect()
}

fn pair_index(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

fn decode_edges(code: u64, n: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if code & (1 << pair_index(i, j, n)) != 0 {
                edges.push((i, j));
            }
        }
    }
    edges
}

fn canonical_code(edges: &[(usize, usize)], n: usize, perms: &[Vec<usize>]) -> u64 {
    let mut best = u64::MAX;
    for perm in perms {
        let mut code = 0u64;
        for &(i, j) in edges {
            let (a, b) = (perm[i], perm[j]);
            code |= 1 << pair_index(a.min(b), a.max(b), n);
        }
        best = best.min(code);
    }
    best
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    heap_permute(&mut items, n, &mut out);
    out
}

fn heap_permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k.is_multiple_of(2) {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{complete, cycle};
    use crate::graph::ratio_int;

    #[test]
    fn corpus_counts_match_oeis() {
        // numbers of graphs / connected graphs on n nodes
        let all: Vec<usize> = (1..=6).map(|n| enumerate_graphs(n, false).len()).collect();
        assert_eq!(all, vec![1, 2, 4, 11, 34, 156]);
        let connected: Vec<usize> = (1..=6).map(|n| enumerate_graphs(n, true).len()).collect();
        assert_eq!(connected, vec![1, 1, 2, 6, 21, 112]);
    }

    #[test]
    fn naive_embed_basics() {
        let spec = SubdivisionSpec::at_most(1, Occurrence::Subgraph);
        assert!(embeds_naive(&cycle(6), &complete(3), spec));
        let spec = SubdivisionSpec::at_most(0, Occurrence::Subgraph);
        assert!(!embeds_naive(&cycle(6), &complete(3), spec));
        let spec = SubdivisionSpec::exactly(1, Occurrence::Induced);
        assert!(!embeds_naive(&complete(3), &complete(2), spec));
    }

    #[test]
    fn naive_nabla_matches_examples() {
        assert_eq!(nabla_naive(&cycle(6), 1, crate::density::Measure::Nabla).unwrap(), ratio_int(2));
        assert_eq!(
            nabla_naive(&complete(3), 1, crate::density::Measure::NablaExact).unwrap(),
            ratio_int(0)
        );
    }

    #[test]
    fn subset_oracle_matches_flow() {
        for seed in 0..10 {
            let g = crate::generate::random_gnp(7, 0.45, seed).unwrap();
            let flow = crate::mad::max_average_degree(&g).unwrap();
            let brute = mad_by_enumeration(&g).unwrap();
            assert_eq!(flow.value, brute.value, "seed {seed}");
        }
    }
}
