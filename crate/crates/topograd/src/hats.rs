//! Hats over a bipartition and the two contract-checked searches built on
//! them: extracting an induced uncrowded hat family, and extracting an
//! induced 1-subdivision with branch vertices on the B side.
//!
//! The strict-mode constants (r at least 2^25) are far beyond desk
//! scale, so both searches also run in a relaxed mode with caller-supplied
//! thresholds; strict mode exists to honor the original hypotheses and is
//! checked with exact arithmetic.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::coloring::{chromatic_number_exact, color_count, greedy_coloring, is_independent};
use crate::config::{Budget, Config};
use crate::density::{nabla_measure_with, Measure, SearchDomains};
use crate::error::{Error, Result};
use crate::graph::{BipartiteLayout, Graph, Rational};
use crate::mad::max_average_degree;
use crate::witness::SubdivisionWitness;

/// A 3-vertex path with its midpoint on the A side and both endpoints on
/// the B side. Endpoints are stored sorted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Hat {
    pub midpoint: usize,
    pub endpoints: (usize, usize),
}

impl Hat {
    pub fn new(midpoint: usize, a: usize, b: usize) -> Hat {
        Hat { midpoint, endpoints: (a.min(b), a.max(b)) }
    }
}

/// A set of hats over a layout, with its two structural flags. The flags
/// are stored but always recomputable from the ambient graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HatSet {
    pub hats: Vec<Hat>,
    pub layout: BipartiteLayout,
    pub uncrowded: bool,
    pub induced: bool,
}

impl HatSet {
    pub fn recompute_flags(&self, g: &Graph) -> (bool, bool) {
        recompute_flags(g, &self.layout, &self.hats)
    }
}

/// uncrowded: pairwise distinct midpoints and endpoint pairs.
/// induced: every hat midpoint has exactly two neighbors in B.
pub fn recompute_flags(g: &Graph, layout: &BipartiteLayout, hats: &[Hat]) -> (bool, bool) {
    let mut mids = BTreeSet::new();
    let mut pairs = BTreeSet::new();
    let mut uncrowded = true;
    for hat in hats {
        if !mids.insert(hat.midpoint) || !pairs.insert(hat.endpoints) {
            uncrowded = false;
        }
    }
    let induced = hats.iter().all(|hat| {
        let nbrs_in_b = g
            .neighbors(hat.midpoint)
            .iter()
            .filter(|v| layout.right.contains(v))
            .count();
        nbrs_in_b == 2
    });
    (uncrowded, induced)
}

/// Every hat of `g` over the layout, canonically ordered.
pub fn enumerate_hats(g: &Graph, layout: &BipartiteLayout) -> Result<Vec<Hat>> {
    layout.validate(g, false)?;
    let mut hats = Vec::new();
    for &a in &layout.left {
        let nbrs: Vec<usize> = g
            .neighbors(a)
            .iter()
            .copied()
            .filter(|v| layout.right.contains(v))
            .collect();
        for i in 0..nbrs.len() {
            for j in (i + 1)..nbrs.len() {
                hats.push(Hat::new(a, nbrs[i], nbrs[j]));
            }
        }
    }
    Ok(hats)
}

/// Maximum uncrowded hat set. An uncrowded set picks each midpoint and
/// each endpoint pair at most once, so it is exactly a maximum matching
/// between midpoints and pairs and is computed exactly at every size.
pub fn max_uncrowded_hatset(g: &Graph, layout: &BipartiteLayout) -> Result<HatSet> {
    let hats = enumerate_hats(g, layout)?;
    let mids: Vec<usize> = {
        let set: BTreeSet<usize> = hats.iter().map(|h| h.midpoint).collect();
        set.into_iter().collect()
    };
    let pairs: Vec<(usize, usize)> = {
        let set: BTreeSet<(usize, usize)> = hats.iter().map(|h| h.endpoints).collect();
        set.into_iter().collect()
    };
    let pair_index: BTreeMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); mids.len()];
    for (i, &mid) in mids.iter().enumerate() {
        let mut options: Vec<usize> = hats
            .iter()
            .filter(|h| h.midpoint == mid)
            .map(|h| pair_index[&h.endpoints])
            .collect();
        options.sort_unstable();
        adj[i] = options;
    }
    // Kuhn's augmenting paths, midpoints in ascending order
    let mut pair_owner: Vec<Option<usize>> = vec![None; pairs.len()];
    fn augment(
        i: usize,
        adj: &[Vec<usize>],
        pair_owner: &mut [Option<usize>],
        visited: &mut [bool],
    ) -> bool {
        for &p in &adj[i] {
            if visited[p] {
                continue;
            }
            visited[p] = true;
            if pair_owner[p].is_none()
                || augment(pair_owner[p].unwrap(), adj, pair_owner, visited)
            {
                pair_owner[p] = Some(i);
                return true;
            }
        }
        false
    }
    for i in 0..mids.len() {
        let mut visited = vec![false; pairs.len()];
        augment(i, &adj, &mut pair_owner, &mut visited);
    }
    let mut chosen: Vec<Hat> = pair_owner
        .iter()
        .enumerate()
        .filter_map(|(p, owner)| owner.map(|i| Hat { midpoint: mids[i], endpoints: pairs[p] }))
        .collect();
    chosen.sort();
    let (uncrowded, induced) = recompute_flags(g, layout, &chosen);
    debug_assert!(uncrowded);
    Ok(HatSet { hats: chosen, layout: layout.clone(), uncrowded, induced })
}

#[derive(Debug, Clone)]
pub enum HatSearchMode {
    /// Check the full input hypotheses for the given r and demand the
    /// output threshold r^9/2^15.
    Strict { r: Rational },
    /// Skip the hypotheses and demand `min_hat_ratio * |B'|` hats.
    Relaxed { min_hat_ratio: Rational },
}

/// Output of the induced-hat-family search: an induced subgraph on
/// `a_side ∪ b_side` in which the set of all hats is uncrowded and
/// induced and meets the ratio threshold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedHatFamily {
    pub a_side: BTreeSet<usize>,
    pub b_side: BTreeSet<usize>,
    pub hats: Vec<Hat>,
    #[serde(with = "crate::io::rational_string")]
    pub ratio_threshold: Rational,
}

pub fn rat_pow(r: &Rational, e: u32) -> Rational {
    Rational::new(r.numer().pow(e), r.denom().pow(e))
}

fn pow2(e: u32) -> Rational {
    Rational::from(BigInt::from(2u8).pow(e))
}

fn count_ratio(count: usize) -> Rational {
    Rational::from(BigInt::from(count))
}

/// Searches for an induced subgraph whose full hat set is uncrowded,
/// induced, and large relative to its B side: iterative cleaning first
/// (worst midpoint out), then exhaustive subgraph search at desk scale.
pub fn induce_hats_search(
    g: &Graph,
    layout: &BipartiteLayout,
    mode: &HatSearchMode,
    cfg: &Config,
) -> Result<InducedHatFamily> {
    layout.validate(g, true)?;
    if layout.right.is_empty() {
        return Err(Error::PreconditionFailed("B side is empty".into()));
    }
    let threshold = match mode {
        HatSearchMode::Strict { r } => {
            if r <= &Rational::from(BigInt::from(0)) {
                return Err(Error::PreconditionFailed("r must be positive".into()));
            }
            let max_deg = r.clone() * Rational::from(BigInt::from(4));
            for &a in &layout.left {
                if count_ratio(g.degree(a)) > max_deg {
                    return Err(Error::PreconditionFailed(format!(
                        "vertex {a} on the A side has degree {} > 4r",
                        g.degree(a)
                    )));
                }
            }
            let input_threshold = rat_pow(r, 11) / pow2(8) * count_ratio(layout.right.len());
            let max_uncrowded = max_uncrowded_hatset(g, layout)?;
            if count_ratio(max_uncrowded.hats.len()) < input_threshold {
                return Err(Error::PreconditionFailed(format!(
                    "largest uncrowded hat set has {} hats < r^11/2^8 |B|",
                    max_uncrowded.hats.len()
                )));
            }
            rat_pow(r, 9) / pow2(15)
        }
        HatSearchMode::Relaxed { min_hat_ratio } => min_hat_ratio.clone(),
    };

    // phase 1: deterministic cleaning on the full B side
    let mut a_cur: BTreeSet<usize> = layout.left.clone();
    let b_cur: BTreeSet<usize> = layout.right.clone();
    loop {
        let worst = a_cur
            .iter()
            .map(|&a| (b_neighbors(g, a, &b_cur).len(), a))
            .filter(|&(d, _)| d >= 3)
            .max_by_key(|&(d, a)| (d, std::cmp::Reverse(a)))
            .map(|(_, a)| a);
        match worst {
            Some(a) => {
                a_cur.remove(&a);
            }
            None => break,
        }
    }
    // duplicated endpoint pairs: keep the smallest midpoint
    let mut seen_pairs: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut drop: Vec<usize> = Vec::new();
    for &a in &a_cur {
        let nbrs = b_neighbors(g, a, &b_cur);
        if nbrs.len() == 2 {
            let pair = (nbrs[0], nbrs[1]);
            if let std::collections::btree_map::Entry::Vacant(e) = seen_pairs.entry(pair) {
                e.insert(a);
            } else {
                drop.push(a);
            }
        } else {
            drop.push(a); // degree <= 1 carries no hat
        }
    }
    for a in drop {
        a_cur.remove(&a);
    }
    if let Some(family) = contract_check(g, &a_cur, &b_cur, &threshold) {
        return Ok(family);
    }

    // phase 2: exhaustive induced-subgraph scan at desk scale
    let a_all: Vec<usize> = layout.left.iter().copied().collect();
    let b_all: Vec<usize> = layout.right.iter().copied().collect();
    if a_all.len() + b_all.len() <= cfg.exhaustive_bound.min(24) {
        for b_mask in 1u64..(1 << b_all.len()) {
            let b_sub: BTreeSet<usize> = pick(&b_all, b_mask);
            for a_mask in 0u64..(1 << a_all.len()) {
                let a_sub: BTreeSet<usize> = pick(&a_all, a_mask);
                if let Some(family) = contract_check(g, &a_sub, &b_sub, &threshold) {
                    return Ok(family);
                }
            }
        }
        return Err(Error::SearchExhausted {
            complete: true,
            context: "no induced subgraph meets the hat-family contract".into(),
        });
    }
    Err(Error::SearchExhausted {
        complete: false,
        context: format!(
            "cleaning failed and |A|+|B| = {} exceeds the exhaustive bound",
            a_all.len() + b_all.len()
        ),
    })
}

fn pick(items: &[usize], mask: u64) -> BTreeSet<usize> {
    items
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, &v)| v)
        .collect()
}

fn b_neighbors(g: &Graph, a: usize, b: &BTreeSet<usize>) -> Vec<usize> {
    g.neighbors(a).iter().copied().filter(|v| b.contains(v)).collect()
}

/// Checks the output contract on (A', B') and builds the family if it
/// holds: B' nonempty, every A' vertex has exactly two B' neighbors,
/// all endpoint pairs distinct, and hats >= threshold * |B'|.
fn contract_check(
    g: &Graph,
    a_side: &BTreeSet<usize>,
    b_side: &BTreeSet<usize>,
    threshold: &Rational,
) -> Option<InducedHatFamily> {
    if b_side.is_empty() {
        return None;
    }
    let mut hats = Vec::new();
    let mut pairs = BTreeSet::new();
    let mut keep: BTreeSet<usize> = BTreeSet::new();
    for &a in a_side {
        let nbrs = b_neighbors(g, a, b_side);
        if nbrs.len() >= 3 {
            return None;
        }
        if nbrs.len() == 2 {
            let pair = (nbrs[0], nbrs[1]);
            if !pairs.insert(pair) {
                return None;
            }
            hats.push(Hat { midpoint: a, endpoints: pair });
            keep.insert(a);
        }
    }
    if count_ratio(hats.len()) < threshold.clone() * count_ratio(b_side.len()) {
        return None;
    }
    Some(InducedHatFamily {
        a_side: keep,
        b_side: b_side.clone(),
        hats,
        ratio_threshold: threshold.clone(),
    })
}

#[derive(Debug, Clone)]
pub enum FixBranchMode {
    /// Full strict hypotheses at the given integer r >= 2^25; the target
    /// average degree is r itself.
    Strict { r: Rational },
    /// Skip hypotheses, demand the supplied average degree.
    Relaxed { target: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixBranchOutcome {
    pub pattern: Graph,
    pub witness: SubdivisionWitness,
    #[serde(with = "crate::io::rational_string")]
    pub average_degree: Rational,
}

/// Searches for an induced 1-subdivision of a dense pattern with all
/// branch vertices inside B, by maximizing the exact-depth-1 induced
/// density over branch sets drawn from B.
pub fn fix_branch_search(
    g: &Graph,
    partition: (&BTreeSet<usize>, &BTreeSet<usize>),
    mode: &FixBranchMode,
    cfg: &Config,
) -> Result<FixBranchOutcome> {
    let (a_side, b_side) = partition;
    if !a_side.is_disjoint(b_side) || a_side.len() + b_side.len() != g.n() {
        return Err(Error::invalid("partition must split the vertex set"));
    }
    if !is_independent(g, a_side) {
        return Err(Error::PreconditionFailed("A side is not independent".into()));
    }
    let target = match mode {
        FixBranchMode::Strict { r } => {
            let two25 = Rational::from(BigInt::from(1u64 << 25));
            if r < &two25 {
                return Err(Error::PreconditionFailed("strict mode needs r >= 2^25".into()));
            }
            let gb = g.induced_subgraph(b_side)?;
            let chi_upper = count_ratio(color_count(&greedy_coloring(&gb)));
            if &chi_upper > r {
                let mut budget = Budget::new(cfg.max_nodes);
                let chi = chromatic_number_exact(&gb, &mut budget)?;
                if count_ratio(chi) > *r {
                    return Err(Error::PreconditionFailed(format!(
                        "chromatic number of G[B] is {chi} > r"
                    )));
                }
            }
            if b_side.is_empty() {
                return Err(Error::PreconditionFailed("B side is empty".into()));
            }
            let mad_b = max_average_degree(&gb)?.value;
            if mad_b > rat_pow(r, 3) {
                return Err(Error::PreconditionFailed(
                    "maximum average degree of G[B] exceeds r^3".into(),
                ));
            }
            // induced uncrowded hats of the A-B bipartite subgraph
            let cross: Vec<(usize, usize)> = g
                .edges()
                .filter(|(u, v)| {
                    (a_side.contains(u) && b_side.contains(v))
                        || (a_side.contains(v) && b_side.contains(u))
                })
                .collect();
            let bip = Graph::new(g.n(), cross)?;
            // hats with midpoints of bipartite degree exactly 2 are the
            // ones eligible for an induced family
            let eligible: Vec<usize> = a_side
                .iter()
                .copied()
                .filter(|&a| bip.degree(a) == 2)
                .collect();
            let sub_layout = BipartiteLayout::new(eligible, b_side.iter().copied());
            let max_induced = max_uncrowded_hatset(&bip, &sub_layout)?;
            let needed = rat_pow(r, 9) / pow2(15) * count_ratio(b_side.len());
            if count_ratio(max_induced.hats.len()) < needed {
                return Err(Error::PreconditionFailed(format!(
                    "largest induced uncrowded hat set has {} hats < r^9/2^15 |B|",
                    max_induced.hats.len()
                )));
            }
            r.clone()
        }
        FixBranchMode::Relaxed { target } => target.clone(),
    };
    if b_side.is_empty() {
        return Err(Error::PreconditionFailed("B side is empty".into()));
    }

    let domains = SearchDomains { branch: Some(b_side.clone()), internal: None };
    let report = nabla_measure_with(g, 1, Measure::NablaExact, &domains, cfg)?;
    if report.value >= target {
        debug_assert!(crate::witness::verify_witness(
            g,
            &report.pattern,
            Measure::NablaExact.spec(1),
            &report.witness
        )
        .is_empty());
        return Ok(FixBranchOutcome {
            pattern: report.pattern,
            witness: report.witness,
            average_degree: report.value,
        });
    }
    Err(Error::SearchExhausted {
        complete: report.complete,
        context: format!(
            "best induced 1-subdivision with branch vertices in B has average degree {} < target",
            report.value
        ),
    })
}
