//! Clique and biclique detection plus the Ramsey refinement that turns a
//! biclique subgraph occurrence into an induced clique or induced biclique.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::config::{Budget, Config};
use crate::error::{Error, Result};
use crate::find::find_subdivision;
use crate::graph::Graph;
use crate::witness::{Occurrence, SubdivisionSpec};

/// Known exact diagonal Ramsey numbers R(t,t); everything larger needs a
/// caller-supplied threshold.
pub const DIAGONAL_RAMSEY: [(usize, usize); 4] = [(1, 1), (2, 2), (3, 6), (4, 18)];

pub fn diagonal_ramsey(t: usize) -> Option<usize> {
    DIAGONAL_RAMSEY.iter().find(|&&(a, _)| a == t).map(|&(_, r)| r)
}

/// First s-clique in lexicographic order, or None.
pub fn find_clique_induced(g: &Graph, s: usize, cfg: &Config) -> Result<Option<BTreeSet<usize>>> {
    if s == 0 {
        return Ok(Some(BTreeSet::new()));
    }
    if !g.fits_mask_kernel() {
        return Err(Error::invalid("clique kernel supports at most 128 vertices"));
    }
    let mut budget = Budget::new(cfg.max_nodes);
    let mut stack = Vec::new();
    let full = ones(g.n());
    match clique_dfs(g, s, full, &mut stack, &mut budget)? {
        Some(set) => Ok(Some(set)),
        None => Ok(None),
    }
}

fn ones(n: usize) -> u128 {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

fn clique_dfs(
    g: &Graph,
    s: usize,
    candidates: u128,
    stack: &mut Vec<usize>,
    budget: &mut Budget,
) -> Result<Option<BTreeSet<usize>>> {
    if stack.len() == s {
        return Ok(Some(stack.iter().copied().collect()));
    }
    if (candidates.count_ones() as usize) < s - stack.len() {
        return Ok(None);
    }
    let mut rest = candidates;
    while rest != 0 {
        if !budget.tick() {
            return Err(Error::BudgetExceeded { nodes: budget.used, context: "clique search".into() });
        }
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        stack.push(v);
        // candidates shrink to later common neighbors
        let next = rest & g.mask(v);
        if let Some(found) = clique_dfs(g, s, next, stack, budget)? {
            return Ok(Some(found));
        }
        stack.pop();
    }
    Ok(None)
}

/// First K_{s,s} occurrence as a subgraph: disjoint s-sets with every
/// cross edge present (edges inside a side are allowed).
pub fn find_biclique_subgraph(
    g: &Graph,
    s: usize,
    cfg: &Config,
) -> Result<Option<(BTreeSet<usize>, BTreeSet<usize>)>> {
    biclique_search(g, s, cfg, false)
}

/// First induced K_{s,s}: additionally both sides are independent sets.
pub fn find_biclique_induced(
    g: &Graph,
    s: usize,
    cfg: &Config,
) -> Result<Option<(BTreeSet<usize>, BTreeSet<usize>)>> {
    biclique_search(g, s, cfg, true)
}

fn biclique_search(
    g: &Graph,
    s: usize,
    cfg: &Config,
    induced: bool,
) -> Result<Option<(BTreeSet<usize>, BTreeSet<usize>)>> {
    if s == 0 {
        return Ok(Some((BTreeSet::new(), BTreeSet::new())));
    }
    if !g.fits_mask_kernel() {
        return Err(Error::invalid("biclique kernel supports at most 128 vertices"));
    }
    let mut budget = Budget::new(cfg.max_nodes);
    let mut side = Vec::new();
    side_dfs(g, s, 0, ones(g.n()), &mut side, &mut budget, induced)
}

fn side_dfs(
    g: &Graph,
    s: usize,
    from: usize,
    common: u128,
    side: &mut Vec<usize>,
    budget: &mut Budget,
    induced: bool,
) -> Result<Option<(BTreeSet<usize>, BTreeSet<usize>)>> {
    if side.len() == s {
        let side_mask = side.iter().fold(0u128, |m, &v| m | 1u128 << v);
        let pool = common & !side_mask;
        let other = if induced {
            independent_subset(g, pool, s, budget)?
        } else {
            first_k(pool, s)
        };
        if let Some(other) = other {
            return Ok(Some((side.iter().copied().collect(), other)));
        }
        return Ok(None);
    }
    if (common.count_ones() as usize) < s {
        return Ok(None);
    }
    for v in from..g.n() {
        if !budget.tick() {
            return Err(Error::BudgetExceeded { nodes: budget.used, context: "biclique search".into() });
        }
        if induced && side.iter().any(|&u| g.has_edge(u, v)) {
            continue;
        }
        let next = common & g.mask(v);
        if (next.count_ones() as usize) < s {
            continue;
        }
        side.push(v);
        if let Some(found) = side_dfs(g, s, v + 1, next, side, budget, induced)? {
            return Ok(Some(found));
        }
        side.pop();
    }
    Ok(None)
}

fn first_k(pool: u128, k: usize) -> Option<BTreeSet<usize>> {
    if (pool.count_ones() as usize) < k {
        return None;
    }
    let mut out = BTreeSet::new();
    let mut rest = pool;
    for _ in 0..k {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        out.insert(v);
    }
    Some(out)
}

fn independent_subset(
    g: &Graph,
    pool: u128,
    k: usize,
    budget: &mut Budget,
) -> Result<Option<BTreeSet<usize>>> {
    fn rec(
        g: &Graph,
        pool: u128,
        k: usize,
        acc: &mut Vec<usize>,
        budget: &mut Budget,
    ) -> Result<Option<BTreeSet<usize>>> {
        if acc.len() == k {
            return Ok(Some(acc.iter().copied().collect()));
        }
        let mut rest = pool;
        while rest != 0 {
            if !budget.tick() {
                return Err(Error::BudgetExceeded {
                    nodes: budget.used,
                    context: "independent subset search".into(),
                });
            }
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            acc.push(v);
            if let Some(found) = rec(g, rest & !g.mask(v), k, acc, budget)? {
                return Ok(Some(found));
            }
            acc.pop();
        }
        Ok(None)
    }
    rec(g, pool, k, &mut Vec::new(), budget)
}

/// Result of refining a biclique subgraph occurrence via Ramsey's theorem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum RamseyOutcome {
    InducedClique { vertices: BTreeSet<usize> },
    InducedBiclique { left: BTreeSet<usize>, right: BTreeSet<usize> },
    InsufficientSize { required: usize },
}

/// Given sides of a K_{s,s} subgraph occurrence, produce an induced K_t or
/// an induced K_{t,t} whenever s is at least the diagonal Ramsey number
/// R(t,t) (or a caller-supplied threshold for t > 4).
pub fn ramsey_refine_biclique(
    g: &Graph,
    sides: (&BTreeSet<usize>, &BTreeSet<usize>),
    t: usize,
    threshold_override: Option<usize>,
    cfg: &Config,
) -> Result<RamseyOutcome> {
    let (a, b) = sides;
    if t == 0 {
        return Err(Error::invalid("t must be positive"));
    }
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::invalid("sides must be nonempty and of equal size"));
    }
    if !a.is_disjoint(b) {
        return Err(Error::invalid("sides must be disjoint"));
    }
    for &u in a {
        for &v in b {
            if !g.has_edge(u, v) {
                return Err(Error::invalid(format!(
                    "missing cross edge ({u},{v}): not a biclique occurrence"
                )));
            }
        }
    }
    let s = a.len();
    let required = match threshold_override.or_else(|| diagonal_ramsey(t)) {
        Some(r) => r,
        None => {
            return Err(Error::invalid(format!(
                "R({t},{t}) is not known exactly; supply a threshold"
            )))
        }
    };
    if s < required {
        return Ok(RamseyOutcome::InsufficientSize { required });
    }

    // Within each side: a K_t gives an induced clique of G outright; with
    // independent t-subsets on both sides the cross edges complete an
    // induced K_{t,t}.
    let mut independents = Vec::new();
    for side in [a, b] {
        let (sub, map) = g.induced_with_map(side)?;
        if let Some(clique) = find_clique_induced(&sub, t, cfg)? {
            return Ok(RamseyOutcome::InducedClique {
                vertices: clique.into_iter().map(|v| map[v]).collect(),
            });
        }
        let mut budget = Budget::new(cfg.max_nodes);
        match independent_subset(&sub, ones(sub.n()), t, &mut budget)? {
            Some(ind) => independents.push(ind.into_iter().map(|v| map[v]).collect::<BTreeSet<_>>()),
            None => {
                return Err(Error::invalid(format!(
                    "side of size {s} has neither K_{t} nor an independent {t}-set; \
                     threshold {required} is not a valid Ramsey bound"
                )))
            }
        }
    }
    let right = independents.pop().unwrap();
    let left = independents.pop().unwrap();
    Ok(RamseyOutcome::InducedBiclique { left, right })
}

/// The three-way forbidden-structure report behind the bounded-expansion
/// class check. The biclique condition is reported in both readings
/// (subgraph and induced); class membership uses the induced one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForbiddenPatternReport {
    pub has_clique: bool,
    pub has_biclique_subgraph: bool,
    pub has_biclique_induced: bool,
    pub has_induced_subdivision: bool,
}

impl ForbiddenPatternReport {
    /// Free of K_s, K_{s,s}, and subdivisions of H, all as induced subgraphs.
    pub fn in_class(&self) -> bool {
        !self.has_clique && !self.has_biclique_induced && !self.has_induced_subdivision
    }
}

pub fn forbidden_pattern_check(
    g: &Graph,
    h: &Graph,
    s: usize,
    cfg: &Config,
) -> Result<ForbiddenPatternReport> {
    let has_clique = find_clique_induced(g, s, cfg)?.is_some();
    let has_biclique_subgraph = find_biclique_subgraph(g, s, cfg)?.is_some();
    let has_biclique_induced = find_biclique_induced(g, s, cfg)?.is_some();
    let spec = SubdivisionSpec::unbounded(Occurrence::Induced);
    let has_induced_subdivision = find_subdivision(g, h, spec, cfg)?.is_some();
    Ok(ForbiddenPatternReport {
        has_clique,
        has_biclique_subgraph,
        has_biclique_induced,
        has_induced_subdivision,
    })
}
