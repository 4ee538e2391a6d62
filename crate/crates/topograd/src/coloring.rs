//! Degeneracy ordering, the greedy coloring it induces, and the largest
//! color class as an independent set.

use std::collections::BTreeSet;

use crate::config::Budget;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Removal order of a minimum-degree peel (ties by smallest index) and the
/// degeneracy, i.e. the largest degree seen at removal time.
pub fn degeneracy_order(g: &Graph) -> (Vec<usize>, usize) {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut degeneracy = 0;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (deg[v], v))
            .unwrap();
        degeneracy = degeneracy.max(deg[v]);
        removed[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !removed[w] {
                deg[w] -= 1;
            }
        }
    }
    (order, degeneracy)
}

/// Proper coloring built greedily along the reverse degeneracy order, so
/// the color count is at most degeneracy + 1.
pub fn greedy_coloring(g: &Graph) -> Vec<usize> {
    let (order, _) = degeneracy_order(g);
    let mut color = vec![usize::MAX; g.n()];
    for &v in order.iter().rev() {
        let mut used: BTreeSet<usize> = BTreeSet::new();
        for &w in g.neighbors(v) {
            if color[w] != usize::MAX {
                used.insert(color[w]);
            }
        }
        let mut c = 0;
        while used.contains(&c) {
            c += 1;
        }
        color[v] = c;
    }
    color
}

pub fn color_count(coloring: &[usize]) -> usize {
    coloring.iter().map(|&c| c + 1).max().unwrap_or(0)
}

/// Largest color class of the greedy coloring (ties to the smallest color
/// index), hence an independent set of size >= n / color count.
pub fn independent_set_from_coloring(g: &Graph) -> BTreeSet<usize> {
    let coloring = greedy_coloring(g);
    let k = color_count(&coloring);
    if k == 0 {
        return BTreeSet::new();
    }
    let mut best: Option<BTreeSet<usize>> = None;
    for c in 0..k {
        let class: BTreeSet<usize> =
            (0..g.n()).filter(|&v| coloring[v] == c).collect();
        if best.as_ref().is_none_or(|b| class.len() > b.len()) {
            best = Some(class);
        }
    }
    best.unwrap()
}

pub fn is_independent(g: &Graph, set: &BTreeSet<usize>) -> bool {
    !g.edges().any(|(u, v)| set.contains(&u) && set.contains(&v))
}

/// Exact chromatic number by backtracking; only used on very small graphs
/// (strict-mode hypothesis checks).
pub fn chromatic_number_exact(g: &Graph, budget: &mut Budget) -> Result<usize> {
    if g.n() == 0 {
        return Ok(0);
    }
    let greedy = color_count(&greedy_coloring(g));
    let lower = greedy_clique_size(g).max(1);
    for k in lower..=greedy {
        if k == greedy {
            return Ok(greedy);
        }
        let mut colors = vec![usize::MAX; g.n()];
        if try_color(g, 0, k, &mut colors, budget)? {
            return Ok(k);
        }
    }
    Ok(greedy)
}

fn try_color(
    g: &Graph,
    v: usize,
    k: usize,
    colors: &mut Vec<usize>,
    budget: &mut Budget,
) -> Result<bool> {
    if v == g.n() {
        return Ok(true);
    }
    if !budget.tick() {
        return Err(Error::BudgetExceeded {
            nodes: budget.used,
            context: "exact chromatic number".into(),
        });
    }
    // symmetry break: vertex v may only open one new color
    let opened = colors[..v].iter().copied().filter(|&c| c != usize::MAX).max().map_or(0, |c| c + 1);
    for c in 0..k.min(opened + 1) {
        if g.neighbors(v).iter().all(|&w| colors[w] != c) {
            colors[v] = c;
            if try_color(g, v + 1, k, colors, budget)? {
                return Ok(true);
            }
            colors[v] = usize::MAX;
        }
    }
    Ok(false)
}

fn greedy_clique_size(g: &Graph) -> usize {
    let mut best = 0;
    for v in 0..g.n() {
        let mut clique = vec![v];
        for &w in g.neighbors(v) {
            if clique.iter().all(|&x| g.has_edge(x, w)) {
                clique.push(w);
            }
        }
        best = best.max(clique.len());
    }
    best
}
