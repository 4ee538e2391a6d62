//! Exact computation of the three depth-k density measures.
//!
//! For depth at least 1 the maximizing pattern is found by enumerating
//! branch vertex sets and, for each, packing internally disjoint paths
//! between branch pairs — one path per pattern edge — with an upper-bound
//! prune (a branch set of size b with at most m packable pairs caps the
//! average degree at 2m/b). Depth 0 delegates to the flow-based maximum
//! average degree.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::graph::{Graph, Rational};
use crate::mad::max_average_degree;
use crate::witness::{Occurrence, SubdivisionSpec, SubdivisionWitness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    /// Depth-k subdivision as a subgraph.
    Nabla,
    /// Depth-k subdivision as an induced subgraph.
    NablaInduced,
    /// Exact-depth-k subdivision as an induced subgraph.
    NablaExact,
}

impl Measure {
    pub fn spec(self, k: u32) -> SubdivisionSpec {
        match self {
            Measure::Nabla => SubdivisionSpec::at_most(k, Occurrence::Subgraph),
            Measure::NablaInduced => SubdivisionSpec::at_most(k, Occurrence::Induced),
            Measure::NablaExact => SubdivisionSpec::exactly(k, Occurrence::Induced),
        }
    }

    pub fn all() -> [Measure; 3] {
        [Measure::Nabla, Measure::NablaInduced, Measure::NablaExact]
    }
}

impl std::fmt::Display for Measure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Measure::Nabla => "nabla",
            Measure::NablaInduced => "nabla_induced",
            Measure::NablaExact => "nabla_exact",
        };
        f.write_str(s)
    }
}

/// A density value together with the pattern attaining it and a verifying
/// witness. `complete` is false when the node budget truncated the search,
/// in which case `value` is a certified lower bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityReport {
    pub k: u32,
    pub measure: Measure,
    #[serde(with = "crate::io::rational_string")]
    pub value: Rational,
    pub pattern: Graph,
    pub witness: SubdivisionWitness,
    pub complete: bool,
}

/// Restrictions threaded through by the structured searches: which host
/// vertices may serve as branch vertices / path internals.
#[derive(Debug, Clone, Default)]
pub struct SearchDomains {
    pub branch: Option<BTreeSet<usize>>,
    pub internal: Option<BTreeSet<usize>>,
}

pub fn nabla_k(g: &Graph, k: u32, cfg: &Config) -> Result<DensityReport> {
    nabla_measure(g, k, Measure::Nabla, cfg)
}

pub fn nabla_induced_k(g: &Graph, k: u32, cfg: &Config) -> Result<DensityReport> {
    nabla_measure(g, k, Measure::NablaInduced, cfg)
}

pub fn nabla_exact_k(g: &Graph, k: u32, cfg: &Config) -> Result<DensityReport> {
    nabla_measure(g, k, Measure::NablaExact, cfg)
}

pub fn nabla_measure(g: &Graph, k: u32, measure: Measure, cfg: &Config) -> Result<DensityReport> {
    nabla_measure_with(g, k, measure, &SearchDomains::default(), cfg)
}

/// Core entry point. At k = 0 all three measures coincide with the maximum
/// average degree and the maximizer can be taken induced, so the flow
/// oracle answers directly.
pub fn nabla_measure_with(
    g: &Graph,
    k: u32,
    measure: Measure,
    domains: &SearchDomains,
    cfg: &Config,
) -> Result<DensityReport> {
    if g.n() == 0 {
        return Err(Error::DegenerateInput("density of the empty graph".into()));
    }
    if k == 0 {
        if domains.branch.is_some() || domains.internal.is_some() {
            return Err(Error::invalid("search domains require depth k >= 1"));
        }
        let mad = max_average_degree(g)?;
        let pattern = g.induced_subgraph(&mad.witness)?;
        let order: Vec<usize> = mad.witness.iter().copied().collect();
        let mut paths = BTreeMap::new();
        for (i, j) in pattern.edges() {
            paths.insert((i, j), vec![order[i], order[j]]);
        }
        let witness = SubdivisionWitness { branch_map: order, paths };
        return Ok(DensityReport {
            k,
            measure,
            value: mad.value,
            pattern,
            witness,
            complete: true,
        });
    }
    if !g.fits_mask_kernel() {
        return Err(Error::invalid("density kernel supports at most 128 vertices"));
    }

    let branch_domain: Vec<usize> = match &domains.branch {
        Some(set) => {
            if let Some(&v) = set.iter().find(|&&v| v >= g.n()) {
                return Err(Error::invalid(format!("branch domain vertex {v} out of range")));
            }
            set.iter().copied().collect()
        }
        None => g.vertices().collect(),
    };
    if branch_domain.is_empty() {
        return Err(Error::invalid("empty branch domain"));
    }
    if branch_domain.len() > 63 {
        return Err(Error::invalid(
            "branch domain beyond 63 vertices is outside desk scale",
        ));
    }
    let internal_allowed: u128 = match &domains.internal {
        Some(set) => {
            if let Some(&v) = set.iter().find(|&&v| v >= g.n()) {
                return Err(Error::invalid(format!("internal domain vertex {v} out of range")));
            }
            set.iter().fold(0u128, |m, &v| m | 1u128 << v)
        }
        None => {
            if g.n() >= 128 {
                u128::MAX
            } else {
                (1u128 << g.n()) - 1
            }
        }
    };

    let dist: Vec<Vec<usize>> = (0..g.n()).map(|v| g.bfs_distances(v)).collect();
    let total_masks: u64 = 1u64 << branch_domain.len();
    let workers = cfg.workers.clamp(1, 64) as u64;

    let run_range = |lo: u64, hi: u64, max_nodes: u64| -> (Option<SubsetBest>, bool) {
        let mut search = PackSearch {
            g,
            k,
            measure,
            dist: &dist,
            internal_allowed,
            branch_domain: &branch_domain,
            nodes: 0,
            max_nodes,
        };
        search.run(lo, hi)
    };

    let (best, complete) = if workers <= 1 || total_masks < 64 {
        run_range(1, total_masks, cfg.max_nodes)
    } else {
        let chunk = (total_masks - 1) / workers + 1;
        let slice_budget = cfg.max_nodes / workers;
        let results: Vec<(Option<SubsetBest>, bool)> = std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for w in 0..workers {
                let lo = 1.max(w * chunk);
                let hi = total_masks.min((w + 1) * chunk);
                let run = &run_range;
                handles.push(scope.spawn(move || {
                    if lo >= hi {
                        (None, true)
                    } else {
                        run(lo, hi, slice_budget)
                    }
                }));
            }
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        let complete = results.iter().all(|(_, done)| *done);
        let best = results
            .into_iter()
            .filter_map(|(b, _)| b)
            .min_by(cmp_best);
        (best, complete)
    };

    let report = match best {
        Some(best) => build_report(g, k, measure, &branch_domain, best, complete)?,
        None => {
            // budget died before the first singleton; the trivial one-vertex
            // pattern is still a sound lower bound
            let v = branch_domain[0];
            DensityReport {
                k,
                measure,
                value: Rational::from(BigInt::from(0)),
                pattern: Graph::empty(1),
                witness: SubdivisionWitness { branch_map: vec![v], paths: BTreeMap::new() },
                complete: false,
            }
        }
    };
    Ok(report)
}

/// Best candidate from one subset range: routed pair count, branch size,
/// subset mask (over the domain), and the routed paths.
struct SubsetBest {
    m: u64,
    b: u64,
    mask: u64,
    routes: Vec<((usize, usize), Vec<usize>)>,
}

/// Canonical order: larger 2m/b first, then smaller subset mask.
fn cmp_best(a: &SubsetBest, b: &SubsetBest) -> std::cmp::Ordering {
    let lhs = a.m * b.b;
    let rhs = b.m * a.b;
    rhs.cmp(&lhs).then(a.mask.cmp(&b.mask))
}

fn build_report(
    g: &Graph,
    k: u32,
    measure: Measure,
    branch_domain: &[usize],
    best: SubsetBest,
    complete: bool,
) -> Result<DensityReport> {
    let members: Vec<usize> = branch_domain
        .iter()
        .enumerate()
        .filter(|(i, _)| best.mask & (1 << i) != 0)
        .map(|(_, &v)| v)
        .collect();
    let index: BTreeMap<usize, usize> = members.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut edges = Vec::new();
    let mut paths = BTreeMap::new();
    for ((x, y), path) in &best.routes {
        let (i, j) = (index[x], index[y]);
        let key = (i.min(j), i.max(j));
        edges.push(key);
        let mut p = path.clone();
        if index[&p[0]] > index[p.last().unwrap()] {
            p.reverse();
        }
        paths.insert(key, p);
    }
    let pattern = Graph::new(members.len(), edges)?;
    let witness = SubdivisionWitness { branch_map: members, paths };
    let value = Rational::new(BigInt::from(2 * best.m), BigInt::from(best.b));
    debug_assert!(
        crate::witness::verify_witness(g, &pattern, measure.spec(k), &witness).is_empty(),
        "density search produced an invalid witness"
    );
    Ok(DensityReport { k, measure, value, pattern, witness, complete })
}

struct PackSearch<'a> {
    g: &'a Graph,
    k: u32,
    measure: Measure,
    dist: &'a [Vec<usize>],
    internal_allowed: u128,
    branch_domain: &'a [usize],
    nodes: u64,
    max_nodes: u64,
}

impl<'a> PackSearch<'a> {
    /// Scans subset masks in [lo, hi); returns the canonical best and
    /// whether the range was fully covered within budget.
    fn run(&mut self, lo: u64, hi: u64) -> (Option<SubsetBest>, bool) {
        let mut best: Option<SubsetBest> = None;
        for mask in lo..hi {
            if self.nodes > self.max_nodes {
                return (best, false);
            }
            self.nodes += 1;
            let members: Vec<usize> = self
                .branch_domain
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &v)| v)
                .collect();
            let b = members.len() as u64;
            let branch_mask = members.iter().fold(0u128, |m, &v| m | 1u128 << v);

            let mut direct: Vec<((usize, usize), Vec<usize>)> = Vec::new();
            let mut candidates: Vec<(usize, usize)> = Vec::new();
            let mut independent = true;
            for (ai, &x) in members.iter().enumerate() {
                for &y in &members[ai + 1..] {
                    if self.g.has_edge(x, y) {
                        independent = false;
                        if self.measure != Measure::NablaExact {
                            direct.push(((x, y), vec![x, y]));
                        }
                    } else if self.dist[x][y] <= self.k as usize + 1 {
                        candidates.push((x, y));
                    }
                }
            }
            if self.measure == Measure::NablaExact && !independent {
                continue;
            }

            let free = (self.internal_allowed & !branch_mask).count_ones() as u64;
            let per_route = if self.measure == Measure::NablaExact { self.k as u64 } else { 1 };
            let ub_m = direct.len() as u64
                + (candidates.len() as u64).min(free.checked_div(per_route).unwrap_or(u64::MAX));
            if let Some(cur) = &best {
                // cannot strictly beat the incumbent
                if ub_m * cur.b <= cur.m * b {
                    continue;
                }
            }

            let mut state = SubsetState {
                used: branch_mask,
                routes: direct.clone(),
                best_m: direct.len() as u64,
                best_routes: direct.clone(),
                candidates,
            };
            let exhausted = !self.pack(&mut state, 0, direct.len() as u64);
            let cand = SubsetBest {
                m: state.best_m,
                b,
                mask,
                routes: state.best_routes,
            };
            let better = match &best {
                None => true,
                Some(cur) => cmp_best(&cand, cur) == std::cmp::Ordering::Less,
            };
            if better {
                best = Some(cand);
            }
            if exhausted {
                return (best, false);
            }
        }
        (best, true)
    }

    /// Branch-and-bound over the candidate pair list; routes first (paths
    /// in ascending length / lexicographic order), then skips.
    fn pack(&mut self, state: &mut SubsetState, idx: usize, m: u64) -> bool {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return false;
        }
        let remaining = (state.candidates.len() - idx) as u64;
        let free = (self.internal_allowed & !state.used).count_ones() as u64;
        let per_route = if self.measure == Measure::NablaExact { self.k as u64 } else { 1 };
        let cap = m + remaining.min(free / per_route.max(1));
        if cap <= state.best_m {
            // even routing everything left cannot strictly improve
            return true;
        }
        if idx == state.candidates.len() {
            state.best_m = m;
            state.best_routes = state.routes.clone();
            return true;
        }
        let (x, y) = state.candidates[idx];
        let lens: Vec<u32> = match self.measure {
            Measure::NablaExact => vec![self.k],
            _ => (1..=self.k).collect(),
        };
        for len in lens {
            if !self.route(state, idx, m, x, y, len) {
                return false;
            }
        }
        // skip this pair
        self.pack(state, idx + 1, m)
    }

    fn route(&mut self, state: &mut SubsetState, idx: usize, m: u64, x: usize, y: usize, len: u32) -> bool {
        let mut prefix = vec![x];
        self.extend(state, idx, m, x, y, len, &mut prefix)
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &mut self,
        state: &mut SubsetState,
        idx: usize,
        m: u64,
        x: usize,
        y: usize,
        remaining: u32,
        prefix: &mut Vec<usize>,
    ) -> bool {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return false;
        }
        let cur = *prefix.last().unwrap();
        let induced = self.measure != Measure::Nabla;
        for &w in self.g.neighbors(cur) {
            if state.used & (1u128 << w) != 0 || self.internal_allowed & (1u128 << w) == 0 {
                continue;
            }
            if remaining == 1 && !self.g.has_edge(w, y) {
                continue;
            }
            if induced {
                let expected = if remaining == 1 {
                    (1u128 << cur) | (1u128 << y)
                } else {
                    1u128 << cur
                };
                if self.g.mask(w) & state.used != expected {
                    continue;
                }
            }
            prefix.push(w);
            state.used |= 1u128 << w;
            let ok = if remaining == 1 {
                let mut full = prefix.clone();
                full.push(y);
                state.routes.push(((x, y), full));
                let ok = self.pack(state, idx + 1, m + 1);
                state.routes.pop();
                ok
            } else {
                self.extend(state, idx, m, x, y, remaining - 1, prefix)
            };
            state.used &= !(1u128 << w);
            prefix.pop();
            if !ok {
                return false;
            }
        }
        true
    }
}

struct SubsetState {
    used: u128,
    routes: Vec<((usize, usize), Vec<usize>)>,
    best_m: u64,
    best_routes: Vec<((usize, usize), Vec<usize>)>,
    candidates: Vec<(usize, usize)>,
}

/// One row per depth 0..=k_max with all three measures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub k: u32,
    pub nabla: DensityReport,
    pub nabla_induced: DensityReport,
    pub nabla_exact: DensityReport,
}

pub fn density_profile(g: &Graph, k_max: u32, cfg: &Config) -> Result<Vec<ProfileRow>> {
    (0..=k_max)
        .map(|k| {
            Ok(ProfileRow {
                k,
                nabla: nabla_k(g, k, cfg)?,
                nabla_induced: nabla_induced_k(g, k, cfg)?,
                nabla_exact: nabla_exact_k(g, k, cfg)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrendHint {
    /// Slope near zero: consistent with nowhere-dense behavior at the
    /// sampled sizes. A finite-sample heuristic, not a proof.
    Flat,
    Growing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrendPoint {
    pub n: usize,
    #[serde(with = "crate::io::rational_string")]
    pub value: Rational,
}

/// Log-log growth estimate of a density measure across a graph family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendEstimate {
    pub k: u32,
    pub measure: Measure,
    pub points: Vec<TrendPoint>,
    pub slope: f64,
    pub hint: TrendHint,
}

/// Least-squares slope of log(value) against log(n) over members with
/// value >= 1 (zero by convention when fewer than two such points).
pub fn family_trend(
    family: &[Graph],
    k: u32,
    measure: Measure,
    cfg: &Config,
) -> Result<TrendEstimate> {
    let sizes: BTreeSet<usize> = family.iter().map(|g| g.n()).collect();
    if family.len() < 3 || sizes.len() < 3 {
        return Err(Error::invalid(
            "family trend needs at least 3 members of distinct sizes",
        ));
    }
    let mut points = Vec::new();
    for g in family {
        let report = nabla_measure(g, k, measure, cfg)?;
        points.push(TrendPoint { n: g.n(), value: report.value });
    }
    points.sort_by_key(|p| p.n);
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.value >= Rational::from(BigInt::from(1)))
        .map(|p| {
            let vf = rational_to_f64(&p.value);
            ((p.n as f64).ln(), vf.ln())
        })
        .collect();
    let slope = if logs.len() < 2 {
        0.0
    } else {
        let mx = logs.iter().map(|(x, _)| x).sum::<f64>() / logs.len() as f64;
        let my = logs.iter().map(|(_, y)| y).sum::<f64>() / logs.len() as f64;
        let cov: f64 = logs.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
        let var: f64 = logs.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
        if var == 0.0 {
            0.0
        } else {
            cov / var
        }
    };
    let hint = if slope.abs() <= 0.25 { TrendHint::Flat } else { TrendHint::Growing };
    Ok(TrendEstimate { k, measure, points, slope, hint })
}

pub fn rational_to_f64(v: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::NAN)
}
