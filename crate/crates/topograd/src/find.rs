//! Complete backtracking search for subdivision occurrences.
//!
//! Branch candidates are tried in degree order with distance pruning, and
//! each pattern edge is routed as soon as both endpoints are placed, by
//! deepening path length with bitmask disjointness checks. The search is
//! deterministic: candidates, internal vertices, and lengths are always
//! explored in canonical ascending order, so the first witness found is a
//! canonical function of the inputs.

use std::collections::BTreeMap;

use crate::config::{Budget, Config};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::witness::{DepthMode, Occurrence, SubdivisionSpec, SubdivisionWitness};

/// Finds one subdivision occurrence of `h` in `g` under `spec`, or proves
/// there is none. `Err(BudgetExceeded)` means the search was cut short and
/// is distinct from a definite `None`.
pub fn find_subdivision(
    g: &Graph,
    h: &Graph,
    spec: SubdivisionSpec,
    cfg: &Config,
) -> Result<Option<SubdivisionWitness>> {
    if h.n() == 0 {
        return Ok(Some(SubdivisionWitness { branch_map: Vec::new(), paths: BTreeMap::new() }));
    }
    if h.n() > g.n() {
        return Ok(None);
    }
    if !g.fits_mask_kernel() {
        return Err(Error::invalid("search kernel supports at most 128 host vertices"));
    }

    let mut finder = Finder::new(g, h, spec, cfg);
    let found = finder.place(0)?;
    Ok(if found {
        let mut paths = BTreeMap::new();
        for (idx, &(u, v)) in finder.h_edges.iter().enumerate() {
            paths.insert((u, v), finder.paths[idx].clone().expect("routed"));
        }
        Some(SubdivisionWitness {
            branch_map: finder.image.iter().map(|x| x.unwrap()).collect(),
            paths,
        })
    } else {
        None
    })
}

/// Subdivision of the complete graph `K_t` as a subgraph, any path lengths.
pub fn find_clique_subdivision(
    g: &Graph,
    t: usize,
    cfg: &Config,
) -> Result<Option<SubdivisionWitness>> {
    let h = crate::generate::complete(t);
    find_subdivision(g, &h, SubdivisionSpec::unbounded(Occurrence::Subgraph), cfg)
}

struct Finder<'a> {
    g: &'a Graph,
    h: &'a Graph,
    spec: SubdivisionSpec,
    budget: Budget,
    dist: Vec<Vec<usize>>,
    /// pattern vertices in placement order (degree desc, index asc)
    order: Vec<usize>,
    /// pattern edges sorted canonically; paths indexed in parallel
    h_edges: Vec<(usize, usize)>,
    /// edges to route right after placing order[step]
    pending: Vec<Vec<usize>>,
    image: Vec<Option<usize>>,
    used: u128,
    internal_mask: u128,
    paths: Vec<Option<Vec<usize>>>,
}

impl<'a> Finder<'a> {
    fn new(g: &'a Graph, h: &'a Graph, spec: SubdivisionSpec, cfg: &Config) -> Finder<'a> {
        let mut order: Vec<usize> = (0..h.n()).collect();
        order.sort_by_key(|&u| (std::cmp::Reverse(h.degree(u)), u));
        let h_edges: Vec<(usize, usize)> = h.edges().collect();
        let mut placed_at = vec![0usize; h.n()];
        for (step, &u) in order.iter().enumerate() {
            placed_at[u] = step;
        }
        let mut pending = vec![Vec::new(); h.n()];
        for (idx, &(u, v)) in h_edges.iter().enumerate() {
            pending[placed_at[u].max(placed_at[v])].push(idx);
        }
        let dist = (0..g.n()).map(|v| g.bfs_distances(v)).collect();
        let edge_count = h_edges.len();
        Finder {
            g,
            h,
            spec,
            budget: Budget::new(cfg.max_nodes),
            dist,
            order,
            h_edges,
            pending,
            image: vec![None; h.n()],
            used: 0,
            internal_mask: 0,
            paths: vec![None; edge_count],
        }
    }

    fn budget_tick(&mut self) -> Result<()> {
        if !self.budget.tick() {
            return Err(Error::BudgetExceeded {
                nodes: self.budget.used,
                context: "find_subdivision".into(),
            });
        }
        Ok(())
    }

    fn place(&mut self, step: usize) -> Result<bool> {
        if step == self.order.len() {
            return Ok(true);
        }
        let u = self.order[step];
        let need_deg = self.h.degree(u);
        for x in 0..self.g.n() {
            self.budget_tick()?;
            if self.used & (1u128 << x) != 0 || self.g.degree(x) < need_deg {
                continue;
            }
            if !self.branch_compatible(u, x) {
                continue;
            }
            self.image[u] = Some(x);
            self.used |= 1u128 << x;
            if self.route_pending(step, 0)? {
                return Ok(true);
            }
            self.used &= !(1u128 << x);
            self.image[u] = None;
        }
        Ok(false)
    }

    /// Pairwise checks of a candidate image `x` for pattern vertex `u`
    /// against every already-placed branch vertex.
    fn branch_compatible(&self, u: usize, x: usize) -> bool {
        let induced = self.spec.occurrence == Occurrence::Induced;
        if induced && self.g.mask(x) & self.internal_mask != 0 {
            return false;
        }
        for v in 0..self.h.n() {
            let y = match self.image[v] {
                Some(y) => y,
                None => continue,
            };
            let h_edge = self.h.has_edge(u, v);
            let g_adj = self.g.has_edge(x, y);
            if h_edge {
                let d = self.dist[x][y];
                let reachable = match self.spec.depth {
                    DepthMode::AtMost(k) | DepthMode::Exactly(k) => d <= k as usize + 1,
                    DepthMode::Unbounded => d != usize::MAX,
                };
                if !reachable {
                    return false;
                }
                match self.spec.depth {
                    DepthMode::Exactly(0) if !g_adj => return false,
                    DepthMode::Exactly(k) if k >= 1 && induced && g_adj => return false,
                    _ => {}
                }
            } else if induced && g_adj {
                // a host edge between branch images must realize a pattern edge
                return false;
            }
        }
        true
    }

    fn route_pending(&mut self, step: usize, idx: usize) -> Result<bool> {
        if idx == self.pending[step].len() {
            return self.place(step + 1);
        }
        let e = self.pending[step][idx];
        let (pu, pv) = self.h_edges[e];
        let x = self.image[pu].unwrap();
        let y = self.image[pv].unwrap();
        let adj = self.g.has_edge(x, y);
        let induced = self.spec.occurrence == Occurrence::Induced;

        let lens: Vec<u32> = match self.spec.depth {
            // A direct host edge dominates every longer route for this pair
            // (it consumes no internal vertices), and in induced mode it is
            // forced, so adjacency pins the length to 0.
            DepthMode::AtMost(k) => {
                if adj {
                    vec![0]
                } else {
                    (1..=k).collect()
                }
            }
            DepthMode::Exactly(k) => {
                if k == 0 {
                    if adj { vec![0] } else { vec![] }
                } else if induced && adj {
                    vec![]
                } else {
                    vec![k]
                }
            }
            DepthMode::Unbounded => {
                if adj {
                    vec![0]
                } else {
                    let free = self.g.n() as u32 - self.used.count_ones();
                    (1..=free).collect()
                }
            }
        };

        for len in lens {
            if len == 0 {
                self.paths[e] = Some(vec![x, y]);
                if self.route_pending(step, idx + 1)? {
                    return Ok(true);
                }
                self.paths[e] = None;
            } else {
                let mut prefix = vec![x];
                if self.extend(step, idx, e, y, len, &mut prefix)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Grows the path for edge `e` by one internal vertex; `remaining`
    /// counts internal vertices still to place, `prefix` starts at the
    /// source branch image.
    fn extend(
        &mut self,
        step: usize,
        idx: usize,
        e: usize,
        target: usize,
        remaining: u32,
        prefix: &mut Vec<usize>,
    ) -> Result<bool> {
        let cur = *prefix.last().unwrap();
        let induced = self.spec.occurrence == Occurrence::Induced;
        let neighbors: Vec<usize> = self.g.neighbors(cur).to_vec();
        for w in neighbors {
            self.budget_tick()?;
            if self.used & (1u128 << w) != 0 {
                continue;
            }
            if remaining == 1 && !self.g.has_edge(w, target) {
                continue;
            }
            if induced {
                let expected = if remaining == 1 {
                    (1u128 << cur) | (1u128 << target)
                } else {
                    1u128 << cur
                };
                if self.g.mask(w) & self.used != expected {
                    continue;
                }
            }
            prefix.push(w);
            self.used |= 1u128 << w;
            self.internal_mask |= 1u128 << w;
            let done = if remaining == 1 {
                let mut full = prefix.clone();
                full.push(target);
                self.paths[e] = Some(full);
                let r = self.route_pending(step, idx + 1)?;
                if !r {
                    self.paths[e] = None;
                }
                r
            } else {
                self.extend(step, idx, e, target, remaining - 1, prefix)?
            };
            if done {
                return Ok(true);
            }
            self.used &= !(1u128 << w);
            self.internal_mask &= !(1u128 << w);
            prefix.pop();
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{complete, cycle, petersen};
    use crate::witness::verify_witness;

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn c6_contains_depth1_k3() {
        let g = cycle(6);
        let h = complete(3);
        let spec = SubdivisionSpec::at_most(1, Occurrence::Subgraph);
        let w = find_subdivision(&g, &h, spec, &cfg()).unwrap().unwrap();
        assert!(verify_witness(&g, &h, spec, &w).is_empty());
    }

    #[test]
    fn c6_has_no_depth0_k3() {
        let g = cycle(6);
        let h = complete(3);
        let spec = SubdivisionSpec::at_most(0, Occurrence::Subgraph);
        assert!(find_subdivision(&g, &h, spec, &cfg()).unwrap().is_none());
    }

    #[test]
    fn k4_identity_induced() {
        let g = complete(4);
        let h = complete(4);
        let spec = SubdivisionSpec::at_most(0, Occurrence::Induced);
        let w = find_subdivision(&g, &h, spec, &cfg()).unwrap().unwrap();
        assert_eq!(w.branch_map, vec![0, 1, 2, 3]);
    }

    #[test]
    fn k3_has_no_induced_exact1_k2() {
        // an induced 3-vertex path does not exist in a triangle
        let g = complete(3);
        let h = complete(2);
        let spec = SubdivisionSpec::exactly(1, Occurrence::Induced);
        assert!(find_subdivision(&g, &h, spec, &cfg()).unwrap().is_none());
    }

    #[test]
    fn petersen_clique_subdivisions() {
        let g = petersen();
        let w = find_clique_subdivision(&g, 4, &cfg()).unwrap().unwrap();
        let h = complete(4);
        let spec = SubdivisionSpec::unbounded(Occurrence::Subgraph);
        assert!(verify_witness(&g, &h, spec, &w).is_empty());
        // branch vertices of K5 would need degree >= 4; Petersen is cubic
        assert!(find_clique_subdivision(&g, 5, &cfg()).unwrap().is_none());
    }

    #[test]
    fn tree_has_no_tk3() {
        let g = crate::generate::path(7);
        assert!(find_clique_subdivision(&g, 3, &cfg()).unwrap().is_none());
    }

    #[test]
    fn empty_pattern_is_trivially_present() {
        let g = cycle(4);
        let h = Graph::empty(0);
        let spec = SubdivisionSpec::unbounded(Occurrence::Induced);
        let w = find_subdivision(&g, &h, spec, &cfg()).unwrap().unwrap();
        assert!(w.branch_map.is_empty());
    }

    #[test]
    fn isolated_pattern_vertices_map_outside_paths() {
        // pattern: K2 plus an isolated vertex; host: path on 4 vertices
        let g = crate::generate::path(4);
        let h = Graph::new(3, [(0, 1)]).unwrap();
        let spec = SubdivisionSpec::at_most(1, Occurrence::Subgraph);
        let w = find_subdivision(&g, &h, spec, &cfg()).unwrap().unwrap();
        assert!(verify_witness(&g, &h, spec, &w).is_empty());
        let path = &w.paths[&(0, 1)];
        assert!(!path.contains(&w.branch_map[2]));
    }
}
