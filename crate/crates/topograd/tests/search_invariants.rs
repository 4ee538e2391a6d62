//! Cross-module invariants: planted recovery, spec monotonicity, density
//! witness round trips, coloring bounds, hat-family contracts, and the
//! brute-force Ramsey verification backing the refinement thresholds.

use std::collections::BTreeSet;

use topograd::coloring::{color_count, greedy_coloring, independent_set_from_coloring, is_independent};
use topograd::config::Config;
use topograd::density::{nabla_measure, Measure};
use topograd::error::Error;
use topograd::find::find_subdivision;
use topograd::generate::{biclique, complete, cycle, planted, random_bipartite, random_gnp, HostNoise};
use topograd::graph::{ratio, ratio_int, Graph};
use topograd::hats::{induce_hats_search, recompute_flags, HatSearchMode};
use topograd::mad::max_average_degree;
use topograd::oracle::{embeds_naive, enumerate_graphs, mad_by_enumeration};
use topograd::patterns::{diagonal_ramsey, find_biclique_induced, find_biclique_subgraph, find_clique_induced};
use topograd::witness::{verify_witness, Occurrence, SubdivisionSpec};
use topograd::BipartiteLayout;

fn cfg() -> Config {
    Config::default()
}

/// Planted subdivisions are recovered in every spec mode the plant is
/// guaranteed to satisfy, and every returned witness re-verifies.
#[test]
fn planted_recovery() {
    let cfg = cfg();
    let patterns: Vec<Graph> = (2..=5)
        .flat_map(|n| enumerate_graphs(n, true))
        .filter(|g| g.m() >= 1)
        .collect();
    for seed in 0..40u64 {
        let pattern = &patterns[(seed as usize * 13) % patterns.len()];
        let k = 1 + (seed % 2) as u32;
        let exact_depth = seed % 3 == 0;
        let inst = planted(pattern, k, exact_depth, HostNoise::none(), 500 + seed).unwrap();
        let mut specs = vec![
            SubdivisionSpec::at_most(k, Occurrence::Subgraph),
            SubdivisionSpec::at_most(k, Occurrence::Induced),
            SubdivisionSpec::unbounded(Occurrence::Subgraph),
            SubdivisionSpec::unbounded(Occurrence::Induced),
        ];
        if exact_depth {
            specs.push(SubdivisionSpec::exactly(k, Occurrence::Subgraph));
            specs.push(SubdivisionSpec::exactly(k, Occurrence::Induced));
        }
        for spec in specs {
            let found = find_subdivision(&inst.graph, pattern, spec, &cfg)
                .unwrap()
                .unwrap_or_else(|| panic!("planted {pattern:?} not found under {spec:?}"));
            assert!(verify_witness(&inst.graph, pattern, spec, &found).is_empty());
        }
    }
}

/// Found under exactly(k) implies found under at_most(k) implies found
/// under unbounded; induced implies subgraph.
#[test]
fn spec_monotonicity() {
    let cfg = cfg();
    let patterns: Vec<Graph> = (1..=4).flat_map(|n| enumerate_graphs(n, false)).collect();
    for seed in 0..25u64 {
        let g = random_gnp(7, 0.4, 900 + seed).unwrap();
        for h in patterns.iter().step_by(3) {
            for k in 0..=2u32 {
                for occ in [Occurrence::Subgraph, Occurrence::Induced] {
                    let exact = find_subdivision(&g, h, SubdivisionSpec::exactly(k, occ), &cfg)
                        .unwrap()
                        .is_some();
                    let atmost = find_subdivision(&g, h, SubdivisionSpec::at_most(k, occ), &cfg)
                        .unwrap()
                        .is_some();
                    let unbounded =
                        find_subdivision(&g, h, SubdivisionSpec::unbounded(occ), &cfg)
                            .unwrap()
                            .is_some();
                    assert!(!exact || atmost, "exactly({k}) without at_most({k})");
                    assert!(!atmost || unbounded, "at_most({k}) without unbounded");
                }
                let induced = find_subdivision(
                    &g,
                    h,
                    SubdivisionSpec::at_most(k, Occurrence::Induced),
                    &cfg,
                )
                .unwrap()
                .is_some();
                let subgraph = find_subdivision(
                    &g,
                    h,
                    SubdivisionSpec::at_most(k, Occurrence::Subgraph),
                    &cfg,
                )
                .unwrap()
                .is_some();
                assert!(!induced || subgraph, "induced occurrence without subgraph occurrence");
            }
        }
    }
}

/// The subgraph and induced measures are monotone in depth, and every
/// density report round-trips: value = pattern average degree and the
/// witness verifies under the measure's spec.
#[test]
fn density_monotonicity_and_roundtrip() {
    let cfg = cfg();
    for seed in 0..30u64 {
        let g = random_gnp(7, 0.35, 1300 + seed).unwrap();
        let mut prev_nabla = None;
        let mut prev_induced = None;
        for k in 0..=2u32 {
            for measure in Measure::all() {
                let report = nabla_measure(&g, k, measure, &cfg).unwrap();
                assert!(report.complete);
                assert_eq!(report.pattern.average_degree().unwrap(), report.value);
                assert!(
                    verify_witness(&g, &report.pattern, measure.spec(k), &report.witness)
                        .is_empty(),
                    "witness fails for {measure:?} at k={k}"
                );
                match measure {
                    Measure::Nabla => {
                        if let Some(prev) = prev_nabla.replace(report.value.clone()) {
                            assert!(report.value >= prev, "nabla not monotone in k");
                        }
                    }
                    Measure::NablaInduced => {
                        if let Some(prev) = prev_induced.replace(report.value.clone()) {
                            assert!(report.value >= prev, "nabla_induced not monotone in k");
                        }
                    }
                    Measure::NablaExact => {}
                }
            }
        }
    }
}

/// Average degree never exceeds the maximum average degree, with equality
/// exactly when the whole vertex set attains the maximum.
#[test]
fn mad_dominates_average_degree() {
    for g in (2..=6).flat_map(|n| enumerate_graphs(n, false)) {
        let ad = g.average_degree().unwrap();
        let mad = max_average_degree(&g).unwrap();
        assert!(ad <= mad.value);
        let full: BTreeSet<usize> = g.vertices().collect();
        if ad == mad.value {
            // the full set is then itself a maximizer
            assert_eq!(topograd::graph::set_average_degree(&g, &full).unwrap(), mad.value);
        }
    }
}

/// Greedy coloring stays within floor(mad) + 1 colors on the corpus, and
/// the extracted class is independent and large enough.
#[test]
fn coloring_bounds_on_corpus() {
    for g in (1..=6).flat_map(|n| enumerate_graphs(n, true)) {
        let mad = max_average_degree(&g).unwrap().value;
        let colors = color_count(&greedy_coloring(&g));
        let bound = mad.floor().to_integer();
        assert!(
            ratio_int(colors as i64) <= ratio_int(1) + topograd::Rational::from(bound),
            "greedy used {colors} colors on {g:?}"
        );
        let class = independent_set_from_coloring(&g);
        assert!(is_independent(&g, &class));
        assert!(class.len() * colors >= g.n());
    }
}

/// Clique and biclique detection agree with the naive embedding oracle on
/// every host up to 6 vertices.
#[test]
fn clique_biclique_against_oracle() {
    let cfg = cfg();
    for g in (1..=6).flat_map(|n| enumerate_graphs(n, false)) {
        for s in 2..=3usize {
            let clique = find_clique_induced(&g, s, &cfg).unwrap();
            let expect = embeds_naive(&g, &complete(s), SubdivisionSpec::at_most(0, Occurrence::Subgraph));
            assert_eq!(clique.is_some(), expect, "K_{s} detection on {g:?}");

            let sub = find_biclique_subgraph(&g, s, &cfg).unwrap();
            let expect =
                embeds_naive(&g, &biclique(s, s), SubdivisionSpec::at_most(0, Occurrence::Subgraph));
            assert_eq!(sub.is_some(), expect, "K_{{{s},{s}}} subgraph detection on {g:?}");
            if let Some((a, b)) = sub {
                assert!(a.is_disjoint(&b));
                for &u in &a {
                    for &v in &b {
                        assert!(g.has_edge(u, v));
                    }
                }
            }

            let ind = find_biclique_induced(&g, s, &cfg).unwrap();
            let expect =
                embeds_naive(&g, &biclique(s, s), SubdivisionSpec::at_most(0, Occurrence::Induced));
            assert_eq!(ind.is_some(), expect, "induced K_{{{s},{s}}} detection on {g:?}");
        }
    }
}

/// R(3,3) = 6 verified by brute force over the 6-vertex corpus (every
/// graph has a triangle or an independent triple) and separated below by
/// the 5-cycle, which has neither.
#[test]
fn ramsey_three_brute_force() {
    assert_eq!(diagonal_ramsey(1), Some(1));
    assert_eq!(diagonal_ramsey(2), Some(2));
    assert_eq!(diagonal_ramsey(3), Some(6));
    let cfg = cfg();
    for g in enumerate_graphs(6, false) {
        let has_triangle = find_clique_induced(&g, 3, &cfg).unwrap().is_some();
        let has_independent_triple = {
            let complement_edges: Vec<(usize, usize)> = (0..6)
                .flat_map(|u| ((u + 1)..6).map(move |v| (u, v)))
                .filter(|&(u, v)| !g.has_edge(u, v))
                .collect();
            let complement = Graph::new(6, complement_edges).unwrap();
            find_clique_induced(&complement, 3, &cfg).unwrap().is_some()
        };
        assert!(has_triangle || has_independent_triple, "R(3,3) witness fails on {g:?}");
    }
    let c5 = cycle(5);
    assert!(find_clique_induced(&c5, 3, &cfg).unwrap().is_none());
    let complement_edges: Vec<(usize, usize)> = (0..5)
        .flat_map(|u| ((u + 1)..5).map(move |v| (u, v)))
        .filter(|&(u, v)| !c5.has_edge(u, v))
        .collect();
    let complement = Graph::new(5, complement_edges).unwrap();
    assert!(find_clique_induced(&complement, 3, &cfg).unwrap().is_none());
}

/// The hat-family search output always satisfies its contract, and on
/// instances where it reports exhaustion no induced subgraph satisfies
/// the contract either (verified by an independent scan).
#[test]
fn hat_search_contract_randomized() {
    let cfg = cfg();
    let threshold = ratio(1, 2);
    for seed in 0..60u64 {
        let a_n = 2 + (seed as usize % 4);
        let b_n = 2 + ((seed as usize / 4) % 3);
        let (g, layout) = random_bipartite(a_n, b_n, 0.5, 2200 + seed).unwrap();
        let mode = HatSearchMode::Relaxed { min_hat_ratio: threshold.clone() };
        match induce_hats_search(&g, &layout, &mode, &cfg) {
            Ok(family) => {
                assert!(!family.b_side.is_empty());
                let out_layout = BipartiteLayout::new(
                    family.a_side.iter().copied(),
                    family.b_side.iter().copied(),
                );
                let (uncrowded, induced) = recompute_flags(&g, &out_layout, &family.hats);
                assert!(uncrowded && induced, "flags fail on seed {seed}");
                for &a in &family.a_side {
                    let deg = g
                        .neighbors(a)
                        .iter()
                        .filter(|v| family.b_side.contains(v))
                        .count();
                    assert_eq!(deg, 2, "midpoint {a} has {deg} B-neighbors");
                }
                assert!(
                    ratio_int(family.hats.len() as i64)
                        >= threshold.clone() * ratio_int(family.b_side.len() as i64)
                );
            }
            Err(Error::SearchExhausted { complete: true, .. }) => {
                // independent exhaustive recheck
                let a_all: Vec<usize> = layout.left.iter().copied().collect();
                let b_all: Vec<usize> = layout.right.iter().copied().collect();
                for bm in 1u64..(1 << b_all.len()) {
                    for am in 0u64..(1 << a_all.len()) {
                        let a_sub: BTreeSet<usize> = a_all
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| am & (1 << i) != 0)
                            .map(|(_, &v)| v)
                            .collect();
                        let b_sub: BTreeSet<usize> = b_all
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| bm & (1 << i) != 0)
                            .map(|(_, &v)| v)
                            .collect();
                        assert!(
                            !satisfies_contract(&g, &a_sub, &b_sub, &threshold),
                            "seed {seed}: exhaustion reported but ({a_sub:?},{b_sub:?}) works"
                        );
                    }
                }
            }
            Err(Error::PreconditionFailed(_)) => {}
            Err(other) => panic!("unexpected error: {other}"),
        }
    }
}

fn satisfies_contract(
    g: &Graph,
    a_sub: &BTreeSet<usize>,
    b_sub: &BTreeSet<usize>,
    threshold: &topograd::Rational,
) -> bool {
    if b_sub.is_empty() {
        return false;
    }
    let mut pairs = BTreeSet::new();
    let mut hats = 0usize;
    for &a in a_sub {
        let nbrs: Vec<usize> = g
            .neighbors(a)
            .iter()
            .copied()
            .filter(|v| b_sub.contains(v))
            .collect();
        if nbrs.len() >= 3 {
            return false;
        }
        if nbrs.len() == 2 {
            if !pairs.insert((nbrs[0], nbrs[1])) {
                return false;
            }
            hats += 1;
        }
    }
    ratio_int(hats as i64) >= threshold.clone() * ratio_int(b_sub.len() as i64)
}

/// The flow-based maximum average degree equals subset enumeration up to
/// the 16-vertex scale the contract names.
#[test]
fn mad_flow_vs_enumeration_to_16() {
    for (n, p, seeds) in [(12usize, 0.3, 6u64), (14, 0.25, 4), (16, 0.2, 3)] {
        for seed in 0..seeds {
            let g = random_gnp(n, p, 5000 + seed).unwrap();
            let flow = max_average_degree(&g).unwrap();
            let brute = mad_by_enumeration(&g).unwrap();
            assert_eq!(flow.value, brute.value, "n={n} seed={seed}");
            // the returned set really attains the value
            assert_eq!(
                topograd::graph::set_average_degree(&g, &flow.witness).unwrap(),
                flow.value
            );
        }
    }
}

/// Exhausting the node budget is reported, never silently truncated: the
/// finder errs distinctly from "none", and the density search flags its
/// result incomplete while still returning a verifying lower bound.
#[test]
fn budget_exhaustion_is_explicit() {
    let starved = Config::default().with_budget(3);
    // no witness exists (cubic branch vertices are missing), so the search
    // must either run to completion or admit the truncation
    match find_subdivision(
        &cycle(9),
        &complete(4),
        SubdivisionSpec::at_most(2, Occurrence::Subgraph),
        &starved,
    ) {
        Err(Error::BudgetExceeded { .. }) => {}
        other => panic!("expected budget error, got {other:?}"),
    }
    let starved = Config::default().with_budget(50);
    let g = random_gnp(9, 0.5, 42).unwrap();
    let report = nabla_measure(&g, 1, Measure::Nabla, &starved).unwrap();
    assert!(!report.complete);
    assert!(verify_witness(&g, &report.pattern, Measure::Nabla.spec(1), &report.witness).is_empty());
    assert_eq!(report.pattern.average_degree().unwrap(), report.value);
}

/// Identical inputs produce identical witnesses, independent of repetition.
#[test]
fn find_is_deterministic() {
    let cfg = cfg();
    for seed in 0..10u64 {
        let g = random_gnp(8, 0.4, 3100 + seed).unwrap();
        let h = complete(3);
        let spec = SubdivisionSpec::at_most(2, Occurrence::Induced);
        let a = find_subdivision(&g, &h, spec, &cfg).unwrap();
        let b = find_subdivision(&g, &h, spec, &cfg).unwrap();
        assert_eq!(a, b);
    }
}
