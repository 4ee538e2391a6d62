//! Exact maximum average degree (the depth-0 density measure) by
//! density-threshold queries against a min-cut oracle.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::Dinic;
use crate::graph::{Graph, Rational};

/// Maximum average degree together with a maximizing vertex set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MadResult {
    #[serde(with = "crate::io::rational_string")]
    pub value: Rational,
    pub witness: BTreeSet<usize>,
}

/// True iff some nonempty `S` has `|E(S)|/|S| > p/q`; returns such an `S`.
///
/// Goldberg's network: source->v capacity mq, v->sink capacity
/// mq + 2p - deg(v) q, each edge q both ways. A cut at vertex side `S`
/// costs q(mn + 2|S|(g - density(S))), so the max flow drops below mnq
/// exactly when a denser-than-g set exists.
fn denser_than(g: &Graph, p: &BigInt, q: &BigInt) -> Option<BTreeSet<usize>> {
    let n = g.n();
    let m = g.m() as i64;
    let p = p.to_i64().expect("density numerator fits i64");
    let q = q.to_i64().expect("density denominator fits i64");
    let source = 0usize;
    let sink = n + 1;
    let mut net = Dinic::new(n + 2);
    for v in 0..n {
        net.add_edge(source, v + 1, m * q);
        net.add_edge(v + 1, sink, m * q + 2 * p - g.degree(v) as i64 * q);
    }
    for (u, v) in g.edges() {
        net.add_edge(u + 1, v + 1, q);
        net.add_edge(v + 1, u + 1, q);
    }
    let flow = net.max_flow(source, sink);
    if flow >= m * n as i64 * q {
        return None;
    }
    let side = net.min_cut_side(source);
    let set: BTreeSet<usize> = (0..n).filter(|&v| side[v + 1]).collect();
    debug_assert!(!set.is_empty());
    Some(set)
}

/// Exact `max_{∅≠S⊆V} 2|E(S)|/|S|` with a maximizing set.
///
/// Discrete Newton iteration: start from S = V and repeatedly ask the cut
/// oracle for a strictly denser set. Densities are ratios with denominator
/// at most n, so the iteration reaches the maximum after finitely many
/// strict improvements and certifies it with one final "no denser set"
/// query.
pub fn max_average_degree(g: &Graph) -> Result<MadResult> {
    if g.n() == 0 {
        return Err(Error::DegenerateInput("maximum average degree of the empty graph".into()));
    }
    let mut witness: BTreeSet<usize> = g.vertices().collect();
    let mut density = Rational::new(BigInt::from(g.m()), BigInt::from(g.n()));
    if g.m() > 0 {
        loop {
            let (p, q) = (density.numer().clone(), density.denom().clone());
            match denser_than(g, &p, &q) {
                None => break,
                Some(set) => {
                    let e = g.edges_within(&set);
                    density = Rational::new(BigInt::from(e), BigInt::from(set.len()));
                    witness = set;
                }
            }
        }
    } else {
        density = Rational::zero();
    }
    Ok(MadResult { value: density_to_ad(density), witness })
}

fn density_to_ad(d: Rational) -> Rational {
    d * Rational::from(BigInt::from(2))
}
