//! Property tests for the interchange formats.

use proptest::prelude::*;

use topograd::generate::subdivision;
use topograd::graph::Graph;
use topograd::io::{
    parse_edge_list, rational_string, serialize_edge_list, witness_from_json, witness_to_json,
};
use topograd::witness::{verify_witness, Occurrence, SubdivisionSpec};

fn arb_graph() -> impl Strategy<Value = Graph> {
    (1usize..=10).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect();
        proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |picks| {
            let edges = pairs
                .iter()
                .zip(&picks)
                .filter(|(_, &keep)| keep)
                .map(|(&e, _)| e);
            Graph::new(n, edges).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn edge_list_round_trip(g in arb_graph()) {
        let text = serialize_edge_list(&g);
        let parsed = parse_edge_list(&text).unwrap();
        prop_assert_eq!(parsed, g);
    }

    #[test]
    fn serialization_is_canonical(g in arb_graph()) {
        let once = serialize_edge_list(&g);
        let twice = serialize_edge_list(&parse_edge_list(&once).unwrap());
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn witness_json_round_trip(
        n in 2usize..=5,
        lengths in proptest::collection::vec(0u32..=2, 10),
        seed in any::<u64>(),
    ) {
        let _ = seed;
        let pattern = topograd::generate::complete(n);
        let lens: Vec<u32> = lengths.into_iter().take(pattern.m()).collect();
        prop_assume!(lens.len() == pattern.m());
        let (g, w) = subdivision(&pattern, &lens).unwrap();
        let k = lens.iter().copied().max().unwrap_or(0);
        let spec = SubdivisionSpec::at_most(k, Occurrence::Induced);
        prop_assert!(verify_witness(&g, &pattern, spec, &w).is_empty());
        let json = witness_to_json(&pattern, spec, &w);
        let (spec2, w2) = witness_from_json(&json, &pattern).unwrap();
        prop_assert_eq!(spec, spec2);
        prop_assert_eq!(w, w2);
    }

    #[test]
    fn rational_string_round_trip(num in -1_000_000i64..1_000_000, den in 1i64..10_000) {
        let value = topograd::graph::ratio(num, den);
        let s = rational_string::to_string(&value);
        let back = rational_string::from_string(&s).unwrap();
        prop_assert_eq!(back, value);
    }
}
