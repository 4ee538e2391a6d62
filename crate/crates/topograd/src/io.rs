//! File formats: the edge-list graph format, witness JSON, and CSV
//! emission for density profiles. All JSON artifacts carry a schema
//! version and serialize big numbers as decimal strings.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::density::ProfileRow;
use crate::error::{Error, Result};
use crate::graph::{Graph, Rational};
use crate::witness::{SubdivisionSpec, SubdivisionWitness};

pub const SCHEMA_VERSION: &str = "1";

/// serde adapter: rationals as `"123"` or `"-5/64"` strings.
pub mod rational_string {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&to_string(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<Rational, D::Error> {
        let raw = String::deserialize(de)?;
        from_string(&raw).map_err(serde::de::Error::custom)
    }

    pub fn to_string(value: &Rational) -> String {
        if value.denom() == &BigInt::one() {
            value.numer().to_string()
        } else {
            format!("{}/{}", value.numer(), value.denom())
        }
    }

    pub fn from_string(raw: &str) -> std::result::Result<Rational, String> {
        let (num, den) = match raw.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (raw.trim(), "1"),
        };
        let numer = BigInt::from_str(num).map_err(|e| format!("bad numerator {num:?}: {e}"))?;
        let denom = BigInt::from_str(den).map_err(|e| format!("bad denominator {den:?}: {e}"))?;
        if denom == BigInt::from(0) {
            return Err("zero denominator".into());
        }
        Ok(Rational::new(numer, denom))
    }
}

/// Parses the edge-list format: first meaningful line is the vertex
/// count, each following line one `u v` edge. `#` starts a comment,
/// blank lines are ignored, loops and repeated edges are rejected with
/// their line number.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match n {
            None => {
                n = Some(line.parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no,
                    reason: format!("expected vertex count, got {line:?}"),
                })?);
            }
            Some(count) => {
                let mut parts = line.split_whitespace();
                let (u, v) = match (parts.next(), parts.next(), parts.next()) {
                    (Some(u), Some(v), None) => (u, v),
                    _ => {
                        return Err(Error::Parse {
                            line: line_no,
                            reason: format!("expected 'u v', got {line:?}"),
                        })
                    }
                };
                let u: usize = u.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    reason: format!("bad vertex {u:?}"),
                })?;
                let v: usize = v.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    reason: format!("bad vertex {v:?}"),
                })?;
                if u == v {
                    return Err(Error::Parse { line: line_no, reason: format!("loop at {u}") });
                }
                if u >= count || v >= count {
                    return Err(Error::Parse {
                        line: line_no,
                        reason: format!("edge ({u},{v}) out of range for {count} vertices"),
                    });
                }
                let key = (u.min(v), u.max(v));
                if let Some(first) = seen.get(&key) {
                    return Err(Error::Parse {
                        line: line_no,
                        reason: format!("duplicate edge ({u},{v}), first seen on line {first}"),
                    });
                }
                seen.insert(key, line_no);
                edges.push(key);
            }
        }
    }
    match n {
        Some(count) => Graph::new(count, edges),
        None => Err(Error::Parse { line: 1, reason: "empty input".into() }),
    }
}

/// Canonical form: vertex count line, then edges sorted ascending.
pub fn serialize_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    out.push_str(&g.n().to_string());
    out.push('\n');
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Witness interchange document: branch map and paths in the canonical
/// edge order of the pattern. The pattern itself travels separately (its
/// vertex count is repeated here as a consistency check).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDocument {
    pub schema_version: String,
    pub pattern_vertices: usize,
    pub branch_map: Vec<usize>,
    pub paths: Vec<Vec<usize>>,
    pub spec: SubdivisionSpec,
}

impl WitnessDocument {
    pub fn new(pattern: &Graph, spec: SubdivisionSpec, witness: &SubdivisionWitness) -> Self {
        let paths = pattern
            .edges()
            .map(|e| witness.paths.get(&e).cloned().unwrap_or_default())
            .collect();
        WitnessDocument {
            schema_version: SCHEMA_VERSION.into(),
            pattern_vertices: pattern.n(),
            branch_map: witness.branch_map.clone(),
            paths,
            spec,
        }
    }

    /// Reassembles the witness against a pattern file.
    pub fn into_witness(self, pattern: &Graph) -> Result<(SubdivisionSpec, SubdivisionWitness)> {
        if self.pattern_vertices != pattern.n() {
            return Err(Error::invalid(format!(
                "witness was recorded for a {}-vertex pattern, file has {}",
                self.pattern_vertices,
                pattern.n()
            )));
        }
        let edges: Vec<(usize, usize)> = pattern.edges().collect();
        if edges.len() != self.paths.len() {
            return Err(Error::invalid(format!(
                "witness has {} paths for {} pattern edges",
                self.paths.len(),
                edges.len()
            )));
        }
        let paths: BTreeMap<(usize, usize), Vec<usize>> =
            edges.into_iter().zip(self.paths).collect();
        Ok((self.spec, SubdivisionWitness { branch_map: self.branch_map, paths }))
    }
}

pub fn witness_to_json(
    pattern: &Graph,
    spec: SubdivisionSpec,
    witness: &SubdivisionWitness,
) -> String {
    serde_json::to_string_pretty(&WitnessDocument::new(pattern, spec, witness))
        .expect("witness serializes")
}

pub fn witness_from_json(text: &str, pattern: &Graph) -> Result<(SubdivisionSpec, SubdivisionWitness)> {
    let doc: WitnessDocument = serde_json::from_str(text)
        .map_err(|e| Error::invalid(format!("witness JSON: {e}")))?;
    doc.into_witness(pattern)
}

/// CSV emission of a density profile: one row per depth, exact values.
pub fn profile_to_csv(rows: &[ProfileRow]) -> String {
    let mut out = String::from(
        "k,nabla,nabla_complete,nabla_induced,nabla_induced_complete,nabla_exact,nabla_exact_complete\n",
    );
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.k,
            rational_string::to_string(&row.nabla.value),
            row.nabla.complete,
            rational_string::to_string(&row.nabla_induced.value),
            row.nabla_induced.complete,
            rational_string::to_string(&row.nabla_exact.value),
            row.nabla_exact.complete,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{complete, cycle, subdivision};
    use crate::graph::ratio;
    use crate::witness::{Occurrence, SubdivisionSpec};

    #[test]
    fn parse_examples() {
        let g = parse_edge_list("3\n0 1\n1 2").unwrap();
        assert_eq!(g, crate::generate::path(3));

        match parse_edge_list("2\n0 0") {
            Err(Error::Parse { line: 2, reason }) => assert!(reason.contains("loop")),
            other => panic!("expected loop error, got {other:?}"),
        }
        match parse_edge_list("3\n0 1\n1 0") {
            Err(Error::Parse { line: 3, reason }) => assert!(reason.contains("duplicate")),
            other => panic!("expected duplicate error, got {other:?}"),
        }
        assert!(parse_edge_list("").is_err());
        assert!(parse_edge_list("2\n0 3").is_err());
    }

    #[test]
    fn round_trip_with_comments() {
        let text = "# a path\n3\n\n0 1  # first\n1 2\n";
        let g = parse_edge_list(text).unwrap();
        let canon = serialize_edge_list(&g);
        assert_eq!(canon, "3\n0 1\n1 2\n");
        assert_eq!(parse_edge_list(&canon).unwrap(), g);
    }

    #[test]
    fn rational_strings() {
        assert_eq!(rational_string::to_string(&ratio(5, 64)), "5/64");
        assert_eq!(rational_string::to_string(&ratio(6, 2)), "3");
        assert_eq!(rational_string::from_string("5/64").unwrap(), ratio(5, 64));
        assert_eq!(rational_string::from_string("-7").unwrap(), ratio(-7, 1));
        assert!(rational_string::from_string("1/0").is_err());
        // 2^270 survives the string round trip
        let big = Rational::from(BigInt::from(1u8) << 270);
        let s = rational_string::to_string(&big);
        assert_eq!(rational_string::from_string(&s).unwrap(), big);
    }

    #[test]
    fn witness_document_round_trip() {
        let h = complete(3);
        let (g, w) = subdivision(&h, &[1, 0, 2]).unwrap();
        let spec = SubdivisionSpec::at_most(2, Occurrence::Induced);
        let json = witness_to_json(&h, spec, &w);
        let (spec2, w2) = witness_from_json(&json, &h).unwrap();
        assert_eq!(spec, spec2);
        assert_eq!(w, w2);
        assert!(crate::witness::verify_witness(&g, &h, spec2, &w2).is_empty());
    }

    #[test]
    fn witness_document_rejects_wrong_pattern() {
        let h = complete(3);
        let (_, w) = subdivision(&h, &[1, 1, 1]).unwrap();
        let spec = SubdivisionSpec::at_most(1, Occurrence::Subgraph);
        let json = witness_to_json(&h, spec, &w);
        assert!(witness_from_json(&json, &cycle(4)).is_err());
    }
}
