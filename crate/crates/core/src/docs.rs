//! On-disk document formats.
//!
//! Triangulations and flip sequences are exchanged as single-line JSON
//! documents with a fixed field order, so identical values serialize to
//! identical bytes. Parsing re-validates every structural invariant.

use serde::{Deserialize, Serialize};

use crate::canon::FlipSequence;
use crate::error::{Error, Result};
use crate::triangulation::{Diagonal, Flip, Triangulation};

#[derive(Serialize, Deserialize)]
struct TriangulationDoc {
    n: usize,
    diagonals: Vec<[usize; 2]>,
}

#[derive(Serialize, Deserialize)]
struct FlipDoc {
    remove: [usize; 2],
    insert: [usize; 2],
}

#[derive(Serialize, Deserialize)]
struct FlipSequenceDoc {
    n: usize,
    k: usize,
    initial: TriangulationDoc,
    flips: Vec<FlipDoc>,
    #[serde(rename = "final")]
    final_triangulation: TriangulationDoc,
    max_intermediate_degree: usize,
}

fn triangulation_doc(t: &Triangulation) -> TriangulationDoc {
    TriangulationDoc {
        n: t.n(),
        diagonals: t.diagonals().iter().map(|d| [d.a, d.b]).collect(),
    }
}

fn triangulation_from_doc(doc: TriangulationDoc) -> Result<Triangulation> {
    let diagonals = doc
        .diagonals
        .into_iter()
        .map(|[a, b]| {
            if a == b {
                Err(Error::InvalidDiagonal { a, b, n: doc.n })
            } else {
                Ok(Diagonal::new(a, b))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Triangulation::new(doc.n, diagonals)
}

/// Serializes a triangulation as a newline-terminated JSON document.
pub fn triangulation_to_string(t: &Triangulation) -> String {
    let mut s = serde_json::to_string(&triangulation_doc(t)).expect("serialize");
    s.push('\n');
    s
}

/// Parses and fully validates a triangulation document.
pub fn triangulation_from_str(s: &str) -> Result<Triangulation> {
    let doc: TriangulationDoc =
        serde_json::from_str(s).map_err(|e| Error::Document(format!("triangulation: {e}")))?;
    triangulation_from_doc(doc)
}

/// Serializes a flip sequence as a newline-terminated JSON document.
pub fn sequence_to_string(seq: &FlipSequence) -> String {
    let doc = FlipSequenceDoc {
        n: seq.n,
        k: seq.k,
        initial: triangulation_doc(&seq.initial),
        flips: seq
            .flips
            .iter()
            .map(|f| FlipDoc {
                remove: [f.removed.a, f.removed.b],
                insert: [f.inserted.a, f.inserted.b],
            })
            .collect(),
        final_triangulation: triangulation_doc(&seq.final_triangulation),
        max_intermediate_degree: seq.max_intermediate_degree,
    };
    let mut s = serde_json::to_string(&doc).expect("serialize");
    s.push('\n');
    s
}

/// Parses a flip-sequence document; the flips themselves are validated by
/// [`crate::canon::verify_sequence`], not here.
pub fn sequence_from_str(s: &str) -> Result<FlipSequence> {
    let doc: FlipSequenceDoc =
        serde_json::from_str(s).map_err(|e| Error::Document(format!("flip sequence: {e}")))?;
    let initial = triangulation_from_doc(doc.initial)?;
    let final_triangulation = triangulation_from_doc(doc.final_triangulation)?;
    if initial.n() != doc.n || final_triangulation.n() != doc.n {
        return Err(Error::SizeMismatch {
            left: initial.n(),
            right: doc.n,
        });
    }
    let flips = doc
        .flips
        .into_iter()
        .map(|f| Flip {
            removed: Diagonal::new(f.remove[0], f.remove[1]),
            inserted: Diagonal::new(f.insert[0], f.insert[1]),
        })
        .collect();
    Ok(FlipSequence {
        n: doc.n,
        k: doc.k,
        initial,
        flips,
        final_triangulation,
        max_intermediate_degree: doc.max_intermediate_degree,
    })
}

/// Graphviz "graph" document: nodes labeled by canonical code, one edge per
/// line, both sections sorted for byte-stable output.
pub fn flip_graph_to_dot(graph: &crate::explore::FlipGraph) -> String {
    let mut out = String::from("graph flips {\n");
    for code in graph.codes() {
        out.push_str(&format!("  \"{code}\";\n"));
    }
    for (a, b) in graph.edges() {
        out.push_str(&format!(
            "  \"{}\" -- \"{}\";\n",
            graph.codes()[a as usize],
            graph.codes()[b as usize]
        ));
    }
    out.push_str("}\n");
    out
}

/// Component report as a newline-terminated JSON document.
pub fn component_report_to_string(report: &crate::explore::ComponentReport) -> String {
    let mut s = serde_json::to_string(report).expect("serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangulation_round_trip_is_byte_identical() {
        let t = Triangulation::zigzag(6, 0, false);
        let s1 = triangulation_to_string(&t);
        let t2 = triangulation_from_str(&s1).unwrap();
        assert_eq!(t, t2);
        assert_eq!(s1, triangulation_to_string(&t2));
        assert_eq!(s1, "{\"n\":6,\"diagonals\":[[1,5],[2,4],[2,5]]}\n");
    }

    #[test]
    fn invalid_document_is_rejected() {
        assert!(triangulation_from_str("{\"n\":5,\"diagonals\":[[0,2],[1,3]]}").is_err());
        assert!(triangulation_from_str("not json").is_err());
    }
}
