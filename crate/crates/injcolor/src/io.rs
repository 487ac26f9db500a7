//! File formats: graphs on disk, coloring documents, discharge audits.
//!
//! Graphs travel either as DIMACS coloring files (`p edge <n> <m>` header,
//! `e <u> <v>` records, 1-based) or as plain edge lists (one `u v` pair per
//! line, 0-based, with an optional `# n = <k>` header that preserves
//! isolated vertices). Colorings are JSON documents with a fixed schema,
//! and charge ledgers serialize to JSON with a stable key order so audits
//! can be diffed textually.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::discharge::{ChargeLedger, Party};
use crate::graph::{Coloring, Graph, GraphError};
use crate::rational::format_ratio;

/// Supported graph encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// DIMACS coloring format, 1-based vertices, strict edge count.
    Dimacs,
    /// Whitespace-separated 0-based pairs, one edge per line.
    Edgelist,
}

/// Errors raised while reading or writing documents.
#[derive(Debug, Error)]
pub enum IoError {
    /// Malformed text at a specific line.
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    /// Structurally invalid graph data (self-loop, duplicate edge) at a
    /// specific line.
    #[error("line {line}: {source}")]
    Structure {
        line: usize,
        #[source]
        source: GraphError,
    },
    /// An invalid coloring document.
    #[error("coloring document: {0}")]
    Document(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn bad(line: usize, reason: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        reason: reason.into(),
    }
}

/// Decodes a graph from `text`.
pub fn parse_graph(text: &str, format: Format) -> Result<Graph, IoError> {
    match format {
        Format::Dimacs => parse_dimacs(text),
        Format::Edgelist => parse_edgelist(text),
    }
}

/// Encodes `g` so that [`parse_graph`] reproduces it exactly.
pub fn emit_graph(g: &Graph, format: Format) -> String {
    match format {
        Format::Dimacs => {
            let mut out = format!("p edge {} {}\n", g.n(), g.m());
            for (u, v) in g.edges() {
                out.push_str(&format!("e {} {}\n", u + 1, v + 1));
            }
            out
        }
        Format::Edgelist => {
            let mut out = format!("# n = {}\n", g.n());
            for (u, v) in g.edges() {
                out.push_str(&format!("{u} {v}\n"));
            }
            out
        }
    }
}

fn parse_dimacs(text: &str) -> Result<Graph, IoError> {
    let mut graph: Option<Graph> = None;
    let mut declared = 0usize;
    let mut seen = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') {
            continue;
        }
        let mut parts = t.split_whitespace();
        match parts.next() {
            Some("p") => {
                if graph.is_some() {
                    return Err(bad(line, "second problem line"));
                }
                let kind = parts.next().ok_or_else(|| bad(line, "missing problem type"))?;
                if kind != "edge" {
                    return Err(bad(
                        line,
                        format!("unsupported problem type {kind:?}, expected \"edge\""),
                    ));
                }
                let n = parse_count(parts.next(), line, "vertex count")?;
                declared = parse_count(parts.next(), line, "edge count")?;
                if parts.next().is_some() {
                    return Err(bad(line, "trailing tokens after problem line"));
                }
                graph = Some(Graph::new(n));
            }
            Some("e") => {
                let g = graph
                    .as_mut()
                    .ok_or_else(|| bad(line, "edge record before the problem line"))?;
                let u = parse_count(parts.next(), line, "endpoint")?;
                let v = parse_count(parts.next(), line, "endpoint")?;
                if parts.next().is_some() {
                    return Err(bad(line, "trailing tokens after edge record"));
                }
                for w in [u, v] {
                    if w < 1 || w > g.n() {
                        return Err(bad(
                            line,
                            format!("vertex {w} outside 1..={}", g.n()),
                        ));
                    }
                }
                seen += 1;
                if seen > declared {
                    return Err(bad(
                        line,
                        format!("more edges than the declared count {declared}"),
                    ));
                }
                g.add_edge(u - 1, v - 1)
                    .map_err(|source| IoError::Structure { line, source })?;
            }
            Some(other) => {
                return Err(bad(line, format!("unknown record type {other:?}")));
            }
            None => unreachable!("trimmed line is nonempty"),
        }
    }
    let g = graph.ok_or_else(|| bad(0, "missing problem line \"p edge <n> <m>\""))?;
    if seen != declared {
        return Err(bad(
            0,
            format!("problem line declared {declared} edges, found {seen}"),
        ));
    }
    Ok(g)
}

fn parse_edgelist(text: &str) -> Result<Graph, IoError> {
    let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
    let mut n = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let t = raw.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(comment) = t.strip_prefix('#') {
            // An optional "# n = <k>" header keeps isolated vertices alive.
            if let Some(count) = comment
                .trim()
                .strip_prefix('n')
                .and_then(|r| r.trim_start().strip_prefix('='))
                .and_then(|r| r.trim().parse::<usize>().ok())
            {
                n = n.max(count);
            }
            continue;
        }
        let mut parts = t.split_whitespace();
        let u = parse_count(parts.next(), line, "endpoint")?;
        let v = parse_count(parts.next(), line, "endpoint")?;
        if parts.next().is_some() {
            return Err(bad(line, "trailing tokens after edge"));
        }
        n = n.max(u + 1).max(v + 1);
        pairs.push((u, v, line));
    }
    let mut g = Graph::new(n);
    for (u, v, line) in pairs {
        g.add_edge(u, v)
            .map_err(|source| IoError::Structure { line, source })?;
    }
    Ok(g)
}

fn parse_count(token: Option<&str>, line: usize, what: &str) -> Result<usize, IoError> {
    let token = token.ok_or_else(|| bad(line, format!("missing {what}")))?;
    token
        .parse()
        .map_err(|_| bad(line, format!("invalid {what} {token:?}")))
}

/// On-disk coloring: `palette` is the number of colors available and
/// `colors[v]` is the 1-based color of vertex `v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringDoc {
    pub palette: u32,
    pub colors: Vec<u32>,
}

impl ColoringDoc {
    /// Captures a total coloring; partial colorings are not representable.
    pub fn from_coloring(c: &Coloring) -> Result<Self, IoError> {
        let colors = (0..c.len())
            .map(|v| {
                c.get(v)
                    .ok_or_else(|| IoError::Document(format!("vertex {v} is uncolored")))
            })
            .collect::<Result<_, _>>()?;
        Ok(ColoringDoc {
            palette: c.palette(),
            colors,
        })
    }

    pub fn to_coloring(&self) -> Result<Coloring, IoError> {
        Coloring::from_colors(self.colors.iter().map(|&c| Some(c)).collect(), self.palette)
            .map_err(|e| IoError::Document(e.to_string()))
    }
}

/// Discharge audit with a stable key order: final charges, then the bank,
/// then the rule log. All amounts are exact `p/q` strings.
#[derive(Debug, Clone, Serialize)]
pub struct AuditDoc {
    #[serde(rename = "final")]
    pub final_charges: Vec<String>,
    pub bank: String,
    pub log: Vec<AuditEntry>,
}

/// One rule application: who paid whom how much, and under which rule.
#[derive(Debug, Clone, Serialize)]
pub struct AuditEntry {
    pub rule: String,
    pub donor: String,
    pub recipient: String,
    pub amount: String,
}

/// Renders a ledger for the machine-readable audit output.
pub fn audit_document(ledger: &ChargeLedger) -> AuditDoc {
    fn party(p: Party) -> String {
        match p {
            Party::Vertex(v) => v.to_string(),
            Party::Bank => "bank".to_string(),
        }
    }
    AuditDoc {
        final_charges: ledger.final_charge.iter().map(|&r| format_ratio(r)).collect(),
        bank: format_ratio(ledger.bank),
        log: ledger
            .log
            .iter()
            .map(|e| AuditEntry {
                rule: e.rule.to_string(),
                donor: party(e.donor),
                recipient: party(e.recipient),
                amount: format_ratio(e.amount),
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discharge::discharge_thm2;
    use crate::gen::{complete, heawood, path, petersen, subdivide, thick_cycle};
    use crate::graph::verify_injective;
    use crate::solver::{color_injective, Mode};

    #[test]
    fn dimacs_parses_a_triangle() {
        let g = parse_graph("p edge 3 3\ne 1 2\ne 2 3\ne 1 3\n", Format::Dimacs).unwrap();
        assert_eq!(g, complete(3).unwrap());
    }

    #[test]
    fn dimacs_rejects_a_self_loop() {
        let err = parse_graph("p edge 1 1\ne 1 1\n", Format::Dimacs).unwrap_err();
        match err {
            IoError::Structure {
                line: 2,
                source: GraphError::SelfLoop(0),
            } => {}
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn dimacs_rejects_a_duplicate_edge() {
        let err = parse_graph("p edge 2 2\ne 1 2\ne 2 1\n", Format::Dimacs).unwrap_err();
        assert!(matches!(
            err,
            IoError::Structure {
                line: 3,
                source: GraphError::DuplicateEdge(_, _),
            }
        ));
    }

    #[test]
    fn dimacs_enforces_the_declared_edge_count() {
        let err = parse_graph("p edge 3 3\ne 1 2\ne 2 3\n", Format::Dimacs).unwrap_err();
        assert!(matches!(err, IoError::Parse { .. }));
        assert!(err.to_string().contains("declared 3 edges, found 2"));

        let err =
            parse_graph("p edge 3 1\ne 1 2\ne 2 3\n", Format::Dimacs).unwrap_err();
        assert!(err.to_string().contains("more edges"));
    }

    #[test]
    fn dimacs_rejects_malformed_records() {
        for text in [
            "e 1 2\n",
            "p edge 3\n",
            "p clique 3 0\n",
            "p edge 2 1\nx 1 2\n",
            "p edge 2 1\ne 1 3\n",
            "p edge 2 1\ne 1 2 9\n",
        ] {
            assert!(
                matches!(parse_graph(text, Format::Dimacs), Err(IoError::Parse { .. })),
                "accepted {text:?}"
            );
        }
    }

    #[test]
    fn edgelist_parses_a_path() {
        let g = parse_graph("0 1\n1 2\n", Format::Edgelist).unwrap();
        assert_eq!(g, path(3).unwrap());
    }

    #[test]
    fn edgelist_header_keeps_isolated_vertices() {
        let g = parse_graph("# n = 4\n0 1\n", Format::Edgelist).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn both_formats_round_trip() {
        let graphs = [
            heawood(),
            petersen(),
            thick_cycle(4).unwrap(),
            subdivide(&complete(4).unwrap(), 1),
            Graph::new(3),
            Graph::new(0),
        ];
        for g in graphs {
            for format in [Format::Dimacs, Format::Edgelist] {
                let text = emit_graph(&g, format);
                let back = parse_graph(&text, format).unwrap();
                assert_eq!(back, g, "round trip failed for {format:?}:\n{text}");
            }
        }
    }

    #[test]
    fn coloring_documents_round_trip() {
        let g = subdivide(&heawood(), 1);
        let (col, _) = color_injective(&g, Mode::Strict).unwrap();
        let doc = ColoringDoc::from_coloring(&col).unwrap();
        let json = serde_json::to_string(&doc).unwrap();
        let back: ColoringDoc = serde_json::from_str(&json).unwrap();
        let restored = back.to_coloring().unwrap();
        assert_eq!(verify_injective(&g, &restored).unwrap(), None);
    }

    #[test]
    fn coloring_documents_reject_bad_colors() {
        let zero = ColoringDoc {
            palette: 3,
            colors: vec![1, 0],
        };
        assert!(zero.to_coloring().is_err());
        let over = ColoringDoc {
            palette: 2,
            colors: vec![1, 3],
        };
        assert!(over.to_coloring().is_err());
    }

    #[test]
    fn audits_serialize_with_a_stable_key_order() {
        // One subdivided edge: the lone 2-vertex ends at exactly 36/13.
        let base = heawood();
        let mut g = Graph::new(base.n() + 1);
        let mid = base.n();
        for (i, (u, v)) in base.edges().into_iter().enumerate() {
            if i == 0 {
                g.add_edge(u, mid).unwrap();
                g.add_edge(mid, v).unwrap();
            } else {
                g.add_edge(u, v).unwrap();
            }
        }
        let ledger = discharge_thm2(&g).unwrap();
        let json = serde_json::to_string(&audit_document(&ledger)).unwrap();
        let f = json.find("\"final\"").unwrap();
        let b = json.find("\"bank\"").unwrap();
        let l = json.find("\"log\"").unwrap();
        assert!(f < b && b < l, "unexpected key order in {json}");
        assert!(json.contains("\"36/13\""));
    }
}
