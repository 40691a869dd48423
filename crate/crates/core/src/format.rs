//! Text formats: the line-based graph syntax and the JSON model file.
//!
//! Graph files hold one statement per line:
//!
//! ```text
//! # comment
//! node Z
//! X -> M
//! X <-> Y
//! ```
//!
//! Nodes mentioned by an arc are declared implicitly.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::admg::{is_valid_name, Admg, NodeId, NodeSet};
use crate::error::{Error, Result};
use crate::scm::{Cpt, DiscreteScm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArcKind {
    Directed,
    Bidirected,
}

/// A parsed graph together with where each arc came from.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphDocument {
    pub source_path: String,
    pub parsed: Admg,
    /// Source line of every arc; bidirected endpoints are stored sorted.
    pub line_map: BTreeMap<(ArcKind, NodeId, NodeId), usize>,
}

fn parse_name(token: &str, line: usize) -> Result<NodeId> {
    if !is_valid_name(token) {
        let message = if token.is_empty() {
            "missing node name".to_string()
        } else {
            format!("invalid node name `{token}`")
        };
        return Err(Error::Parse { line, message });
    }
    Ok(NodeId::new(token).expect("validated"))
}

pub fn parse_document(text: &str, source_path: &str) -> Result<GraphDocument> {
    let mut nodes = NodeSet::new();
    let mut line_map = BTreeMap::new();
    let mut directed = Vec::new();
    let mut bidirected = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let stmt = raw.split('#').next().unwrap_or("").trim();
        if stmt.is_empty() {
            continue;
        }
        let arc = if let Some((a, b)) = stmt.split_once("<->") {
            Some((ArcKind::Bidirected, a, b))
        } else {
            stmt.split_once("->").map(|(a, b)| (ArcKind::Directed, a, b))
        };
        let Some((kind, a, b)) = arc else {
            match stmt.split_once(char::is_whitespace) {
                Some(("node", rest)) => {
                    nodes.insert(parse_name(rest.trim(), line)?);
                    continue;
                }
                _ => {
                    return Err(Error::Parse {
                        line,
                        message: format!("expected `node NAME`, `A -> B` or `A <-> B`, found `{stmt}`"),
                    })
                }
            }
        };
        let (a, b) = (parse_name(a.trim(), line)?, parse_name(b.trim(), line)?);
        if a == b {
            return Err(Error::AtLine { line, source: Box::new(Error::SelfLoop(a.to_string())) });
        }
        let key = match kind {
            ArcKind::Directed => (kind, a.clone(), b.clone()),
            ArcKind::Bidirected => (kind, a.clone().min(b.clone()), a.clone().max(b.clone())),
        };
        if line_map.insert(key, line).is_some() {
            let arrow = if kind == ArcKind::Directed { "->" } else { "<->" };
            return Err(Error::AtLine {
                line,
                source: Box::new(Error::DuplicateArc(format!("{a} {arrow} {b}"))),
            });
        }
        nodes.insert(a.clone());
        nodes.insert(b.clone());
        match kind {
            ArcKind::Directed => directed.push((a, b)),
            ArcKind::Bidirected => bidirected.push((a, b)),
        }
    }

    let parsed = Admg::new(&nodes, &directed, &bidirected).map_err(|e| match &e {
        Error::Cycle { cycle } => {
            let line = cycle
                .windows(2)
                .filter_map(|w| {
                    let key = (ArcKind::Directed, NodeId::new(&w[0]).ok()?, NodeId::new(&w[1]).ok()?);
                    line_map.get(&key).copied()
                })
                .max()
                .unwrap_or(0);
            Error::AtLine { line, source: Box::new(e) }
        }
        _ => e,
    })?;
    Ok(GraphDocument { source_path: source_path.to_string(), parsed, line_map })
}

pub fn parse_graph(text: &str) -> Result<Admg> {
    Ok(parse_document(text, "<inline>")?.parsed)
}

/// Canonical text: every node, then directed arcs, then bidirected arcs,
/// each block sorted.
pub fn serialize_graph(g: &Admg) -> String {
    let mut out = String::new();
    for n in g.node_ids() {
        out.push_str(&format!("node {n}\n"));
    }
    for (a, b) in g.directed_arcs() {
        out.push_str(&format!("{a} -> {b}\n"));
    }
    for (a, b) in g.bidirected_arcs() {
        out.push_str(&format!("{a} <-> {b}\n"));
    }
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    graph: Vec<String>,
    cardinalities: BTreeMap<String, usize>,
    #[serde(default)]
    cpts: BTreeMap<String, CptFile>,
    seed: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CptFile {
    parents: Vec<String>,
    table: Vec<f64>,
}

/// Loads a model document:
///
/// ```json
/// {
///   "graph": ["X -> M", "M -> Y", "X <-> Y"],
///   "cardinalities": {"X": 2, "M": 2, "Y": 2},
///   "cpts": {"X": {"parents": ["L_X_Y"], "table": [0.5, 0.5, 0.2, 0.8]}},
///   "seed": 7
/// }
/// ```
///
/// Latent parents use the names `L_<a>_<b>`. Any variable without a table is
/// filled at random from `seed`.
pub fn parse_model(text: &str) -> Result<DiscreteScm> {
    let file: ModelFile = serde_json::from_str(text).map_err(|e| Error::Model(e.to_string()))?;
    let graph = parse_graph(&file.graph.join("\n"))?;
    let cards = file
        .cardinalities
        .iter()
        .map(|(k, &v)| Ok((NodeId::new(k)?, v)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let cpts = file
        .cpts
        .into_iter()
        .map(|(k, c)| {
            let parents = c.parents.iter().map(|p| NodeId::new(p)).collect::<Result<_>>()?;
            Ok((NodeId::new(&k)?, Cpt { parents, table: c.table }))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    DiscreteScm::from_parts(&graph, &cards, &cpts, file.seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(s: &str) -> NodeId {
        NodeId::new(s).unwrap()
    }

    #[test]
    fn parses_frontdoor() {
        let g = parse_graph("X -> M\nM -> Y\nX <-> Y").unwrap();
        let f = Admg::from_names(&["X", "M", "Y"], &[("X", "M"), ("M", "Y")], &[("X", "Y")]).unwrap();
        assert_eq!(g, f);
        assert_eq!(parse_graph("  X->M # trailing\n\n# only comment\nM   ->Y\nY<->X\n").unwrap(), f);
    }

    #[test]
    fn isolated_node() {
        let g = parse_graph("node Z").unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.num_directed() + g.num_bidirected(), 0);
    }

    #[test]
    fn errors_carry_lines() {
        let e = parse_graph("A -> A").unwrap_err();
        assert_eq!(e, Error::AtLine { line: 1, source: Box::new(Error::SelfLoop("A".into())) });
        assert!(matches!(parse_graph("A -> B\nB => C"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("A -> "), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_graph("node a-b"), Err(Error::Parse { line: 1, .. })));
        let e = parse_graph("A -> B\nB <-> A\nA <-> B").unwrap_err();
        assert!(matches!(e, Error::AtLine { line: 3, .. }));
        assert!(matches!(e.root(), Error::DuplicateArc(_)));
        let e = parse_graph("A -> B\nB -> C\n# gap\nC -> A\n").unwrap_err();
        assert!(matches!(e, Error::AtLine { line: 4, .. }));
        assert!(matches!(e.root(), Error::Cycle { .. }));
    }

    #[test]
    fn line_map_and_roundtrip() {
        let doc = parse_document("node Q\nX -> M\nY <-> X\n", "f.graph").unwrap();
        assert_eq!(doc.line_map[&(ArcKind::Bidirected, id("X"), id("Y"))], 3);
        assert_eq!(doc.line_map[&(ArcKind::Directed, id("X"), id("M"))], 2);
        let text = serialize_graph(&doc.parsed);
        assert_eq!(text, "node M\nnode Q\nnode X\nnode Y\nX -> M\nX <-> Y\n");
        assert_eq!(parse_graph(&text).unwrap(), doc.parsed);
        assert_eq!(serialize_graph(&parse_graph(&text).unwrap()), text);
    }

    #[test]
    fn model_files() {
        let text = r#"{
            "graph": ["X -> M", "M -> Y", "X <-> Y"],
            "cardinalities": {"X": 2, "M": 2, "Y": 2},
            "cpts": {"M": {"parents": ["X"], "table": [0.9, 0.1, 0.2, 0.8]}},
            "seed": 3
        }"#;
        let m = parse_model(text).unwrap();
        assert_eq!(m.cpts()[&id("M")].table, [0.9, 0.1, 0.2, 0.8]);
        assert_eq!(m.cardinality(&id("L_X_Y")).unwrap(), 2);

        let no_seed = r#"{"graph": ["A -> B"], "cardinalities": {"A": 2, "B": 2}}"#;
        assert!(matches!(parse_model(no_seed), Err(Error::Model(_))));
        assert!(matches!(parse_model("{"), Err(Error::Model(_))));
        let bad_parents = r#"{"graph": ["A -> B"], "cardinalities": {"A": 2, "B": 2},
            "cpts": {"B": {"parents": [], "table": [0.5, 0.5]}}, "seed": 1}"#;
        assert!(matches!(parse_model(bad_parents), Err(Error::Model(_))));
    }
}
