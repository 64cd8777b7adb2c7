//! File formats: graph and labeling JSON, DOT.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, Graph, GraphError};
use crate::labeling::{EdgeLabeling, InducedColoring, LabelingError};
use crate::transforms::{LabeledGraph, Provenance};
use crate::vertex::VertexId;

#[derive(Debug, Error)]
pub enum DocError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("graph: {0}")]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Labeling(#[from] LabelingError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDoc {
    pub id: VertexId,
}

/// `{"vertices": [{"id": ..}, ..], "edges": [["a", "b"], ..]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<(VertexId, VertexId)>,
}

impl GraphDoc {
    pub fn from_graph(g: &Graph) -> Self {
        GraphDoc {
            vertices: g.vertices().map(|v| VertexDoc { id: v.clone() }).collect(),
            edges: g
                .edges()
                .map(|e| {
                    let (a, b) = e.ends();
                    (a.clone(), b.clone())
                })
                .collect(),
        }
    }

    pub fn to_graph(&self) -> Result<Graph, GraphError> {
        let edges = self
            .edges
            .iter()
            .map(|(a, b)| Edge::new(a.clone(), b.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        let vertices: Vec<VertexId> = self.vertices.iter().map(|v| v.id.clone()).collect();
        let distinct: BTreeSet<&VertexId> = vertices.iter().collect();
        if distinct.len() != vertices.len() {
            let dup = vertices
                .iter()
                .enumerate()
                .find(|(i, v)| vertices[..*i].contains(v))
                .map(|(_, v)| v.clone())
                .unwrap();
            return Err(GraphError::Overlap(dup));
        }
        Graph::new(vertices, edges)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelDoc {
    pub edge: (VertexId, VertexId),
    pub label: u64,
}

/// A labeling file. `labels` are sorted by label value; `provenance` and
/// `expected_colors` are optional extras the verifier checks when present.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelingDoc {
    pub graph: GraphDoc,
    pub labels: Vec<LabelDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_colors: Option<BTreeSet<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl LabelingDoc {
    pub fn from_labeling(l: &EdgeLabeling) -> Self {
        LabelingDoc {
            graph: GraphDoc::from_graph(l.graph()),
            labels: l
                .by_label()
                .into_iter()
                .map(|(label, e)| {
                    let (a, b) = e.ends();
                    LabelDoc {
                        edge: (a.clone(), b.clone()),
                        label,
                    }
                })
                .collect(),
            expected_colors: None,
            provenance: None,
        }
    }

    pub fn from_labeled(lg: &LabeledGraph) -> Self {
        let mut doc = LabelingDoc::from_labeling(lg.labeling());
        doc.expected_colors = lg.prediction().map(|p| p.colors());
        doc.provenance = Some(lg.provenance().clone());
        doc
    }

    /// The graph alone; failures here are input errors.
    pub fn parse_graph(&self) -> Result<Graph, GraphError> {
        self.graph.to_graph()
    }

    /// Labels checked against the graph; failures here are bijection errors.
    pub fn labeling_on(&self, g: Graph) -> Result<EdgeLabeling, DocError> {
        let mut map = std::collections::BTreeMap::new();
        for d in &self.labels {
            let e = Edge::new(d.edge.0.clone(), d.edge.1.clone())?;
            if let Some(old) = map.insert(e.clone(), d.label) {
                return Err(LabelingError::Repeated {
                    label: old.max(d.label),
                    first: e.clone(),
                    second: e,
                }
                .into());
            }
        }
        Ok(EdgeLabeling::new(g, map)?)
    }

    pub fn to_labeling(&self) -> Result<EdgeLabeling, DocError> {
        self.labeling_on(self.parse_graph()?)
    }
}

fn dot_attrs(v: &VertexId) -> &'static str {
    match (v.role(), v.base_role()) {
        ('u', _) => "shape=box",
        ('v', _) => "shape=ellipse",
        ('x', _) => "shape=circle",
        ('s', _) => "shape=diamond",
        ('m', Some('u')) => "shape=box, peripheries=2",
        ('m', Some('v')) => "shape=ellipse, peripheries=2",
        _ => "shape=doublecircle",
    }
}

/// DOT text with role-based node shapes, induced colours on nodes when
/// given, and edge labels.
pub fn to_dot(
    g: &Graph,
    labels: Option<&EdgeLabeling>,
    colors: Option<&InducedColoring>,
) -> String {
    let mut out = String::from("graph G {\n");
    for v in g.vertices() {
        let text = match colors.and_then(|c| c.color(v)) {
            Some(c) => format!("{v}\\n{c}"),
            None => v.to_string(),
        };
        let _ = writeln!(out, "  \"{v}\" [{}, label=\"{text}\"];", dot_attrs(v));
    }
    for e in g.edges() {
        let (a, b) = e.ends();
        match labels.and_then(|l| l.label(e)) {
            Some(l) => {
                let _ = writeln!(out, "  \"{a}\" -- \"{b}\" [label=\"{l}\"];");
            }
            None => {
                let _ = writeln!(out, "  \"{a}\" -- \"{b}\";");
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes;

    #[test]
    fn graph_doc_roundtrip() {
        let (g, _) = schemes::special_2p2_o2();
        let doc = GraphDoc::from_graph(&g);
        let text = serde_json::to_string(&doc).unwrap();
        assert!(text.contains("\"m(x1.1|x2.1)\""));
        let back: GraphDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_graph().unwrap(), g);
    }

    #[test]
    fn labeling_doc_sorted_and_roundtrips() {
        let (_, l) = schemes::special_2p2_o2();
        let doc = LabelingDoc::from_labeling(&l);
        let ls: Vec<u64> = doc.labels.iter().map(|d| d.label).collect();
        assert_eq!(ls, (1..=10).collect::<Vec<_>>());
        let text = serde_json::to_string_pretty(&doc).unwrap();
        let back: LabelingDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_labeling().unwrap(), l);
    }

    #[test]
    fn bad_label_is_a_bijection_error() {
        let (_, l) = schemes::special_2p2_o2();
        let mut doc = LabelingDoc::from_labeling(&l);
        doc.labels[0].label = 2;
        let err = doc.to_labeling().unwrap_err();
        assert!(err.to_string().contains("bijection"), "{err}");
    }

    #[test]
    fn dot_shapes() {
        let (g, l) = schemes::special_2p2_o2();
        let dot = to_dot(&g, Some(&l), Some(&l.induce()));
        assert!(dot.starts_with("graph G {"));
        assert!(dot.contains("\"u1\" [shape=box, label=\"u1\\n19\"];"));
        assert!(dot.contains("shape=doublecircle"));
        assert!(dot.contains("[label=\"4\"]"));
    }
}
