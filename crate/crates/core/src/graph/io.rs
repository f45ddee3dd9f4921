//! JSON exchange format. Vertices and edge indices are 1-based on the wire.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{DirectedMultigraph, DynamicGraph, Edge, GraphError, Value};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valuation: Option<BTreeMap<usize, Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ports: Option<BTreeMap<usize, usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicDocument {
    pub n: usize,
    #[serde(default)]
    pub prefix: Vec<GraphDocument>,
    pub cycle: Vec<GraphDocument>,
}

fn to_zero_based(x: usize, what: &str) -> Result<usize, GraphError> {
    x.checked_sub(1).ok_or_else(|| GraphError::Format(format!("{what} indices start at 1")))
}

impl GraphDocument {
    pub fn to_graph(&self) -> Result<DirectedMultigraph, GraphError> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for &[s, t] in &self.edges {
            edges.push(Edge::new(to_zero_based(s, "vertex")?, to_zero_based(t, "vertex")?));
        }
        let mut g = DirectedMultigraph::new(self.n, edges)?;
        if let Some(val) = &self.valuation {
            let mut values = Vec::with_capacity(self.n);
            for v in 1..=self.n {
                values.push(
                    val.get(&v).cloned().ok_or_else(|| GraphError::Format(format!("valuation misses vertex {v}")))?,
                );
            }
            if val.len() != self.n {
                return Err(GraphError::LabelCount { expected: self.n, found: val.len() });
            }
            g = g.with_valuation(values)?;
        }
        if let Some(ports) = &self.ports {
            let mut labels = Vec::with_capacity(self.edges.len());
            for e in 1..=self.edges.len() {
                labels.push(*ports.get(&e).ok_or_else(|| GraphError::Format(format!("ports miss edge {e}")))?);
            }
            g = g.with_ports(labels)?;
        }
        Ok(g)
    }

    pub fn from_graph(g: &DirectedMultigraph) -> Self {
        GraphDocument {
            n: g.vertex_count(),
            edges: g.edges().iter().map(|e| [e.source + 1, e.target + 1]).collect(),
            valuation: g.valuation().map(|v| v.iter().cloned().enumerate().map(|(i, x)| (i + 1, x)).collect()),
            ports: g.colors().map(|c| c.iter().copied().enumerate().map(|(i, x)| (i + 1, x)).collect()),
        }
    }
}

impl DynamicDocument {
    pub fn to_dynamic(&self) -> Result<DynamicGraph, GraphError> {
        let convert = |docs: &[GraphDocument]| -> Result<Vec<DirectedMultigraph>, GraphError> {
            docs.iter()
                .map(|d| {
                    if d.n != self.n {
                        return Err(GraphError::VertexCountMismatch { expected: self.n, found: d.n });
                    }
                    d.to_graph()
                })
                .collect()
        };
        DynamicGraph::new(convert(&self.prefix)?, convert(&self.cycle)?)
    }

    pub fn from_dynamic(g: &DynamicGraph) -> Self {
        DynamicDocument {
            n: g.vertex_count(),
            prefix: g.prefix().iter().map(GraphDocument::from_graph).collect(),
            cycle: g.cycle().iter().map(GraphDocument::from_graph).collect(),
        }
    }
}

pub fn parse_graph(json: &str) -> Result<DirectedMultigraph, GraphError> {
    let doc: GraphDocument = serde_json::from_str(json).map_err(|e| GraphError::Format(e.to_string()))?;
    doc.to_graph()
}

pub fn parse_dynamic(json: &str) -> Result<DynamicGraph, GraphError> {
    let doc: DynamicDocument = serde_json::from_str(json).map_err(|e| GraphError::Format(e.to_string()))?;
    doc.to_dynamic()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;

    #[test]
    fn one_based_round_trip() {
        let g = generate::star(3, false).with_valuation(vec![Value::int(5), Value::int(1), Value::int(1)]).unwrap();
        let doc = GraphDocument::from_graph(&g);
        assert_eq!(doc.edges[0], [1, 2]);
        let json = serde_json::to_string(&doc).unwrap();
        assert_eq!(parse_graph(&json).unwrap(), g);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(parse_graph(r#"{"n":2,"edges":[[0,1]]}"#).is_err());
        assert!(parse_graph(r#"{"n":2,"edges":[[1,3]]}"#).is_err());
        assert!(parse_graph(r#"{"n":2,"edges":[[1,2]],"extra":1}"#).is_err());
        assert!(parse_graph(r#"{"n":2,"edges":[[1,2],[1,1]],"ports":{"1":1,"2":1}}"#).is_err());
        let ok = parse_graph(r#"{"n":2,"edges":[[1,2],[2,1]],"valuation":{"1":"a","2":"1/2"}}"#).unwrap();
        assert_eq!(ok.valuation().unwrap()[0], Value::token("a"));
    }

    #[test]
    fn dynamic_round_trip() {
        let g = generate::random_dynamic_with_diameter(3, 2, 1, 4).unwrap();
        let json = serde_json::to_string(&DynamicDocument::from_dynamic(&g)).unwrap();
        assert_eq!(parse_dynamic(&json).unwrap(), g);
    }
}
