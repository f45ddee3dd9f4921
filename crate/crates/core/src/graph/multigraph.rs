use std::collections::{BTreeSet, VecDeque};

use super::{GraphError, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
}

impl Edge {
    pub fn new(source: usize, target: usize) -> Self {
        Edge { source, target }
    }
}

/// Directed multigraph on vertices `0..n`; edge ids are positions in the
/// edge list. Optionally carries a vertex valuation and an edge coloring.
///
/// A coloring that labels the out-edges of every vertex `i` with exactly
/// `1..=outdegree(i)` is a port labeling (see [`has_port_labeling`]); bases of
/// port-labeled graphs keep their colors but need not be port-labeled.
///
/// [`has_port_labeling`]: DirectedMultigraph::has_port_labeling
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirectedMultigraph {
    n: usize,
    edges: Vec<Edge>,
    valuation: Option<Vec<Value>>,
    colors: Option<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    out_adj: Vec<Vec<usize>>,
}

impl DirectedMultigraph {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self, GraphError> {
        for (id, e) in edges.iter().enumerate() {
            for v in [e.source, e.target] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { edge: id, vertex: v, n });
                }
            }
        }
        let mut in_adj = vec![Vec::new(); n];
        let mut out_adj = vec![Vec::new(); n];
        for (id, e) in edges.iter().enumerate() {
            in_adj[e.target].push(id);
            out_adj[e.source].push(id);
        }
        // canonical order (source, target, id)
        for adj in in_adj.iter_mut().chain(out_adj.iter_mut()) {
            adj.sort_by_key(|&id| (edges[id].source, edges[id].target, id));
        }
        Ok(DirectedMultigraph { n, edges, valuation: None, colors: None, in_adj, out_adj })
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, GraphError> {
        Self::new(n, pairs.iter().map(|&(s, t)| Edge::new(s, t)).collect())
    }

    /// Simple graph with exactly the given ordered pairs.
    pub fn from_edge_set(n: usize, set: &BTreeSet<(usize, usize)>) -> Result<Self, GraphError> {
        Self::new(n, set.iter().map(|&(s, t)| Edge::new(s, t)).collect())
    }

    pub fn with_valuation(mut self, valuation: Vec<Value>) -> Result<Self, GraphError> {
        if valuation.len() != self.n {
            return Err(GraphError::LabelCount { expected: self.n, found: valuation.len() });
        }
        self.valuation = Some(valuation);
        Ok(self)
    }

    pub fn without_valuation(mut self) -> Self {
        self.valuation = None;
        self
    }

    /// Attach a port labeling; rejected unless every vertex's out-edges carry
    /// exactly the labels `1..=outdegree`.
    pub fn with_ports(self, ports: Vec<usize>) -> Result<Self, GraphError> {
        let g = self.with_colors(ports)?;
        match (0..g.n).find(|&v| !g.ports_valid_at(v)) {
            Some(v) => Err(GraphError::InvalidPorts(v)),
            None => Ok(g),
        }
    }

    /// Attach an arbitrary positive edge coloring.
    pub fn with_colors(mut self, colors: Vec<usize>) -> Result<Self, GraphError> {
        if colors.len() != self.edges.len() {
            return Err(GraphError::LabelCount { expected: self.edges.len(), found: colors.len() });
        }
        if let Some(id) = colors.iter().position(|&c| c == 0) {
            return Err(GraphError::InvalidPorts(self.edges[id].source));
        }
        self.colors = Some(colors);
        Ok(self)
    }

    pub fn without_colors(mut self) -> Self {
        self.colors = None;
        self
    }

    /// Ports `1..=outdegree` assigned to each vertex's out-edges in
    /// canonical (target, id) order.
    pub fn with_canonical_ports(self) -> Self {
        let mut ports = vec![0; self.edges.len()];
        for adj in &self.out_adj {
            for (k, &id) in adj.iter().enumerate() {
                ports[id] = k + 1;
            }
        }
        self.with_ports(ports).expect("canonical ports are valid")
    }

    fn ports_valid_at(&self, v: usize) -> bool {
        let Some(colors) = &self.colors else { return false };
        let mut seen: Vec<usize> = self.out_adj[v].iter().map(|&id| colors[id]).collect();
        seen.sort_unstable();
        seen.iter().enumerate().all(|(k, &c)| c == k + 1)
    }

    pub fn has_port_labeling(&self) -> bool {
        self.colors.is_some() && (0..self.n).all(|v| self.ports_valid_at(v))
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> Edge {
        self.edges[id]
    }

    pub fn valuation(&self) -> Option<&[Value]> {
        self.valuation.as_deref()
    }

    pub fn colors(&self) -> Option<&[usize]> {
        self.colors.as_deref()
    }

    pub fn color(&self, id: usize) -> Option<usize> {
        self.colors.as_ref().map(|c| c[id])
    }

    /// Incoming edge ids of `v` in canonical order.
    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    /// Outgoing edge ids of `v` in canonical order.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    pub fn outdegree(&self, v: usize) -> usize {
        self.out_adj[v].len()
    }

    pub fn indegree(&self, v: usize) -> usize {
        self.in_adj[v].len()
    }

    pub fn outdegrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.outdegree(v)).collect()
    }

    /// Number of edges `i -> j`.
    pub fn multiplicity(&self, i: usize, j: usize) -> usize {
        self.out_adj[i].iter().filter(|&&id| self.edges[id].target == j).count()
    }

    pub fn simple_edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.edges.iter().map(|e| (e.source, e.target)).collect()
    }

    pub fn has_self_loops(&self) -> bool {
        (0..self.n).all(|v| self.multiplicity(v, v) > 0)
    }

    /// Adds one self-loop at every vertex lacking one. Colors, if present,
    /// are extended with the next free port.
    pub fn with_self_loops(&self) -> Self {
        let mut edges = self.edges.clone();
        let mut colors = self.colors.clone();
        for v in 0..self.n {
            if self.multiplicity(v, v) == 0 {
                edges.push(Edge::new(v, v));
                if let Some(c) = colors.as_mut() {
                    c.push(self.outdegree(v) + 1);
                }
            }
        }
        let mut g = DirectedMultigraph::new(self.n, edges).expect("same vertex set");
        g.valuation = self.valuation.clone();
        g.colors = colors;
        g
    }

    /// Every edge `i -> j` has a reverse edge `j -> i` (parallel counts may
    /// differ).
    pub fn is_bidirectional(&self) -> bool {
        let set = self.simple_edge_set();
        set.iter().all(|&(s, t)| set.contains(&(t, s)))
    }

    /// `d(i,j) = d(j,i)` for all pairs.
    pub fn is_symmetric(&self) -> bool {
        self.edges.iter().all(|e| self.multiplicity(e.source, e.target) == self.multiplicity(e.target, e.source))
    }

    /// BFS distances from `src` along edge directions.
    pub fn distances_from(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].expect("visited");
            for &id in &self.out_adj[u] {
                let w = self.edges[id].target;
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.diameter().is_some()
    }

    /// Largest pairwise distance; `None` unless strongly connected.
    pub fn diameter(&self) -> Option<usize> {
        if self.n == 0 {
            return None;
        }
        let mut best = 0;
        for v in 0..self.n {
            for d in self.distances_from(v) {
                best = best.max(d?);
            }
        }
        Some(best)
    }

    /// Relabel vertices: vertex `v` becomes `perm[v]`. Edge ids are kept.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let edges = self.edges.iter().map(|e| Edge::new(perm[e.source], perm[e.target])).collect();
        let mut g = DirectedMultigraph::new(self.n, edges).expect("permutation of vertex set");
        g.colors = self.colors.clone();
        g.valuation = self.valuation.as_ref().map(|val| {
            let mut out = val.clone();
            for (v, x) in val.iter().enumerate() {
                out[perm[v]] = x.clone();
            }
            out
        });
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle3() -> DirectedMultigraph {
        DirectedMultigraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(matches!(
            DirectedMultigraph::from_pairs(2, &[(0, 2)]),
            Err(GraphError::VertexOutOfRange { edge: 0, vertex: 2, n: 2 })
        ));
    }

    #[test]
    fn strong_connectivity() {
        assert!(cycle3().is_strongly_connected());
        let loops = DirectedMultigraph::from_pairs(2, &[(0, 0), (1, 1)]).unwrap();
        assert!(!loops.is_strongly_connected());
        let out_star = DirectedMultigraph::from_pairs(3, &[(0, 1), (0, 2)]).unwrap();
        assert!(!out_star.is_strongly_connected());
        assert_eq!(cycle3().diameter(), Some(2));
    }

    #[test]
    fn port_validation() {
        let g = DirectedMultigraph::from_pairs(2, &[(0, 1), (0, 1), (1, 0)]).unwrap();
        assert!(g.clone().with_ports(vec![1, 2, 1]).is_ok());
        assert!(matches!(g.clone().with_ports(vec![1, 1, 1]), Err(GraphError::InvalidPorts(0))));
        assert!(g.clone().with_ports(vec![1, 3, 1]).is_err());
        assert!(g.clone().with_colors(vec![1, 1, 1]).is_ok());
        assert!(g.with_canonical_ports().has_port_labeling());
    }

    #[test]
    fn multiplicities_and_degrees() {
        let g = DirectedMultigraph::from_pairs(2, &[(1, 0), (1, 0), (0, 1), (0, 0)]).unwrap();
        assert_eq!(g.multiplicity(1, 0), 2);
        assert_eq!(g.outdegree(0), 2);
        assert_eq!(g.indegree(0), 3);
        assert!(g.is_bidirectional());
        assert!(!g.is_symmetric());
    }

    #[test]
    fn self_loop_completion_extends_ports() {
        let g = cycle3().with_canonical_ports().with_self_loops();
        assert!(g.has_self_loops());
        assert!(g.has_port_labeling());
        assert_eq!(g.edge_count(), 6);
    }
}
