use std::collections::BTreeSet;

use super::{DirectedMultigraph, GraphError};

/// Sequence of round graphs `G(1), G(2), ...` on a fixed vertex set: a finite
/// prefix followed by a cycle repeated forever. Every round graph carries a
/// self-loop at each vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicGraph {
    n: usize,
    prefix: Vec<DirectedMultigraph>,
    cycle: Vec<DirectedMultigraph>,
}

impl DynamicGraph {
    pub fn new(prefix: Vec<DirectedMultigraph>, cycle: Vec<DirectedMultigraph>) -> Result<Self, GraphError> {
        let n = cycle.first().ok_or(GraphError::EmptyCycle)?.vertex_count();
        for (k, g) in prefix.iter().chain(&cycle).enumerate() {
            let round = k + 1;
            if g.vertex_count() != n {
                return Err(GraphError::VertexCountMismatch { expected: n, found: g.vertex_count() });
            }
            if let Some(v) = (0..n).find(|&v| g.multiplicity(v, v) == 0) {
                return Err(GraphError::MissingSelfLoop { round, vertex: v });
            }
        }
        Ok(DynamicGraph { n, prefix, cycle })
    }

    /// The same graph in every round.
    pub fn constant(g: DirectedMultigraph) -> Result<Self, GraphError> {
        Self::new(Vec::new(), vec![g])
    }

    pub fn periodic(cycle: Vec<DirectedMultigraph>) -> Result<Self, GraphError> {
        Self::new(Vec::new(), cycle)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn prefix(&self) -> &[DirectedMultigraph] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[DirectedMultigraph] {
        &self.cycle
    }

    /// Number of rounds after which the schedule repeats.
    pub fn period_end(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn is_static(&self) -> bool {
        self.prefix.is_empty() && self.cycle.len() == 1
    }

    /// Round graph `G(t)` for `t >= 1`.
    pub fn at(&self, t: usize) -> &DirectedMultigraph {
        assert!(t >= 1, "rounds are numbered from 1");
        if t <= self.prefix.len() {
            &self.prefix[t - 1]
        } else {
            &self.cycle[(t - 1 - self.prefix.len()) % self.cycle.len()]
        }
    }
}

/// Path composition: `(i, j)` is an edge of the product iff `i -> k` in `g1`
/// and `k -> j` in `g2` for some `k`. The result is simple.
pub fn product(g1: &DirectedMultigraph, g2: &DirectedMultigraph) -> Result<DirectedMultigraph, GraphError> {
    let n = g1.vertex_count();
    if g2.vertex_count() != n {
        return Err(GraphError::VertexCountMismatch { expected: n, found: g2.vertex_count() });
    }
    let mut set = BTreeSet::new();
    for e1 in g1.edges() {
        for &id in g2.out_edges(e1.target) {
            set.insert((e1.source, g2.edge(id).target));
        }
    }
    DirectedMultigraph::from_edge_set(n, &set)
}

/// Rows of a reachability relation as bitsets.
#[derive(Clone)]
struct Reach {
    words: usize,
    bits: Vec<u64>,
}

impl Reach {
    fn identity(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        let mut r = Reach { words, bits: vec![0; n * words] };
        for i in 0..n {
            r.bits[i * words + i / 64] |= 1 << (i % 64);
        }
        r
    }

    fn step(&self, g: &DirectedMultigraph) -> Self {
        let n = g.vertex_count();
        let w = self.words;
        let mut out = Reach { words: w, bits: vec![0; n * w] };
        for i in 0..n {
            for e in g.edges() {
                if self.bits[i * w + e.source / 64] >> (e.source % 64) & 1 == 1 {
                    out.bits[i * w + e.target / 64] |= 1 << (e.target % 64);
                }
            }
        }
        out
    }

    fn is_complete(&self, n: usize) -> bool {
        (0..n).all(|i| (0..n).all(|j| self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1))
    }
}

/// Length of the shortest window starting at round `t` whose product is
/// complete, if at most `max_len`.
pub fn window_to_complete(g: &DynamicGraph, t: usize, max_len: usize) -> Option<usize> {
    let n = g.vertex_count();
    let mut reach = Reach::identity(n);
    for len in 1..=max_len {
        reach = reach.step(g.at(t + len - 1));
        if reach.is_complete(n) {
            return Some(len);
        }
    }
    None
}

/// Smallest `D` such that `G(t) ∘ ... ∘ G(t+D-1)` is complete for every
/// `t` in `1..=horizon`; `None` if some start needs more than `horizon`
/// rounds.
pub fn dynamic_diameter(g: &DynamicGraph, horizon: usize) -> Option<usize> {
    let mut d = 1;
    for t in 1..=horizon {
        d = d.max(window_to_complete(g, t, horizon)?);
    }
    Some(d)
}
