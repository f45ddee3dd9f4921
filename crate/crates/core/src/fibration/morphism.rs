use crate::graph::{generate, DirectedMultigraph};

use super::FibrationError;

/// Vertex and edge maps from a graph `G` to a graph `B`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphMorphism {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

impl GraphMorphism {
    pub fn identity(g: &DirectedMultigraph) -> Self {
        GraphMorphism { vertex_map: (0..g.vertex_count()).collect(), edge_map: (0..g.edge_count()).collect() }
    }
}

/// Explains why a morphism is not a fibration `G -> B`.
pub fn check_fibration(m: &GraphMorphism, g: &DirectedMultigraph, b: &DirectedMultigraph) -> Result<(), FibrationError> {
    check_homomorphism(m, g, b)?;
    check_surjective(m, b)?;
    for i in 0..g.vertex_count() {
        check_lift(g.in_edges(i), b.in_edges(m.vertex_map[i]), &m.edge_map, i, true)?;
    }
    Ok(())
}

pub fn is_fibration(m: &GraphMorphism, g: &DirectedMultigraph, b: &DirectedMultigraph) -> bool {
    check_fibration(m, g, b).is_ok()
}

fn check_homomorphism(m: &GraphMorphism, g: &DirectedMultigraph, b: &DirectedMultigraph) -> Result<(), FibrationError> {
    if m.vertex_map.len() != g.vertex_count() || m.edge_map.len() != g.edge_count() {
        return Err(FibrationError::MapLength);
    }
    if m.vertex_map.iter().any(|&v| v >= b.vertex_count()) || m.edge_map.iter().any(|&e| e >= b.edge_count()) {
        return Err(FibrationError::OutOfRange);
    }
    for (id, e) in g.edges().iter().enumerate() {
        let be = b.edge(m.edge_map[id]);
        if be.source != m.vertex_map[e.source] || be.target != m.vertex_map[e.target] {
            return Err(FibrationError::NotHomomorphism { edge: id });
        }
    }
    match (g.valuation(), b.valuation()) {
        (None, None) => {}
        (Some(vg), Some(vb)) => {
            if let Some(i) = (0..g.vertex_count()).find(|&i| vg[i] != vb[m.vertex_map[i]]) {
                return Err(FibrationError::ValuationMismatch { vertex: i });
            }
        }
        _ => return Err(FibrationError::ValuationMismatch { vertex: 0 }),
    }
    match (g.colors(), b.colors()) {
        (None, None) => {}
        (Some(cg), Some(cb)) => {
            if let Some(id) = (0..g.edge_count()).find(|&id| cg[id] != cb[m.edge_map[id]]) {
                return Err(FibrationError::ColorMismatch { edge: id });
            }
        }
        _ => return Err(FibrationError::ColorMismatch { edge: 0 }),
    }
    Ok(())
}

fn check_surjective(m: &GraphMorphism, b: &DirectedMultigraph) -> Result<(), FibrationError> {
    let mut hit_v = vec![false; b.vertex_count()];
    let mut hit_e = vec![false; b.edge_count()];
    m.vertex_map.iter().for_each(|&v| hit_v[v] = true);
    m.edge_map.iter().for_each(|&e| hit_e[e] = true);
    if hit_v.iter().all(|&x| x) && hit_e.iter().all(|&x| x) {
        Ok(())
    } else {
        Err(FibrationError::NotSurjective)
    }
}

/// The edge map restricted to `local` must hit every edge of `base_local`
/// exactly once.
fn check_lift(local: &[usize], base_local: &[usize], edge_map: &[usize], vertex: usize, incoming: bool) -> Result<(), FibrationError> {
    for &be in base_local {
        let count = local.iter().filter(|&&e| edge_map[e] == be).count();
        if count != 1 {
            return Err(FibrationError::Lift { base_edge: be, vertex, count, incoming });
        }
    }
    if local.len() != base_local.len() {
        // something in `local` maps outside the base neighbourhood
        return Err(FibrationError::Lift { base_edge: usize::MAX, vertex, count: local.len(), incoming });
    }
    Ok(())
}

/// A verified fibration `source -> base` with its fibres.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fibration {
    source: DirectedMultigraph,
    base: DirectedMultigraph,
    morphism: GraphMorphism,
    fibres: Vec<Vec<usize>>,
}

impl Fibration {
    pub fn new(source: DirectedMultigraph, base: DirectedMultigraph, morphism: GraphMorphism) -> Result<Self, FibrationError> {
        check_fibration(&morphism, &source, &base)?;
        let mut fibres = vec![Vec::new(); base.vertex_count()];
        for (v, &c) in morphism.vertex_map.iter().enumerate() {
            fibres[c].push(v);
        }
        Ok(Fibration { source, base, morphism, fibres })
    }

    pub fn source(&self) -> &DirectedMultigraph {
        &self.source
    }

    pub fn base(&self) -> &DirectedMultigraph {
        &self.base
    }

    pub fn morphism(&self) -> &GraphMorphism {
        &self.morphism
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.morphism.vertex_map
    }

    pub fn edge_map(&self) -> &[usize] {
        &self.morphism.edge_map
    }

    /// `fibres()[c]` lists the vertices mapped to base vertex `c`, ascending.
    pub fn fibres(&self) -> &[Vec<usize>] {
        &self.fibres
    }

    pub fn fibre_sizes(&self) -> Vec<usize> {
        self.fibres.iter().map(Vec::len).collect()
    }

    /// Out-edges lift uniquely too.
    pub fn is_covering(&self) -> bool {
        (0..self.source.vertex_count()).all(|i| {
            check_lift(
                self.source.out_edges(i),
                self.base.out_edges(self.morphism.vertex_map[i]),
                &self.morphism.edge_map,
                i,
                false,
            )
            .is_ok()
        })
    }

    /// Copies base states fibrewise onto the source graph.
    pub fn lift_state<S: Clone>(&self, base_state: &[S]) -> Vec<S> {
        lift_state(&self.morphism.vertex_map, base_state)
    }
}

pub fn lift_state<S: Clone>(vertex_map: &[usize], base_state: &[S]) -> Vec<S> {
    vertex_map.iter().map(|&c| base_state[c].clone()).collect()
}

/// `R^n -> R^p`, `i -> i mod p`, between bidirectional rings built by
/// [`generate::bidirectional_ring`].
pub fn ring_fibration(n: usize, p: usize, self_loops: bool) -> Result<Fibration, FibrationError> {
    if p == 0 || !n.is_multiple_of(p) {
        return Err(FibrationError::Divisibility { n, p });
    }
    let g = generate::bidirectional_ring(n, self_loops);
    let b = generate::bidirectional_ring(p, self_loops);
    let vertex_map = (0..n).map(|i| i % p).collect();
    let mut edge_map: Vec<usize> = (0..n).map(|k| k % p).collect();
    edge_map.extend((0..n).map(|k| p + k % p));
    if self_loops {
        edge_map.extend((0..n).map(|k| 2 * p + k % p));
    }
    Fibration::new(g, b, GraphMorphism { vertex_map, edge_map })
}
