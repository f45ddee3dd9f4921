//! Deterministic generators for test topologies.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{dynamic_diameter, window_to_complete, DirectedMultigraph, DynamicGraph, Edge, GraphError};

const MAX_ATTEMPTS: usize = 10_000;

/// `R^n`: clockwise edges `k -> k+1` (ids `0..n`, port 1), counter-clockwise
/// edges `k+1 -> k` (ids `n..2n`, port 2) and, if requested, self-loops
/// (ids `2n..3n`, port 3). `R^2` has doubled edges and `R^1` is one vertex
/// with two self-loops.
pub fn bidirectional_ring(n: usize, self_loops: bool) -> DirectedMultigraph {
    assert!(n >= 1);
    let mut edges: Vec<Edge> = (0..n).map(|k| Edge::new(k, (k + 1) % n)).collect();
    edges.extend((0..n).map(|k| Edge::new((k + 1) % n, k)));
    let mut ports = vec![1; n];
    ports.extend(vec![2; n]);
    if self_loops {
        edges.extend((0..n).map(|k| Edge::new(k, k)));
        ports.extend(vec![3; n]);
    }
    DirectedMultigraph::new(n, edges).and_then(|g| g.with_ports(ports)).expect("ring is well formed")
}

/// Directed ring `k -> k+1` (port 1) with optional self-loops (port 2).
pub fn directed_ring(n: usize, self_loops: bool) -> DirectedMultigraph {
    assert!(n >= 1);
    let mut edges: Vec<Edge> = (0..n).map(|k| Edge::new(k, (k + 1) % n)).collect();
    let mut ports = vec![1; n];
    if self_loops {
        edges.extend((0..n).map(|k| Edge::new(k, k)));
        ports.extend(vec![2; n]);
    }
    DirectedMultigraph::new(n, edges).and_then(|g| g.with_ports(ports)).expect("ring is well formed")
}

/// Centre 0 linked both ways to leaves `1..n`: edges `0 -> l` first, then
/// `l -> 0`, then optional self-loops. Canonically port-labeled.
pub fn star(n: usize, self_loops: bool) -> DirectedMultigraph {
    assert!(n >= 1);
    let mut edges: Vec<Edge> = (1..n).map(|l| Edge::new(0, l)).collect();
    edges.extend((1..n).map(|l| Edge::new(l, 0)));
    if self_loops {
        edges.extend((0..n).map(|v| Edge::new(v, v)));
    }
    DirectedMultigraph::new(n, edges).expect("star is well formed").with_canonical_ports()
}

/// Complete simple digraph, optionally with self-loops.
pub fn complete(n: usize, self_loops: bool) -> DirectedMultigraph {
    let set = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| self_loops || i != j).collect();
    DirectedMultigraph::from_edge_set(n, &set).expect("complete graph").with_canonical_ports()
}

/// Only self-loops.
pub fn isolated(n: usize) -> DirectedMultigraph {
    DirectedMultigraph::new(n, (0..n).map(|v| Edge::new(v, v)).collect()).expect("loops")
}

fn add_loops(set: &mut BTreeSet<(usize, usize)>, n: usize, self_loops: bool) {
    if self_loops {
        set.extend((0..n).map(|v| (v, v)));
    }
}

/// Simple digraph with each off-diagonal edge present with probability `p`,
/// resampled until strongly connected. Canonically port-labeled.
pub fn random_strongly_connected(n: usize, seed: u64, p: f64, self_loops: bool) -> Result<DirectedMultigraph, GraphError> {
    if n == 0 || !(p > 0.0 && p <= 1.0) {
        return Err(GraphError::Unsatisfiable(format!("random strongly connected graph with n={n}, p={p}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let mut set = BTreeSet::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && rng.gen_bool(p) {
                    set.insert((i, j));
                }
            }
        }
        add_loops(&mut set, n, self_loops);
        let g = DirectedMultigraph::from_edge_set(n, &set)?;
        if g.is_strongly_connected() {
            return Ok(g.with_canonical_ports());
        }
    }
    Err(GraphError::Unsatisfiable(format!("no strongly connected sample for n={n}, p={p}")))
}

/// Connected simple graph with both directions of each sampled link.
pub fn random_symmetric(n: usize, seed: u64, p: f64, self_loops: bool) -> Result<DirectedMultigraph, GraphError> {
    if n == 0 || !(p > 0.0 && p <= 1.0) {
        return Err(GraphError::Unsatisfiable(format!("random symmetric graph with n={n}, p={p}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let mut set = BTreeSet::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.gen_bool(p) {
                    set.insert((i, j));
                    set.insert((j, i));
                }
            }
        }
        add_loops(&mut set, n, self_loops);
        let g = DirectedMultigraph::from_edge_set(n, &set)?;
        if g.is_strongly_connected() {
            return Ok(g.with_canonical_ports());
        }
    }
    Err(GraphError::Unsatisfiable(format!("no connected sample for n={n}, p={p}")))
}

/// Periodic schedule of `period` random round graphs (with self-loops) whose
/// dynamic diameter, measured over one period, is exactly `d`.
///
/// Rounds are sampled one at a time and resampled until the window of length
/// `d` ending at them is complete; whole schedules are rejected if a wrapping
/// window fails or the measured diameter is smaller than `d`.
pub fn random_dynamic_with_diameter(n: usize, d: usize, seed: u64, period: usize) -> Result<DynamicGraph, GraphError> {
    if n == 0 || d == 0 || (n == 1 && d != 1) {
        return Err(GraphError::Unsatisfiable(format!("dynamic diameter {d} on {n} vertices")));
    }
    if d == 1 {
        return DynamicGraph::constant(complete(n, true));
    }
    let period = period.max(d);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'attempt: for _ in 0..MAX_ATTEMPTS {
        let p: f64 = rng.gen_range(0.1..0.6);
        let mut rounds: Vec<DirectedMultigraph> = Vec::with_capacity(period);
        while rounds.len() < period {
            let mut placed = false;
            for _ in 0..200 {
                let mut set = BTreeSet::new();
                for i in 0..n {
                    for j in 0..n {
                        if i != j && rng.gen_bool(p) {
                            set.insert((i, j));
                        }
                    }
                }
                add_loops(&mut set, n, true);
                rounds.push(DirectedMultigraph::from_edge_set(n, &set)?);
                let len = rounds.len();
                if len < d {
                    placed = true;
                    break;
                }
                let window = DynamicGraph::periodic(rounds[len - d..].to_vec())?;
                if window_to_complete(&window, 1, d).is_some() {
                    placed = true;
                    break;
                }
                rounds.pop();
            }
            if !placed {
                continue 'attempt;
            }
        }
        let g = DynamicGraph::periodic(rounds)?;
        if dynamic_diameter(&g, period) == Some(d) {
            return Ok(g);
        }
    }
    Err(GraphError::Unsatisfiable(format!("could not sample dynamic diameter {d} on {n} vertices")))
}

/// All strongly connected simple digraphs on `n` vertices without
/// self-loops, one per isomorphism class (exhaustive, intended for `n <= 4`).
pub fn strongly_connected_up_to_iso(n: usize) -> Vec<DirectedMultigraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| i != j).collect();
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let set: BTreeSet<(usize, usize)> =
            pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e).collect();
        let canon = perms
            .iter()
            .map(|perm| {
                let mut v: Vec<(usize, usize)> = set.iter().map(|&(i, j)| (perm[i], perm[j])).collect();
                v.sort_unstable();
                v
            })
            .min()
            .unwrap_or_default();
        if !seen.insert(canon) {
            continue;
        }
        let g = DirectedMultigraph::from_edge_set(n, &set).expect("pairs in range");
        if g.is_strongly_connected() {
            out.push(g);
        }
    }
    out
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_shapes() {
        let r4 = bidirectional_ring(4, false);
        assert_eq!(r4.edge_count(), 8);
        assert_eq!(bidirectional_ring(4, true).edge_count(), 12);
        let r1 = bidirectional_ring(1, false);
        assert_eq!(r1.multiplicity(0, 0), 2);
        let r2 = bidirectional_ring(2, false);
        assert_eq!(r2.multiplicity(0, 1), 2);
        assert!(r2.has_port_labeling());
    }

    #[test]
    fn star_shape() {
        let s = star(3, false);
        assert_eq!(s.edge_count(), 4);
        assert_eq!(s.outdegree(0), 2);
        assert_eq!(s.outdegree(1), 1);
        assert!(s.is_symmetric());
    }

    #[test]
    fn random_generators_are_deterministic() {
        let a = random_strongly_connected(5, 7, 0.4, false).unwrap();
        let b = random_strongly_connected(5, 7, 0.4, false).unwrap();
        assert_eq!(a, b);
        assert!(a.is_strongly_connected());
        let s = random_symmetric(5, 3, 0.4, true).unwrap();
        assert!(s.is_symmetric() && s.is_strongly_connected() && s.has_self_loops());
    }

    #[test]
    fn dynamic_generator_hits_requested_diameter() {
        for (n, d) in [(2, 1), (2, 2), (3, 2), (4, 2), (3, 3)] {
            for seed in 0..3 {
                let g = random_dynamic_with_diameter(n, d, seed, 6).unwrap();
                assert_eq!(dynamic_diameter(&g, g.period_end()), Some(d), "n={n} d={d}");
                assert_eq!(g, random_dynamic_with_diameter(n, d, seed, 6).unwrap());
            }
        }
        assert!(random_dynamic_with_diameter(1, 2, 0, 4).is_err());
        assert!(random_dynamic_with_diameter(3, 0, 0, 4).is_err());
    }

    #[test]
    fn iso_class_counts() {
        let counts: Vec<usize> = (1..=4).map(|n| strongly_connected_up_to_iso(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 5, 83]);
    }
}
