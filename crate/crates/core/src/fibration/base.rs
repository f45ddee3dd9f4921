use std::collections::BTreeMap;

use crate::graph::{DirectedMultigraph, Edge, Value};

use super::{Fibration, FibrationError, GraphMorphism};

/// Coarsest partition refining `labels` in which any two vertices of a class
/// receive, for every class `K` and color `c`, the same number of edges from
/// `K` colored `c`. Returns the class of each vertex; classes are numbered
/// by `(label, smallest member)`.
pub fn coarsest_in_stable_partition<K: Ord + Clone>(g: &DirectedMultigraph, labels: &[K]) -> Vec<usize> {
    let n = g.vertex_count();
    assert_eq!(labels.len(), n, "one label per vertex");
    let mut class = rank(labels);
    let mut count = distinct(&class);
    loop {
        let sigs: Vec<(usize, Vec<(usize, usize)>)> = (0..n)
            .map(|v| {
                let mut ins: Vec<(usize, usize)> = g
                    .in_edges(v)
                    .iter()
                    .map(|&id| (class[g.edge(id).source], g.color(id).unwrap_or(0)))
                    .collect();
                ins.sort_unstable();
                (class[v], ins)
            })
            .collect();
        let next = rank(&sigs);
        let next_count = distinct(&next);
        class = next;
        if next_count == count {
            break;
        }
        count = next_count;
    }
    // canonical numbering: (label, smallest member)
    let mut keys: BTreeMap<usize, usize> = BTreeMap::new();
    for v in 0..n {
        keys.entry(class[v]).or_insert(v);
    }
    let mut order: Vec<(usize, usize)> = keys.into_iter().collect();
    order.sort_by(|a, b| labels[a.1].cmp(&labels[b.1]).then(a.1.cmp(&b.1)));
    let mut renumber = vec![0; n];
    for (new, &(old, _)) in order.iter().enumerate() {
        renumber[old] = new;
    }
    class.iter().map(|&c| renumber[c]).collect()
}

fn rank<T: Ord>(keys: &[T]) -> Vec<usize> {
    let mut sorted: Vec<&T> = keys.iter().collect();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(&k).expect("present")).collect()
}

fn distinct(class: &[usize]) -> usize {
    class.iter().max().map_or(0, |m| m + 1)
}

/// Quotient of `g` by an in-stable partition: one base vertex per class,
/// the in-edges of each class's smallest member as the base edges into it.
/// The base inherits colors, and the valuation of `g` classwise.
pub fn quotient(g: &DirectedMultigraph, class: &[usize]) -> Result<Fibration, FibrationError> {
    let n = g.vertex_count();
    let m = distinct(class);
    let mut rep = vec![usize::MAX; m];
    for v in (0..n).rev() {
        rep[class[v]] = v;
    }
    let key = |id: usize| (class[g.edge(id).source], g.color(id).unwrap_or(0), id);
    let mut base_edges = Vec::new();
    let mut base_colors = Vec::new();
    // base in-edges of class c, in (source class, color) order
    let mut base_in: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); m];
    for c in 0..m {
        let mut ins: Vec<_> = g.in_edges(rep[c]).iter().map(|&id| key(id)).collect();
        ins.sort_unstable();
        for (src, color, _) in ins {
            base_in[c].push((src, color, base_edges.len()));
            base_edges.push(Edge::new(src, c));
            base_colors.push(color);
        }
    }
    let mut base = DirectedMultigraph::new(m, base_edges)?;
    if g.colors().is_some() {
        base = base.with_colors(base_colors)?;
    }
    if let Some(val) = g.valuation() {
        base = base.with_valuation(rep.iter().map(|&r| val[r].clone()).collect::<Vec<Value>>())?;
    }
    let mut edge_map = vec![usize::MAX; g.edge_count()];
    for v in 0..n {
        let mut ins: Vec<_> = g.in_edges(v).iter().map(|&id| key(id)).collect();
        ins.sort_unstable();
        let targets = &base_in[class[v]];
        if ins.len() != targets.len() {
            return Err(FibrationError::NotStable { vertex: v });
        }
        for ((src, color, id), &(bs, bc, be)) in ins.into_iter().zip(targets) {
            if (src, color) != (bs, bc) {
                return Err(FibrationError::NotStable { vertex: v });
            }
            edge_map[id] = be;
        }
    }
    Fibration::new(g.clone(), base, GraphMorphism { vertex_map: class.to_vec(), edge_map })
}

/// Minimum base with vertices additionally separated by `labels`
/// (for example input value and outdegree).
pub fn minimum_base_with<K: Ord + Clone>(g: &DirectedMultigraph, labels: &[K]) -> Result<Fibration, FibrationError> {
    if !g.is_strongly_connected() {
        return Err(FibrationError::NotStronglyConnected);
    }
    quotient(g, &coarsest_in_stable_partition(g, labels))
}

fn valuation_labels(g: &DirectedMultigraph) -> Vec<Option<Value>> {
    match g.valuation() {
        Some(v) => v.iter().cloned().map(Some).collect(),
        None => vec![None; g.vertex_count()],
    }
}

/// The fibration-prime base of a strongly connected graph, respecting its
/// valuation and coloring.
pub fn minimum_base(g: &DirectedMultigraph) -> Result<(DirectedMultigraph, Fibration), FibrationError> {
    let f = minimum_base_with(g, &valuation_labels(g))?;
    Ok((f.base().clone(), f))
}

pub fn is_fibration_prime(g: &DirectedMultigraph) -> bool {
    distinct(&coarsest_in_stable_partition(g, &valuation_labels(g))) == g.vertex_count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;

    #[test]
    fn ring_collapses_to_one_vertex() {
        for loops in [false, true] {
            let (b, f) = minimum_base(&generate::bidirectional_ring(6, loops)).unwrap();
            assert_eq!(b.vertex_count(), 1);
            assert_eq!(b.multiplicity(0, 0), if loops { 3 } else { 2 });
            assert_eq!(f.fibre_sizes(), vec![6]);
        }
    }

    #[test]
    fn star_base() {
        let (b, f) = minimum_base(&generate::star(3, false).without_colors()).unwrap();
        assert_eq!(b.vertex_count(), 2);
        assert_eq!(b.multiplicity(1, 0), 2);
        assert_eq!(b.multiplicity(0, 1), 1);
        assert_eq!(f.fibre_sizes(), vec![1, 2]);
        assert!(!f.is_covering());
    }

    #[test]
    fn primality() {
        let loop1 = DirectedMultigraph::from_pairs(1, &[(0, 0)]).unwrap();
        assert!(is_fibration_prime(&loop1));
        let r6 = generate::bidirectional_ring(6, false).without_colors();
        assert!(!is_fibration_prime(&r6));
        let valued = r6.with_valuation((0..6).map(Value::int).collect()).unwrap();
        assert!(is_fibration_prime(&valued));
        let (b, f) = minimum_base(&valued).unwrap();
        assert_eq!(b.vertex_count(), 6);
        assert_eq!(f.vertex_map(), &[0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn not_strongly_connected_rejected() {
        let g = DirectedMultigraph::from_pairs(2, &[(0, 1)]).unwrap();
        assert_eq!(minimum_base(&g).unwrap_err(), FibrationError::NotStronglyConnected);
    }

    #[test]
    fn classes_sorted_by_label_then_member() {
        let g = generate::bidirectional_ring(4, false)
            .with_valuation(vec![Value::token("b"), Value::token("a"), Value::token("b"), Value::token("a")])
            .unwrap();
        let (b, f) = minimum_base(&g).unwrap();
        assert_eq!(b.valuation().unwrap(), &[Value::token("a"), Value::token("b")]);
        assert_eq!(f.vertex_map(), &[1, 0, 1, 0]);
    }
}
