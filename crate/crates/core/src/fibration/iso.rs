use crate::graph::DirectedMultigraph;

/// A vertex permutation `perm` with `perm[v]` in `h` for `v` in `g` that maps
/// the edge multiset, valuation and colors of `g` onto those of `h`.
/// Exhaustive search with degree pruning; meant for small graphs.
pub fn find_isomorphism(g: &DirectedMultigraph, h: &DirectedMultigraph) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    if n != h.vertex_count() || g.edge_count() != h.edge_count() {
        return None;
    }
    if g.valuation().is_some() != h.valuation().is_some() || g.colors().is_some() != h.colors().is_some() {
        return None;
    }
    let signature = |x: &DirectedMultigraph, v: usize| {
        (x.indegree(v), x.outdegree(v), x.multiplicity(v, v), x.valuation().map(|val| val[v].clone()))
    };
    let edge_key = |x: &DirectedMultigraph, perm: Option<&[usize]>| {
        let mut keys: Vec<(usize, usize, usize)> = x
            .edges()
            .iter()
            .enumerate()
            .map(|(id, e)| {
                let (s, t) = match perm {
                    Some(p) => (p[e.source], p[e.target]),
                    None => (e.source, e.target),
                };
                (s, t, x.color(id).unwrap_or(0))
            })
            .collect();
        keys.sort_unstable();
        keys
    };
    let target = edge_key(h, None);
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn search(
        v: usize,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        ok: &dyn Fn(usize, usize, &[usize]) -> bool,
        done: &dyn Fn(&[usize]) -> bool,
    ) -> bool {
        if v == perm.len() {
            return done(perm);
        }
        for w in 0..perm.len() {
            if used[w] || !ok(v, w, perm) {
                continue;
            }
            perm[v] = w;
            used[w] = true;
            if search(v + 1, perm, used, ok, done) {
                return true;
            }
            used[w] = false;
        }
        perm[v] = usize::MAX;
        false
    }

    let ok = |v: usize, w: usize, perm: &[usize]| {
        signature(g, v) == signature(h, w)
            && (0..v).all(|u| g.multiplicity(u, v) == h.multiplicity(perm[u], w) && g.multiplicity(v, u) == h.multiplicity(w, perm[u]))
    };
    let done = |perm: &[usize]| edge_key(g, Some(perm)) == target;
    if search(0, &mut perm, &mut used, &ok, &done) {
        Some(perm)
    } else {
        None
    }
}

pub fn are_isomorphic(g: &DirectedMultigraph, h: &DirectedMultigraph) -> bool {
    find_isomorphism(g, h).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;

    #[test]
    fn permuted_graphs_are_isomorphic() {
        let g = generate::random_strongly_connected(6, 11, 0.4, true).unwrap();
        let p = g.permuted(&[3, 5, 0, 1, 4, 2]);
        let perm = find_isomorphism(&g, &p).unwrap();
        assert_eq!(g.permuted(&perm).simple_edge_set(), p.simple_edge_set());
        assert!(!are_isomorphic(&generate::directed_ring(4, false), &generate::bidirectional_ring(2, false)));
        assert!(are_isomorphic(&generate::star(4, false), &generate::star(4, false).permuted(&[2, 0, 1, 3])));
    }
}
