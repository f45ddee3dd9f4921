use super::{LinalgError, RatMatrix, Rational};
use crate::graph::{DirectedMultigraph, Edge};

/// Dobrushin's ergodic coefficient `1 - min_{i != j} sum_k min(P[i][k], P[j][k])`
/// of a row-stochastic matrix. A 1x1 matrix has no row pairs and is reported
/// as fully contracting (0).
pub fn dobrushin(p: &RatMatrix) -> Result<Rational, LinalgError> {
    if !p.is_row_stochastic() {
        return Err(LinalgError::NotStochastic);
    }
    let n = p.rows();
    if n < 2 {
        return Ok(Rational::zero());
    }
    let mut best: Option<Rational> = None;
    for i in 0..n {
        for j in (i + 1)..n {
            let overlap: Rational = (0..n).map(|k| std::cmp::min(&p[(i, k)], &p[(j, k)])).sum();
            if best.as_ref().is_none_or(|b| &overlap < b) {
                best = Some(overlap);
            }
        }
    }
    Ok(Rational::one() - best.expect("n >= 2"))
}

/// `max(v) - min(v)`, the seminorm contracted by stochastic matrices.
pub fn spread(v: &[Rational]) -> Rational {
    match (v.iter().max(), v.iter().min()) {
        (Some(hi), Some(lo)) => hi - lo,
        _ => Rational::zero(),
    }
}

/// Backward product `A(t') x ... x A(t)` of a sequence given in time order
/// `[A(t), A(t+1), ..., A(t')]`.
pub fn backward_product(seq: &[RatMatrix]) -> Result<RatMatrix, LinalgError> {
    let first = seq.first().ok_or(LinalgError::Empty)?;
    let mut acc = first.clone();
    for m in &seq[1..] {
        acc = m.mul(&acc)?;
    }
    Ok(acc)
}

/// Every positive entry of `m` is at least `alpha`.
pub fn is_alpha_safe(m: &RatMatrix, alpha: &Rational) -> bool {
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| !m[(i, j)].is_positive() || &m[(i, j)] >= alpha))
}

/// Graph with an edge `j -> i` for every positive entry `A[i][j]`.
pub fn associated_graph(m: &RatMatrix) -> DirectedMultigraph {
    let n = m.rows();
    let mut edges = Vec::new();
    for j in 0..n {
        for i in 0..n {
            if m[(i, j)].is_positive() {
                edges.push(Edge::new(j, i));
            }
        }
    }
    DirectedMultigraph::new(n, edges).expect("indices in range")
}

/// Push-Sum round matrix: `A[i][j] = 1/outdeg(j)` for every edge `j -> i`,
/// counting parallel edges. Column-stochastic whenever every vertex has an
/// out-edge.
pub fn pushsum_matrix(g: &DirectedMultigraph) -> RatMatrix {
    let n = g.vertex_count();
    let mut a = RatMatrix::filled(n, n, Rational::zero());
    for e in g.edges() {
        let share = Rational::frac(1, g.outdegree(e.source) as i64);
        a[(e.target, e.source)] += &share;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::frac(p, q)
    }

    fn m(rows: Vec<Vec<Rational>>) -> RatMatrix {
        RatMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn dobrushin_examples() {
        assert_eq!(dobrushin(&RatMatrix::identity(2)).unwrap(), r(1, 1));
        let half = m(vec![vec![r(1, 2), r(1, 2)], vec![r(1, 2), r(1, 2)]]);
        assert_eq!(dobrushin(&half).unwrap(), r(0, 1));
        let p = m(vec![vec![r(1, 2), r(1, 2)], vec![r(1, 4), r(3, 4)]]);
        assert_eq!(dobrushin(&p).unwrap(), r(1, 4));
        assert_eq!(dobrushin(&RatMatrix::identity(1)).unwrap(), r(0, 1));
        let bad = m(vec![vec![r(1, 2), r(1, 4)], vec![r(1, 2), r(1, 2)]]);
        assert_eq!(dobrushin(&bad), Err(LinalgError::NotStochastic));
    }

    #[test]
    fn backward_product_examples() {
        let a = m(vec![vec![r(1, 1), r(0, 1)], vec![r(0, 1), r(1, 1)]]);
        assert_eq!(backward_product(std::slice::from_ref(&a)).unwrap(), a);
        // permutations: first (0 1 2) -> (1 2 0), then swap 0 and 1
        let p1 = RatMatrix::from_fn(3, 3, |i, j| if i == (j + 1) % 3 { r(1, 1) } else { r(0, 1) });
        let p2 = RatMatrix::from_fn(3, 3, |i, j| {
            let img = [1, 0, 2][j];
            if i == img { r(1, 1) } else { r(0, 1) }
        });
        let prod = backward_product(&[p1.clone(), p2.clone()]).unwrap();
        // e_j -> p1 -> e_{j+1} -> p2 -> e_{swap(j+1)}
        for j in 0..3 {
            let target = [1, 0, 2][(j + 1) % 3];
            for i in 0..3 {
                assert_eq!(prod[(i, j)], if i == target { r(1, 1) } else { r(0, 1) });
            }
        }
        let c1 = m(vec![vec![r(1, 2), r(1, 3)], vec![r(1, 2), r(2, 3)]]);
        let c2 = m(vec![vec![r(1, 4), r(1, 1)], vec![r(3, 4), r(0, 1)]]);
        assert!(backward_product(&[c1, c2]).unwrap().is_column_stochastic());
        assert_eq!(backward_product(&[]), Err(LinalgError::Empty));
    }

    #[test]
    fn alpha_safety_examples() {
        assert!(is_alpha_safe(&RatMatrix::identity(3), &r(1, 1)));
        let half = m(vec![vec![r(1, 2), r(1, 2)], vec![r(1, 2), r(1, 2)]]);
        assert!(is_alpha_safe(&half, &r(1, 2)));
        let thirds = m(vec![vec![r(1, 3), r(2, 3)], vec![r(0, 1), r(1, 1)]]);
        assert!(!is_alpha_safe(&thirds, &r(1, 2)));
    }

    #[test]
    fn pushsum_matrix_is_column_stochastic() {
        let g = DirectedMultigraph::new(
            3,
            vec![Edge::new(0, 0), Edge::new(1, 1), Edge::new(2, 2), Edge::new(0, 1), Edge::new(0, 2), Edge::new(2, 0)],
        )
        .unwrap();
        let a = pushsum_matrix(&g);
        assert!(a.is_column_stochastic());
        assert_eq!(a[(1, 0)], r(1, 3));
        assert_eq!(associated_graph(&a).simple_edge_set(), g.simple_edge_set());
    }
}
