use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::linalg::Rational;

/// `Q_N = { p/q : 0 <= p <= q <= N }`, sorted and deduplicated.
pub fn q_n(n: usize) -> Vec<Rational> {
    let mut out: Vec<Rational> = (1..=n.max(1))
        .flat_map(|q| (0..=q).map(move |p| Rational::frac(p as i64, q as i64)))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Candidates `floor(xq)/q` and `(floor(xq)+1)/q`, clamped into `[0, 1]`.
fn candidates(floor_xq: &BigInt, q: usize) -> [Rational; 2] {
    let q_big = BigInt::from(q);
    let clamp = |p: BigInt| -> Rational {
        let p = if p < BigInt::zero() { BigInt::zero() } else if p > q_big { q_big.clone() } else { p };
        Rational::new(p, q_big.clone()).expect("q >= 1")
    };
    [clamp(floor_xq.clone()), clamp(floor_xq + 1)]
}

/// Element of `Q_N` nearest to `x`; ties go to the smaller rational.
pub fn nearest_in_qn(x: &Rational, n: usize) -> Rational {
    nearest_in_qn_clear(x.to_f64(), n).unwrap_or_else(|| nearest_in_qn_exact(x, n))
}

/// Nearest element of `Q_N` to any rational within `1e-12` of `xf`, when
/// the winner is clear by a margin far above rounding error.
pub fn nearest_in_qn_clear(xf: f64, n: usize) -> Option<Rational> {
    let n = n.max(1);
    if !xf.is_finite() || !(-1.0..=2.0).contains(&xf) {
        return None;
    }
    let mut cands: Vec<(f64, usize, usize)> = Vec::with_capacity(2 * n);
    for q in 1..=n {
        let base = (xf * q as f64).floor() as i64;
        for p in [base, base + 1] {
            let p = p.clamp(0, q as i64) as usize;
            cands.push(((xf - p as f64 / q as f64).abs(), p, q));
        }
    }
    let &(bd, bp, bq) = cands.iter().min_by(|a, b| a.0.total_cmp(&b.0)).expect("n >= 1");
    let second = cands
        .iter()
        .filter(|&&(_, p, q)| p * bq != bp * q)
        .map(|c| c.0)
        .fold(f64::INFINITY, f64::min);
    (second - bd > 1e-9).then(|| Rational::frac(bp as i64, bq as i64))
}

pub fn nearest_in_qn_exact(x: &Rational, n: usize) -> Rational {
    let mut best: Option<(Rational, Rational)> = None;
    for q in 1..=n.max(1) {
        let fl = (x * &Rational::from(q)).floor();
        for c in candidates(&fl, q) {
            let d = (x - &c).abs();
            let better = match &best {
                None => true,
                Some((bd, bc)) => d < *bd || (d == *bd && c < *bc),
            };
            if better {
                best = Some((d, c));
            }
        }
    }
    best.expect("q = 1 always contributes").1
}

/// Nearest element of `Q_N` to a double.
pub fn nearest_in_qn_f64(x: f64, n: usize) -> Rational {
    match Rational::from_f64(x) {
        Some(r) => nearest_in_qn(&r, n),
        None if x > 0.0 => Rational::one(),
        None => Rational::zero(),
    }
}

/// Integer nearest to `x` if `x` lies within `1/3` of it.
pub fn settled_integer(x: &Rational) -> Option<BigInt> {
    let k = x.round_half_up();
    let gap = (x - &Rational::from(k.clone())).abs();
    (gap < Rational::frac(1, 3)).then_some(k)
}

pub fn settled_usize(x: &Rational) -> Option<usize> {
    settled_integer(x).and_then(|k| k.to_usize())
}
