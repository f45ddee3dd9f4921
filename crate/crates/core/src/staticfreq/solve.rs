use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::StaticError;
use crate::functions::{FrequencyFunction, Help, Output, TargetFunction};
use crate::graph::{DirectedMultigraph, Value};
use crate::linalg::{balance_matrix, gcd_all, kernel_generator, Rational};

/// How the fibre sizes relate to `z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scale {
    /// Fibre sizes are `k z` for an unknown positive integer `k`.
    Unknown,
    /// Fibre sizes are known exactly.
    Known(Vec<BigInt>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibreSolution {
    pub z: Vec<BigInt>,
    pub scale: Scale,
}

impl FibreSolution {
    fn unscaled(z: Vec<BigInt>) -> Self {
        FibreSolution { z, scale: Scale::Unknown }
    }

    pub fn cardinalities(&self) -> Option<&[BigInt]> {
        match &self.scale {
            Scale::Known(c) => Some(c),
            Scale::Unknown => None,
        }
    }
}

/// `b_i z_i = sum_j d(i,j) z_j` via the kernel of the balance matrix.
pub fn solve_od(base: &DirectedMultigraph, outdegrees: &[usize]) -> Result<FibreSolution, StaticError> {
    let m = balance_matrix(base, outdegrees)?;
    Ok(FibreSolution::unscaled(kernel_generator(&m)?))
}

/// Every out-edge of a base vertex carries a different port, so the base is
/// the target of a covering and all fibres have the same size.
pub fn solve_op(base: &DirectedMultigraph) -> Result<FibreSolution, StaticError> {
    let colors = base.colors().ok_or(StaticError::NotCovering)?;
    for v in 0..base.vertex_count() {
        let ports: BTreeSet<usize> = base.out_edges(v).iter().map(|&id| colors[id]).collect();
        if ports.len() != base.outdegree(v) {
            return Err(StaticError::NotCovering);
        }
    }
    Ok(FibreSolution::unscaled(vec![BigInt::one(); base.vertex_count()]))
}

/// Bidirectional origin: `d(i,j) z_j = d(j,i) z_i` for all pairs. Ratios are
/// propagated along a DFS spanning tree of the support, then every pair is
/// checked.
pub fn solve_sym(base: &DirectedMultigraph) -> Result<FibreSolution, StaticError> {
    let m = base.vertex_count();
    if m == 0 {
        return Err(StaticError::EmptyBase);
    }
    let d = |i: usize, j: usize| base.multiplicity(i, j);
    let mut z: Vec<Option<Rational>> = vec![None; m];
    z[0] = Some(Rational::one());
    let mut stack = vec![0];
    while let Some(p) = stack.pop() {
        for c in 0..m {
            if c == p || z[c].is_some() || (d(p, c) == 0 && d(c, p) == 0) {
                continue;
            }
            if d(p, c) == 0 || d(c, p) == 0 {
                return Err(StaticError::ZeroCrossDegree { i: p, j: c });
            }
            let zp = z[p].clone().expect("visited");
            z[c] = Some(zp * Rational::from(d(c, p)) / Rational::from(d(p, c)));
            stack.push(c);
        }
    }
    let z: Vec<Rational> = z.into_iter().collect::<Option<_>>().ok_or(StaticError::Disconnected)?;
    let z = primitive_integer_vector(&z);
    for i in 0..m {
        for j in 0..m {
            if BigInt::from(d(i, j)) * &z[j] != BigInt::from(d(j, i)) * &z[i] {
                return Err(StaticError::Unbalanced { i, j });
            }
        }
    }
    Ok(FibreSolution::unscaled(z))
}

fn primitive_integer_vector(z: &[Rational]) -> Vec<BigInt> {
    let l = z.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = z.iter().map(|r| r.numer() * &l / r.denom()).collect();
    let g = gcd_all(ints.iter());
    ints.into_iter().map(|x| (x / &g).abs()).collect()
}

/// Recover fibre sizes from the help data when possible. `leaders[c]` tells
/// whether class `c` consists of leaders.
pub fn apply_help(sol: &FibreSolution, help: Help, leaders: &[bool]) -> Result<FibreSolution, StaticError> {
    let scale = match help {
        Help::None | Help::Bound(_) => Scale::Unknown,
        Help::ExactSize(n) => {
            let total: BigInt = sol.z.iter().sum();
            let (k, r) = BigInt::from(n).div_rem(&total);
            if !r.is_zero() || k.is_zero() {
                return Err(StaticError::InconsistentHelp(format!("n = {n} is not a multiple of {total}")));
            }
            Scale::Known(sol.z.iter().map(|x| x * &k).collect())
        }
        Help::Leaders(l) => {
            let in_leaders: BigInt = sol.z.iter().zip(leaders).filter(|(_, &is)| is).map(|(x, _)| x).sum();
            if in_leaders.is_zero() {
                return Err(StaticError::InconsistentHelp("no leader class".into()));
            }
            let mut card = Vec::with_capacity(sol.z.len());
            for x in &sol.z {
                let (q, r) = (BigInt::from(l) * x).div_rem(&in_leaders);
                if !r.is_zero() {
                    return Err(StaticError::InconsistentHelp(format!("{l} leaders do not scale z = {:?}", sol.z)));
                }
                card.push(q);
            }
            Scale::Known(card)
        }
    };
    Ok(FibreSolution { z: sol.z.clone(), scale })
}

/// `f` on the vector with class value `values[c]` repeated according to the
/// fibre sizes (or to `z` when the scale is unknown).
pub fn evaluate_target(sol: &FibreSolution, values: &[Value], f: &TargetFunction) -> Result<Output, StaticError> {
    let weights = sol.cardinalities().unwrap_or(&sol.z);
    let mut counts: BTreeMap<Value, BigInt> = BTreeMap::new();
    for (v, w) in values.iter().zip(weights) {
        *counts.entry(v.clone()).or_insert_with(BigInt::zero) += w;
    }
    match sol.scale {
        Scale::Known(_) => {
            let m: BTreeMap<Value, usize> = counts
                .into_iter()
                .map(|(v, c)| c.to_usize().map(|c| (v, c)).ok_or(StaticError::TooLarge))
                .collect::<Result<_, _>>()?;
            Ok(f.evaluate_multiplicities(&m)?)
        }
        Scale::Unknown => {
            let total: BigInt = counts.values().sum();
            let nu = counts
                .into_iter()
                .map(|(v, c)| Rational::new(c, total.clone()).map(|r| (v, r)))
                .collect::<Result<BTreeMap<_, _>, _>>()
                .map_err(|_| StaticError::EmptyBase)?;
            Ok(f.evaluate_frequency(&FrequencyFunction::new(nu)?)?)
        }
    }
}
