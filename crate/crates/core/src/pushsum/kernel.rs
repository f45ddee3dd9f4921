use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::PushSumError;
use crate::graph::DirectedMultigraph;
use crate::linalg::{ratio_to_f64, Rational};

/// Exact Push-Sum with every quantity kept as an integer numerator over one
/// denominator shared by all agents. Each round multiplies the denominator
/// by the lcm of the live outdegrees, so no gcd is ever taken.
///
/// `y[i][c]` is coordinate `c` of agent `i`'s mass (one coordinate for the
/// scalar algorithm, one per value for the frequency variant) and `z[i]`
/// its weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactKernel {
    den: BigInt,
    y: Vec<Vec<BigInt>>,
    z: Vec<BigInt>,
    starts: Option<Vec<usize>>,
    round: usize,
}

impl ExactKernel {
    pub fn new(y0: &[Vec<Rational>], z0: &[Rational], starts: Option<Vec<usize>>) -> Result<Self, PushSumError> {
        let n = z0.len();
        if n == 0 {
            return Err(PushSumError::Empty);
        }
        if y0.len() != n {
            return Err(PushSumError::InputCount { expected: n, found: y0.len() });
        }
        if let Some(s) = &starts {
            if s.len() != n || s.contains(&0) {
                return Err(PushSumError::Starts);
            }
        }
        let den = y0.iter().flatten().chain(z0).fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let scale = |r: &Rational| r.numer() * (&den / r.denom());
        Ok(ExactKernel {
            y: y0.iter().map(|row| row.iter().map(scale).collect()).collect(),
            z: z0.iter().map(scale).collect(),
            den,
            starts,
            round: 0,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.z.len()
    }

    pub fn coords(&self) -> usize {
        self.y.first().map_or(0, Vec::len)
    }

    pub fn round(&self) -> usize {
        self.round
    }

    /// Bits in the shared denominator.
    pub fn denominator_bits(&self) -> u64 {
        self.den.bits()
    }

    fn active(&self, i: usize, t: usize) -> bool {
        self.starts.as_ref().is_none_or(|s| t >= s[i])
    }

    /// Round `round + 1` on `g`, with the same edge filtering as the
    /// engine's asynchronous starts.
    pub fn step(&mut self, g: &DirectedMultigraph) {
        let t = self.round + 1;
        let n = self.vertex_count();
        let active: Vec<bool> = (0..n).map(|i| self.active(i, t)).collect();
        let live = |id: usize| {
            let e = g.edge(id);
            active[e.source] && active[e.target]
        };
        let outdeg: Vec<usize> = (0..n).map(|i| g.out_edges(i).iter().filter(|&&id| live(id)).count()).collect();
        let m = outdeg.iter().filter(|&&d| d > 0).fold(BigInt::one(), |acc, &d| acc.lcm(&BigInt::from(d)));
        let share: Vec<BigInt> = outdeg.iter().map(|&d| if d > 0 { &m / d } else { BigInt::zero() }).collect();

        let coords = self.coords();
        let mut y = vec![vec![BigInt::zero(); coords]; n];
        let mut z = vec![BigInt::zero(); n];
        for j in 0..n {
            if !active[j] {
                y[j] = self.y[j].iter().map(|v| v * &m).collect();
                z[j] = &self.z[j] * &m;
                continue;
            }
            for &id in g.in_edges(j).iter().filter(|&&id| live(id)) {
                let i = g.edge(id).source;
                for (acc, v) in y[j].iter_mut().zip(&self.y[i]) {
                    *acc += v * &share[i];
                }
                z[j] += &self.z[i] * &share[i];
            }
        }
        self.y = y;
        self.z = z;
        self.den *= m;
        self.round = t;
    }

    pub fn y(&self, i: usize, c: usize) -> Rational {
        Rational::new(self.y[i][c].clone(), self.den.clone()).expect("positive denominator")
    }

    pub fn z(&self, i: usize) -> Rational {
        Rational::new(self.z[i].clone(), self.den.clone()).expect("positive denominator")
    }

    /// `x = y/z`, `None` while the weight is zero.
    pub fn x(&self, i: usize, c: usize) -> Option<Rational> {
        Rational::new(self.y[i][c].clone(), self.z[i].clone()).ok()
    }

    pub fn x_f64(&self, i: usize, c: usize) -> Option<f64> {
        (!self.z[i].is_zero()).then(|| ratio_to_f64(&self.y[i][c], &self.z[i]))
    }

    pub fn y_is_zero(&self, i: usize, c: usize) -> bool {
        self.y[i][c].is_zero()
    }

    pub fn z_is_zero(&self, i: usize) -> bool {
        self.z[i].is_zero()
    }

    /// Exact comparison of `x[i][c]` and `x[j][c]`; both weights positive.
    pub fn cmp_x(&self, i: usize, j: usize, c: usize) -> Ordering {
        (&self.y[i][c] * &self.z[j]).cmp(&(&self.y[j][c] * &self.z[i]))
    }

    /// Exact comparison of `x[i][c]` with `x` of another kernel state.
    pub fn cmp_x_with(&self, i: usize, c: usize, other: &ExactKernel, j: usize) -> Ordering {
        (&self.y[i][c] * &other.z[j]).cmp(&(&other.y[j][c] * &self.z[i]))
    }

    /// Whether `|x[i][c] - q| <= eps`; the weight must be positive.
    pub fn within(&self, i: usize, c: usize, q: &Rational, eps: &Rational) -> bool {
        let lhs = (&self.y[i][c] * q.denom() - q.numer() * &self.z[i]).abs() * eps.denom();
        let rhs = eps.numer() * &self.z[i] * q.denom();
        lhs <= rhs
    }

    pub fn total_y(&self, c: usize) -> Rational {
        let s: BigInt = self.y.iter().map(|row| &row[c]).sum();
        Rational::new(s, self.den.clone()).expect("positive denominator")
    }

    pub fn total_z(&self) -> Rational {
        let s: BigInt = self.z.iter().sum();
        Rational::new(s, self.den.clone()).expect("positive denominator")
    }

    /// Whether `sum_i y[i][c] = total` without reducing.
    pub fn y_mass_is(&self, c: usize, total: &Rational) -> bool {
        let s: BigInt = self.y.iter().map(|row| &row[c]).sum();
        s * total.denom() == total.numer() * &self.den
    }

    pub fn z_mass_is(&self, total: &Rational) -> bool {
        let s: BigInt = self.z.iter().sum();
        s * total.denom() == total.numer() * &self.den
    }
}
