use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{gcd_all, lcm_all};
use super::{IntMatrix, Matrix};
use crate::graph::DirectedMultigraph;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KernelError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("kernel has dimension {0}, expected exactly 1")]
    Dimension(usize),
    #[error("kernel is one-dimensional but its generator {0:?} has entries of both signs or zeros")]
    NoPositiveVector(Vec<BigInt>),
    #[error("outdegree valuation has {found} entries for a base with {expected} vertices")]
    MissingValuation { expected: usize, found: usize },
}

/// Square matrix of the fibre balance system of an outdegree-valued base:
/// `M[i][j] = d(i,j)` off the diagonal and `M[i][i] = d(i,i) - b[i]`, where
/// `d(i,j)` counts the base edges from `i` to `j`.
pub fn balance_matrix(base: &DirectedMultigraph, outdegrees: &[usize]) -> Result<IntMatrix, KernelError> {
    let m = base.vertex_count();
    if outdegrees.len() != m {
        return Err(KernelError::MissingValuation { expected: m, found: outdegrees.len() });
    }
    let mut out = Matrix::filled(m, m, BigInt::zero());
    for e in base.edges() {
        out[(e.source, e.target)] += 1;
    }
    for (i, &b) in outdegrees.iter().enumerate() {
        out[(i, i)] -= b;
    }
    Ok(out)
}

/// Integer row echelon form where every pivot column is zero outside its
/// pivot row. Rows are kept primitive (gcd 1) to bound coefficient growth.
/// Returns the reduced rows and the `(row, column)` pivot positions.
fn integer_reduce(m: &IntMatrix) -> (Vec<Vec<BigInt>>, Vec<(usize, usize)>) {
    let mut rows = m.to_rows();
    let ncols = m.cols();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..ncols {
        let Some(p) = (next..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next, p);
        let pivot_row = rows[next].clone();
        let pv = pivot_row[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == next || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = &*x * &pv - &factor * y;
            }
            make_primitive(row);
        }
        make_primitive(&mut rows[next]);
        pivots.push((next, col));
        next += 1;
        if next == rows.len() {
            break;
        }
    }
    (rows, pivots)
}

fn make_primitive(row: &mut [BigInt]) {
    let g = gcd_all(row.iter());
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

pub fn rank(m: &IntMatrix) -> usize {
    integer_reduce(m).1.len()
}

pub fn nullity(m: &IntMatrix) -> usize {
    m.cols() - rank(m)
}

/// The unique positive integer vector with coprime entries spanning the
/// kernel of `m`, which must be one-dimensional.
pub fn kernel_generator(m: &IntMatrix) -> Result<Vec<BigInt>, KernelError> {
    if !m.is_square() {
        return Err(KernelError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.cols();
    let (rows, pivots) = integer_reduce(m);
    let nullity = n - pivots.len();
    if nullity != 1 {
        return Err(KernelError::Dimension(nullity));
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free = (0..n).find(|c| !pivot_cols.contains(c)).expect("one free column");

    // p_r * x_c + a_rf * x_free = 0 for every pivot row; pick x_free so all
    // pivot unknowns come out integral.
    let scale = lcm_all(pivots.iter().map(|&(r, c)| &rows[r][c])).abs();
    let mut z = vec![BigInt::zero(); n];
    z[free] = scale.clone();
    for &(r, c) in &pivots {
        let num = -(&rows[r][free] * &scale);
        let (q, rem) = num.div_rem(&rows[r][c]);
        debug_assert!(rem.is_zero());
        z[c] = q;
    }
    let g = gcd_all(z.iter());
    for x in z.iter_mut() {
        *x = &*x / &g;
    }
    if z.iter().all(|x| x.is_negative()) {
        for x in z.iter_mut() {
            *x = -&*x;
        }
    }
    if z.iter().all(|x| x.is_positive()) {
        Ok(z)
    } else {
        Err(KernelError::NoPositiveVector(z))
    }
}

/// Checkable conclusion of the Perron–Frobenius step for a balance matrix:
/// `P = M + alpha I` is non-negative with a positive diagonal, the kernel of
/// `M` is one-dimensional and spanned by a positive vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerronReport {
    pub alpha: BigInt,
    pub shifted_nonnegative: bool,
    pub kernel_dimension: usize,
    pub generator: Result<Vec<BigInt>, KernelError>,
}

impl PerronReport {
    pub fn holds(&self) -> bool {
        self.shifted_nonnegative && self.kernel_dimension == 1 && self.generator.is_ok()
    }
}

pub fn check_perron(m: &IntMatrix) -> Result<PerronReport, KernelError> {
    if !m.is_square() {
        return Err(KernelError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let min_diag = (0..n).map(|i| m[(i, i)].clone()).min().unwrap_or_else(BigInt::zero);
    let alpha = BigInt::one() - min_diag;
    let shifted_nonnegative = (0..n).all(|i| {
        (0..n).all(|j| {
            let p = if i == j { &m[(i, j)] + &alpha } else { m[(i, j)].clone() };
            if i == j {
                p.is_positive()
            } else {
                !p.is_negative()
            }
        })
    });
    Ok(PerronReport {
        alpha,
        shifted_nonnegative,
        kernel_dimension: nullity(m),
        generator: kernel_generator(m),
    })
}
