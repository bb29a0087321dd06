//! Exact primal simplex on `max c·x, A x <= b, x >= 0` with `b >= 0`.
//!
//! The tableau is kept integral with fraction-free (Bareiss) pivoting: the
//! true tableau is the stored one divided by the last pivot, which stays
//! positive. Bland's rule picks entering and leaving variables, so the pivot
//! sequence is deterministic and cannot cycle. The solver first runs on
//! checked `i128` and reruns on big integers if anything overflows.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub(crate) trait Exact: Clone + Ord + std::fmt::Debug {
    fn from_i64(v: i64) -> Self;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn div_exact(&self, o: &Self) -> Self;
    fn sign(&self) -> i8;
    fn big(&self) -> BigInt;
}

impl Exact for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        debug_assert_eq!(self % o, 0);
        self / o
    }
    fn sign(&self) -> i8 {
        self.signum() as i8
    }
    fn big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Exact for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        debug_assert!((self % o).is_zero());
        self / o
    }
    fn sign(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
    fn big(&self) -> BigInt {
        self.clone()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum LpOutcome {
    Optimal {
        value: BigRational,
        /// Primal values of the structural variables.
        x: Vec<BigRational>,
        /// Dual values, one per constraint row.
        y: Vec<BigRational>,
        pivots: usize,
    },
    Unbounded,
}

struct Overflow;

/// Solves `max c·x` subject to `a x <= b`, `x >= 0`; requires `b >= 0`.
pub(crate) fn maximize(a: &[Vec<i64>], b: &[i64], c: &[i64]) -> LpOutcome {
    assert!(b.iter().all(|&v| v >= 0), "origin must be feasible");
    match run::<i128>(a, b, c) {
        Ok(out) => out,
        Err(Overflow) => run::<BigInt>(a, b, c).unwrap_or_else(|_| unreachable!()),
    }
}

fn run<T: Exact>(a: &[Vec<i64>], b: &[i64], c: &[i64]) -> Result<LpOutcome, Overflow> {
    let m = a.len();
    let n = c.len();
    let width = n + m + 1;
    let rhs = n + m;
    let zero = T::from_i64(0);
    let mut t: Vec<Vec<T>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let mut row = vec![zero.clone(); width];
        for j in 0..n {
            row[j] = T::from_i64(a[i][j]);
        }
        row[n + i] = T::from_i64(1);
        row[rhs] = T::from_i64(b[i]);
        t.push(row);
    }
    let mut obj = vec![zero.clone(); width];
    for j in 0..n {
        obj[j] = T::from_i64(-c[j]);
    }
    t.push(obj);
    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut d = T::from_i64(1);
    let mut pivots = 0;
    while let Some(enter) = (0..n + m).find(|&j| t[m][j].sign() < 0) {
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if t[i][enter].sign() <= 0 {
                continue;
            }
            leave = match leave {
                None => Some(i),
                Some(r) => {
                    // compare t[i][rhs]/t[i][enter] with t[r][rhs]/t[r][enter]
                    let lhs = t[i][rhs].mul(&t[r][enter]).ok_or(Overflow)?;
                    let rhs_v = t[r][rhs].mul(&t[i][enter]).ok_or(Overflow)?;
                    if lhs < rhs_v || (lhs == rhs_v && basis[i] < basis[r]) {
                        Some(i)
                    } else {
                        Some(r)
                    }
                }
            };
        }
        let Some(r) = leave else {
            return Ok(LpOutcome::Unbounded);
        };
        let p = t[r][enter].clone();
        for i in 0..=m {
            if i == r {
                continue;
            }
            let f = t[i][enter].clone();
            // rows i and r are both read, so index rather than iterate
            #[allow(clippy::needless_range_loop)]
            for k in 0..width {
                let left = p.mul(&t[i][k]).ok_or(Overflow)?;
                let right = f.mul(&t[r][k]).ok_or(Overflow)?;
                t[i][k] = left.sub(&right).ok_or(Overflow)?.div_exact(&d);
            }
        }
        d = p;
        basis[r] = enter;
        pivots += 1;
    }
    let den = d.big();
    let frac = |v: &T| BigRational::new(v.big(), den.clone());
    let mut x = vec![BigRational::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = frac(&t[i][rhs]);
        }
    }
    let y = (0..m).map(|i| frac(&t[m][n + i])).collect();
    Ok(LpOutcome::Optimal { value: frac(&t[m][rhs]), x, y, pivots })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn small_textbook_problem() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), value 36
        let a = vec![vec![1, 0], vec![0, 2], vec![3, 2]];
        let out = maximize(&a, &[4, 12, 18], &[3, 5]);
        let LpOutcome::Optimal { value, x, y, .. } = out else { panic!() };
        assert_eq!(value, q(36, 1));
        assert_eq!(x, vec![q(2, 1), q(6, 1)]);
        // strong duality
        let dual: BigRational = y.iter().zip([4, 12, 18]).map(|(v, b)| v * q(b, 1)).sum();
        assert_eq!(dual, value);
    }

    #[test]
    fn unbounded_detected() {
        let a = vec![vec![1, -1]];
        assert_eq!(maximize(&a, &[1], &[0, 1]), LpOutcome::Unbounded);
    }

    #[test]
    fn fractional_optimum() {
        // max x + y, 2x + y <= 1, x + 3y <= 1 -> x = 2/5, y = 1/5
        let a = vec![vec![2, 1], vec![1, 3]];
        let LpOutcome::Optimal { value, x, .. } = maximize(&a, &[1, 1], &[1, 1]) else { panic!() };
        assert_eq!(x, vec![q(2, 5), q(1, 5)]);
        assert_eq!(value, q(3, 5));
    }

    #[test]
    fn big_integer_path_agrees() {
        let a = vec![vec![7, 3, -2], vec![1, 9, 4], vec![5, -1, 6]];
        let b = [11, 13, 17];
        let c = [2, 3, 1];
        let small = run::<i128>(&a, &b, &c).ok().unwrap();
        let big = run::<BigInt>(&a, &b, &c).ok().unwrap();
        assert_eq!(small, big);
    }
}
