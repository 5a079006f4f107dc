//! Field-generic elimination kernels over row-major slices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub(crate) trait Arith {
    type E: Clone + PartialEq;

    fn zero(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// Multiplicative inverse; callers guarantee `a != 0`.
    fn inv(&self, a: &Self::E) -> Self::E;
}

pub(crate) struct QArith;

impl Arith for QArith {
    type E = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
}

pub(crate) struct FpArith(pub u64);

impl Arith for FpArith {
    type E = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.0
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.0 - b) % self.0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.0
    }
    fn inv(&self, a: &u64) -> u64 {
        // Fermat: a^(p-2)
        let mut base = *a % self.0;
        let mut exp = self.0 - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.0;
            }
            base = base * base % self.0;
            exp >>= 1;
        }
        acc
    }
}

pub(crate) fn matmul<A: Arith>(
    ops: &A,
    a: &[A::E],
    b: &[A::E],
    n: usize,
    k: usize,
    m: usize,
) -> Vec<A::E> {
    let mut out = vec![ops.zero(); n * m];
    for i in 0..n {
        for l in 0..k {
            let x = &a[i * k + l];
            if ops.is_zero(x) {
                continue;
            }
            for j in 0..m {
                let y = &b[l * m + j];
                if !ops.is_zero(y) {
                    out[i * m + j] = ops.add(&out[i * m + j], &ops.mul(x, y));
                }
            }
        }
    }
    out
}

/// In-place Gauss-Jordan elimination of a `rows x cols` row-major matrix,
/// pivoting only in the first `pivot_cols` columns. Pivots are chosen as the
/// first nonzero entry scanning columns left to right, rows top to bottom,
/// and are normalized to one. Returns the pivot column of each pivot row.
pub(crate) fn rref<A: Arith>(
    ops: &A,
    data: &mut [A::E],
    rows: usize,
    cols: usize,
    pivot_cols: usize,
) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !ops.is_zero(&data[i * cols + c])) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = ops.inv(&data[r * cols + c]);
        for j in c..cols {
            data[r * cols + j] = ops.mul(&data[r * cols + j], &inv);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = data[i * cols + c].clone();
            if ops.is_zero(&factor) {
                continue;
            }
            for j in c..cols {
                let t = ops.mul(&factor, &data[r * cols + j]);
                data[i * cols + j] = ops.sub(&data[i * cols + j], &t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a rational matrix by fraction-free (Bareiss) elimination on the
/// integer matrix obtained by clearing each row's denominators.
pub(crate) fn bareiss_rank(data: &[BigRational], rows: usize, cols: usize) -> usize {
    let mut m: Vec<BigInt> = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let row = &data[i * cols..(i + 1) * cols];
        let lcm = row
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        m.extend(row.iter().map(|q| q.numer() * (&lcm / q.denom())));
    }
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !m[i * cols + c].is_zero()) else {
            continue;
        };
        if p != rank {
            for j in 0..cols {
                m.swap(p * cols + j, rank * cols + j);
            }
        }
        let pivot = m[rank * cols + c].clone();
        for i in rank + 1..rows {
            let lead = m[i * cols + c].clone();
            for j in c..cols {
                let v = &pivot * &m[i * cols + j] - &lead * &m[rank * cols + j];
                // exact by Sylvester's identity
                m[i * cols + j] = v / &prev;
            }
        }
        prev = pivot;
        rank += 1;
    }
    rank
}
