use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

use super::arith::{self, Arith, FpArith, QArith};
use super::field::{Field, Scalar};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Store {
    Q(Vec<BigRational>),
    Fp(Vec<u64>),
}

/// Dense row-major matrix with exact entries. Matrices act on column
/// vectors, so "`g` after `f`" is the product `g * f`.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    store: Store,
}

macro_rules! dispatch {
    ($field:expr, $ops:ident => $body:expr, $fops:ident => $fbody:expr) => {
        match $field {
            Field::Rationals => {
                let $ops = QArith;
                $body
            }
            Field::Prime(p) => {
                let $fops = FpArith(p.get());
                $fbody
            }
        }
    };
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        let store = match field {
            Field::Rationals => Store::Q(vec![BigRational::zero(); rows * cols]),
            Field::Prime(_) => Store::Fp(vec![0; rows * cols]),
        };
        Matrix { field, rows, cols, store }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set_int(i, i, 1);
        }
        m
    }

    /// Builds a matrix from row-major integers, reduced into the field.
    ///
    /// Panics if `data.len() != rows * cols`.
    pub fn from_ints(field: Field, rows: usize, cols: usize, data: &[i64]) -> Matrix {
        assert_eq!(data.len(), rows * cols, "entry count must be rows * cols");
        let mut m = Matrix::zeros(field, rows, cols);
        for (k, &v) in data.iter().enumerate() {
            m.set_int(k / cols.max(1), k % cols.max(1), v);
        }
        m
    }

    pub fn from_scalars(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        let mut m = Matrix::zeros(field, rows, cols);
        for (k, s) in data.into_iter().enumerate() {
            m.set(k / cols, k % cols, s)?;
        }
        Ok(m)
    }

    /// Uniform residues over a prime field; integers in `[-3, 3]` over ℚ.
    pub fn random<R: Rng + ?Sized>(field: Field, rows: usize, cols: usize, rng: &mut R) -> Matrix {
        let mut m = Matrix::zeros(field, rows, cols);
        match &mut m.store {
            Store::Q(d) => d
                .iter_mut()
                .for_each(|e| *e = BigRational::from_integer(BigInt::from(rng.gen_range(-3i64..=3)))),
            Store::Fp(d) => {
                let p = field.characteristic();
                d.iter_mut().for_each(|e| *e = rng.gen_range(0..p));
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        let k = i * self.cols + j;
        match &self.store {
            Store::Q(d) => Scalar::Rational(d[k].clone()),
            Store::Fp(d) => Scalar::Residue(d[k]),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) -> Result<()> {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        if !self.field.contains(&value) {
            return Err(Error::InvalidEntry(format!("{value} not in {}", self.field)));
        }
        let k = i * self.cols + j;
        match (&mut self.store, value) {
            (Store::Q(d), Scalar::Rational(q)) => d[k] = q,
            (Store::Fp(d), Scalar::Residue(r)) => d[k] = r,
            _ => unreachable!(),
        }
        Ok(())
    }

    pub fn set_int(&mut self, i: usize, j: usize, v: i64) {
        let s = self.field.from_i64(v);
        self.set(i, j, s).expect("integer always lies in the field");
    }

    pub fn is_zero(&self) -> bool {
        match &self.store {
            Store::Q(d) => d.iter().all(Zero::is_zero),
            Store::Fp(d) => d.iter().all(|&x| x == 0),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Matrix::identity(self.field, self.rows)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.copy_entry(j, i, self, i, j);
            }
        }
        t
    }

    fn copy_entry(&mut self, i: usize, j: usize, src: &Matrix, si: usize, sj: usize) {
        let (k, sk) = (i * self.cols + j, si * src.cols + sj);
        match (&mut self.store, &src.store) {
            (Store::Q(d), Store::Q(s)) => d[k] = s[sk].clone(),
            (Store::Fp(d), Store::Fp(s)) => d[k] = s[sk],
            _ => panic!("field mismatch"),
        }
    }

    fn check_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    pub fn checked_mul(&self, rhs: &Matrix) -> Result<Matrix> {
        self.check_field(rhs)?;
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let (n, k, m) = (self.rows, self.cols, rhs.cols);
        let store = match (&self.store, &rhs.store) {
            (Store::Q(a), Store::Q(b)) => Store::Q(arith::matmul(&QArith, a, b, n, k, m)),
            (Store::Fp(a), Store::Fp(b)) => {
                Store::Fp(arith::matmul(&FpArith(self.field.characteristic()), a, b, n, k, m))
            }
            _ => unreachable!(),
        };
        Ok(Matrix { field: self.field, rows: n, cols: m, store })
    }

    fn zip_with(&self, rhs: &Matrix, sub: bool) -> Result<Matrix> {
        self.check_field(rhs)?;
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let store = match (&self.store, &rhs.store) {
            (Store::Q(a), Store::Q(b)) => Store::Q(
                a.iter()
                    .zip(b)
                    .map(|(x, y)| if sub { x - y } else { x + y })
                    .collect(),
            ),
            (Store::Fp(a), Store::Fp(b)) => {
                let ops = FpArith(self.field.characteristic());
                Store::Fp(
                    a.iter()
                        .zip(b)
                        .map(|(x, y)| if sub { ops.sub(x, y) } else { ops.add(x, y) })
                        .collect(),
                )
            }
            _ => unreachable!(),
        };
        Ok(Matrix { field: self.field, rows: self.rows, cols: self.cols, store })
    }

    pub fn checked_add(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip_with(rhs, false)
    }

    pub fn checked_sub(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip_with(rhs, true)
    }

    pub fn scale_int(&self, k: i64) -> Matrix {
        let mut out = self.clone();
        match &mut out.store {
            Store::Q(d) => {
                let k = BigRational::from_integer(BigInt::from(k));
                d.iter_mut().for_each(|e| *e = &*e * &k);
            }
            Store::Fp(d) => {
                let p = self.field.characteristic();
                let k = k.rem_euclid(p as i64) as u64;
                d.iter_mut().for_each(|e| *e = *e * k % p);
            }
        }
        out
    }

    /// Multiplies by `(-1)^e`.
    pub fn signed(&self, e: i64) -> Matrix {
        if e.rem_euclid(2) == 0 {
            self.clone()
        } else {
            -self
        }
    }

    /// Kronecker product with lexicographic basis order: row `(i, k)` of the
    /// result is `i * other.rows + k`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field, other.field, "field mismatch");
        let mut out = Matrix::zeros(self.field, self.rows * other.rows, self.cols * other.cols);
        dispatch!(self.field,
            ops => kron_into(&ops, self.q(), other.q(), self, other, out.q_mut()),
            fops => kron_into(&fops, self.f(), other.f(), self, other, out.f_mut())
        );
        out
    }

    fn q(&self) -> &[BigRational] {
        match &self.store {
            Store::Q(d) => d,
            Store::Fp(_) => unreachable!(),
        }
    }
    fn f(&self) -> &[u64] {
        match &self.store {
            Store::Fp(d) => d,
            Store::Q(_) => unreachable!(),
        }
    }
    fn q_mut(&mut self) -> &mut [BigRational] {
        match &mut self.store {
            Store::Q(d) => d,
            Store::Fp(_) => unreachable!(),
        }
    }
    fn f_mut(&mut self) -> &mut [u64] {
        match &mut self.store {
            Store::Fp(d) => d,
            Store::Q(_) => unreachable!(),
        }
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of bounds");
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.copy_entry(r0 + i, c0 + j, block, i, j);
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "block out of bounds");
        let mut out = Matrix::zeros(self.field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.copy_entry(i, j, self, r0 + i, c0 + j);
            }
        }
        out
    }

    /// Assembles a block matrix from a grid of optional blocks; `None` is a
    /// zero block of the size given by `row_dims` and `col_dims`.
    pub fn from_blocks(
        field: Field,
        row_dims: &[usize],
        col_dims: &[usize],
        blocks: &[Vec<Option<Matrix>>],
    ) -> Matrix {
        let mut out = Matrix::zeros(field, row_dims.iter().sum(), col_dims.iter().sum());
        let mut r0 = 0;
        for (bi, &rd) in row_dims.iter().enumerate() {
            let mut c0 = 0;
            for (bj, &cd) in col_dims.iter().enumerate() {
                if let Some(b) = &blocks[bi][bj] {
                    assert_eq!(b.shape(), (rd, cd), "block ({bi}, {bj}) has wrong shape");
                    out.set_block(r0, c0, b);
                }
                c0 += cd;
            }
            r0 += rd;
        }
        out
    }

    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows + other.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, self.cols, other);
        out
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        let mut out = Matrix::zeros(self.field, self.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(0, self.cols, other);
        Ok(out)
    }

    /// `out[i][j] = self[row_perm[i]][col_perm[j]]`.
    pub fn select(&self, row_perm: &[usize], col_perm: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, row_perm.len(), col_perm.len());
        for (i, &ri) in row_perm.iter().enumerate() {
            for (j, &cj) in col_perm.iter().enumerate() {
                out.copy_entry(i, j, self, ri, cj);
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Matrix {
        self.block(0, j, self.rows, 1)
    }

    /// Exact rank. Prime fields use Gauss-Jordan elimination; rationals use
    /// fraction-free Bareiss elimination over the integers.
    pub fn rank(&self) -> usize {
        match &self.store {
            Store::Q(d) => arith::bareiss_rank(d, self.rows, self.cols),
            Store::Fp(d) => {
                let mut d = d.clone();
                arith::rref(&FpArith(self.field.characteristic()), &mut d, self.rows, self.cols, self.cols).len()
            }
        }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut out = self.clone();
        let (rows, cols) = self.shape();
        let pivots = dispatch!(self.field,
            ops => arith::rref(&ops, out.q_mut(), rows, cols, cols),
            fops => arith::rref(&fops, out.f_mut(), rows, cols, cols)
        );
        (out, pivots)
    }

    /// Columns form a basis of the right kernel, one per non-pivot column
    /// of the reduced echelon form, in increasing column order.
    pub fn kernel_basis(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(self.field, self.cols, free.len());
        for (col, &f) in free.iter().enumerate() {
            k.set_int(f, col, 1);
            for (row, &p) in pivots.iter().enumerate() {
                let v = -&r.block(row, f, 1, 1);
                k.copy_entry(p, col, &v, 0, 0);
            }
        }
        k
    }

    /// Solves `a * x = b`. The particular solution is read off the reduced
    /// echelon form of `[a | b]` with every free variable set to zero.
    pub fn solve_linear(a: &Matrix, b: &Matrix) -> Result<Option<Matrix>> {
        a.check_field(b)?;
        if a.rows != b.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve with {} equations and a right-hand side of {} rows",
                a.rows, b.rows
            )));
        }
        let aug = a.hstack(b)?;
        let (rows, cols) = aug.shape();
        let mut red = aug;
        let pivots = dispatch!(a.field,
            ops => arith::rref(&ops, red.q_mut(), rows, cols, a.cols),
            fops => arith::rref(&fops, red.f_mut(), rows, cols, a.cols)
        );
        let rhs = red.block(0, a.cols, rows, b.cols);
        if !rhs.block(pivots.len(), 0, rows - pivots.len(), b.cols).is_zero() {
            return Ok(None);
        }
        let mut x = Matrix::zeros(a.field, a.cols, b.cols);
        for (row, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.copy_entry(p, j, &rhs, row, j);
            }
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let x = Matrix::solve_linear(self, &Matrix::identity(self.field, self.rows)).ok()??;
        (self * &x).is_identity().then_some(x)
    }

    /// Entry rendered as `"a/b"`, `"a"` or a residue.
    pub fn entry_string(&self, i: usize, j: usize) -> String {
        self.get(i, j).to_string()
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = Vec<Scalar>> + '_ {
        (0..self.rows).map(move |i| (0..self.cols).map(|j| self.get(i, j)).collect())
    }
}

fn kron_into<A: Arith>(ops: &A, a: &[A::E], b: &[A::E], am: &Matrix, bm: &Matrix, out: &mut [A::E]) {
    let out_cols = am.cols * bm.cols;
    for i in 0..am.rows {
        for j in 0..am.cols {
            let x = &a[i * am.cols + j];
            if ops.is_zero(x) {
                continue;
            }
            for k in 0..bm.rows {
                for l in 0..bm.cols {
                    let r = i * bm.rows + k;
                    let c = j * bm.cols + l;
                    out[r * out_cols + c] = ops.mul(x, &b[k * bm.cols + l]);
                }
            }
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<{}>{}x{}", self.field, self.rows, self.cols)?;
        f.debug_list()
            .entries(self.rows_iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()))
            .finish()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows_iter() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &Matrix {
    type Output = Matrix;

    fn neg(self) -> Matrix {
        self.scale_int(-1)
    }
}
