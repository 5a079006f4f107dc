//! The BGG functor from graded `S`-modules to complexes of `Λ`-modules,
//! `∂(f⊗m) = (-1)^{l+i} Σ_j ξ_j f ⊗ x_j m`, its totalized and periodic
//! versions, and the comparison `Δ∘Φ` against `Φ'∘Δ`.

use std::fmt;

use crate::complexes::{BoundedComplex, Violation};
use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix};
use crate::gralg::{compress_modules, Algebra, GradedModule, ModuleComplex, PeriodicModuleComplex};
use crate::periodic::{compress, match_bases, PeriodicComplex};

pub const MAX_GENERATORS: usize = 6;

/// The dual `Λ* = Hom_k(Λ, k)` of the exterior algebra on `c` generators.
/// Basis: dual monomials `f_J`, `J` a sorted index set, in lexicographic
/// order; `f_J` has degree `|J|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaDual {
    field: Field,
    c: usize,
    basis: Vec<Vec<usize>>,
    actions: Vec<Matrix>,
}

/// Sorted subsets of `1..=c` in lexicographic order, starting with `[]`.
fn index_sets(c: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, next: usize, c: usize, out: &mut Vec<Vec<usize>>) {
        out.push(prefix.clone());
        for k in next..=c {
            prefix.push(k);
            extend(prefix, k + 1, c, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), 1, c, &mut out);
    out
}

/// `(ξ_j·f)(a) = (-1)^{|f|} f(ξ_j a)`, so `ξ_j f_J = (-1)^{|J|} ε f_{J∖j}`
/// where `ε = (-1)^{#{k ∈ J : k < j}}`, and `0` when `j ∉ J`.
fn xi_on_dual(j: usize, set: &[usize]) -> Option<(i64, Vec<usize>)> {
    let pos = set.iter().position(|&k| k == j)?;
    let sign = if (set.len() + pos).is_multiple_of(2) { 1 } else { -1 };
    let mut rest = set.to_vec();
    rest.remove(pos);
    Some((sign, rest))
}

pub fn lambda_dual(field: Field, c: usize) -> Result<LambdaDual> {
    if !(1..=MAX_GENERATORS).contains(&c) {
        return Err(Error::OutOfRange(format!("number of exterior generators must be in 1..={MAX_GENERATORS}, got {c}")));
    }
    let basis = index_sets(c);
    let position = |set: &[usize]| basis.iter().position(|b| b == set).expect("subset is listed");
    let actions: Vec<Matrix> = (1..=c)
        .map(|j| {
            let mut a = Matrix::zeros(field, basis.len(), basis.len());
            for (col, set) in basis.iter().enumerate() {
                if let Some((sign, rest)) = xi_on_dual(j, set) {
                    a.set_int(position(&rest), col, sign);
                }
            }
            a
        })
        .collect();
    let dual = LambdaDual { field, c, basis, actions };
    dual.check_relations()?;
    Ok(dual)
}

impl LambdaDual {
    pub fn generators(&self) -> usize {
        self.c
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<usize>] {
        &self.basis
    }

    /// `dim (Λ*)_l` for `0 <= l <= c`.
    pub fn graded_dims(&self) -> Vec<usize> {
        let mut dims = vec![0; self.c + 1];
        for set in &self.basis {
            dims[set.len()] += 1;
        }
        dims
    }

    /// Matrix of `ξ_j` (1-based) on `Λ*`.
    pub fn action(&self, j: usize) -> &Matrix {
        &self.actions[j - 1]
    }

    /// `diag((-1)^{|J|})`.
    pub fn parity(&self) -> Matrix {
        let mut d = Matrix::zeros(self.field, self.dim(), self.dim());
        for (k, set) in self.basis.iter().enumerate() {
            d.set_int(k, k, if set.len() % 2 == 0 { 1 } else { -1 });
        }
        d
    }

    fn check_relations(&self) -> Result<()> {
        for (j, a) in self.actions.iter().enumerate() {
            for (l, b) in self.actions.iter().enumerate().skip(j) {
                let ok = if j == l { (a * a).is_zero() } else { (&(a * b) + &(b * a)).is_zero() };
                if !ok {
                    return Err(Error::InvalidModule(format!("ξ_{} and ξ_{} violate the exterior relations on Λ*", j + 1, l + 1)));
                }
            }
        }
        Ok(())
    }

    /// `Λ*` as a graded `Λ`-module on degrees `0..=c`.
    pub fn as_module(&self) -> GradedModule {
        let dims = self.graded_dims();
        let by_degree: Vec<Vec<usize>> = (0..=self.c)
            .map(|l| (0..self.dim()).filter(|&k| self.basis[k].len() == l).collect())
            .collect();
        let actions = self
            .actions
            .iter()
            .map(|a| {
                (0..=self.c)
                    .map(|l| if l == 0 { Matrix::zeros(self.field, 0, dims[0]) } else { a.select(&by_degree[l - 1], &by_degree[l]) })
                    .collect()
            })
            .collect();
        GradedModule::new(self.field, Algebra::Ext(self.c), 0, dims, actions).expect("shapes follow the grading")
    }
}

/// A complex whose terms are `Λ`-modules: `actions[k][j]` is `ξ_{j+1}` on
/// the term of degree `lo + k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BGGComplex {
    pub complex: BoundedComplex,
    pub actions: Vec<Vec<Matrix>>,
}

impl BGGComplex {
    /// `∂² = 0`, the exterior relations on each term, and `∂ ξ_j = ξ_j ∂`.
    pub fn check(&self) -> Result<()> {
        let x = &self.complex;
        x.validate().map_err(|v: Violation| Error::InvalidComplex(v.to_string()))?;
        for (i, acts) in x.degrees().zip(&self.actions) {
            for (j, a) in acts.iter().enumerate() {
                for (l, b) in acts.iter().enumerate().skip(j) {
                    let ok = if j == l { (a * a).is_zero() } else { (&(a * b) + &(b * a)).is_zero() };
                    if !ok {
                        return Err(Error::InvalidModule(format!("exterior relation ({}, {}) fails in degree {i}", j + 1, l + 1)));
                    }
                }
                if i < x.hi() && &x.diff(i) * a != &self.actions[(i + 1 - x.lo()) as usize][j] * &x.diff(i) {
                    return Err(Error::InvalidModule(format!("differential is not Λ-linear for ξ_{} in degree {i}", j + 1)));
                }
            }
        }
        Ok(())
    }

    pub fn cohomology_dims(&self) -> Result<Vec<(i64, usize)>> {
        self.complex.cohomology_dims()
    }
}

fn poly_generators(m: &GradedModule) -> Result<usize> {
    match m.algebra() {
        Algebra::Poly(c) => Ok(c),
        other => Err(Error::InvalidModule(format!("expected a module over a polynomial ring, got {other}"))),
    }
}

/// Horizontal differential of `Φ(M)` from internal degree `i`.
fn bgg_differential(dual: &LambdaDual, m: &GradedModule, i: i64) -> Matrix {
    let signed = dual.parity().signed(i);
    let mut total = Matrix::zeros(dual.field, dual.dim() * m.dim(i + 1), dual.dim() * m.dim(i));
    for j in 0..dual.c {
        total = &total + &(dual.action(j + 1) * &signed).kron(&m.action(j, i));
    }
    total
}

fn lambda_on(dual: &LambdaDual, dim: usize) -> Vec<Matrix> {
    let id = Matrix::identity(dual.field, dim);
    (1..=dual.c).map(|j| dual.action(j).kron(&id)).collect()
}

/// `Φ(M)`: term `i` is `Λ* ⊗ M_i` (basis `f`-major) over the window of `M`.
pub fn bgg_module(m: &GradedModule) -> Result<BGGComplex> {
    let c = poly_generators(m)?;
    m.validate().map_err(|v| Error::InvalidModule(v.to_string()))?;
    let dual = lambda_dual(m.field(), c)?;
    let dims = m.degrees().map(|i| dual.dim() * m.dim(i)).collect();
    let diffs = (m.lo()..m.hi()).map(|i| bgg_differential(&dual, m, i)).collect();
    let complex = BoundedComplex::new(m.field(), m.lo(), dims, diffs)?;
    let actions = m.degrees().map(|i| lambda_on(&dual, m.dim(i))).collect();
    let out = BGGComplex { complex, actions };
    out.check()?;
    Ok(out)
}

/// A first-quadrant-style grid of vector spaces: cell `(i, j)` for `i` in
/// `[i_lo, i_lo + cols)` and `j` in `[j_lo, j_lo + rows)`, with horizontal
/// maps `(i, j) → (i+1, j)` and vertical maps `(i, j) → (i, j+1)`.
#[derive(Debug, Clone)]
pub struct DoubleComplex {
    pub field: Field,
    pub i_lo: i64,
    pub j_lo: i64,
    /// `dims[i - i_lo][j - j_lo]`.
    pub dims: Vec<Vec<usize>>,
    /// `horizontal[i - i_lo][j - j_lo]`, for `i` below the last column.
    pub horizontal: Vec<Vec<Matrix>>,
    /// `vertical[i - i_lo][j - j_lo]`, for `j` below the last row.
    pub vertical: Vec<Vec<Matrix>>,
}

impl DoubleComplex {
    fn cols(&self) -> i64 {
        self.dims.len() as i64
    }

    fn rows(&self) -> i64 {
        self.dims.first().map_or(0, |c| c.len() as i64)
    }

    fn dim(&self, i: i64, j: i64) -> usize {
        let (a, b) = (i - self.i_lo, j - self.j_lo);
        if (0..self.cols()).contains(&a) && (0..self.rows()).contains(&b) {
            self.dims[a as usize][b as usize]
        } else {
            0
        }
    }

    fn horizontal(&self, i: i64, j: i64) -> Matrix {
        let (a, b) = (i - self.i_lo, j - self.j_lo);
        if (0..self.cols() - 1).contains(&a) && (0..self.rows()).contains(&b) {
            self.horizontal[a as usize][b as usize].clone()
        } else {
            Matrix::zeros(self.field, self.dim(i + 1, j), self.dim(i, j))
        }
    }

    fn vertical(&self, i: i64, j: i64) -> Matrix {
        let (a, b) = (i - self.i_lo, j - self.j_lo);
        if (0..self.cols()).contains(&a) && (0..self.rows() - 1).contains(&b) {
            self.vertical[a as usize][b as usize].clone()
        } else {
            Matrix::zeros(self.field, self.dim(i, j + 1), self.dim(i, j))
        }
    }

    fn check_shapes(&self) -> Result<()> {
        let (cols, rows) = (self.cols(), self.rows());
        if self.dims.iter().any(|c| c.len() as i64 != rows)
            || self.horizontal.len() as i64 != (cols - 1).max(0)
            || self.vertical.len() as i64 != cols
        {
            return Err(Error::DimensionMismatch("grid is not rectangular".into()));
        }
        for a in 0..cols {
            let i = self.i_lo + a;
            if a + 1 < cols && self.horizontal[a as usize].len() as i64 != rows {
                return Err(Error::DimensionMismatch(format!("column {i} needs {rows} horizontal maps")));
            }
            if self.vertical[a as usize].len() as i64 != (rows - 1).max(0) {
                return Err(Error::DimensionMismatch(format!("column {i} needs {} vertical maps", rows - 1)));
            }
            for b in 0..rows {
                let j = self.j_lo + b;
                if a + 1 < cols && self.horizontal[a as usize][b as usize].shape() != (self.dim(i + 1, j), self.dim(i, j)) {
                    return Err(Error::DimensionMismatch(format!("horizontal map at ({i}, {j}) has the wrong shape")));
                }
                if b + 1 < rows && self.vertical[a as usize][b as usize].shape() != (self.dim(i, j + 1), self.dim(i, j)) {
                    return Err(Error::DimensionMismatch(format!("vertical map at ({i}, {j}) has the wrong shape")));
                }
            }
        }
        Ok(())
    }
}

/// Total complex: term `l = ⊕_{i+j=l}` cell `(i, j)`, cells by increasing
/// `i`, with `D = horizontal + (-1)^i vertical`.
pub fn total_complex(grid: &DoubleComplex) -> Result<BoundedComplex> {
    grid.check_shapes()?;
    let field = grid.field;
    if grid.cols() == 0 || grid.rows() == 0 {
        return Ok(BoundedComplex::zero(field));
    }
    let (lo, hi) = (grid.i_lo + grid.j_lo, grid.i_lo + grid.cols() - 1 + grid.j_lo + grid.rows() - 1);
    let is: Vec<i64> = (grid.i_lo..grid.i_lo + grid.cols()).collect();
    let part_dims = |l: i64| -> Vec<usize> { is.iter().map(|&i| grid.dim(i, l - i)).collect() };
    let dims = (lo..=hi).map(|l| part_dims(l).iter().sum()).collect();
    let diffs: Vec<Matrix> = (lo..hi)
        .map(|l| {
            let blocks: Vec<Vec<Option<Matrix>>> = is
                .iter()
                .map(|&di| {
                    is.iter()
                        .map(|&si| {
                            if di == si + 1 {
                                Some(grid.horizontal(si, l - si))
                            } else if di == si {
                                Some(grid.vertical(si, l - si).signed(si))
                            } else {
                                None
                            }
                        })
                        .collect()
                })
                .collect();
            Matrix::from_blocks(field, &part_dims(l + 1), &part_dims(l), &blocks)
        })
        .collect();
    for (k, pair) in diffs.windows(2).enumerate() {
        if !(&pair[1] * &pair[0]).is_zero() {
            return Err(Error::TotalizationNotSquareZero(lo + k as i64));
        }
    }
    BoundedComplex::new(field, lo, dims, diffs)
}

fn kron_identity_left(dual: &LambdaDual, m: &Matrix) -> Matrix {
    Matrix::identity(dual.field, dual.dim()).kron(m)
}

/// `Φ` of a bounded complex of `S`-modules: the grid with cells
/// `Λ* ⊗ M^j_i`, horizontal `∂` of `Φ(M^j)` and vertical `1 ⊗ d^j`.
pub fn bgg_complex(mc: &ModuleComplex) -> Result<BGGComplex> {
    let c = poly_generators(&mc.terms()[0])?;
    let dual = lambda_dual(mc.field(), c)?;
    let (ilo, ihi) = mc.window();
    let is: Vec<i64> = (ilo..=ihi).collect();
    let js: Vec<i64> = mc.degrees().collect();
    let grid = DoubleComplex {
        field: mc.field(),
        i_lo: ilo,
        j_lo: mc.lo(),
        dims: is.iter().map(|&i| js.iter().map(|&j| dual.dim() * mc.term(j).dim(i)).collect()).collect(),
        horizontal: is[..is.len() - 1]
            .iter()
            .map(|&i| js.iter().map(|&j| bgg_differential(&dual, &mc.term(j), i)).collect())
            .collect(),
        vertical: is
            .iter()
            .map(|&i| js[..js.len() - 1].iter().map(|&j| kron_identity_left(&dual, &mc.map(j).component(i))).collect())
            .collect(),
    };
    let complex = total_complex(&grid)?;
    let actions = complex
        .degrees()
        .map(|l| block_lambda(&dual, &is.iter().map(|&i| mc.term(l - i).dim(i)).collect::<Vec<_>>()))
        .collect();
    let out = BGGComplex { complex, actions };
    out.check()?;
    Ok(out)
}

/// `ξ_j ⊗ 1` on each cell of a direct sum of cells `Λ* ⊗ V_k`.
fn block_lambda(dual: &LambdaDual, cell_dims: &[usize]) -> Vec<Matrix> {
    (1..=dual.c)
        .map(|j| {
            cell_dims
                .iter()
                .fold(Matrix::zeros(dual.field, 0, 0), |acc, &d| acc.direct_sum(&dual.action(j).kron(&Matrix::identity(dual.field, d))))
        })
        .collect()
}

/// `Φ'` of an n-periodic module complex: cells `(i, j)` with `i` in the
/// internal window and `j` in `Z/n`; term `r` holds, for increasing `i`,
/// the cell `(i, r - i mod n)`; `D = horizontal + (-1)^i vertical`.
pub fn bgg_periodic(pm: &PeriodicModuleComplex) -> Result<PeriodicComplex> {
    let c = poly_generators(&pm.terms()[0])?;
    let dual = lambda_dual(pm.field(), c)?;
    let n = pm.period() as i64;
    let (ilo, ihi) = pm.window();
    let is: Vec<i64> = (ilo..=ihi).collect();
    let part_dims = |r: i64| -> Vec<usize> { is.iter().map(|&i| dual.dim() * pm.term(r - i).dim(i)).collect() };
    let dims = (0..n).map(|r| part_dims(r).iter().sum()).collect();
    let diffs = (0..n)
        .map(|r| {
            let blocks: Vec<Vec<Option<Matrix>>> = is
                .iter()
                .map(|&di| {
                    is.iter()
                        .map(|&si| {
                            let j = r - si;
                            if di == si + 1 {
                                Some(bgg_differential(&dual, pm.term(j), si))
                            } else if di == si {
                                Some(kron_identity_left(&dual, &pm.map(j).component(si)).signed(si))
                            } else {
                                None
                            }
                        })
                        .collect()
                })
                .collect();
            Matrix::from_blocks(pm.field(), &part_dims(r + 1), &part_dims(r), &blocks)
        })
        .collect();
    let p = PeriodicComplex::new(pm.field(), pm.period(), dims, diffs)?;
    p.validate().map_err(|v| Error::TotalizationNotSquareZero(v.degree))?;
    Ok(p)
}

/// How `Δ(Φ(mc))` compares with `Φ'(Δ(mc))` after matching summands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SquareOutcome {
    Equal,
    /// Agreement after conjugating by a diagonal `±1` matrix on each term:
    /// `signs[r][k]` for basis vector `k` of term `r`.
    SignIntertwiner(Vec<Vec<i8>>),
    /// First entry of the differential of term `term` that no diagonal sign
    /// change can reconcile.
    Discrepancy { term: usize, row: usize, col: usize },
}

impl fmt::Display for SquareOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SquareOutcome::Equal => write!(f, "equal"),
            SquareOutcome::SignIntertwiner(_) => write!(f, "equal up to a diagonal sign change"),
            SquareOutcome::Discrepancy { term, row, col } => {
                write!(f, "discrepancy in the differential of term {term} at ({row}, {col})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareReport {
    pub dims: Vec<usize>,
    pub outcome: SquareOutcome,
}

/// Permutations with `compress(Φ(mc), n).permuted(p) == Φ'(Δ(mc))` up to
/// the differentials, matching basis vectors by `(i, j, f, m)`.
pub fn bgg_square_reordering(mc: &ModuleComplex, n: usize) -> Result<Vec<Vec<usize>>> {
    let dual_dim = 1usize << poly_generators(&mc.terms()[0])?;
    let (ilo, ihi) = mc.window();
    let res = |v: i64| v.rem_euclid(n as i64) as usize;
    let (tlo, thi) = (ilo + mc.lo(), ihi + mc.hi());
    let from: Vec<Vec<(i64, i64, usize, usize)>> = (0..n)
        .map(|r| {
            let mut out = Vec::new();
            for l in (tlo..=thi).filter(|&l| res(l) == r) {
                for i in ilo..=ihi {
                    let j = l - i;
                    let d = mc.term(j).dim(i);
                    for f in 0..dual_dim {
                        out.extend((0..d).map(|m| (i, j, f, m)));
                    }
                }
            }
            out
        })
        .collect();
    let to: Vec<Vec<(i64, i64, usize, usize)>> = (0..n)
        .map(|r| {
            let mut out = Vec::new();
            for i in ilo..=ihi {
                let js: Vec<i64> = mc.degrees().filter(|&j| res(j) == res(r as i64 - i)).collect();
                for f in 0..dual_dim {
                    for &j in &js {
                        out.extend((0..mc.term(j).dim(i)).map(|m| (i, j, f, m)));
                    }
                }
            }
            out
        })
        .collect();
    match_bases(&from, &to)
}

/// Union-find with parity: finds `s` with `right[a][b] = s_a s_b left[a][b]`.
fn sign_intertwiner(left: &PeriodicComplex, right: &PeriodicComplex) -> SquareOutcome {
    let n = left.period();
    let offsets: Vec<usize> = left.dims().iter().scan(0, |acc, &d| { let o = *acc; *acc += d; Some(o) }).collect();
    let total: usize = left.dims().iter().sum();
    let mut parent: Vec<usize> = (0..total).collect();
    let mut parity = vec![0u8; total];
    fn find(parent: &mut [usize], parity: &mut [u8], v: usize) -> (usize, u8) {
        if parent[v] == v {
            return (v, 0);
        }
        let (root, p) = find(parent, parity, parent[v]);
        parent[v] = root;
        parity[v] ^= p;
        (root, parity[v])
    }
    for r in 0..n {
        let (a, b) = (&left.diffs()[r], &right.diffs()[r]);
        let (sum, diff) = (a + b, a - b);
        for row in 0..a.rows() {
            for col in 0..a.cols() {
                let (la, ra) = (a.get(row, col), b.get(row, col));
                let relation = if la.is_zero() && ra.is_zero() {
                    continue;
                } else if diff.get(row, col).is_zero() {
                    0
                } else if sum.get(row, col).is_zero() {
                    1
                } else {
                    return SquareOutcome::Discrepancy { term: r, row, col };
                };
                let (u, v) = (offsets[(r + 1) % n] + row, offsets[r] + col);
                let (ru, pu) = find(&mut parent, &mut parity, u);
                let (rv, pv) = find(&mut parent, &mut parity, v);
                if ru == rv {
                    if pu ^ pv != relation {
                        return SquareOutcome::Discrepancy { term: r, row, col };
                    }
                } else {
                    parent[ru] = rv;
                    parity[ru] = pu ^ pv ^ relation;
                }
            }
        }
    }
    let signs = (0..n)
        .map(|r| {
            (0..left.dims()[r])
                .map(|k| if find(&mut parent, &mut parity, offsets[r] + k).1 == 0 { 1 } else { -1 })
                .collect()
        })
        .collect();
    SquareOutcome::SignIntertwiner(signs)
}

/// Builds `Δ(Φ(mc))` and `Φ'(Δ(mc))` independently and compares them.
pub fn verify_bgg_square(mc: &ModuleComplex, n: usize) -> Result<SquareReport> {
    let left = compress(&bgg_complex(mc)?.complex, n)?;
    let right = bgg_periodic(&compress_modules(mc, n)?)?;
    if left.dims() != right.dims() {
        return Err(Error::DimensionMismatch("the two sides of the square have different term dimensions".into()));
    }
    let left = left.permuted(&bgg_square_reordering(mc, n)?);
    let outcome = if left == right { SquareOutcome::Equal } else { sign_intertwiner(&left, &right) };
    Ok(SquareReport { dims: right.dims().to_vec(), outcome })
}
