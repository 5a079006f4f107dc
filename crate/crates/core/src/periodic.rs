//! n-periodic complexes: compression, windowed expansion, periodic cones,
//! the periodic homotopy calculus, and periodization of null-homotopies.

use std::collections::HashMap;
use std::hash::Hash;

use crate::complexes::{self, BoundedComplex, ChainMap, HomReport, Homotopy, Violation, ViolationKind};
use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix};
use crate::linop::{operator_matrix, BlockLayout};

fn residue(i: i64, n: usize) -> usize {
    i.rem_euclid(n as i64) as usize
}

/// `n` terms with `diffs[i] : X^i → X^{(i+1) mod n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicComplex {
    field: Field,
    n: usize,
    dims: Vec<usize>,
    diffs: Vec<Matrix>,
}

impl PeriodicComplex {
    pub fn new(field: Field, n: usize, dims: Vec<usize>, diffs: Vec<Matrix>) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange("period 0".into()));
        }
        if dims.len() != n || diffs.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "period {n} needs {n} terms and {n} differentials, got {} and {}",
                dims.len(),
                diffs.len()
            )));
        }
        for (i, d) in diffs.iter().enumerate() {
            complexes::check_fields(field, d.field())?;
            let expected = (dims[(i + 1) % n], dims[i]);
            if d.shape() != expected {
                return Err(Error::DimensionMismatch(
                    Violation { degree: i as i64, kind: ViolationKind::Shape { expected, found: d.shape() } }
                        .to_string(),
                ));
            }
        }
        Ok(PeriodicComplex { field, n, dims, diffs })
    }

    pub fn zero(field: Field, n: usize) -> Self {
        PeriodicComplex { field, n, dims: vec![0; n], diffs: vec![Matrix::zeros(field, 0, 0); n] }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn period(&self) -> usize {
        self.n
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn diffs(&self) -> &[Matrix] {
        &self.diffs
    }

    pub fn dim(&self, i: i64) -> usize {
        self.dims[residue(i, self.n)]
    }

    pub fn diff(&self, i: i64) -> Matrix {
        self.diffs[residue(i, self.n)].clone()
    }

    pub fn validate(&self) -> Result<(), Violation> {
        for i in 0..self.n as i64 {
            if !(&self.diff(i + 1) * &self.diff(i)).is_zero() {
                return Err(Violation { degree: i, kind: ViolationKind::NotSquareZero });
            }
        }
        Ok(())
    }

    pub(crate) fn ensure_valid(&self) -> Result<()> {
        self.validate().map_err(|v| Error::InvalidComplex(v.to_string()))
    }

    /// `dim H^i = (dim X^i - rank ∂^i) - rank ∂^{i-1}` for `0 <= i < n`.
    pub fn cohomology(&self) -> Result<Vec<usize>> {
        self.ensure_valid()?;
        Ok((0..self.n as i64)
            .map(|i| self.dim(i) - self.diff(i).rank() - self.diff(i - 1).rank())
            .collect())
    }

    pub fn is_acyclic(&self) -> Result<bool> {
        Ok(self.cohomology()?.iter().all(|&h| h == 0))
    }

    /// `X[l]^i = X^{i+l}`, `∂_{X[l]}^i = (-1)^l ∂^{i+l}`.
    pub fn shift(&self, l: i64) -> Self {
        let n = self.n as i64;
        PeriodicComplex {
            field: self.field,
            n: self.n,
            dims: (0..n).map(|i| self.dim(i + l)).collect(),
            diffs: (0..n).map(|i| self.diff(i + l).signed(l)).collect(),
        }
    }

    pub fn direct_sum(&self, other: &PeriodicComplex) -> Result<Self> {
        complexes::check_fields(self.field, other.field)?;
        if self.n != other.n {
            return Err(Error::PeriodMismatch(self.n, other.n));
        }
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let diffs = self.diffs.iter().zip(&other.diffs).map(|(a, b)| a.direct_sum(b)).collect();
        PeriodicComplex::new(self.field, self.n, dims, diffs)
    }

    /// Conjugates by invertible `bases[i]` on term `i`.
    pub fn change_basis(&self, bases: &[Matrix]) -> Result<Self> {
        if bases.len() != self.n {
            return Err(Error::DimensionMismatch("one basis change per term".into()));
        }
        let inverses = bases
            .iter()
            .map(|p| p.inverse().ok_or_else(|| Error::InvalidEntry("singular basis change".into())))
            .collect::<Result<Vec<_>>>()?;
        let diffs = (0..self.n)
            .map(|i| &(&bases[(i + 1) % self.n] * &self.diffs[i]) * &inverses[i])
            .collect();
        PeriodicComplex::new(self.field, self.n, self.dims.clone(), diffs)
    }

    /// Reorders bases: basis vector `k` of new term `i` is old basis vector
    /// `perms[i][k]`.
    pub fn permuted(&self, perms: &[Vec<usize>]) -> Self {
        let diffs = (0..self.n).map(|i| self.diffs[i].select(&perms[(i + 1) % self.n], &perms[i])).collect();
        PeriodicComplex { diffs, ..self.clone() }
    }
}

/// Permutations matching two labellings of the same bases, term by term:
/// `out[i][k]` is the position in `from[i]` of label `to[i][k]`.
pub fn match_bases<L: Eq + Hash + std::fmt::Debug>(from: &[Vec<L>], to: &[Vec<L>]) -> Result<Vec<Vec<usize>>> {
    from.iter()
        .zip(to)
        .map(|(f, t)| {
            if f.len() != t.len() {
                return Err(Error::DimensionMismatch("bases of different sizes".into()));
            }
            let index: HashMap<&L, usize> = f.iter().enumerate().map(|(k, l)| (l, k)).collect();
            t.iter()
                .map(|l| index.get(l).copied().ok_or_else(|| Error::DimensionMismatch(format!("unmatched basis label {l:?}"))))
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicChainMap {
    source: PeriodicComplex,
    target: PeriodicComplex,
    components: Vec<Matrix>,
}

impl PeriodicChainMap {
    pub fn new(source: PeriodicComplex, target: PeriodicComplex, components: Vec<Matrix>) -> Result<Self> {
        complexes::check_fields(source.field, target.field)?;
        if source.n != target.n {
            return Err(Error::PeriodMismatch(source.n, target.n));
        }
        if components.len() != source.n {
            return Err(Error::InvalidChainMap(format!("{} components for period {}", components.len(), source.n)));
        }
        for (i, c) in components.iter().enumerate() {
            if c.shape() != (target.dims[i], source.dims[i]) {
                return Err(Error::InvalidChainMap(format!("component {i} has the wrong shape")));
            }
        }
        let map = PeriodicChainMap { source, target, components };
        for i in 0..map.source.n as i64 {
            if &map.component(i + 1) * &map.source.diff(i) != &map.target.diff(i) * &map.component(i) {
                return Err(Error::InvalidChainMap(format!("square at degree {i} does not commute")));
            }
        }
        Ok(map)
    }

    pub fn identity(p: &PeriodicComplex) -> Self {
        let components = p.dims.iter().map(|&d| Matrix::identity(p.field, d)).collect();
        PeriodicChainMap { source: p.clone(), target: p.clone(), components }
    }

    pub fn zero(x: &PeriodicComplex, y: &PeriodicComplex) -> Self {
        let components = (0..x.n).map(|i| Matrix::zeros(x.field, y.dims[i], x.dims[i])).collect();
        PeriodicChainMap { source: x.clone(), target: y.clone(), components }
    }

    pub fn source(&self) -> &PeriodicComplex {
        &self.source
    }

    pub fn target(&self) -> &PeriodicComplex {
        &self.target
    }

    pub fn components(&self) -> &[Matrix] {
        &self.components
    }

    pub fn component(&self, i: i64) -> Matrix {
        self.components[residue(i, self.source.n)].clone()
    }

    pub fn compose(&self, first: &PeriodicChainMap) -> Result<Self> {
        if first.target != self.source {
            return Err(Error::InvalidChainMap("composition of non-composable maps".into()));
        }
        let components = (0..self.source.n).map(|i| &self.components[i] * &first.components[i]).collect();
        PeriodicChainMap::new(first.source.clone(), self.target.clone(), components)
    }
}

/// `σ^i : X^i → Y^{(i-1) mod n}` with `f^i - g^i = σ^{i+1} ∂_X^i + ∂_Y^{i-1} σ^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicHomotopy {
    pub f: PeriodicChainMap,
    pub g: PeriodicChainMap,
    components: Vec<Matrix>,
}

impl PeriodicHomotopy {
    pub fn new(f: PeriodicChainMap, g: PeriodicChainMap, components: Vec<Matrix>) -> Result<Self> {
        if f.source != g.source || f.target != g.target {
            return Err(Error::InvalidHomotopy("f and g have different endpoints".into()));
        }
        let n = f.source.n;
        if components.len() != n {
            return Err(Error::InvalidHomotopy(format!("{} components for period {n}", components.len())));
        }
        for (i, c) in components.iter().enumerate() {
            if c.shape() != (f.target.dim(i as i64 - 1), f.source.dims[i]) {
                return Err(Error::InvalidHomotopy(format!("component {i} has the wrong shape")));
            }
        }
        let h = PeriodicHomotopy { f, g, components };
        for i in 0..n as i64 {
            if !h.defect(i).is_zero() {
                return Err(Error::InvalidHomotopy(format!("identity fails at degree {i}")));
            }
        }
        Ok(h)
    }

    pub fn components(&self) -> &[Matrix] {
        &self.components
    }

    pub fn component(&self, i: i64) -> Matrix {
        self.components[residue(i, self.f.source.n)].clone()
    }

    fn defect(&self, i: i64) -> Matrix {
        let (x, y) = (&self.f.source, &self.f.target);
        let diff = &self.f.component(i) - &self.g.component(i);
        let htpy = &(&self.component(i + 1) * &x.diff(i)) + &(&y.diff(i - 1) * &self.component(i));
        &diff - &htpy
    }
}

/// Where each `X^j` sits inside the terms of `Δ(X)`: for residue `r`, the
/// degrees `j ≡ r (mod n)` of the window in increasing order, with offsets.
#[derive(Debug, Clone)]
pub struct CompressionLayout {
    n: usize,
    terms: Vec<Vec<(i64, usize)>>,
    dims: Vec<usize>,
}

impl CompressionLayout {
    pub fn new(x: &BoundedComplex, n: usize) -> Self {
        let mut terms = vec![Vec::new(); n];
        let mut dims = vec![0; n];
        for j in x.degrees() {
            let r = residue(j, n);
            terms[r].push((j, dims[r]));
            dims[r] += x.dim(j);
        }
        CompressionLayout { n, terms, dims }
    }

    /// Offset of `X^j` inside term `j mod n`; `None` outside the window.
    pub fn offset(&self, j: i64) -> Option<usize> {
        self.terms[residue(j, self.n)].iter().find(|(d, _)| *d == j).map(|&(_, o)| o)
    }

    pub fn summands(&self, r: usize) -> &[(i64, usize)] {
        &self.terms[r]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
}

fn check_period(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::OutOfRange("period 0".into()));
    }
    Ok(())
}

/// `Δ(X)^r = ⊕_{j ≡ r} X^j`, summands in increasing `j`, with the blocks of
/// `∂_X` as differential.
pub fn compress(x: &BoundedComplex, n: usize) -> Result<PeriodicComplex> {
    check_period(n)?;
    x.ensure_valid()?;
    let layout = CompressionLayout::new(x, n);
    let field = x.field();
    let mut diffs: Vec<Matrix> =
        (0..n).map(|r| Matrix::zeros(field, layout.dims[(r + 1) % n], layout.dims[r])).collect();
    for j in x.lo()..x.hi() {
        let (src, dst) = (layout.offset(j).unwrap(), layout.offset(j + 1).unwrap());
        diffs[residue(j, n)].set_block(dst, src, &x.diff(j));
    }
    PeriodicComplex::new(field, n, layout.dims.clone(), diffs)
}

/// Block-diagonal assembly of `f^j` into residue classes.
pub fn compress_map(f: &ChainMap, n: usize) -> Result<PeriodicChainMap> {
    check_period(n)?;
    f.validate()?;
    let (sl, tl) = (CompressionLayout::new(f.source(), n), CompressionLayout::new(f.target(), n));
    let field = f.field();
    let mut components: Vec<Matrix> = (0..n).map(|r| Matrix::zeros(field, tl.dims[r], sl.dims[r])).collect();
    for j in f.source().degrees() {
        let c = f.component(j);
        if c.rows() == 0 || c.cols() == 0 {
            continue;
        }
        let (so, to) = (sl.offset(j).unwrap(), tl.offset(j).unwrap());
        components[residue(j, n)].set_block(to, so, &c);
    }
    PeriodicChainMap::new(compress(f.source(), n)?, compress(f.target(), n)?, components)
}

/// Unrolls `p` on `[lo, hi]`; the differential leaving `hi` is dropped.
pub fn expand_window(p: &PeriodicComplex, lo: i64, hi: i64) -> Result<BoundedComplex> {
    if lo > hi {
        return Err(Error::WindowTooSmall(format!("empty window [{lo}, {hi}]")));
    }
    let dims = (lo..=hi).map(|i| p.dim(i)).collect();
    let diffs = (lo..hi).map(|i| p.diff(i)).collect();
    BoundedComplex::new(p.field, lo, dims, diffs)
}

/// The unit `η : X → ∇Δ(X)` (summand inclusion) and the retraction `ρ`
/// (summand projection), with `∇Δ(X)` expanded on `[lo, hi]`.
pub fn unit_and_retraction(x: &BoundedComplex, n: usize, lo: i64, hi: i64) -> Result<(ChainMap, ChainMap)> {
    check_period(n)?;
    let (s, t) = x.support().unwrap_or((x.lo(), x.hi()));
    if lo > s - n as i64 || hi < t + n as i64 {
        return Err(Error::WindowTooSmall(format!(
            "[{lo}, {hi}] must extend one period beyond the support [{s}, {t}]"
        )));
    }
    let x = x.with_window(s.min(x.lo()), t.max(x.hi()))?;
    let expanded = expand_window(&compress(&x, n)?, lo, hi)?;
    let layout = CompressionLayout::new(&x, n);
    let field = x.field();
    let inclusion = |i: i64| -> Matrix {
        let mut m = Matrix::zeros(field, expanded.dim(i), x.dim(i));
        if let Some(o) = layout.offset(i) {
            m.set_block(o, 0, &Matrix::identity(field, x.dim(i)));
        }
        m
    };
    let eta = ChainMap::from_fn(&x, &expanded, inclusion)?;
    let rho = ChainMap::from_fn(&expanded, &x, |i| inclusion(i).transpose())?;
    Ok((eta, rho))
}

/// Cyclic cone `C(f)^i = X^{i+1} ⊕ Y^i`, X-part first.
pub fn periodic_cone(f: &PeriodicChainMap) -> Result<PeriodicComplex> {
    let (x, y) = (&f.source, &f.target);
    x.ensure_valid()?;
    y.ensure_valid()?;
    let n = x.n as i64;
    let dims = (0..n).map(|i| x.dim(i + 1) + y.dim(i)).collect();
    let diffs = (0..n)
        .map(|i| {
            Matrix::from_blocks(
                x.field,
                &[x.dim(i + 2), y.dim(i + 1)],
                &[x.dim(i + 1), y.dim(i)],
                &[vec![Some(-&x.diff(i + 1)), None], vec![Some(f.component(i + 1)), Some(y.diff(i))]],
            )
        })
        .collect();
    PeriodicComplex::new(x.field, x.n, dims, diffs)
}

/// Which copy a basis vector of a cone comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum ConePart {
    Source,
    Target,
}

/// Permutations with `compress(cone(f), n).permuted(p) == periodic_cone(compress_map(f, n))`.
///
/// `Δ(C(f))^r` lists, for `j ≡ r` increasing, the block `X^{j+1}` then `Y^j`;
/// `C(Δf)^r` lists all of `Δ(X)^{r+1}` first, then all of `Δ(Y)^r`.
pub fn cone_reordering(f: &ChainMap, n: usize) -> Result<Vec<Vec<usize>>> {
    let c = complexes::cone(f)?.complex;
    let (x, y) = (f.source(), f.target());
    let from: Vec<Vec<(ConePart, i64, usize)>> = (0..n)
        .map(|r| {
            let mut labels = Vec::new();
            for j in c.degrees().filter(|&j| residue(j, n) == r) {
                labels.extend((0..x.dim(j + 1)).map(|a| (ConePart::Source, j + 1, a)));
                labels.extend((0..y.dim(j)).map(|b| (ConePart::Target, j, b)));
            }
            labels
        })
        .collect();
    let to: Vec<Vec<(ConePart, i64, usize)>> = (0..n)
        .map(|r| {
            let mut labels = Vec::new();
            for j in x.degrees().filter(|&j| residue(j, n) == (r + 1) % n) {
                labels.extend((0..x.dim(j)).map(|a| (ConePart::Source, j, a)));
            }
            for j in y.degrees().filter(|&j| residue(j, n) == r) {
                labels.extend((0..y.dim(j)).map(|b| (ConePart::Target, j, b)));
            }
            labels
        })
        .collect();
    match_bases(&from, &to)
}

pub fn periodic_cohomology(p: &PeriodicComplex) -> Result<Vec<usize>> {
    p.cohomology()
}

struct PeriodicMapSpaces<'a> {
    x: &'a PeriodicComplex,
    y: &'a PeriodicComplex,
    maps: BlockLayout,
    homotopies: BlockLayout,
    defects: BlockLayout,
}

impl<'a> PeriodicMapSpaces<'a> {
    fn new(x: &'a PeriodicComplex, y: &'a PeriodicComplex) -> Self {
        let n = x.n as i64;
        PeriodicMapSpaces {
            x,
            y,
            maps: BlockLayout::new((0..n).map(|i| (y.dim(i), x.dim(i))).collect()),
            homotopies: BlockLayout::new((0..n).map(|i| (y.dim(i - 1), x.dim(i))).collect()),
            defects: BlockLayout::new((0..n).map(|i| (y.dim(i + 1), x.dim(i))).collect()),
        }
    }

    /// `T(f)^i = ∂_Y^i f^i - f^{i+1} ∂_X^i`.
    fn chain_operator(&self) -> Matrix {
        let (x, y, n) = (self.x, self.y, self.x.n);
        operator_matrix(x.field, &self.maps, &self.defects, |f| {
            (0..n)
                .map(|i| &(&y.diff(i as i64) * &f[i]) - &(&f[(i + 1) % n] * &x.diff(i as i64)))
                .collect()
        })
    }

    /// `S(σ)^i = ∂_Y^{i-1} σ^i + σ^{i+1} ∂_X^i`.
    fn homotopy_operator(&self) -> Matrix {
        let (x, y, n) = (self.x, self.y, self.x.n);
        operator_matrix(x.field, &self.homotopies, &self.maps, |s| {
            (0..n)
                .map(|i| &(&y.diff(i as i64 - 1) * &s[i]) + &(&s[(i + 1) % n] * &x.diff(i as i64)))
                .collect()
        })
    }
}

fn check_pair(x: &PeriodicComplex, y: &PeriodicComplex) -> Result<()> {
    complexes::check_fields(x.field, y.field)?;
    if x.n != y.n {
        return Err(Error::PeriodMismatch(x.n, y.n));
    }
    x.ensure_valid()?;
    y.ensure_valid()
}

/// Hom dimensions in the homotopy category of n-periodic complexes.
pub fn periodic_hom_dims(x: &PeriodicComplex, y: &PeriodicComplex) -> Result<HomReport> {
    check_pair(x, y)?;
    let spaces = PeriodicMapSpaces::new(x, y);
    let cycles = spaces.maps.dim() - spaces.chain_operator().rank();
    let boundaries = spaces.homotopy_operator().rank();
    Ok(HomReport { cycles, boundaries, hom: cycles - boundaries })
}

/// Solves the cyclic system for a homotopy `f ≃ g`.
pub fn find_periodic_homotopy(f: &PeriodicChainMap, g: &PeriodicChainMap) -> Result<Option<PeriodicHomotopy>> {
    if f.source != g.source || f.target != g.target {
        return Err(Error::DimensionMismatch("f and g have different endpoints".into()));
    }
    let (x, y) = (&f.source, &f.target);
    check_pair(x, y)?;
    let spaces = PeriodicMapSpaces::new(x, y);
    let diff: Vec<Matrix> = f.components.iter().zip(&g.components).map(|(a, b)| a - b).collect();
    let rhs = spaces.maps.flatten(x.field, &diff);
    let Some(sol) = Matrix::solve_linear(&spaces.homotopy_operator(), &rhs)? else {
        return Ok(None);
    };
    let components = spaces.homotopies.unflatten(x.field, &sol);
    PeriodicHomotopy::new(f.clone(), g.clone(), components).map(Some)
}

/// Turns a contraction `s` of the unrolled window `[-1, n]` of `p` into a
/// periodic contraction: `σ^0 = s^n ∘ ∂^{-1} ∘ s^0` and `σ^j = s^j` for
/// `1 <= j < n`.
///
/// `s` need only satisfy `id = s^{i+1} ∂^i + ∂^{i-1} s^i` for `0 <= i < n`;
/// the result is checked against the periodic homotopy identity.
pub fn periodize_null_homotopy(p: &PeriodicComplex, s: &Homotopy) -> Result<PeriodicHomotopy> {
    let n = p.n as i64;
    let window = expand_window(p, -1, n)?;
    if s.f.source() != &window || s.f.target() != &window {
        return Err(Error::InvalidHomotopy("homotopy is not on the window [-1, n] of p".into()));
    }
    if s.f != ChainMap::identity(&window) || s.g != ChainMap::zero(&window, &window) {
        return Err(Error::InvalidHomotopy("expected a homotopy from the identity to zero".into()));
    }
    s.check_on(0..=n - 1)?;
    let mut components: Vec<Matrix> = (0..n).map(|j| s.component(j)).collect();
    components[0] = &(&s.component(n) * &window.diff(-1)) * &s.component(0);
    PeriodicHomotopy::new(PeriodicChainMap::identity(p), PeriodicChainMap::zero(p, p), components)
}

/// A periodic contraction of `p` obtained by contracting the unrolled
/// window and periodizing, or `None` when the window is not contractible.
pub fn contract_periodic(p: &PeriodicComplex) -> Result<Option<PeriodicHomotopy>> {
    p.ensure_valid()?;
    let n = p.n as i64;
    let window = expand_window(p, -1, n)?;
    let Some(s) = complexes::find_null_homotopy_on(&ChainMap::identity(&window), 0..=n - 1)? else {
        return Ok(None);
    };
    periodize_null_homotopy(p, &s).map(Some)
}

pub fn shift_periodic(p: &PeriodicComplex, l: i64) -> PeriodicComplex {
    p.shift(l)
}

/// The chain isomorphism `X[n] → X(n)` multiplying `X^j` by `(-1)^{nj}`,
/// where `j` is the degree in `X` (degree `j - n` in `X[n]`).
pub fn twist_iso(x: &BoundedComplex, n: i64) -> Result<ChainMap> {
    x.ensure_valid()?;
    let (source, target) = (x.shift(n), x.degree_shift(n));
    ChainMap::from_fn(&source, &target, |i| Matrix::identity(x.field(), source.dim(i)).signed(n * (i + n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{cone, find_null_homotopy};

    fn q() -> Field {
        Field::Rationals
    }

    fn f5() -> Field {
        Field::fp(5).unwrap()
    }

    fn id_k(field: Field) -> BoundedComplex {
        BoundedComplex::two_term(0, Matrix::identity(field, 1))
    }

    fn m(rows: usize, cols: usize, data: &[i64]) -> Matrix {
        Matrix::from_ints(q(), rows, cols, data)
    }

    #[test]
    fn compress_examples() {
        let p = compress(&id_k(q()), 2).unwrap();
        assert_eq!(p.dims(), &[1, 1]);
        assert_eq!(p.diffs(), &[m(1, 1, &[1]), m(1, 1, &[0])]);

        let p = compress(&id_k(q()), 1).unwrap();
        assert_eq!(p.dims(), &[2]);
        assert_eq!(p.diffs(), &[m(2, 2, &[0, 0, 1, 0])]);

        let p = compress(&BoundedComplex::concentrated(q(), 5, 1), 3).unwrap();
        assert_eq!(p.dims(), &[0, 0, 1]);
        assert!(p.diffs().iter().all(Matrix::is_zero));
    }

    #[test]
    fn compress_map_examples() {
        let x = id_k(q());
        assert_eq!(compress_map(&ChainMap::identity(&x), 2).unwrap(), PeriodicChainMap::identity(&compress(&x, 2).unwrap()));

        let k2 = BoundedComplex::two_term(0, m(1, 1, &[1]));
        let f = ChainMap::new(k2.clone(), k2, vec![m(1, 1, &[1]), m(1, 1, &[1])]).unwrap();
        let z = BoundedComplex::two_term(0, m(1, 1, &[0]));
        let g = ChainMap::new(z.clone(), z, vec![m(1, 1, &[1]), m(1, 1, &[2])]).unwrap();
        assert_eq!(compress_map(&g, 2).unwrap().components(), &[m(1, 1, &[1]), m(1, 1, &[2])]);
        assert_eq!(compress_map(&f, 2).unwrap().components().len(), 2);
    }

    #[test]
    fn compressing_a_null_homotopy() {
        let x = id_k(q());
        let f = ChainMap::identity(&x);
        let h = find_null_homotopy(&f).unwrap().unwrap();
        let pf = compress_map(&f, 2).unwrap();
        let layout = CompressionLayout::new(&x, 2);
        // Δσ: σ^1 : X^1 → X^0 lands in block (offset of X^0, offset of X^1).
        let mut comps = vec![Matrix::zeros(q(), 1, 1), Matrix::zeros(q(), 1, 1)];
        comps[1].set_block(layout.offset(0).unwrap(), layout.offset(1).unwrap(), &h.component(1));
        let zero = PeriodicChainMap::zero(pf.source(), pf.target());
        PeriodicHomotopy::new(pf, zero, comps).unwrap();
    }

    #[test]
    fn expand_examples() {
        let p = compress(&id_k(q()), 2).unwrap();
        let e = expand_window(&p, 0, 3).unwrap();
        assert_eq!(e.dims(), &[1, 1, 1, 1]);
        assert_eq!((e.diff(0), e.diff(1), e.diff(2)), (m(1, 1, &[1]), m(1, 1, &[0]), m(1, 1, &[1])));
        assert_eq!(e.diff(3).shape(), (0, 1));
        let e = expand_window(&p, 0, 0).unwrap();
        assert_eq!(e.dims(), &[1]);
        assert!(expand_window(&p, 1, 0).is_err());
    }

    #[test]
    fn unit_examples() {
        let k = BoundedComplex::concentrated(q(), 0, 1);
        let (eta, rho) = unit_and_retraction(&k, 1, -1, 1).unwrap();
        assert_eq!(eta.component(0), m(1, 1, &[1]));
        assert_eq!(rho.compose(&eta).unwrap(), ChainMap::identity(&k));

        let x = id_k(q());
        let (eta, rho) = unit_and_retraction(&x, 2, -2, 3).unwrap();
        assert_eq!(rho.compose(&eta).unwrap(), ChainMap::identity(&x));
        assert!(eta.target().dims().iter().all(|&d| d == 1));

        assert!(matches!(unit_and_retraction(&x, 2, -1, 3), Err(Error::WindowTooSmall(_))));
    }

    #[test]
    fn periodic_cone_examples() {
        let p = compress(&BoundedComplex::concentrated(q(), 0, 1), 1).unwrap();
        let c = periodic_cone(&PeriodicChainMap::identity(&p)).unwrap();
        assert_eq!(c.dims(), &[2]);
        assert_eq!(c.diffs(), &[m(2, 2, &[0, 0, 1, 0])]);
        assert!(c.is_acyclic().unwrap());

        let c = periodic_cone(&PeriodicChainMap::zero(&p, &p)).unwrap();
        assert_eq!(c.dims(), &[2]);
        assert!(c.diffs()[0].is_zero());

        let z = compress(&BoundedComplex::two_term(0, m(1, 1, &[0])), 2).unwrap();
        assert!(periodic_cone(&PeriodicChainMap::identity(&z)).unwrap().is_acyclic().unwrap());
    }

    #[test]
    fn cone_commutes_with_compression() {
        let x = id_k(q());
        let f = ChainMap::identity(&x);
        for n in 1..=3 {
            let left = compress(&cone(&f).unwrap().complex, n).unwrap();
            let right = periodic_cone(&compress_map(&f, n).unwrap()).unwrap();
            assert_eq!(left.permuted(&cone_reordering(&f, n).unwrap()), right);
        }
    }

    #[test]
    fn periodic_cohomology_examples() {
        assert_eq!(periodic_cohomology(&compress(&id_k(q()), 2).unwrap()).unwrap(), vec![0, 0]);
        let p = PeriodicComplex::new(q(), 1, vec![1], vec![m(1, 1, &[0])]).unwrap();
        assert_eq!(periodic_cohomology(&p).unwrap(), vec![1]);
        let p = PeriodicComplex::new(q(), 1, vec![2], vec![m(2, 2, &[0, 1, 0, 0])]).unwrap();
        assert_eq!(periodic_cohomology(&p).unwrap(), vec![0]);
    }

    #[test]
    fn periodic_homotopy_examples() {
        let p = compress(&id_k(q()), 2).unwrap();
        let id = PeriodicChainMap::identity(&p);
        let h = find_periodic_homotopy(&id, &id).unwrap().unwrap();
        assert!(h.components().iter().all(Matrix::is_zero));

        let k = BoundedComplex::concentrated(q(), 0, 1);
        let c = compress(&cone(&ChainMap::identity(&k)).unwrap().complex, 1).unwrap();
        let (id, zero) = (PeriodicChainMap::identity(&c), PeriodicChainMap::zero(&c, &c));
        assert!(find_periodic_homotopy(&id, &zero).unwrap().is_some());

        let p = PeriodicComplex::new(q(), 1, vec![1], vec![m(1, 1, &[0])]).unwrap();
        let (id, zero) = (PeriodicChainMap::identity(&p), PeriodicChainMap::zero(&p, &p));
        assert!(find_periodic_homotopy(&id, &zero).unwrap().is_none());
    }

    #[test]
    fn periodize_worked_example() {
        // n = 1, ∂ = [[0,1],[0,0]], s = [[0,0],[1,0]] in every degree.
        let p = PeriodicComplex::new(q(), 1, vec![2], vec![m(2, 2, &[0, 1, 0, 0])]).unwrap();
        let w = expand_window(&p, -1, 1).unwrap();
        let s = m(2, 2, &[0, 0, 1, 0]);
        let h = Homotopy::unchecked(
            ChainMap::identity(&w),
            ChainMap::zero(&w, &w),
            vec![Matrix::zeros(q(), 0, 2), s.clone(), s],
        )
        .unwrap();
        let sigma = periodize_null_homotopy(&p, &h).unwrap();
        assert_eq!(sigma.components(), &[m(2, 2, &[0, 0, 1, 0])]);
        let d = p.diff(0);
        let sum = &(&d * &sigma.component(0)) + &(&sigma.component(0) * &d);
        assert!(sum.is_identity());
    }

    #[test]
    fn periodize_from_solver() {
        let p = compress(&id_k(q()), 2).unwrap();
        let sigma = contract_periodic(&p).unwrap().unwrap();
        assert_eq!(sigma.components().len(), 2);

        let stuck = PeriodicComplex::new(q(), 1, vec![1], vec![m(1, 1, &[0])]).unwrap();
        assert!(contract_periodic(&stuck).unwrap().is_none());
    }

    #[test]
    fn periodize_rejects_bad_input() {
        let p = PeriodicComplex::new(q(), 1, vec![2], vec![m(2, 2, &[0, 1, 0, 0])]).unwrap();
        let w = expand_window(&p, -1, 1).unwrap();
        let zero = Matrix::zeros(q(), 2, 2);
        let h = Homotopy::unchecked(ChainMap::identity(&w), ChainMap::zero(&w, &w), vec![Matrix::zeros(q(), 0, 2), zero.clone(), zero])
            .unwrap();
        assert!(matches!(periodize_null_homotopy(&p, &h), Err(Error::InvalidHomotopy(_))));
    }

    #[test]
    fn periodic_hom_examples() {
        let k = BoundedComplex::concentrated(q(), 0, 1);
        assert_eq!(periodic_hom_dims(&compress(&k, 1).unwrap(), &compress(&k, 1).unwrap()).unwrap().hom, 1);
        assert_eq!(periodic_hom_dims(&compress(&k, 2).unwrap(), &compress(&k, 2).unwrap()).unwrap().hom, 1);

        let z = BoundedComplex::two_term(0, Matrix::zeros(f5(), 1, 1));
        let pz = compress(&z, 2).unwrap();
        let periodic = periodic_hom_dims(&pz, &pz).unwrap().hom;
        let summed: usize = (-2..=2).map(|i| complexes::hom_space_dims(&z, &z.shift(2 * i)).unwrap().hom).sum();
        assert_eq!(periodic, summed);
        assert_eq!(periodic, 2);
    }

    #[test]
    fn period_mismatch() {
        let k = BoundedComplex::concentrated(q(), 0, 1);
        let r = periodic_hom_dims(&compress(&k, 1).unwrap(), &compress(&k, 2).unwrap());
        assert_eq!(r, Err(Error::PeriodMismatch(1, 2)));
    }

    #[test]
    fn shift_and_twist() {
        let p = compress(&id_k(q()), 2).unwrap();
        let s = shift_periodic(&p, 2);
        assert_eq!(s.dims(), p.dims());
        assert_eq!(s.diffs(), p.diffs());
        let s3 = shift_periodic(&compress(&id_k(q()), 3).unwrap(), 3);
        assert_eq!(s3.diff(0), m(1, 1, &[-1]));

        let t = twist_iso(&id_k(q()), 2).unwrap();
        assert!(t.components().iter().all(Matrix::is_identity));

        let d = BoundedComplex::two_term(0, m(1, 1, &[3]));
        let t = twist_iso(&d, 1).unwrap();
        assert_eq!(t.components(), &[m(1, 1, &[1]), m(1, 1, &[-1])]);
        assert!(t.is_isomorphism());
    }
}
