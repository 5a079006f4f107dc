//! Bounded cochain complexes of finite-dimensional vector spaces.
//!
//! Indices are cohomological: `∂^i : X^i → X^{i+1}`. A complex lives on a
//! closed window `[lo, hi]` and is zero outside it; the differential leaving
//! `hi` is zero.

use std::fmt;
use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix};
use crate::linop::{operator_matrix, BlockLayout};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    /// `∂^i` does not have shape `dim(i+1) x dim(i)`.
    Shape { expected: (usize, usize), found: (usize, usize) },
    /// `∂^{i+1} ∘ ∂^i ≠ 0`.
    NotSquareZero,
}

/// First degree at which a complex fails to be one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub degree: i64,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ViolationKind::Shape { expected, found } => write!(
                f,
                "differential at degree {} has shape {}x{}, expected {}x{}",
                self.degree, found.0, found.1, expected.0, expected.1
            ),
            ViolationKind::NotSquareZero => {
                write!(f, "∂^{} ∘ ∂^{} ≠ 0", self.degree + 1, self.degree)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedComplex {
    field: Field,
    lo: i64,
    dims: Vec<usize>,
    diffs: Vec<Matrix>,
}

impl BoundedComplex {
    /// Terms `dims[k]` sit in degree `lo + k`; `diffs[k]` is `∂^{lo+k}`.
    /// Only shapes are checked here; see [`BoundedComplex::validate`].
    pub fn new(field: Field, lo: i64, dims: Vec<usize>, diffs: Vec<Matrix>) -> Result<Self> {
        if diffs.len() != dims.len().saturating_sub(1) {
            return Err(Error::DimensionMismatch(format!(
                "{} terms need {} differentials, got {}",
                dims.len(),
                dims.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.field() != field {
                return Err(Error::FieldMismatch(field, d.field()));
            }
            if d.shape() != (dims[k + 1], dims[k]) {
                return Err(Error::DimensionMismatch(
                    Violation {
                        degree: lo + k as i64,
                        kind: ViolationKind::Shape { expected: (dims[k + 1], dims[k]), found: d.shape() },
                    }
                    .to_string(),
                ));
            }
        }
        Ok(BoundedComplex { field, lo, dims, diffs })
    }

    pub fn zero(field: Field) -> Self {
        BoundedComplex { field, lo: 0, dims: vec![], diffs: vec![] }
    }

    /// `k^dim` in a single degree.
    pub fn concentrated(field: Field, degree: i64, dim: usize) -> Self {
        BoundedComplex { field, lo: degree, dims: vec![dim], diffs: vec![] }
    }

    /// The two-term complex `k^a --m--> k^b` in degrees `lo, lo+1`.
    pub fn two_term(lo: i64, m: Matrix) -> Self {
        let (b, a) = m.shape();
        BoundedComplex { field: m.field(), lo, dims: vec![a, b], diffs: vec![m] }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Upper end of the window; `lo - 1` for the empty window.
    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn degrees(&self) -> RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    pub fn is_empty_window(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Smallest window containing every nonzero term, if any.
    pub fn support(&self) -> Option<(i64, i64)> {
        let first = self.dims.iter().position(|&d| d > 0)?;
        let last = self.dims.iter().rposition(|&d| d > 0)?;
        Some((self.lo + first as i64, self.lo + last as i64))
    }

    pub fn dim(&self, i: i64) -> usize {
        if self.degrees().contains(&i) {
            self.dims[(i - self.lo) as usize]
        } else {
            0
        }
    }

    /// `∂^i`, zero outside the window and at `hi`.
    pub fn diff(&self, i: i64) -> Matrix {
        if i >= self.lo && i < self.hi() {
            self.diffs[(i - self.lo) as usize].clone()
        } else {
            Matrix::zeros(self.field, self.dim(i + 1), self.dim(i))
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn validate(&self) -> Result<(), Violation> {
        for i in self.lo..self.hi() - 1 {
            if !(&self.diff(i + 1) * &self.diff(i)).is_zero() {
                return Err(Violation { degree: i, kind: ViolationKind::NotSquareZero });
            }
        }
        Ok(())
    }

    pub(crate) fn ensure_valid(&self) -> Result<()> {
        self.validate().map_err(|v| Error::InvalidComplex(v.to_string()))
    }

    /// The same complex on a larger window `[lo, hi]`, padded with zeros.
    pub fn with_window(&self, lo: i64, hi: i64) -> Result<Self> {
        if let Some((s, t)) = self.support() {
            if lo > s || hi < t {
                return Err(Error::WindowTooSmall(format!("[{lo}, {hi}] misses support [{s}, {t}]")));
            }
        }
        let dims: Vec<usize> = (lo..=hi).map(|i| self.dim(i)).collect();
        let diffs = (lo..hi).map(|i| self.diff(i)).collect();
        BoundedComplex::new(self.field, lo, dims, diffs)
    }

    /// `X[l]^i = X^{i+l}` and `∂_{X[l]}^i = (-1)^l ∂_X^{i+l}`.
    pub fn shift(&self, l: i64) -> Self {
        BoundedComplex {
            field: self.field,
            lo: self.lo - l,
            dims: self.dims.clone(),
            diffs: self.diffs.iter().map(|d| d.signed(l)).collect(),
        }
    }

    /// `X(l)^i = X^{i+l}` with unchanged differentials.
    pub fn degree_shift(&self, l: i64) -> Self {
        BoundedComplex { lo: self.lo - l, ..self.clone() }
    }

    /// `(degree, dim H^i)` over the window.
    pub fn cohomology_dims(&self) -> Result<Vec<(i64, usize)>> {
        self.ensure_valid()?;
        Ok(self
            .degrees()
            .map(|i| (i, self.dim(i) - self.diff(i).rank() - self.diff(i - 1).rank()))
            .collect())
    }

    pub fn is_acyclic(&self) -> Result<bool> {
        Ok(self.cohomology_dims()?.iter().all(|&(_, h)| h == 0))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees()
            .map(|i| if i.rem_euclid(2) == 0 { self.dim(i) as i64 } else { -(self.dim(i) as i64) })
            .sum()
    }

    pub fn direct_sum(&self, other: &BoundedComplex) -> Result<Self> {
        check_fields(self.field, other.field)?;
        let (lo, hi) = union_window(self, other);
        let dims = (lo..=hi).map(|i| self.dim(i) + other.dim(i)).collect();
        let diffs = (lo..hi).map(|i| self.diff(i).direct_sum(&other.diff(i))).collect();
        BoundedComplex::new(self.field, lo, dims, diffs)
    }

    /// Conjugates by invertible `bases[k]` acting on the term in degree
    /// `lo + k`: `∂' = P_{i+1} ∂ P_i^{-1}`.
    pub fn change_basis(&self, bases: &[Matrix]) -> Result<Self> {
        if bases.len() != self.dims.len() {
            return Err(Error::DimensionMismatch("one basis change per term".into()));
        }
        let inverses = bases
            .iter()
            .map(|p| p.inverse().ok_or_else(|| Error::InvalidEntry("singular basis change".into())))
            .collect::<Result<Vec<_>>>()?;
        let diffs = self
            .diffs
            .iter()
            .enumerate()
            .map(|(k, d)| &(&bases[k + 1] * d) * &inverses[k])
            .collect();
        BoundedComplex::new(self.field, self.lo, self.dims.clone(), diffs)
    }
}

pub(crate) fn check_fields(a: Field, b: Field) -> Result<()> {
    if a != b {
        return Err(Error::FieldMismatch(a, b));
    }
    Ok(())
}

fn union_window(a: &BoundedComplex, b: &BoundedComplex) -> (i64, i64) {
    match (a.is_empty_window(), b.is_empty_window()) {
        (true, true) => (0, -1),
        (true, false) => (b.lo, b.hi()),
        (false, true) => (a.lo, a.hi()),
        (false, false) => (a.lo.min(b.lo), a.hi().max(b.hi())),
    }
}

/// A degree-0 map `f^i : X^i → Y^i`; components are stored over the
/// source window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMap {
    source: BoundedComplex,
    target: BoundedComplex,
    components: Vec<Matrix>,
}

impl ChainMap {
    /// Checks shapes and the chain-map identity `f^{i+1} ∂_X^i = ∂_Y^i f^i`.
    pub fn new(source: BoundedComplex, target: BoundedComplex, components: Vec<Matrix>) -> Result<Self> {
        let map = ChainMap::graded(source, target, components)?;
        map.check_commutes()?;
        Ok(map)
    }

    /// A degree-0 graded map, without the chain-map check.
    pub fn graded(source: BoundedComplex, target: BoundedComplex, components: Vec<Matrix>) -> Result<Self> {
        check_fields(source.field, target.field)?;
        if components.len() != source.dims.len() {
            return Err(Error::InvalidChainMap(format!(
                "{} components for a source window of {} terms",
                components.len(),
                source.dims.len()
            )));
        }
        for (i, c) in source.degrees().zip(&components) {
            if c.shape() != (target.dim(i), source.dim(i)) || c.field() != source.field {
                return Err(Error::InvalidChainMap(format!(
                    "component {i} has shape {}x{}, expected {}x{}",
                    c.rows(),
                    c.cols(),
                    target.dim(i),
                    source.dim(i)
                )));
            }
        }
        Ok(ChainMap { source, target, components })
    }

    pub fn from_fn(
        source: &BoundedComplex,
        target: &BoundedComplex,
        f: impl Fn(i64) -> Matrix,
    ) -> Result<Self> {
        let components = source.degrees().map(f).collect();
        ChainMap::new(source.clone(), target.clone(), components)
    }

    pub fn identity(x: &BoundedComplex) -> Self {
        let components = x.degrees().map(|i| Matrix::identity(x.field, x.dim(i))).collect();
        ChainMap { source: x.clone(), target: x.clone(), components }
    }

    pub fn zero(x: &BoundedComplex, y: &BoundedComplex) -> Self {
        let components = x.degrees().map(|i| Matrix::zeros(x.field, y.dim(i), x.dim(i))).collect();
        ChainMap { source: x.clone(), target: y.clone(), components }
    }

    pub fn source(&self) -> &BoundedComplex {
        &self.source
    }

    pub fn target(&self) -> &BoundedComplex {
        &self.target
    }

    pub fn field(&self) -> Field {
        self.source.field
    }

    pub fn components(&self) -> &[Matrix] {
        &self.components
    }

    pub fn component(&self, i: i64) -> Matrix {
        if self.source.degrees().contains(&i) {
            self.components[(i - self.source.lo) as usize].clone()
        } else {
            Matrix::zeros(self.field(), self.target.dim(i), self.source.dim(i))
        }
    }

    fn check_commutes(&self) -> Result<()> {
        let (lo, hi) = union_window(&self.source, &self.target);
        for i in lo - 1..=hi {
            let left = &self.component(i + 1) * &self.source.diff(i);
            let right = &self.target.diff(i) * &self.component(i);
            if left != right {
                return Err(Error::InvalidChainMap(format!("square at degree {i} does not commute")));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.source.ensure_valid()?;
        self.target.ensure_valid()?;
        self.check_commutes()
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ChainMap) -> Result<ChainMap> {
        if first.target != self.source {
            return Err(Error::InvalidChainMap("composition of non-composable maps".into()));
        }
        let components = first.source.degrees().map(|i| &self.component(i) * &first.component(i)).collect();
        ChainMap::new(first.source.clone(), self.target.clone(), components)
    }

    pub fn sub(&self, other: &ChainMap) -> Result<ChainMap> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::InvalidChainMap("difference of maps with different endpoints".into()));
        }
        let components = self.components.iter().zip(&other.components).map(|(a, b)| a - b).collect();
        Ok(ChainMap { components, ..self.clone() })
    }

    pub fn scale_int(&self, k: i64) -> ChainMap {
        ChainMap { components: self.components.iter().map(|c| c.scale_int(k)).collect(), ..self.clone() }
    }

    pub fn is_isomorphism(&self) -> bool {
        let (lo, hi) = union_window(&self.source, &self.target);
        (lo..=hi).all(|i| self.component(i).inverse().is_some())
    }
}

/// `σ^i : X^i → Y^{i-1}` witnessing `f - g = σ∂ + ∂σ`; components are
/// stored over the source window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homotopy {
    pub f: ChainMap,
    pub g: ChainMap,
    components: Vec<Matrix>,
}

impl Homotopy {
    /// Checks the homotopy identity at every degree.
    pub fn new(f: ChainMap, g: ChainMap, components: Vec<Matrix>) -> Result<Self> {
        let h = Homotopy::unchecked(f, g, components)?;
        let (lo, hi) = union_window(&h.f.source, &h.f.target);
        h.check_on(lo - 1..=hi + 1)?;
        Ok(h)
    }

    pub(crate) fn unchecked(f: ChainMap, g: ChainMap, components: Vec<Matrix>) -> Result<Self> {
        if f.source != g.source || f.target != g.target {
            return Err(Error::InvalidHomotopy("f and g have different endpoints".into()));
        }
        if components.len() != f.source.dims.len() {
            return Err(Error::InvalidHomotopy("one component per source degree".into()));
        }
        for (i, c) in f.source.degrees().zip(&components) {
            if c.shape() != (f.target.dim(i - 1), f.source.dim(i)) {
                return Err(Error::InvalidHomotopy(format!("component {i} has the wrong shape")));
            }
        }
        Ok(Homotopy { f, g, components })
    }

    pub fn components(&self) -> &[Matrix] {
        &self.components
    }

    pub fn component(&self, i: i64) -> Matrix {
        let x = &self.f.source;
        if x.degrees().contains(&i) {
            self.components[(i - x.lo) as usize].clone()
        } else {
            Matrix::zeros(x.field, self.f.target.dim(i - 1), x.dim(i))
        }
    }

    /// `f^i - g^i - (σ^{i+1} ∂_X^i + ∂_Y^{i-1} σ^i)`.
    pub fn defect(&self, i: i64) -> Matrix {
        let (x, y) = (&self.f.source, &self.f.target);
        let diff = &self.f.component(i) - &self.g.component(i);
        let htpy = &(&self.component(i + 1) * &x.diff(i)) + &(&y.diff(i - 1) * &self.component(i));
        &diff - &htpy
    }

    /// Checks the homotopy identity on the given degrees only.
    pub fn check_on(&self, degrees: RangeInclusive<i64>) -> Result<()> {
        for i in degrees {
            if !self.defect(i).is_zero() {
                return Err(Error::InvalidHomotopy(format!("identity fails at degree {i}")));
            }
        }
        Ok(())
    }
}

/// Mapping cone `C(f)^i = X^{i+1} ⊕ Y^i` with differential
/// `[[-∂_X^{i+1}, 0], [f^{i+1}, ∂_Y^i]]`, X-part first.
#[derive(Debug, Clone)]
pub struct Cone {
    pub complex: BoundedComplex,
    /// `(0, 1)ᵀ : Y → C(f)`.
    pub inclusion: ChainMap,
    /// `(1, 0) : C(f) → X[1]`.
    pub projection: ChainMap,
}

pub fn cone(f: &ChainMap) -> Result<Cone> {
    f.validate()?;
    let (x, y) = (&f.source, &f.target);
    let field = f.field();
    let xs = x.shift(1);
    let (lo, hi) = union_window(&xs, y);
    let dims: Vec<usize> = (lo..=hi).map(|i| x.dim(i + 1) + y.dim(i)).collect();
    let diffs = (lo..hi)
        .map(|i| {
            Matrix::from_blocks(
                field,
                &[x.dim(i + 2), y.dim(i + 1)],
                &[x.dim(i + 1), y.dim(i)],
                &[vec![Some(-&x.diff(i + 1)), None], vec![Some(f.component(i + 1)), Some(y.diff(i))]],
            )
        })
        .collect();
    let complex = BoundedComplex::new(field, lo, dims, diffs)?;
    let inclusion = ChainMap::from_fn(y, &complex, |i| {
        Matrix::from_blocks(
            field,
            &[x.dim(i + 1), y.dim(i)],
            &[y.dim(i)],
            &[vec![None], vec![Some(Matrix::identity(field, y.dim(i)))]],
        )
    })?;
    let projection = ChainMap::from_fn(&complex, &xs, |i| {
        Matrix::from_blocks(
            field,
            &[x.dim(i + 1)],
            &[x.dim(i + 1), y.dim(i)],
            &[vec![Some(Matrix::identity(field, x.dim(i + 1))), None]],
        )
    })?;
    Ok(Cone { complex, inclusion, projection })
}

/// Dimensions of the chain-map space `Z`, its null-homotopic subspace `B`,
/// and `Hom = Z - B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HomReport {
    pub cycles: usize,
    pub boundaries: usize,
    pub hom: usize,
}

/// Layouts and operators for degree-0 and degree-(-1) maps `X → Y`.
struct MapSpaces<'a> {
    x: &'a BoundedComplex,
    y: &'a BoundedComplex,
    maps: BlockLayout,
    homotopies: BlockLayout,
    chain_defects: BlockLayout,
}

impl<'a> MapSpaces<'a> {
    fn new(x: &'a BoundedComplex, y: &'a BoundedComplex) -> Self {
        let degs: Vec<i64> = x.degrees().collect();
        MapSpaces {
            x,
            y,
            maps: BlockLayout::new(degs.iter().map(|&i| (y.dim(i), x.dim(i))).collect()),
            homotopies: BlockLayout::new(degs.iter().map(|&i| (y.dim(i - 1), x.dim(i))).collect()),
            chain_defects: BlockLayout::new(degs.iter().map(|&i| (y.dim(i + 1), x.dim(i))).collect()),
        }
    }

    fn block(blocks: &[Matrix], lo: i64, i: i64, zero: impl Fn() -> Matrix) -> Matrix {
        usize::try_from(i - lo).ok().and_then(|k| blocks.get(k).cloned()).unwrap_or_else(zero)
    }

    /// `T(f)^i = ∂_Y^i f^i - f^{i+1} ∂_X^i`.
    fn chain_operator(&self) -> Matrix {
        let (x, y) = (self.x, self.y);
        operator_matrix(x.field, &self.maps, &self.chain_defects, |f| {
            x.degrees()
                .map(|i| {
                    let next = Self::block(f, x.lo, i + 1, || Matrix::zeros(x.field, y.dim(i + 1), x.dim(i + 1)));
                    &(&y.diff(i) * &f[(i - x.lo) as usize]) - &(&next * &x.diff(i))
                })
                .collect()
        })
    }

    /// `S(σ)^i = ∂_Y^{i-1} σ^i + σ^{i+1} ∂_X^i`, restricted to `degrees`.
    fn homotopy_operator(&self, degrees: &RangeInclusive<i64>) -> (Matrix, BlockLayout) {
        let (x, y) = (self.x, self.y);
        let degs: Vec<i64> = x.degrees().filter(|i| degrees.contains(i)).collect();
        let codomain = BlockLayout::new(degs.iter().map(|&i| (y.dim(i), x.dim(i))).collect());
        let op = operator_matrix(x.field, &self.homotopies, &codomain, |s| {
            degs.iter()
                .map(|&i| {
                    let next = Self::block(s, x.lo, i + 1, || Matrix::zeros(x.field, y.dim(i), x.dim(i + 1)));
                    &(&y.diff(i - 1) * &s[(i - x.lo) as usize]) + &(&next * &x.diff(i))
                })
                .collect()
        });
        (op, codomain)
    }
}

pub fn hom_space_dims(x: &BoundedComplex, y: &BoundedComplex) -> Result<HomReport> {
    check_fields(x.field, y.field)?;
    x.ensure_valid()?;
    y.ensure_valid()?;
    let spaces = MapSpaces::new(x, y);
    let cycles = spaces.maps.dim() - spaces.chain_operator().rank();
    let boundaries = spaces.homotopy_operator(&x.degrees()).0.rank();
    Ok(HomReport { cycles, boundaries, hom: cycles - boundaries })
}

/// A basis of the space of chain maps `X → Y` (the cycles of the Hom
/// complex).
pub fn chain_map_basis(x: &BoundedComplex, y: &BoundedComplex) -> Result<Vec<ChainMap>> {
    check_fields(x.field, y.field)?;
    x.ensure_valid()?;
    y.ensure_valid()?;
    let spaces = MapSpaces::new(x, y);
    let kernel = spaces.chain_operator().kernel_basis();
    Ok((0..kernel.cols())
        .map(|k| ChainMap {
            source: x.clone(),
            target: y.clone(),
            components: spaces.maps.unflatten(x.field, &kernel.column(k)),
        })
        .collect())
}

/// A homotopy `f ≃ 0`, if one exists.
pub fn find_null_homotopy(f: &ChainMap) -> Result<Option<Homotopy>> {
    f.validate()?;
    let degrees = f.source.degrees();
    let Some(h) = solve_homotopy(f, &degrees)? else {
        return Ok(None);
    };
    let (lo, hi) = union_window(&f.source, &f.target);
    h.check_on(lo - 1..=hi + 1)?;
    Ok(Some(h))
}

/// A family `σ` satisfying `f^i = σ^{i+1} ∂^i + ∂^{i-1} σ^i` for `i` in
/// `degrees` only, e.g. a contraction of the interior of a truncated window.
pub fn find_null_homotopy_on(f: &ChainMap, degrees: RangeInclusive<i64>) -> Result<Option<Homotopy>> {
    f.validate()?;
    let Some(h) = solve_homotopy(f, &degrees)? else {
        return Ok(None);
    };
    h.check_on(degrees)?;
    Ok(Some(h))
}

fn solve_homotopy(f: &ChainMap, degrees: &RangeInclusive<i64>) -> Result<Option<Homotopy>> {
    let (x, y) = (&f.source, &f.target);
    let spaces = MapSpaces::new(x, y);
    let (op, codomain) = spaces.homotopy_operator(degrees);
    let targets: Vec<Matrix> = x.degrees().filter(|i| degrees.contains(i)).map(|i| f.component(i)).collect();
    let rhs = codomain.flatten(x.field, &targets);
    let Some(sol) = Matrix::solve_linear(&op, &rhs)? else {
        return Ok(None);
    };
    let components = spaces.homotopies.unflatten(x.field, &sol);
    Homotopy::unchecked(f.clone(), ChainMap::zero(x, y), components).map(Some)
}

/// `(X⊗Y)^l = ⊕_{i+j=l} X^i ⊗ Y^j`, summands ordered by increasing `i`,
/// with `d(x⊗y) = dx⊗y + (-1)^i x⊗dy`.
pub fn tensor_complex(x: &BoundedComplex, y: &BoundedComplex) -> Result<BoundedComplex> {
    check_fields(x.field, y.field)?;
    let field = x.field;
    if x.is_empty_window() || y.is_empty_window() {
        return Ok(BoundedComplex::zero(field));
    }
    let (lo, hi) = (x.lo + y.lo, x.hi() + y.hi());
    let parts = |l: i64| -> Vec<i64> { x.degrees().filter(|&i| y.degrees().contains(&(l - i))).collect() };
    let dims: Vec<usize> = (lo..=hi).map(|l| parts(l).iter().map(|&i| x.dim(i) * y.dim(l - i)).sum()).collect();
    let diffs = (lo..hi)
        .map(|l| {
            let (src, dst) = (parts(l), parts(l + 1));
            let row_dims: Vec<usize> = dst.iter().map(|&i| x.dim(i) * y.dim(l + 1 - i)).collect();
            let col_dims: Vec<usize> = src.iter().map(|&i| x.dim(i) * y.dim(l - i)).collect();
            let blocks: Vec<Vec<Option<Matrix>>> = dst
                .iter()
                .map(|&di| {
                    src.iter()
                        .map(|&si| {
                            let sj = l - si;
                            if di == si + 1 {
                                Some(x.diff(si).kron(&Matrix::identity(field, y.dim(sj))))
                            } else if di == si {
                                Some(Matrix::identity(field, x.dim(si)).kron(&y.diff(sj)).signed(si))
                            } else {
                                None
                            }
                        })
                        .collect()
                })
                .collect();
            Matrix::from_blocks(field, &row_dims, &col_dims, &blocks)
        })
        .collect();
    BoundedComplex::new(field, lo, dims, diffs)
}
