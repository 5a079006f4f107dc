//! Graded modules over the polynomial ring `S = k[x_1..x_c]` (generators of
//! degree 1) and the exterior algebra `Λ` on `ξ_1..ξ_c` (degree -1), held on
//! a finite window of internal degrees; complexes of such modules; finite
//! projective flags; and the tensor functor `X ⊠ -` over the base field.

use std::collections::HashMap;
use std::fmt;

use crate::complexes::{self, BoundedComplex};
use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix};
use crate::periodic::{match_bases, PeriodicChainMap, PeriodicComplex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algebra {
    Poly(usize),
    Ext(usize),
}

impl Algebra {
    pub fn generators(self) -> usize {
        match self {
            Algebra::Poly(c) | Algebra::Ext(c) => c,
        }
    }

    /// Internal degree of each generator.
    pub fn generator_degree(self) -> i64 {
        match self {
            Algebra::Poly(_) => 1,
            Algebra::Ext(_) => -1,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Algebra::Poly(_) => "x",
            Algebra::Ext(_) => "ξ",
        }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algebra::Poly(c) => write!(f, "S({c})"),
            Algebra::Ext(c) => write!(f, "Λ({c})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleViolationKind {
    Shape { expected: (usize, usize), found: (usize, usize) },
    /// `x_j x_l ≠ x_l x_j`, or `ξ_j ξ_l ≠ -ξ_l ξ_j` (including `ξ_j² ≠ 0`).
    Relation { l: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleViolation {
    /// Generator index, 1-based.
    pub j: usize,
    pub degree: i64,
    pub kind: ModuleViolationKind,
}

impl fmt::Display for ModuleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ModuleViolationKind::Shape { expected, found } => write!(
                f,
                "action of generator {} at degree {} has shape {}x{}, expected {}x{}",
                self.j, self.degree, found.0, found.1, expected.0, expected.1
            ),
            ModuleViolationKind::Relation { l } => {
                write!(f, "relation between generators ({}, {}) fails at degree {}", self.j, l, self.degree)
            }
        }
    }
}

/// A graded module on the window `[lo, lo + dims.len() - 1]`. Generator `j`
/// acts by `actions[j][k] : M_d → M_{d+e}` with `d = lo + k` and `e` the
/// generator degree; the target is zero when `d + e` leaves the window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedModule {
    field: Field,
    algebra: Algebra,
    lo: i64,
    dims: Vec<usize>,
    actions: Vec<Vec<Matrix>>,
}

impl GradedModule {
    /// Builds a module, checking shapes only; see [`GradedModule::validate`].
    pub fn new(field: Field, algebra: Algebra, lo: i64, dims: Vec<usize>, actions: Vec<Vec<Matrix>>) -> Result<Self> {
        if actions.len() != algebra.generators() {
            return Err(Error::InvalidModule(format!(
                "{algebra} has {} generators, got {} action lists",
                algebra.generators(),
                actions.len()
            )));
        }
        let m = GradedModule { field, algebra, lo, dims, actions };
        for (j, per_degree) in m.actions.iter().enumerate() {
            if per_degree.len() != m.dims.len() {
                return Err(Error::InvalidModule(format!("generator {} needs one matrix per degree", j + 1)));
            }
            for (d, a) in m.degrees().zip(per_degree) {
                complexes::check_fields(field, a.field())?;
                let expected = (m.dim(d + algebra.generator_degree()), m.dim(d));
                if a.shape() != expected {
                    let v = ModuleViolation { j: j + 1, degree: d, kind: ModuleViolationKind::Shape { expected, found: a.shape() } };
                    return Err(Error::InvalidModule(v.to_string()));
                }
            }
        }
        Ok(m)
    }

    pub fn zero(field: Field, algebra: Algebra, lo: i64, hi: i64) -> Self {
        GradedModule::concentrated(field, algebra, lo, 0, lo, hi)
    }

    /// `k^dim` in internal degree `degree`, with trivial action.
    pub fn concentrated(field: Field, algebra: Algebra, degree: i64, dim: usize, lo: i64, hi: i64) -> Self {
        let dims: Vec<usize> = (lo..=hi).map(|d| if d == degree { dim } else { 0 }).collect();
        let e = algebra.generator_degree();
        let actions = (0..algebra.generators())
            .map(|_| {
                (lo..=hi)
                    .map(|d| {
                        let target = if (lo..=hi).contains(&(d + e)) { dims[(d + e - lo) as usize] } else { 0 };
                        Matrix::zeros(field, target, dims[(d - lo) as usize])
                    })
                    .collect()
            })
            .collect();
        GradedModule { field, algebra, lo, dims, actions }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi())
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn actions(&self) -> &[Vec<Matrix>] {
        &self.actions
    }

    pub fn dim(&self, d: i64) -> usize {
        if self.degrees().contains(&d) {
            self.dims[(d - self.lo) as usize]
        } else {
            0
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Action of generator `j` (0-based) out of degree `d`; zero outside the
    /// window.
    pub fn action(&self, j: usize, d: i64) -> Matrix {
        if self.degrees().contains(&d) {
            self.actions[j][(d - self.lo) as usize].clone()
        } else {
            Matrix::zeros(self.field, self.dim(d + self.algebra.generator_degree()), self.dim(d))
        }
    }

    /// Checks the algebra relations wherever both composites stay in the
    /// window.
    pub fn validate(&self) -> Result<(), ModuleViolation> {
        let e = self.algebra.generator_degree();
        let c = self.algebra.generators();
        for d in self.degrees().filter(|d| self.degrees().contains(&(d + 2 * e))) {
            for j in 0..c {
                let first = match self.algebra {
                    Algebra::Poly(_) => j + 1,
                    Algebra::Ext(_) => j,
                };
                for l in first..c {
                    let jl = &self.action(j, d + e) * &self.action(l, d);
                    let lj = &self.action(l, d + e) * &self.action(j, d);
                    let holds = match self.algebra {
                        Algebra::Poly(_) => jl == lj,
                        Algebra::Ext(_) if j == l => jl.is_zero(),
                        Algebra::Ext(_) => (&jl + &lj).is_zero(),
                    };
                    if !holds {
                        return Err(ModuleViolation { j: j + 1, degree: d, kind: ModuleViolationKind::Relation { l: l + 1 } });
                    }
                }
            }
        }
        Ok(())
    }

    pub(crate) fn ensure_valid(&self) -> Result<()> {
        self.validate().map_err(|v| Error::InvalidModule(v.to_string()))
    }

    fn check_compatible(&self, other: &GradedModule) -> Result<()> {
        complexes::check_fields(self.field, other.field)?;
        if self.algebra != other.algebra {
            return Err(Error::InvalidModule(format!("modules over {} and {}", self.algebra, other.algebra)));
        }
        if self.window() != other.window() {
            return Err(Error::InvalidModule(format!(
                "windows {:?} and {:?} differ",
                self.window(),
                other.window()
            )));
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &GradedModule) -> Result<Self> {
        self.check_compatible(other)?;
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let actions = self
            .actions
            .iter()
            .zip(&other.actions)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.direct_sum(y)).collect())
            .collect();
        GradedModule::new(self.field, self.algebra, self.lo, dims, actions)
    }

    /// Conjugates the action by invertible `bases[k]` on `M_{lo+k}`.
    pub fn change_basis(&self, bases: &[Matrix]) -> Result<Self> {
        if bases.len() != self.dims.len() {
            return Err(Error::DimensionMismatch("one basis change per degree".into()));
        }
        let inverses = invert_all(bases)?;
        let e = self.algebra.generator_degree();
        let basis_at = |d: i64| -> Option<&Matrix> { self.degrees().contains(&d).then(|| &bases[(d - self.lo) as usize]) };
        let actions = self
            .actions
            .iter()
            .map(|per_degree| {
                self.degrees()
                    .zip(per_degree)
                    .zip(&inverses)
                    .map(|((d, a), inv)| match basis_at(d + e) {
                        Some(p) => &(p * a) * inv,
                        None => a.clone(),
                    })
                    .collect()
            })
            .collect();
        GradedModule::new(self.field, self.algebra, self.lo, self.dims.clone(), actions)
    }
}

fn invert_all(bases: &[Matrix]) -> Result<Vec<Matrix>> {
    bases
        .iter()
        .map(|p| p.inverse().ok_or_else(|| Error::InvalidEntry("singular basis change".into())))
        .collect()
}

/// A monomial `x^a` as its exponent vector.
pub type Exponent = Vec<u32>;

/// Homogeneous polynomial as `(coefficient, exponent)` terms.
pub type Poly = Vec<(i64, Exponent)>;

/// Monomials of total degree `k` in `c` variables, highest power of `x_1`
/// first, then recursively.
pub fn monomials(c: usize, k: i64) -> Vec<Exponent> {
    if k < 0 {
        return Vec::new();
    }
    if c == 0 {
        return if k == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=k).rev() {
        for mut rest in monomials(c - 1, k - first) {
            rest.insert(0, first as u32);
            out.push(rest);
        }
    }
    out
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// `S(-g) / (m_1, ..., m_r)`: the free module on one generator of degree
/// `g`, modulo monomials; `F(g)_d = S_{d-g}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialModule {
    pub c: usize,
    pub generator_degree: i64,
    pub relations: Vec<Exponent>,
}

impl MonomialModule {
    pub fn free(c: usize, g: i64) -> Self {
        MonomialModule { c, generator_degree: g, relations: Vec::new() }
    }

    pub fn quotient(c: usize, g: i64, relations: Vec<Exponent>) -> Self {
        MonomialModule { c, generator_degree: g, relations }
    }

    /// Surviving monomials of `M_d`.
    pub fn basis(&self, d: i64) -> Vec<Exponent> {
        monomials(self.c, d - self.generator_degree)
            .into_iter()
            .filter(|m| !self.relations.iter().any(|r| divides(r, m)))
            .collect()
    }

    pub fn module(&self, field: Field, lo: i64, hi: i64) -> GradedModule {
        Presentation(vec![self.clone()]).module(field, lo, hi)
    }
}

/// A finite direct sum of monomial modules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation(pub Vec<MonomialModule>);

impl Presentation {
    /// `(summand, monomial)` labels of `M_d` in basis order.
    fn labels(&self, d: i64) -> Vec<(usize, Exponent)> {
        self.0.iter().enumerate().flat_map(|(s, m)| m.basis(d).into_iter().map(move |e| (s, e))).collect()
    }

    fn index(&self, d: i64) -> HashMap<(usize, Exponent), usize> {
        self.labels(d).into_iter().enumerate().map(|(k, l)| (l, k)).collect()
    }

    pub fn module(&self, field: Field, lo: i64, hi: i64) -> GradedModule {
        let c = self.0.first().map_or(0, |m| m.c);
        let dims: Vec<usize> = (lo..=hi).map(|d| self.labels(d).len()).collect();
        let actions = (0..c)
            .map(|j| {
                (lo..=hi)
                    .map(|d| {
                        let rows = if d < hi { self.labels(d + 1).len() } else { 0 };
                        let mut a = Matrix::zeros(field, rows, dims[(d - lo) as usize]);
                        if d < hi {
                            let target = self.index(d + 1);
                            for (k, (s, e)) in self.labels(d).into_iter().enumerate() {
                                let mut moved = e;
                                moved[j] += 1;
                                if let Some(&r) = target.get(&(s, moved)) {
                                    a.set_int(r, k, 1);
                                }
                            }
                        }
                        a
                    })
                    .collect()
            })
            .collect();
        GradedModule { field, algebra: Algebra::Poly(c), lo, dims, actions }
    }

    /// The map given by a matrix of homogeneous polynomials,
    /// `entries[t][s]` sending summand `s` of `self` into summand `t` of
    /// `target`.
    pub fn map(&self, target: &Presentation, entries: &[Vec<Poly>], field: Field, lo: i64, hi: i64) -> Result<GradedMap> {
        if entries.len() != target.0.len() || entries.iter().any(|row| row.len() != self.0.len()) {
            return Err(Error::DimensionMismatch("polynomial matrix does not match the presentations".into()));
        }
        for (t, row) in entries.iter().enumerate() {
            for (s, p) in row.iter().enumerate() {
                let degree = self.0[s].generator_degree - target.0[t].generator_degree;
                if p.iter().any(|(_, e)| e.iter().map(|&x| x as i64).sum::<i64>() != degree) {
                    return Err(Error::InvalidModule(format!("entry ({t}, {s}) is not homogeneous of degree {degree}")));
                }
            }
        }
        let (source_module, target_module) = (self.module(field, lo, hi), target.module(field, lo, hi));
        let components = (lo..=hi)
            .map(|d| {
                let index = target.index(d);
                let labels = self.labels(d);
                let mut data = vec![0i64; index.len() * labels.len()];
                for (k, (s, e)) in labels.iter().enumerate() {
                    for (t, row) in entries.iter().enumerate() {
                        for (coef, a) in &row[*s] {
                            let product: Exponent = e.iter().zip(a).map(|(x, y)| x + y).collect();
                            if let Some(&r) = index.get(&(t, product)) {
                                data[r * labels.len() + k] += coef;
                            }
                        }
                    }
                }
                Matrix::from_ints(field, index.len(), labels.len(), &data)
            })
            .collect();
        GradedMap::new(source_module, target_module, components)
    }
}

/// The free module `S(-g)` on `[lo, hi]`.
pub fn free_module(field: Field, c: usize, g: i64, lo: i64, hi: i64) -> GradedModule {
    MonomialModule::free(c, g).module(field, lo, hi)
}

/// A degree-preserving module map, one component per degree of the window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMap {
    source: GradedModule,
    target: GradedModule,
    components: Vec<Matrix>,
}

impl GradedMap {
    /// Checks shapes and that the map commutes with every generator.
    pub fn new(source: GradedModule, target: GradedModule, components: Vec<Matrix>) -> Result<Self> {
        source.check_compatible(&target)?;
        if components.len() != source.dims.len() {
            return Err(Error::InvalidModule("one map component per degree".into()));
        }
        for (d, c) in source.degrees().zip(&components) {
            if c.shape() != (target.dim(d), source.dim(d)) {
                return Err(Error::InvalidModule(format!("map component at degree {d} has the wrong shape")));
            }
        }
        let map = GradedMap { source, target, components };
        let e = map.source.algebra.generator_degree();
        for j in 0..map.source.algebra.generators() {
            for d in map.source.degrees().filter(|d| map.source.degrees().contains(&(d + e))) {
                let left = &map.component(d + e) * &map.source.action(j, d);
                let right = &map.target.action(j, d) * &map.component(d);
                if left != right {
                    return Err(Error::InvalidModule(format!(
                        "map does not commute with {}_{} at degree {d}",
                        map.source.algebra.symbol(),
                        j + 1
                    )));
                }
            }
        }
        Ok(map)
    }

    pub fn zero(source: &GradedModule, target: &GradedModule) -> Self {
        let components = source.degrees().map(|d| Matrix::zeros(source.field, target.dim(d), source.dim(d))).collect();
        GradedMap { source: source.clone(), target: target.clone(), components }
    }

    pub fn identity(m: &GradedModule) -> Self {
        let components = m.dims.iter().map(|&d| Matrix::identity(m.field, d)).collect();
        GradedMap { source: m.clone(), target: m.clone(), components }
    }

    pub fn source(&self) -> &GradedModule {
        &self.source
    }

    pub fn target(&self) -> &GradedModule {
        &self.target
    }

    pub fn components(&self) -> &[Matrix] {
        &self.components
    }

    pub fn component(&self, d: i64) -> Matrix {
        if self.source.degrees().contains(&d) {
            self.components[(d - self.source.lo) as usize].clone()
        } else {
            Matrix::zeros(self.source.field, self.target.dim(d), self.source.dim(d))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Matrix::is_zero)
    }

    pub fn compose(&self, first: &GradedMap) -> Result<GradedMap> {
        if first.target != self.source {
            return Err(Error::InvalidModule("composition of non-composable module maps".into()));
        }
        let components = self.components.iter().zip(&first.components).map(|(a, b)| a * b).collect();
        GradedMap::new(first.source.clone(), self.target.clone(), components)
    }

    /// Transports the map along basis changes of source and target.
    pub fn change_basis(&self, source_bases: &[Matrix], target_bases: &[Matrix]) -> Result<GradedMap> {
        let source = self.source.change_basis(source_bases)?;
        let target = self.target.change_basis(target_bases)?;
        let inverses = invert_all(source_bases)?;
        let components = self
            .components
            .iter()
            .zip(target_bases)
            .zip(&inverses)
            .map(|((f, p), inv)| &(p * f) * inv)
            .collect();
        GradedMap::new(source, target, components)
    }

    fn direct_sum_blocks(sources: &[GradedModule], targets: &[GradedModule], blocks: &[Vec<Option<&GradedMap>>]) -> Result<GradedMap> {
        let source = sum_modules(sources)?;
        let target = sum_modules(targets)?;
        let components = source
            .degrees()
            .map(|d| {
                let grid: Vec<Vec<Option<Matrix>>> =
                    blocks.iter().map(|row| row.iter().map(|b| b.map(|m| m.component(d))).collect()).collect();
                let rows: Vec<usize> = targets.iter().map(|m| m.dim(d)).collect();
                let cols: Vec<usize> = sources.iter().map(|m| m.dim(d)).collect();
                Matrix::from_blocks(source.field, &rows, &cols, &grid)
            })
            .collect();
        GradedMap::new(source, target, components)
    }
}

/// Direct sum of a nonempty list of compatible modules.
fn sum_modules(parts: &[GradedModule]) -> Result<GradedModule> {
    let (first, rest) = parts.split_first().ok_or_else(|| Error::InvalidModule("empty direct sum".into()))?;
    rest.iter().try_fold(first.clone(), |acc, m| acc.direct_sum(m))
}

/// A bounded complex of graded modules, `maps[k] : terms[k] → terms[k+1]`,
/// all terms on one internal window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleComplex {
    lo: i64,
    terms: Vec<GradedModule>,
    maps: Vec<GradedMap>,
}

impl ModuleComplex {
    pub fn new(lo: i64, terms: Vec<GradedModule>, maps: Vec<GradedMap>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidComplex("a module complex needs at least one term".into()));
        }
        if maps.len() + 1 != terms.len() {
            return Err(Error::InvalidComplex(format!("{} terms need {} maps", terms.len(), terms.len() - 1)));
        }
        for t in &terms {
            terms[0].check_compatible(t)?;
            t.ensure_valid()?;
        }
        for (k, m) in maps.iter().enumerate() {
            if m.source != terms[k] || m.target != terms[k + 1] {
                return Err(Error::InvalidComplex(format!("map {k} does not join consecutive terms")));
            }
        }
        for (k, pair) in maps.windows(2).enumerate() {
            if !pair[1].compose(&pair[0])?.is_zero() {
                return Err(Error::InvalidComplex(format!("d∘d ≠ 0 at homological degree {}", lo + k as i64)));
            }
        }
        Ok(ModuleComplex { lo, terms, maps })
    }

    pub fn concentrated(m: GradedModule, degree: i64) -> Result<Self> {
        ModuleComplex::new(degree, vec![m], Vec::new())
    }

    pub fn field(&self) -> Field {
        self.terms[0].field
    }

    pub fn algebra(&self) -> Algebra {
        self.terms[0].algebra
    }

    /// The shared internal window.
    pub fn window(&self) -> (i64, i64) {
        self.terms[0].window()
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    pub fn terms(&self) -> &[GradedModule] {
        &self.terms
    }

    pub fn maps(&self) -> &[GradedMap] {
        &self.maps
    }

    fn zero_term(&self) -> GradedModule {
        let (lo, hi) = self.window();
        GradedModule::zero(self.field(), self.algebra(), lo, hi)
    }

    pub fn term(&self, j: i64) -> GradedModule {
        if self.degrees().contains(&j) {
            self.terms[(j - self.lo) as usize].clone()
        } else {
            self.zero_term()
        }
    }

    /// `d^j : M^j → M^{j+1}`; zero at the top and outside.
    pub fn map(&self, j: i64) -> GradedMap {
        if self.lo <= j && j < self.hi() {
            self.maps[(j - self.lo) as usize].clone()
        } else {
            GradedMap::zero(&self.term(j), &self.term(j + 1))
        }
    }

    /// Conjugates every term by per-degree bases `bases[k][d - lo]`.
    pub fn change_basis(&self, bases: &[Vec<Matrix>]) -> Result<Self> {
        if bases.len() != self.terms.len() {
            return Err(Error::DimensionMismatch("one basis family per term".into()));
        }
        let terms = self.terms.iter().zip(bases).map(|(t, b)| t.change_basis(b)).collect::<Result<Vec<_>>>()?;
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(k, m)| m.change_basis(&bases[k], &bases[k + 1]))
            .collect::<Result<Vec<_>>>()?;
        ModuleComplex::new(self.lo, terms, maps)
    }
}

/// An n-periodic complex of graded modules, `maps[r] : terms[r] → terms[r+1 mod n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicModuleComplex {
    terms: Vec<GradedModule>,
    maps: Vec<GradedMap>,
}

impl PeriodicModuleComplex {
    pub fn new(terms: Vec<GradedModule>, maps: Vec<GradedMap>) -> Result<Self> {
        let n = terms.len();
        if n == 0 || maps.len() != n {
            return Err(Error::InvalidComplex("a period-n module complex needs n terms and n maps".into()));
        }
        for t in &terms {
            terms[0].check_compatible(t)?;
            t.ensure_valid()?;
        }
        for (r, m) in maps.iter().enumerate() {
            if m.source != terms[r] || m.target != terms[(r + 1) % n] {
                return Err(Error::InvalidComplex(format!("map {r} does not join consecutive terms")));
            }
        }
        for r in 0..n {
            if !maps[(r + 1) % n].compose(&maps[r])?.is_zero() {
                return Err(Error::InvalidComplex(format!("d∘d ≠ 0 at homological degree {r}")));
            }
        }
        Ok(PeriodicModuleComplex { terms, maps })
    }

    pub fn period(&self) -> usize {
        self.terms.len()
    }

    pub fn field(&self) -> Field {
        self.terms[0].field
    }

    pub fn algebra(&self) -> Algebra {
        self.terms[0].algebra
    }

    pub fn window(&self) -> (i64, i64) {
        self.terms[0].window()
    }

    pub fn terms(&self) -> &[GradedModule] {
        &self.terms
    }

    pub fn maps(&self) -> &[GradedMap] {
        &self.maps
    }

    pub fn term(&self, r: i64) -> &GradedModule {
        &self.terms[r.rem_euclid(self.period() as i64) as usize]
    }

    pub fn map(&self, r: i64) -> &GradedMap {
        &self.maps[r.rem_euclid(self.period() as i64) as usize]
    }
}

/// `Δ` on module complexes: term `r` is `⊕_{j ≡ r} M^j`, increasing `j`.
pub fn compress_modules(mc: &ModuleComplex, n: usize) -> Result<PeriodicModuleComplex> {
    if n == 0 {
        return Err(Error::OutOfRange("period 0".into()));
    }
    let classes: Vec<Vec<i64>> = (0..n).map(|r| mc.degrees().filter(|j| j.rem_euclid(n as i64) as usize == r).collect()).collect();
    let zero = mc.zero_term();
    let summands = |r: usize| -> Vec<GradedModule> {
        if classes[r].is_empty() {
            vec![zero.clone()]
        } else {
            classes[r].iter().map(|&j| mc.term(j)).collect()
        }
    };
    let terms = (0..n).map(|r| sum_modules(&summands(r))).collect::<Result<Vec<_>>>()?;
    let maps = (0..n)
        .map(|r| {
            let next = (r + 1) % n;
            let (src, dst) = (summands(r), summands(next));
            let all_maps: Vec<GradedMap> = classes[r].iter().map(|&j| mc.map(j)).collect();
            let blocks: Vec<Vec<Option<&GradedMap>>> = (0..dst.len())
                .map(|t| {
                    (0..src.len())
                        .map(|s| {
                            let (Some(&j), Some(&k)) = (classes[r].get(s), classes[next].get(t)) else {
                                return None;
                            };
                            (k == j + 1).then(|| &all_maps[s])
                        })
                        .collect()
                })
                .collect();
            GradedMap::direct_sum_blocks(&src, &dst, &blocks)
        })
        .collect::<Result<Vec<_>>>()?;
    PeriodicModuleComplex::new(terms, maps)
}

/// A differential module `P = ⊕ P_i` with strictly upper-triangular blocks
/// `∂_{j,i} : P_j → P_i`, `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagData {
    field: Field,
    parts: Vec<usize>,
    /// `blocks[j][i]` for `i < j`.
    blocks: Vec<Vec<Matrix>>,
}

impl FlagData {
    pub fn new(field: Field, parts: Vec<usize>, blocks: Vec<Vec<Matrix>>) -> Result<Self> {
        if blocks.len() != parts.len() {
            return Err(Error::DimensionMismatch("one block row per part".into()));
        }
        for (j, row) in blocks.iter().enumerate() {
            if row.len() != j {
                return Err(Error::DimensionMismatch(format!("part {j} needs {j} blocks")));
            }
            for (i, b) in row.iter().enumerate() {
                complexes::check_fields(field, b.field())?;
                if b.shape() != (parts[i], parts[j]) {
                    return Err(Error::DimensionMismatch(format!("block ∂_({j},{i}) must be {}x{}", parts[i], parts[j])));
                }
            }
        }
        Ok(FlagData { field, parts, blocks })
    }

    /// No off-diagonal blocks.
    pub fn split(field: Field, parts: Vec<usize>) -> Self {
        let blocks = (0..parts.len()).map(|j| (0..j).map(|i| Matrix::zeros(field, parts[i], parts[j])).collect()).collect();
        FlagData { field, parts, blocks }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn blocks(&self) -> &[Vec<Matrix>] {
        &self.blocks
    }

    fn assembled(&self, len: usize) -> Matrix {
        let grid: Vec<Vec<Option<Matrix>>> =
            (0..len).map(|i| (0..len).map(|j| (i < j).then(|| self.blocks[j][i].clone())).collect()).collect();
        Matrix::from_blocks(self.field, &self.parts[..len], &self.parts[..len], &grid)
    }
}

/// The period-1 complex `(⊕ P_i, δ)`; rejected unless `δ² = 0`.
pub fn flag_assemble(f: &FlagData) -> Result<PeriodicComplex> {
    let delta = f.assembled(f.parts.len());
    if !(&delta * &delta).is_zero() {
        return Err(Error::FlagNotSquareZero);
    }
    PeriodicComplex::new(f.field, 1, vec![delta.rows()], vec![delta])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationStep {
    /// `F^i`: the first `i + 1` parts with the restricted differential.
    pub sub: PeriodicComplex,
    /// `F^{i-1} → F^i`, absent for `i = 0`.
    pub inclusion: Option<PeriodicChainMap>,
    /// `F^i / F^{i-1}` with its induced differential.
    pub quotient: PeriodicComplex,
}

pub fn flag_filtration(f: &FlagData) -> Result<Vec<FiltrationStep>> {
    flag_assemble(f)?;
    let mut steps: Vec<FiltrationStep> = Vec::with_capacity(f.parts.len());
    for i in 0..f.parts.len() {
        let delta = f.assembled(i + 1);
        let sub = PeriodicComplex::new(f.field, 1, vec![delta.rows()], vec![delta.clone()])?;
        let inclusion = match steps.last() {
            Some(prev) => {
                let (small, big) = (prev.sub.dims()[0], sub.dims()[0]);
                let mut incl = Matrix::zeros(f.field, big, small);
                incl.set_block(0, 0, &Matrix::identity(f.field, small));
                Some(PeriodicChainMap::new(prev.sub.clone(), sub.clone(), vec![incl])?)
            }
            None => None,
        };
        let offset = delta.rows() - f.parts[i];
        let induced = delta.block(offset, offset, f.parts[i], f.parts[i]);
        let quotient = PeriodicComplex::new(f.field, 1, vec![f.parts[i]], vec![induced])?;
        steps.push(FiltrationStep { sub, inclusion, quotient });
    }
    Ok(steps)
}

/// `(X ⊠ Y)^i = ⊕_j X^j ⊗ Y^{i-j}`, summands by increasing `j` over the
/// window of `X`, with `∂(x⊗y) = ∂x⊗y + (-1)^j x⊗∂y`.
pub fn tensor_periodic(x: &BoundedComplex, y: &PeriodicComplex) -> Result<PeriodicComplex> {
    complexes::check_fields(x.field(), y.field())?;
    x.validate().map_err(|v| Error::InvalidComplex(v.to_string()))?;
    y.ensure_valid()?;
    let (field, n) = (x.field(), y.period() as i64);
    let xs: Vec<i64> = x.degrees().collect();
    let part_dims = |i: i64| -> Vec<usize> { xs.iter().map(|&j| x.dim(j) * y.dim(i - j)).collect() };
    let dims = (0..n).map(|i| part_dims(i).iter().sum()).collect();
    let diffs = (0..n)
        .map(|i| {
            let blocks: Vec<Vec<Option<Matrix>>> = xs
                .iter()
                .map(|&dj| {
                    xs.iter()
                        .map(|&sj| {
                            if dj == sj + 1 {
                                Some(x.diff(sj).kron(&Matrix::identity(field, y.dim(i - sj))))
                            } else if dj == sj {
                                Some(Matrix::identity(field, x.dim(sj)).kron(&y.diff(i - sj)).signed(sj))
                            } else {
                                None
                            }
                        })
                        .collect()
                })
                .collect();
            Matrix::from_blocks(field, &part_dims(i + 1), &part_dims(i), &blocks)
        })
        .collect();
    PeriodicComplex::new(field, y.period(), dims, diffs)
}

/// Permutations with `compress(tensor_complex(x, y0), n).permuted(p) ==
/// tensor_periodic(x, compress(y0, n))`. Basis vectors are matched by
/// `(j, k, a, b)`: the `a`-th vector of `X^j` tensored with the `b`-th of
/// `Y0^k`.
pub fn tensor_reordering(x: &BoundedComplex, y0: &BoundedComplex, n: usize) -> Result<Vec<Vec<usize>>> {
    let t = complexes::tensor_complex(x, y0)?;
    let res = |i: i64| i.rem_euclid(n as i64) as usize;
    let labels = |j: i64, k: i64| -> Vec<(i64, i64, usize, usize)> {
        (0..x.dim(j)).flat_map(|a| (0..y0.dim(k)).map(move |b| (j, k, a, b))).collect()
    };
    let from: Vec<Vec<_>> = (0..n)
        .map(|r| {
            let mut out = Vec::new();
            for l in t.degrees().filter(|&l| res(l) == r) {
                for j in x.degrees().filter(|&j| y0.degrees().contains(&(l - j))) {
                    out.extend(labels(j, l - j));
                }
            }
            out
        })
        .collect();
    let to: Vec<Vec<_>> = (0..n)
        .map(|r| {
            let mut out = Vec::new();
            for j in x.degrees() {
                // X^j ⊗ Δ(Y0)^{r-j}, Kronecker order: `a` major, then the
                // summands of Δ(Y0) by increasing degree.
                let ks: Vec<i64> = y0.degrees().filter(|&k| res(k) == res(r as i64 - j)).collect();
                for a in 0..x.dim(j) {
                    for &k in &ks {
                        out.extend((0..y0.dim(k)).map(|b| (j, k, a, b)));
                    }
                }
            }
            out
        })
        .collect();
    match_bases(&from, &to)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periodic::compress;

    fn q() -> Field {
        Field::Rationals
    }

    fn f7() -> Field {
        Field::fp(7).unwrap()
    }

    fn m(field: Field, r: usize, c: usize, data: &[i64]) -> Matrix {
        Matrix::from_ints(field, r, c, data)
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomials(3, 2).len(), 6);
        assert!(monomials(2, -1).is_empty());
    }

    #[test]
    fn polynomial_ring_in_one_variable() {
        let s = free_module(q(), 1, 0, 0, 3);
        assert_eq!(s.dims(), &[1, 1, 1, 1]);
        assert_eq!(s.action(0, 0), m(q(), 1, 1, &[1]));
        assert_eq!(s.action(0, 3).shape(), (0, 1));
        assert!(s.validate().is_ok());
    }

    #[test]
    fn exterior_algebra_on_one_generator() {
        let lam = GradedModule::new(q(), Algebra::Ext(1), -1, vec![1, 1], vec![vec![Matrix::zeros(q(), 0, 1), m(q(), 1, 1, &[1])]])
            .unwrap();
        assert!(lam.validate().is_ok());
    }

    #[test]
    fn broken_anticommutation_is_named() {
        // Λ(2) on degrees -2..0 with ξ_1 ξ_2 = ξ_2 ξ_1 = 1.
        let top = |a: i64, b: i64| m(q(), 2, 1, &[a, b]);
        let mid = |a: i64, b: i64| m(q(), 1, 2, &[a, b]);
        let lam = GradedModule::new(
            q(),
            Algebra::Ext(2),
            -2,
            vec![1, 2, 1],
            vec![
                vec![Matrix::zeros(q(), 0, 1), mid(1, 0), top(0, 1)],
                vec![Matrix::zeros(q(), 0, 1), mid(0, 1), top(1, 0)],
            ],
        )
        .unwrap();
        let v = lam.validate().unwrap_err();
        assert_eq!((v.j, v.degree, v.kind), (1, 0, ModuleViolationKind::Relation { l: 2 }));

        let fixed = GradedModule::new(
            q(),
            Algebra::Ext(2),
            -2,
            vec![1, 2, 1],
            vec![
                vec![Matrix::zeros(q(), 0, 1), mid(1, 0), top(0, 1)],
                vec![Matrix::zeros(q(), 0, 1), mid(0, -1), top(1, 0)],
            ],
        )
        .unwrap();
        assert!(fixed.validate().is_ok());
    }

    #[test]
    fn free_modules_commute_and_corruptions_are_caught() {
        for c in 1..=3 {
            let f = free_module(q(), c, 0, 0, 3);
            assert!(f.validate().is_ok());
            if c >= 2 {
                let mut actions = f.actions().to_vec();
                actions[0][1] = actions[0][1].scale_int(-1);
                let bad = GradedModule::new(q(), Algebra::Poly(c), 0, f.dims().to_vec(), actions).unwrap();
                assert!(bad.validate().is_err());
            }
        }
    }

    #[test]
    fn multiplication_maps() {
        let src = Presentation(vec![MonomialModule::free(1, 1)]);
        let dst = Presentation(vec![MonomialModule::free(1, 0)]);
        let x: Poly = vec![(1, vec![1])];
        let f = src.map(&dst, &[vec![x.clone()]], q(), 0, 3).unwrap();
        assert_eq!(f.component(0).shape(), (1, 0));
        assert_eq!(f.component(2), m(q(), 1, 1, &[1]));

        let wrong: Poly = vec![(1, vec![2])];
        assert!(src.map(&dst, &[vec![wrong]], q(), 0, 3).is_err());

        let quotient = MonomialModule::quotient(1, 0, vec![vec![1]]).module(q(), 0, 3);
        assert_eq!(quotient.dims(), &[1, 0, 0, 0]);
    }

    #[test]
    fn module_complex_and_compression() {
        let src = Presentation(vec![MonomialModule::free(1, 1)]);
        let dst = Presentation(vec![MonomialModule::free(1, 0)]);
        let f = src.map(&dst, &[vec![vec![(1, vec![1])]]], q(), 0, 3).unwrap();
        let mc = ModuleComplex::new(0, vec![f.source().clone(), f.target().clone()], vec![f]).unwrap();
        let p = compress_modules(&mc, 2).unwrap();
        assert_eq!(p.terms()[0].dims(), &[0, 1, 1, 1]);
        assert_eq!(p.terms()[1].dims(), &[1, 1, 1, 1]);
        assert!(p.maps()[1].is_zero());

        let p1 = compress_modules(&mc, 1).unwrap();
        assert_eq!(p1.terms()[0].dims(), &[1, 2, 2, 2]);
    }

    #[test]
    fn flags() {
        let single = FlagData::split(q(), vec![2]);
        let p = flag_assemble(&single).unwrap();
        assert!(p.diffs()[0].is_zero());
        assert_eq!(flag_filtration(&single).unwrap().len(), 1);

        let two = FlagData::new(q(), vec![1, 1], vec![vec![], vec![m(q(), 1, 1, &[1])]]).unwrap();
        let p = flag_assemble(&two).unwrap();
        assert_eq!(p.diffs()[0], m(q(), 2, 2, &[0, 1, 0, 0]));
        assert!(p.is_acyclic().unwrap());
        let steps = flag_filtration(&two).unwrap();
        assert_eq!(steps[0].sub.dims(), &[1]);
        assert!(steps[0].sub.diffs()[0].is_zero());
        assert_eq!(steps[1].quotient.dims(), &[1]);
        assert!(steps[1].quotient.diffs()[0].is_zero());
        assert!(steps[1].inclusion.is_some());
    }

    #[test]
    fn flag_must_square_to_zero() {
        let one = m(f7(), 1, 1, &[1]);
        let bad = FlagData::new(f7(), vec![1, 1, 1], vec![vec![], vec![one.clone()], vec![one.clone(), one]]).unwrap();
        assert_eq!(flag_assemble(&bad), Err(Error::FlagNotSquareZero));
    }

    #[test]
    fn tensor_with_unit() {
        let y = compress(&BoundedComplex::two_term(0, m(q(), 1, 1, &[1])), 2).unwrap();
        let k = BoundedComplex::concentrated(q(), 0, 1);
        assert_eq!(tensor_periodic(&k, &y).unwrap(), y);
    }

    #[test]
    fn tensor_of_contractible_with_scalar() {
        let x = BoundedComplex::two_term(0, m(q(), 1, 1, &[1]));
        let y = compress(&BoundedComplex::concentrated(q(), 0, 1), 1).unwrap();
        let t = tensor_periodic(&x, &y).unwrap();
        assert_eq!(t.dims(), &[2]);
        assert_eq!(t.diffs()[0].rank(), 1);
        assert!(t.is_acyclic().unwrap());
    }

    #[test]
    fn tensor_square() {
        let x = BoundedComplex::two_term(0, m(q(), 1, 1, &[1]));
        let y0 = BoundedComplex::new(q(), -1, vec![1, 2], vec![m(q(), 2, 1, &[1, 2])]).unwrap();
        for n in 1..=3 {
            let left = compress(&complexes::tensor_complex(&x, &y0).unwrap(), n).unwrap();
            let right = tensor_periodic(&x, &compress(&y0, n).unwrap()).unwrap();
            assert_eq!(left.permuted(&tensor_reordering(&x, &y0, n).unwrap()), right);
        }
    }
}
