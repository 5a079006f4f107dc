//! Seeded generators for the verification suites. Everything is driven by a
//! caller-supplied RNG so that a seed fixes every instance.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::complexes::{chain_map_basis, cone, BoundedComplex, ChainMap};
use crate::error::Result;
use crate::exactla::{Field, Matrix};
use crate::gralg::{monomials, Exponent, FlagData, MonomialModule, ModuleComplex, Poly, Presentation};
use crate::periodic::{compress, PeriodicComplex};

fn random_unit<R: Rng + ?Sized>(field: Field, rng: &mut R) -> i64 {
    match field {
        Field::Rationals => *[1, -1].choose(rng).expect("nonempty"),
        Field::Prime(p) => rng.gen_range(1..p.get() as i64),
    }
}

/// A random invertible matrix `L U`, with `L` unit lower triangular and `U`
/// upper triangular with nonzero diagonal. Over `Q` the diagonal is `±1`, so
/// the matrix and its inverse stay integral.
pub fn random_invertible<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> Matrix {
    let full = Matrix::random(field, n, n, rng);
    let mut lower = Matrix::identity(field, n);
    let mut upper = Matrix::zeros(field, n, n);
    for i in 0..n {
        for j in 0..n {
            if i > j {
                lower.set(i, j, full.get(i, j)).expect("same field");
            } else if i < j {
                upper.set(i, j, full.get(i, j)).expect("same field");
            }
        }
        upper.set_int(i, i, random_unit(field, rng));
    }
    &lower * &upper
}

/// A random bounded complex with terms of dimension at most `max_dim` on a
/// window of at most `max_width` degrees starting in `[-2, 2]`.
///
/// Built as a direct sum of cohomology and contractible pieces `k → k`,
/// then conjugated by random invertible matrices in every degree.
pub fn random_complex<R: Rng + ?Sized>(field: Field, max_dim: usize, max_width: usize, rng: &mut R) -> BoundedComplex {
    let width = rng.gen_range(1..=max_width.max(1));
    let lo = rng.gen_range(-2..=2);
    // ranks[k] = rank of ∂ from degree lo + k
    let mut ranks = vec![0usize; width];
    let mut homology = vec![0usize; width];
    let mut incoming = 0;
    for k in 0..width {
        let room = max_dim - incoming;
        if k + 1 < width {
            ranks[k] = rng.gen_range(0..=room.min(max_dim));
        }
        homology[k] = rng.gen_range(0..=room - ranks[k]);
        incoming = ranks[k];
    }
    // Basis of degree lo + k: [boundaries hit from below, cohomology, sources].
    let dims: Vec<usize> =
        (0..width).map(|k| (if k > 0 { ranks[k - 1] } else { 0 }) + homology[k] + ranks[k]).collect();
    let diffs = (0..width.saturating_sub(1))
        .map(|k| {
            let mut d = Matrix::zeros(field, dims[k + 1], dims[k]);
            let source_offset = dims[k] - ranks[k];
            for t in 0..ranks[k] {
                d.set_int(t, source_offset + t, 1);
            }
            d
        })
        .collect();
    let standard = BoundedComplex::new(field, lo, dims.clone(), diffs).expect("standard form is a complex");
    let bases: Vec<Matrix> = dims.iter().map(|&d| random_invertible(field, d, rng)).collect();
    standard.change_basis(&bases).expect("bases are invertible")
}

/// A random linear combination of a basis of all chain maps `x → y`.
pub fn random_chain_map<R: Rng + ?Sized>(x: &BoundedComplex, y: &BoundedComplex, rng: &mut R) -> Result<ChainMap> {
    let field = x.field();
    let mut components: Vec<Matrix> = x.degrees().map(|i| Matrix::zeros(field, y.dim(i), x.dim(i))).collect();
    for f in chain_map_basis(x, y)? {
        let c = rng.gen_range(-2..=2);
        for (acc, part) in components.iter_mut().zip(f.components()) {
            *acc = &*acc + &part.scale_int(c);
        }
    }
    ChainMap::new(x.clone(), y.clone(), components)
}

/// A contractible n-periodic complex: either `Δ` of the cone of an identity,
/// or a sum of elementary pieces `k → k` placed at random positions (some
/// wrapping around from degree `n - 1` to `0`); then a random basis change.
pub fn random_contractible_periodic<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> Result<PeriodicComplex> {
    let base = if rng.gen_bool(0.5) {
        let x = random_complex(field, 2, 3, rng);
        compress(&cone(&ChainMap::identity(&x))?.complex, n)?
    } else {
        let pieces = rng.gen_range(1..=3);
        let mut p = PeriodicComplex::zero(field, n);
        for _ in 0..pieces {
            let at = rng.gen_range(0..n);
            let mut dims = vec![0; n];
            dims[at] += 1;
            dims[(at + 1) % n] += 1;
            let diffs = (0..n)
                .map(|r| {
                    let mut d = Matrix::zeros(field, dims[(r + 1) % n], dims[r]);
                    if r == at {
                        // For n = 1 both ends sit in the same term: source is index 0,
                        // target index 1.
                        let row = if n == 1 { 1 } else { 0 };
                        d.set_int(row, 0, 1);
                    }
                    d
                })
                .collect();
            p = p.direct_sum(&PeriodicComplex::new(field, n, dims, diffs)?)?;
        }
        p
    };
    let bases: Vec<Matrix> = base.dims().iter().map(|&d| random_invertible(field, d, rng)).collect();
    base.change_basis(&bases)
}

fn random_exponent<R: Rng + ?Sized>(c: usize, degree: i64, rng: &mut R) -> Exponent {
    monomials(c, degree).choose(rng).expect("degree is nonnegative").clone()
}

fn random_poly<R: Rng + ?Sized>(c: usize, degree: i64, rng: &mut R) -> Poly {
    if degree < 0 {
        return Vec::new();
    }
    monomials(c, degree).into_iter().map(|e| (rng.gen_range(-2..=2), e)).filter(|t| t.0 != 0).collect()
}

/// A random monomial module generated in a degree within `[lo, hi]`.
fn random_monomial_module<R: Rng + ?Sized>(c: usize, lo: i64, hi: i64, free: bool, rng: &mut R) -> MonomialModule {
    let g = rng.gen_range(lo..=hi);
    if free || rng.gen_bool(0.4) {
        return MonomialModule::free(c, g);
    }
    let relations = (0..rng.gen_range(1..=2)).map(|_| random_exponent(c, rng.gen_range(1..=2), rng)).collect();
    MonomialModule::quotient(c, g, relations)
}

fn random_bases<R: Rng + ?Sized>(field: Field, dims: &[usize], rng: &mut R) -> Vec<Matrix> {
    dims.iter().map(|&d| random_invertible(field, d, rng)).collect()
}

/// A random complex of graded `S(c)`-modules on an internal window of at
/// most `max_width` degrees: a single module, a two-term map out of a free
/// module, or (for `c >= 2`) a Koszul complex on two random linear forms;
/// finally a random basis change in every internal degree.
pub fn random_module_complex<R: Rng + ?Sized>(field: Field, c: usize, max_width: usize, rng: &mut R) -> Result<ModuleComplex> {
    let lo = rng.gen_range(-1..=1);
    let hi = lo + rng.gen_range(0..max_width.max(1) as i64);
    let shape = rng.gen_range(0..if c >= 2 { 3 } else { 2 });
    let hom_lo = rng.gen_range(-1..=1);
    let mc = match shape {
        0 => {
            let parts = (0..rng.gen_range(1..=2)).map(|_| random_monomial_module(c, lo, hi, false, rng)).collect();
            ModuleComplex::concentrated(Presentation(parts).module(field, lo, hi), hom_lo)?
        }
        1 => {
            let target = Presentation((0..rng.gen_range(1..=2)).map(|_| random_monomial_module(c, lo, hi, false, rng)).collect());
            let source =
                Presentation((0..rng.gen_range(1..=2)).map(|_| random_monomial_module(c, lo, hi + 1, true, rng)).collect());
            let entries: Vec<Vec<Poly>> = target
                .0
                .iter()
                .map(|t| source.0.iter().map(|s| random_poly(c, s.generator_degree - t.generator_degree, rng)).collect())
                .collect();
            let f = source.map(&target, &entries, field, lo, hi)?;
            ModuleComplex::new(hom_lo, vec![f.source().clone(), f.target().clone()], vec![f])?
        }
        _ => {
            let g = rng.gen_range(lo - 1..=hi);
            let forms: Vec<Poly> = (0..2)
                .map(|_| loop {
                    let p = random_poly(c, 1, rng);
                    if !p.is_empty() {
                        break p;
                    }
                })
                .collect();
            let neg = |p: &Poly| -> Poly { p.iter().map(|(k, e)| (-k, e.clone())).collect() };
            let top = Presentation(vec![MonomialModule::free(c, g + 2)]);
            let middle = Presentation(vec![MonomialModule::free(c, g + 1), MonomialModule::free(c, g + 1)]);
            let bottom = Presentation(vec![MonomialModule::free(c, g)]);
            let first = top.map(&middle, &[vec![neg(&forms[1])], vec![forms[0].clone()]], field, lo, hi)?;
            let second = middle.map(&bottom, &[vec![forms[0].clone(), forms[1].clone()]], field, lo, hi)?;
            ModuleComplex::new(
                hom_lo,
                vec![first.source().clone(), first.target().clone(), second.target().clone()],
                vec![first, second],
            )?
        }
    };
    let bases: Vec<Vec<Matrix>> = mc.terms().iter().map(|t| random_bases(field, t.dims(), rng)).collect();
    mc.change_basis(&bases)
}

/// A random flag with `δ² = 0`: blocks only from the parts at or after a
/// split point into the parts before it, conjugated by a random block
/// unitriangular matrix.
pub fn random_flag<R: Rng + ?Sized>(field: Field, rng: &mut R) -> Result<FlagData> {
    let count = rng.gen_range(1..=4);
    let parts: Vec<usize> = (0..count).map(|_| rng.gen_range(1..=3)).collect();
    let split = rng.gen_range(0..=count);
    let offsets: Vec<usize> = parts.iter().scan(0, |acc, &d| { let o = *acc; *acc += d; Some(o) }).collect();
    let total: usize = parts.iter().sum();
    let mut delta = Matrix::zeros(field, total, total);
    let mut unipotent = Matrix::identity(field, total);
    for j in 0..count {
        for i in 0..j {
            let block = Matrix::random(field, parts[i], parts[j], rng);
            if i < split && j >= split {
                delta.set_block(offsets[i], offsets[j], &block);
            }
            unipotent.set_block(offsets[i], offsets[j], &Matrix::random(field, parts[i], parts[j], rng));
        }
    }
    let conjugated = &(&unipotent * &delta) * &unipotent.inverse().expect("unitriangular");
    let blocks = (0..count)
        .map(|j| (0..j).map(|i| conjugated.block(offsets[i], offsets[j], parts[i], parts[j])).collect())
        .collect();
    FlagData::new(field, parts, blocks)
}
