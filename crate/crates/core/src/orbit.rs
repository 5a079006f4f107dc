//! Hom spaces of the orbit category of bounded complexes under `[n]`, and a
//! dimension certificate that compression embeds it into periodic complexes.

use rayon::prelude::*;

use crate::complexes::{self, hom_space_dims, BoundedComplex};
use crate::error::Result;
use crate::periodic::{compress, periodic_hom_dims};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitHomReport {
    /// `(i, dim Hom_K(X, Y[ni]))` for every `i` whose shifted window meets
    /// the window of `X`.
    pub summands: Vec<(i64, usize)>,
    pub total: usize,
    /// `dim Hom` between the compressions.
    pub periodic_side: usize,
}

impl OrbitHomReport {
    pub fn is_equal(&self) -> bool {
        self.total == self.periodic_side
    }
}

/// Range of `i` for which `Y[ni]` can be nonzero somewhere on `X`'s window.
fn overlap(x: &BoundedComplex, y: &BoundedComplex, n: usize) -> std::ops::RangeInclusive<i64> {
    let n = n as i64;
    if x.is_empty_window() || y.is_empty_window() {
        return std::ops::RangeInclusive::new(1, 0);
    }
    // Y[ni] lives on [y.lo - ni, y.hi - ni].
    let lo = (y.lo() - x.hi()).div_euclid(n) + i64::from((y.lo() - x.hi()).rem_euclid(n) != 0);
    let hi = (y.hi() - x.lo()).div_euclid(n);
    lo..=hi
}

pub fn orbit_hom(x: &BoundedComplex, y: &BoundedComplex, n: usize) -> Result<OrbitHomReport> {
    complexes::check_fields(x.field(), y.field())?;
    let periodic_side = periodic_hom_dims(&compress(x, n)?, &compress(y, n)?)?.hom;
    let summands = overlap(x, y, n)
        .map(|i| Ok((i, hom_space_dims(x, &y.shift(n as i64 * i))?.hom)))
        .collect::<Result<Vec<_>>>()?;
    let total = summands.iter().map(|&(_, d)| d).sum();
    Ok(OrbitHomReport { summands, total, periodic_side })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairReport {
    pub source: usize,
    pub target: usize,
    pub report: OrbitHomReport,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingCertificate {
    pub n: usize,
    pub pairs: Vec<PairReport>,
}

impl EmbeddingCertificate {
    pub fn violations(&self) -> impl Iterator<Item = &PairReport> {
        self.pairs.iter().filter(|p| !p.report.is_equal())
    }

    pub fn equal_count(&self) -> usize {
        self.pairs.iter().filter(|p| p.report.is_equal()).count()
    }

    pub fn holds(&self) -> bool {
        self.violations().next().is_none()
    }
}

/// Checks `total = periodic_side` for every ordered pair of the corpus.
pub fn embedding_certificate(corpus: &[BoundedComplex], n: usize) -> Result<EmbeddingCertificate> {
    if let Some(first) = corpus.first() {
        for x in corpus {
            complexes::check_fields(first.field(), x.field())?;
        }
    }
    let indices: Vec<(usize, usize)> =
        (0..corpus.len()).flat_map(|a| (0..corpus.len()).map(move |b| (a, b))).collect();
    let pairs = indices
        .par_iter()
        .map(|&(a, b)| Ok(PairReport { source: a, target: b, report: orbit_hom(&corpus[a], &corpus[b], n)? }))
        .collect::<Result<Vec<_>>>()?;
    Ok(EmbeddingCertificate { n, pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{Field, Matrix};
    use crate::Error;

    fn k_at(field: Field, d: i64) -> BoundedComplex {
        BoundedComplex::concentrated(field, d, 1)
    }

    #[test]
    fn scalars() {
        let q = Field::Rationals;
        let r = orbit_hom(&k_at(q, 0), &k_at(q, 0), 2).unwrap();
        assert_eq!(r.summands, vec![(0, 1)]);
        assert_eq!((r.total, r.periodic_side), (1, 1));
    }

    #[test]
    fn shifted_scalars() {
        let q = Field::Rationals;
        let r = orbit_hom(&k_at(q, 0), &k_at(q, 2), 2).unwrap();
        // Y[2i]^0 = Y^{2i} is nonzero only for i = 1.
        assert_eq!(r.summands, vec![(1, 1)]);
        assert_eq!(r.total, 1);
        assert!(r.is_equal());
    }

    #[test]
    fn zero_differential_over_f5() {
        let f5 = Field::fp(5).unwrap();
        let x = BoundedComplex::two_term(0, Matrix::zeros(f5, 1, 1));
        let r = orbit_hom(&x, &x, 1).unwrap();
        // Hom_K(X, X[i]) over a field is Σ_j h^j(X) h^{j+i}(X).
        assert_eq!(r.summands.iter().filter(|s| s.1 > 0).count(), 3);
        assert_eq!(r.total, 4);
        assert!(r.is_equal());
    }

    #[test]
    fn certificates() {
        let q = Field::Rationals;
        let c = embedding_certificate(&[k_at(q, 0)], 1).unwrap();
        assert_eq!(c.pairs.len(), 1);
        assert!(c.holds());

        let id = BoundedComplex::two_term(0, Matrix::identity(q, 1));
        let c = embedding_certificate(&[k_at(q, 0), id], 2).unwrap();
        assert_eq!(c.equal_count(), 4);
        assert_eq!(c.pairs[1].report.total, 0);
    }

    #[test]
    fn mixed_fields() {
        let f5 = Field::fp(5).unwrap();
        let r = orbit_hom(&k_at(Field::Rationals, 0), &k_at(f5, 0), 1);
        assert!(matches!(r, Err(Error::FieldMismatch(..))));
    }
}
