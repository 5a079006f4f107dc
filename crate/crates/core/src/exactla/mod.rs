//! Exact linear algebra over ℚ and prime fields.

mod arith;
mod field;
mod matrix;

pub use field::{Field, Prime, Scalar};
pub use matrix::Matrix;

/// Exact rank of `m`.
pub fn rank(m: &Matrix) -> usize {
    m.rank()
}

/// Basis of the right kernel of `m`, as columns.
pub fn kernel_basis(m: &Matrix) -> Matrix {
    m.kernel_basis()
}

/// Some `x` with `a * x = b`, or `None` when the system is inconsistent.
pub fn solve_linear(a: &Matrix, b: &Matrix) -> crate::Result<Option<Matrix>> {
    Matrix::solve_linear(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    fn q() -> Field {
        Field::Rationals
    }

    fn f(p: u64) -> Field {
        Field::fp(p).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&Matrix::from_ints(q(), 2, 2, &[1, 2, 2, 4])), 1);
        assert_eq!(rank(&Matrix::zeros(q(), 0, 5)), 0);
        assert_eq!(rank(&Matrix::from_ints(f(5), 2, 2, &[0, 1, 0, 0])), 1);
        // 5 = 0 over F_5
        assert_eq!(rank(&Matrix::from_ints(f(5), 2, 2, &[1, 2, 3, 11])), 1);
        assert_eq!(rank(&Matrix::from_ints(q(), 2, 2, &[1, 2, 3, 11])), 2);
    }

    #[test]
    fn bareiss_matches_rref_on_rationals() {
        let mut m = Matrix::from_ints(q(), 3, 4, &[2, 4, 6, 8, 1, 3, 5, 7, 3, 7, 11, 15]);
        m.set(0, 1, q().parse_scalar("1/3").unwrap()).unwrap();
        let (_, pivots) = m.rref();
        assert_eq!(m.rank(), pivots.len());
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&Matrix::from_ints(q(), 2, 2, &[0, 1, 0, 0]));
        assert_eq!(k, Matrix::from_ints(q(), 2, 1, &[1, 0]));
        assert_eq!(kernel_basis(&Matrix::identity(q(), 3)).cols(), 0);
        let k = kernel_basis(&Matrix::from_ints(f(2), 1, 2, &[1, 1]));
        assert_eq!(k, Matrix::from_ints(f(2), 2, 1, &[1, 1]));
    }

    #[test]
    fn solve_examples() {
        let a = Matrix::from_ints(q(), 2, 2, &[1, 0, 0, 0]);
        let b = Matrix::from_ints(q(), 2, 1, &[1, 0]);
        assert_eq!(solve_linear(&a, &b).unwrap(), Some(Matrix::from_ints(q(), 2, 1, &[1, 0])));

        let a = Matrix::from_ints(q(), 1, 1, &[0]);
        let b = Matrix::from_ints(q(), 1, 1, &[1]);
        assert_eq!(solve_linear(&a, &b).unwrap(), None);

        let a = Matrix::from_ints(f(5), 1, 1, &[2]);
        let b = Matrix::from_ints(f(5), 1, 1, &[1]);
        assert_eq!(solve_linear(&a, &b).unwrap(), Some(Matrix::from_ints(f(5), 1, 1, &[3])));
    }

    #[test]
    fn solve_errors() {
        let a = Matrix::zeros(q(), 2, 2);
        assert!(matches!(
            solve_linear(&a, &Matrix::zeros(q(), 3, 1)),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            solve_linear(&a, &Matrix::zeros(f(3), 2, 1)),
            Err(Error::FieldMismatch(..))
        ));
    }

    #[test]
    fn rational_arithmetic_is_exact() {
        let mut a = Matrix::zeros(q(), 1, 1);
        a.set(0, 0, q().parse_scalar("1/3").unwrap()).unwrap();
        let mut b = Matrix::zeros(q(), 1, 1);
        b.set(0, 0, q().parse_scalar("1/6").unwrap()).unwrap();
        assert_eq!((&a + &b).entry_string(0, 0), "1/2");
        assert_eq!((&a - &b).entry_string(0, 0), "1/6");
        assert_eq!((&a * &b).entry_string(0, 0), "1/18");
        assert_eq!((&b - &a).entry_string(0, 0), "-1/6");
    }

    #[test]
    fn inverse_and_kron() {
        let m = Matrix::from_ints(q(), 2, 2, &[2, 1, 1, 1]);
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity());
        assert!(Matrix::from_ints(q(), 2, 2, &[1, 2, 2, 4]).inverse().is_none());

        let a = Matrix::from_ints(q(), 1, 2, &[1, 2]);
        let b = Matrix::from_ints(q(), 2, 1, &[3, 4]);
        assert_eq!(a.kron(&b), Matrix::from_ints(q(), 2, 2, &[3, 6, 4, 8]));
    }

    #[test]
    fn empty_shapes_are_legal() {
        let a = Matrix::zeros(q(), 0, 3);
        let b = Matrix::zeros(q(), 3, 0);
        assert_eq!((&b * &a).shape(), (3, 3));
        assert_eq!((&a * &b).shape(), (0, 0));
        assert_eq!(kernel_basis(&a).shape(), (3, 3));
        assert_eq!(kernel_basis(&b).shape(), (0, 0));
        assert_eq!(solve_linear(&b, &Matrix::zeros(q(), 3, 1)).unwrap().unwrap().shape(), (0, 1));
    }
}
