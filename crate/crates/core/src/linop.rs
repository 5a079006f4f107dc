//! Linear operators on spaces of block-matrix families, e.g. the space of
//! all degree-0 graded maps between two complexes.

use crate::exactla::{Field, Matrix};

/// Shapes of a family of matrices, flattened row-major one after another.
#[derive(Debug, Clone)]
pub(crate) struct BlockLayout {
    shapes: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    total: usize,
}

impl BlockLayout {
    pub(crate) fn new(shapes: Vec<(usize, usize)>) -> Self {
        let mut offsets = Vec::with_capacity(shapes.len());
        let mut total = 0;
        for &(r, c) in &shapes {
            offsets.push(total);
            total += r * c;
        }
        BlockLayout { shapes, offsets, total }
    }

    pub(crate) fn dim(&self) -> usize {
        self.total
    }

    pub(crate) fn zeros(&self, field: Field) -> Vec<Matrix> {
        self.shapes.iter().map(|&(r, c)| Matrix::zeros(field, r, c)).collect()
    }

    /// The family with a single 1 at flattened position `k`.
    fn unit(&self, field: Field, k: usize) -> Vec<Matrix> {
        let mut blocks = self.zeros(field);
        let b = self.offsets.partition_point(|&o| o <= k) - 1;
        let local = k - self.offsets[b];
        let cols = self.shapes[b].1;
        blocks[b].set_int(local / cols, local % cols, 1);
        blocks
    }

    pub(crate) fn flatten(&self, field: Field, blocks: &[Matrix]) -> Matrix {
        assert_eq!(blocks.len(), self.shapes.len());
        let mut v = Matrix::zeros(field, self.total, 1);
        for ((b, &off), &(r, c)) in blocks.iter().zip(&self.offsets).zip(&self.shapes) {
            assert_eq!(b.shape(), (r, c), "block shape does not match layout");
            for i in 0..r {
                for j in 0..c {
                    v.set(off + i * c + j, 0, b.get(i, j)).expect("same field");
                }
            }
        }
        v
    }

    pub(crate) fn unflatten(&self, field: Field, v: &Matrix) -> Vec<Matrix> {
        let mut blocks = self.zeros(field);
        for ((b, &off), &(r, c)) in blocks.iter_mut().zip(&self.offsets).zip(&self.shapes) {
            for i in 0..r {
                for j in 0..c {
                    b.set(i, j, v.get(off + i * c + j, 0)).expect("same field");
                }
            }
        }
        blocks
    }
}

/// Matrix of a linear map between block families, assembled column by
/// column by evaluating `op` on unit families.
pub(crate) fn operator_matrix(
    field: Field,
    domain: &BlockLayout,
    codomain: &BlockLayout,
    op: impl Fn(&[Matrix]) -> Vec<Matrix>,
) -> Matrix {
    let mut out = Matrix::zeros(field, codomain.dim(), domain.dim());
    for k in 0..domain.dim() {
        let image = op(&domain.unit(field, k));
        out.set_block(0, k, &codomain.flatten(field, &image));
    }
    out
}
