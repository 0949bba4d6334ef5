//! Cell reordering adapted to a tagged partition.
//!
//! Parts with a counterpart come first (`P_1..P_q`), then the remaining parts
//! (`P_{q+1}..P_p`), then the counterparts `P̄_1..P̄_q`, then the zero part.
//! Class indices in this module are 1-based and refer to the adapted
//! numbering; `class_order` maps them back to canonical labels.

use crate::error::{Error, Result};
use crate::matrix::{row_sum, Matrix};
use crate::rational::Rational;

use super::TaggedPartition;

/// A group of cells in the adapted order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartRef {
    /// `P_i`
    Pos(usize),
    /// `P̄_i`, only for `i <= q`
    Neg(usize),
    /// `P_0`
    Zero,
}

#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    pub p: usize,
    pub q: usize,
    pub r: usize,
    /// Adapted class index (0-based position) to canonical class label.
    pub class_order: Vec<usize>,
    /// New position to original cell (0-based).
    pub permutation: Vec<usize>,
    pos: Vec<std::ops::Range<usize>>,
    neg: Vec<std::ops::Range<usize>>,
    zero: Option<std::ops::Range<usize>>,
    permuted: Matrix,
}

pub fn block_decomposition(m: &Matrix, p: &TaggedPartition) -> Result<BlockDecomposition> {
    let n = p.n();
    if m.rows() != n || m.cols() != n {
        return Err(Error::LengthMismatch {
            expected: m.rows(),
            found: n,
        });
    }
    if p.is_null() {
        return Err(Error::NullPartition);
    }
    let classes = 1..=p.p();
    let mut class_order: Vec<usize> = classes.clone().filter(|&k| p.has_counterpart(k)).collect();
    class_order.extend(classes.filter(|&k| !p.has_counterpart(k)));
    let q = p.q();

    let mut permutation = Vec::with_capacity(n);
    let mut take = |cells: Vec<usize>| {
        let start = permutation.len();
        permutation.extend(cells);
        start..permutation.len()
    };
    let pos: Vec<_> = class_order.iter().map(|&k| take(p.part(k))).collect();
    let neg: Vec<_> = class_order[..q]
        .iter()
        .map(|&k| take(p.counterpart(k)))
        .collect();
    let zero = (p.r() == 1).then(|| take(p.zero_part()));

    let permuted = m.select(&permutation, &permutation);
    Ok(BlockDecomposition {
        p: p.p(),
        q,
        r: p.r(),
        class_order,
        permutation,
        pos,
        neg,
        zero,
        permuted,
    })
}

impl BlockDecomposition {
    pub fn permuted(&self) -> &Matrix {
        &self.permuted
    }

    /// Positions (in the permuted order) covered by a group.
    pub fn range(&self, part: PartRef) -> std::ops::Range<usize> {
        match part {
            PartRef::Pos(i) => self.pos[i - 1].clone(),
            PartRef::Neg(i) => self.neg[i - 1].clone(),
            PartRef::Zero => self.zero.clone().expect("partition has no zero part"),
        }
    }

    /// Original cells (0-based) of a group.
    pub fn cells(&self, part: PartRef) -> Vec<usize> {
        self.range(part).map(|k| self.permutation[k]).collect()
    }

    pub fn block(&self, rows: PartRef, cols: PartRef) -> Matrix {
        let r: Vec<usize> = self.range(rows).collect();
        let c: Vec<usize> = self.range(cols).collect();
        self.permuted.select(&r, &c)
    }

    /// Row sums of a block.
    pub fn rs(&self, rows: PartRef, cols: PartRef) -> Vec<Rational> {
        row_sum(&self.block(rows, cols))
    }

    /// Q_ij
    pub fn q_block(&self, i: usize, j: usize) -> Matrix {
        self.block(PartRef::Pos(i), PartRef::Pos(j))
    }

    /// R_ij: rows of P_i, columns of P̄_j.
    pub fn r_block(&self, i: usize, j: usize) -> Matrix {
        self.block(PartRef::Pos(i), PartRef::Neg(j))
    }

    /// Z_i0
    pub fn z_block(&self, i: usize) -> Matrix {
        self.block(PartRef::Pos(i), PartRef::Zero)
    }

    /// Q̄_ij: rows of P̄_i, columns of P̄_j.
    pub fn qbar_block(&self, i: usize, j: usize) -> Matrix {
        self.block(PartRef::Neg(i), PartRef::Neg(j))
    }

    /// R̄_ij: rows of P̄_i, columns of P_j.
    pub fn rbar_block(&self, i: usize, j: usize) -> Matrix {
        self.block(PartRef::Neg(i), PartRef::Pos(j))
    }

    /// Z̄_i0
    pub fn zbar_block(&self, i: usize) -> Matrix {
        self.block(PartRef::Neg(i), PartRef::Zero)
    }

    /// Z_0j
    pub fn z0_block(&self, j: usize) -> Matrix {
        self.block(PartRef::Zero, PartRef::Pos(j))
    }

    /// Z̄_0j
    pub fn z0bar_block(&self, j: usize) -> Matrix {
        self.block(PartRef::Zero, PartRef::Neg(j))
    }

    pub fn z00_block(&self) -> Matrix {
        self.block(PartRef::Zero, PartRef::Zero)
    }

    /// Display name of a group: `[c]` with `c` the smallest cell of the part
    /// (1-based), and `-[c]` for its counterpart.
    pub fn group_name(&self, part: PartRef) -> String {
        let rep = |g: PartRef| self.cells(g).into_iter().min().map_or(0, |c| c + 1);
        match part {
            PartRef::Neg(i) => format!("-[{}]", rep(PartRef::Pos(i))),
            _ => format!("[{}]", rep(part)),
        }
    }

    /// Applies the inverse permutation to a matrix in adapted order.
    pub fn unpermute(&self, m: &Matrix) -> Matrix {
        let n = self.permutation.len();
        let mut inverse = vec![0; n];
        for (pos, &cell) in self.permutation.iter().enumerate() {
            inverse[cell] = pos;
        }
        m.select(&inverse, &inverse)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::canonicalize;
    use crate::rational::{frac, int};

    fn five_cell() -> Matrix {
        let rows = [
            ["0", "-3/2", "-3/2", "1", "23/10"],
            ["-2", "0", "1", "1", "1"],
            ["-1", "1", "0", "2", "0"],
            ["2", "3", "0", "1", "11/10"],
            ["1", "1", "-1", "1", "-3"],
        ];
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| crate::rational::parse_rational(s).unwrap())
                    .collect()
            })
            .collect();
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn five_cell_blocks() {
        let p = canonicalize(&[1, 2, 2, -1, 0]).unwrap();
        let d = block_decomposition(&five_cell(), &p).unwrap();
        assert_eq!((d.p, d.q, d.r), (2, 1, 1));
        assert_eq!(d.permutation, vec![0, 1, 2, 3, 4]);
        assert_eq!(d.q_block(1, 1), Matrix::from_i64(&[&[0]]));
        assert_eq!(
            d.q_block(1, 2),
            Matrix::from_rows(vec![vec![frac(-3, 2), frac(-3, 2)]]).unwrap()
        );
        assert_eq!(d.r_block(1, 1), Matrix::from_i64(&[&[1]]));
        assert_eq!(
            d.z_block(1),
            Matrix::from_rows(vec![vec![frac(23, 10)]]).unwrap()
        );
    }

    #[test]
    fn paired_classes_come_first() {
        let w = Matrix::from_i64(&[&[0, 1, 1, 0], &[1, 0, 1, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]]);
        let p = canonicalize(&[1, 1, 2, -2]).unwrap();
        let d = block_decomposition(&w, &p).unwrap();
        assert_eq!(d.class_order, vec![2, 1]);
        assert_eq!(d.permutation, vec![2, 0, 1, 3]);
        assert_eq!(d.unpermute(d.permuted()), w);
        assert_eq!(d.rbar_block(1, 2), Matrix::from_i64(&[&[0, 0]]));
    }

    #[test]
    fn single_part_is_whole_matrix() {
        let w = Matrix::from_i64(&[&[1, 2], &[3, 4]]);
        let d = block_decomposition(&w, &canonicalize(&[1, 1]).unwrap()).unwrap();
        assert_eq!(d.q_block(1, 1), w);
    }

    #[test]
    fn counterpart_blocks() {
        let w = Matrix::from_i64(&[&[3, 1, 1, 1], &[1, 1, 0, 0], &[0, 0, 5, -3], &[4, 2, 5, 3]]);
        let d = block_decomposition(&w, &canonicalize(&[1, 1, -1, -1]).unwrap()).unwrap();
        assert_eq!(d.q_block(1, 1), Matrix::from_i64(&[&[3, 1], &[1, 1]]));
        assert_eq!(d.r_block(1, 1), Matrix::from_i64(&[&[1, 1], &[0, 0]]));
        assert_eq!(d.rbar_block(1, 1), Matrix::from_i64(&[&[0, 0], &[4, 2]]));
        assert_eq!(d.qbar_block(1, 1), Matrix::from_i64(&[&[5, -3], &[5, 3]]));
        assert_eq!(d.rs(PartRef::Pos(1), PartRef::Pos(1)), vec![int(4), int(2)]);
    }

    #[test]
    fn null_is_rejected() {
        let w = Matrix::zeros(2, 2);
        assert!(matches!(
            block_decomposition(&w, &crate::partition::TaggedPartition::null(2)),
            Err(Error::NullPartition)
        ));
    }
}
