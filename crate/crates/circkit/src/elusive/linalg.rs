//! Dense exact matrices and Gaussian elimination.
//!
//! A [`Matrix`] stores its entries row-major in a flat vector, every entry
//! carrying the same field tag. Elimination is fraction-free only in the
//! sense that the arithmetic is exact; no pivoting heuristics are applied.
//! The pivot rule is fixed: columns are scanned left to right and the first
//! row at or below the current pivot row with a nonzero entry is chosen.
//! This makes every result — rank, reduced echelon form, kernel basis —
//! deterministic down to the bit.

use crate::algebra::{FieldTag, Scalar};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldTag,
    rows: usize,
    cols: usize,
    /// Row-major entries, `data[i * cols + j]` is row i, column j.
    data: Vec<Scalar>,
}

impl Matrix {
    /// The all-zero matrix of the given shape.
    pub fn new(field: FieldTag, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![Scalar::zero(field); rows * cols],
        }
    }

    /// Builds a matrix from complete rows. The rows must be nonempty,
    /// rectangular, and agree on the field.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::DimensionMismatch(
                "matrix needs at least one row and one column".into(),
            ));
        }
        let cols = rows[0].len();
        let field = rows[0][0].field();
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in &rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "ragged matrix: row of width {} next to width {}",
                    row.len(),
                    cols
                )));
            }
            for entry in row {
                if entry.field() != field {
                    return Err(Error::FieldMismatch);
                }
                data.push(entry.clone());
            }
        }
        Ok(Matrix {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) -> Result<()> {
        if v.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        self.data[i * self.cols + j] = v;
        Ok(())
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::new(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        out
    }

    /// Exact matrix product.
    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::new(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).add(&a.mul(b)?)?;
                    out.data[i * other.cols + j] = cur;
                }
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form together with the pivot columns, in the
    /// order the pivots were found (strictly increasing).
    pub fn rref(&self) -> Result<(Matrix, Vec<usize>)> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0usize;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            // Fixed pivot rule: the first row at or below pivot_row whose
            // entry in this column is nonzero.
            let hit = (pivot_row..m.rows).find(|&i| !m.get(i, col).is_zero());
            let Some(src) = hit else { continue };
            if src != pivot_row {
                for j in 0..m.cols {
                    m.data.swap(src * m.cols + j, pivot_row * m.cols + j);
                }
            }
            let inv = m.get(pivot_row, col).inv()?;
            for j in col..m.cols {
                let v = m.get(pivot_row, j).mul(&inv)?;
                m.data[pivot_row * m.cols + j] = v;
            }
            for i in 0..m.rows {
                if i == pivot_row || m.get(i, col).is_zero() {
                    continue;
                }
                let factor = m.get(i, col).clone();
                for j in col..m.cols {
                    let delta = m.get(pivot_row, j).mul(&factor)?;
                    let v = m.get(i, j).sub(&delta)?;
                    m.data[i * m.cols + j] = v;
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        Ok((m, pivots))
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.rref()?.1.len())
    }

    /// A basis of the right kernel { v | A·v = 0 }, one vector per free
    /// column, free columns in ascending order. Each basis vector has a 1
    /// in its free column and zeros in every other free column, so the
    /// basis is deterministic and already in a triangular shape.
    pub fn kernel_basis(&self) -> Result<Vec<Vec<Scalar>>> {
        let (r, pivots) = self.rref()?;
        let is_pivot = {
            let mut flags = vec![false; self.cols];
            for &c in &pivots {
                flags[c] = true;
            }
            flags
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![Scalar::zero(self.field); self.cols];
            v[free] = Scalar::one(self.field);
            for (row, &pcol) in pivots.iter().enumerate() {
                v[pcol] = r.get(row, free).neg();
            }
            basis.push(v);
        }
        Ok(basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> FieldTag {
        FieldTag::Rational
    }

    fn qm(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::from_i64(v, q())).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_has_full_rank() {
        let m = qm(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(m.rank().unwrap(), 3);
        assert!(m.kernel_basis().unwrap().is_empty());
    }

    #[test]
    fn dependent_rows_drop_the_rank() {
        // Row 3 = row 1 + row 2.
        let m = qm(&[&[1, 2, 3], &[4, 5, 6], &[5, 7, 9]]);
        assert_eq!(m.rank().unwrap(), 2);
        let (r, pivots) = m.rref().unwrap();
        assert_eq!(pivots, vec![0, 1]);
        // The last row of the reduced form must vanish.
        for j in 0..3 {
            assert!(r.get(2, j).is_zero());
        }
    }

    #[test]
    fn pivoting_takes_the_first_nonzero_row() {
        let m = qm(&[&[0, 1], &[1, 0]]);
        let (r, pivots) = m.rref().unwrap();
        assert_eq!(pivots, vec![0, 1]);
        // Row swap happened: the reduced form is the identity.
        assert!(r.get(0, 0).is_one() && r.get(1, 1).is_one());
        assert!(r.get(0, 1).is_zero() && r.get(1, 0).is_zero());
    }

    #[test]
    fn rank_depends_on_the_field() {
        let f7 = FieldTag::prime(7).unwrap();
        let over_q = qm(&[&[1, 1], &[1, 8]]);
        assert_eq!(over_q.rank().unwrap(), 2);
        let over_f7 = Matrix::from_rows(vec![
            vec![Scalar::from_i64(1, f7), Scalar::from_i64(1, f7)],
            vec![Scalar::from_i64(1, f7), Scalar::from_i64(8, f7)],
        ])
        .unwrap();
        assert_eq!(over_f7.rank().unwrap(), 1);
    }

    #[test]
    fn kernel_vectors_annihilate_the_matrix() {
        let m = qm(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[1, 0, 1, 0]]);
        let basis = m.kernel_basis().unwrap();
        assert_eq!(basis.len(), 4 - m.rank().unwrap());
        for v in &basis {
            for i in 0..m.rows() {
                let mut acc = Scalar::zero(q());
                for j in 0..m.cols() {
                    acc = acc.add(&m.get(i, j).mul(&v[j]).unwrap()).unwrap();
                }
                assert!(acc.is_zero());
            }
        }
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let f7 = FieldTag::prime(7).unwrap();
        let rows = vec![vec![Scalar::from_i64(1, q()), Scalar::from_i64(1, f7)]];
        assert!(matches!(Matrix::from_rows(rows), Err(Error::FieldMismatch)));
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let rows = vec![
            vec![Scalar::from_i64(1, q())],
            vec![Scalar::from_i64(1, q()), Scalar::from_i64(2, q())],
        ];
        assert!(matches!(
            Matrix::from_rows(rows),
            Err(Error::DimensionMismatch(_))
        ));
    }

    fn small_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..4, r * c).prop_map(move |vals| {
                let rows: Vec<Vec<Scalar>> = vals
                    .chunks(c)
                    .map(|ch| ch.iter().map(|&v| Scalar::from_i64(v, q())).collect())
                    .collect();
                Matrix::from_rows(rows).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rank_is_bounded_and_transpose_invariant(m in small_matrix()) {
            let r = m.rank().unwrap();
            prop_assert!(r <= m.rows().min(m.cols()));
            prop_assert_eq!(r, m.transpose().rank().unwrap());
        }

        #[test]
        fn kernel_dimension_complements_the_rank(m in small_matrix()) {
            let basis = m.kernel_basis().unwrap();
            prop_assert_eq!(basis.len() + m.rank().unwrap(), m.cols());
            for v in &basis {
                for i in 0..m.rows() {
                    let mut acc = Scalar::zero(q());
                    for j in 0..m.cols() {
                        acc = acc.add(&m.get(i, j).mul(&v[j]).unwrap()).unwrap();
                    }
                    prop_assert!(acc.is_zero());
                }
            }
        }

        #[test]
        fn rref_is_idempotent(m in small_matrix()) {
            let (r1, p1) = m.rref().unwrap();
            let (r2, p2) = r1.rref().unwrap();
            prop_assert_eq!(r1, r2);
            prop_assert_eq!(p1, p2);
        }
    }
}
