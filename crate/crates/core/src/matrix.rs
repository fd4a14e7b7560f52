//! Dense matrices over a [`Field`] and the elimination routines built on them.

use thiserror::Error;

use crate::field::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix has no rows")]
    Empty,
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, found: usize, expected: usize },
    #[error("cannot multiply {0}x{1} by {2}x{3}")]
    Incompatible(usize, usize, usize, usize),
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Self, MatrixError> {
        let cols = rows.first().ok_or(MatrixError::Empty)?.len();
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(MatrixError::Ragged { row: r, found: row.len(), expected: cols });
            }
            data.extend(row);
        }
        Ok(Matrix { rows: nrows, cols, data })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[E]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn entries(&self) -> impl Iterator<Item = &E> {
        self.data.iter()
    }

    pub fn map<T: Clone>(&self, mut f: impl FnMut(&E) -> T) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(&mut f).collect() }
    }

    /// Submatrix on the given row and column index lists, in that order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix<E> {
        Matrix::from_fn(rows.len(), cols.len(), |r, c| self.get(rows[r], cols[c]).clone())
    }

    pub fn transpose(&self) -> Matrix<E> {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }
}

pub fn identity<F: Field>(field: &F, n: usize) -> Matrix<F::Elem> {
    Matrix::from_fn(n, n, |r, c| if r == c { field.one() } else { field.zero() })
}

pub fn zeros<F: Field>(field: &F, rows: usize, cols: usize) -> Matrix<F::Elem> {
    Matrix::from_fn(rows, cols, |_, _| field.zero())
}

pub fn mul<F: Field>(
    field: &F,
    a: &Matrix<F::Elem>,
    b: &Matrix<F::Elem>,
) -> Result<Matrix<F::Elem>, MatrixError> {
    if a.cols != b.rows {
        return Err(MatrixError::Incompatible(a.rows, a.cols, b.rows, b.cols));
    }
    Ok(Matrix::from_fn(a.rows, b.cols, |r, c| {
        (0..a.cols).fold(field.zero(), |acc, k| field.add(&acc, &field.mul(a.get(r, k), b.get(k, c))))
    }))
}

/// Row echelon reduction in place; returns the pivot count and whether an odd
/// number of row swaps happened.
fn eliminate<F: Field>(field: &F, m: &mut Matrix<F::Elem>) -> (usize, bool, Vec<F::Elem>) {
    let mut rank = 0;
    let mut odd = false;
    let mut pivots = Vec::new();
    for c in 0..m.cols {
        if rank == m.rows {
            break;
        }
        let Some(p) = (rank..m.rows).find(|&r| !field.is_zero(m.get(r, c))) else {
            continue;
        };
        if p != rank {
            for k in 0..m.cols {
                m.data.swap(p * m.cols + k, rank * m.cols + k);
            }
            odd = !odd;
        }
        let pivot = m.get(rank, c).clone();
        let inv = field.inv(&pivot).expect("pivot is nonzero");
        for r in rank + 1..m.rows {
            if field.is_zero(m.get(r, c)) {
                continue;
            }
            let factor = field.mul(m.get(r, c), &inv);
            for k in c..m.cols {
                let v = field.sub(m.get(r, k), &field.mul(&factor, m.get(rank, k)));
                m.set(r, k, v);
            }
        }
        pivots.push(pivot);
        rank += 1;
    }
    (rank, odd, pivots)
}

pub fn rank<F: Field>(field: &F, m: &Matrix<F::Elem>) -> usize {
    let mut work = m.clone();
    eliminate(field, &mut work).0
}

/// Determinant by Gaussian elimination. Panics on non-square input.
pub fn gauss_determinant<F: Field>(field: &F, m: &Matrix<F::Elem>) -> F::Elem {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let mut work = m.clone();
    let (rank, odd, pivots) = eliminate(field, &mut work);
    if rank < m.rows {
        return field.zero();
    }
    let det = pivots.iter().fold(field.one(), |acc, p| field.mul(&acc, p));
    if odd {
        field.neg(&det)
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn q(rows: &[&[i64]]) -> Matrix<num::BigRational> {
        let f = Rationals;
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| f.from_i64(v)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = Matrix::from_rows(vec![vec![1, 2], vec![3]]).unwrap_err();
        assert_eq!(err, MatrixError::Ragged { row: 1, found: 1, expected: 2 });
    }

    #[test]
    fn gauss_matches_cofactor_expansion() {
        let m = q(&[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]);
        // 2(3*-2 - 4*5) + 1(1*-2 - 0) = -52 - 2
        assert_eq!(gauss_determinant(&Rationals, &m), Rationals.from_i64(-54));
        assert_eq!(rank(&Rationals, &m), 3);
    }

    #[test]
    fn singular_rank() {
        let m = q(&[&[1, 1], &[1, 1]]);
        assert_eq!(rank(&Rationals, &m), 1);
        assert!(Rationals.is_zero(&gauss_determinant(&Rationals, &m)));
    }

    #[test]
    fn swap_sign_over_prime_field() {
        let f = PrimeField::new(7).unwrap();
        let m = Matrix::from_rows(vec![
            vec![f.from_i64(0), f.from_i64(1)],
            vec![f.from_i64(1), f.from_i64(0)],
        ])
        .unwrap();
        assert_eq!(gauss_determinant(&f, &m), f.from_i64(-1));
    }

    #[test]
    fn product_with_identity() {
        let m = q(&[&[1, 2], &[3, 4]]);
        let i = identity(&Rationals, 2);
        assert_eq!(mul(&Rationals, &m, &i).unwrap(), m);
        assert!(mul(&Rationals, &m, &q(&[&[1, 2, 3]])).is_err());
    }
}
