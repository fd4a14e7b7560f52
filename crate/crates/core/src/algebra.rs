//! Evolution algebras given by their structure matrix in a natural basis.
//!
//! Entry `(k, i)` of the structure matrix is the coefficient of `e_k` in
//! `e_i^2`, so column `i` holds the square of the `i`-th basis vector.
//! Indices are 0-based throughout the API.

use std::fmt;

use thiserror::Error;

use crate::bits::MAX_DIM;
use crate::field::{Field, FieldError};
use crate::ideals;
use crate::index_set::IndexSet;
use crate::matrix::{self, Matrix, MatrixError};
use crate::pattern::SupportPattern;
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("structure matrix must be square, got {0}x{1}")]
    NotSquare(usize, usize),
    #[error("dimension {0} is outside 1..={MAX_DIM}")]
    Dimension(usize),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("scale for index {} is zero", .0 + 1)]
    ZeroScale(usize),
    #[error("split {split} out of range for dimension {n}")]
    Split { split: usize, n: usize },
    #[error("index set {0} is not closed under first descendants")]
    NotClosed(IndexSet),
    #[error("cannot take the quotient by the whole algebra")]
    WholeAlgebra,
}

#[derive(Debug, Clone)]
pub struct EvolutionAlgebra<F: Field> {
    field: F,
    matrix: Matrix<F::Elem>,
}

impl<F: Field> PartialEq for EvolutionAlgebra<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field.spec() == other.field.spec() && self.matrix == other.matrix
    }
}

impl<F: Field> Eq for EvolutionAlgebra<F> {}

/// The four blocks of `M = (W U; L Y)` for a split index `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition<E> {
    pub m: usize,
    pub w: Matrix<E>,
    pub u: Matrix<E>,
    pub l: Matrix<E>,
    pub y: Matrix<E>,
}

impl<F: Field> EvolutionAlgebra<F> {
    pub fn new(field: F, matrix: Matrix<F::Elem>) -> Result<Self, AlgebraError> {
        if !matrix.is_square() {
            return Err(AlgebraError::NotSquare(matrix.nrows(), matrix.ncols()));
        }
        if matrix.nrows() == 0 || matrix.nrows() > MAX_DIM {
            return Err(AlgebraError::Dimension(matrix.nrows()));
        }
        Ok(EvolutionAlgebra { field, matrix })
    }

    pub fn from_rows(field: F, rows: Vec<Vec<F::Elem>>) -> Result<Self, AlgebraError> {
        let matrix = Matrix::from_rows(rows)?;
        Self::new(field, matrix)
    }

    pub fn from_int_rows(field: F, rows: &[&[i64]]) -> Result<Self, AlgebraError> {
        let rows = rows.iter().map(|r| r.iter().map(|&v| field.from_i64(v)).collect()).collect();
        Self::from_rows(field, rows)
    }

    pub fn parse_rows<S: AsRef<str>>(field: F, rows: &[Vec<S>]) -> Result<Self, AlgebraError> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| field.parse(s.as_ref())).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_rows(field, parsed)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn matrix(&self) -> &Matrix<F::Elem> {
        &self.matrix
    }

    pub fn entry(&self, k: usize, i: usize) -> &F::Elem {
        self.matrix.get(k, i)
    }

    /// Coordinates of `e_i^2`.
    pub fn square_of_basis(&self, i: usize) -> Vec<F::Elem> {
        (0..self.dim()).map(|k| self.entry(k, i).clone()).collect()
    }

    /// `u * v = sum_i u_i v_i e_i^2`.
    pub fn multiply(&self, u: &[F::Elem], v: &[F::Elem]) -> Result<Vec<F::Elem>, AlgebraError> {
        let n = self.dim();
        for len in [u.len(), v.len()] {
            if len != n {
                return Err(AlgebraError::DimensionMismatch(n, len));
            }
        }
        let f = &self.field;
        let weights: Vec<F::Elem> = u.iter().zip(v).map(|(a, b)| f.mul(a, b)).collect();
        Ok((0..n)
            .map(|k| (0..n).fold(f.zero(), |acc, i| f.add(&acc, &f.mul(&weights[i], self.entry(k, i)))))
            .collect())
    }

    pub fn determinant(&self) -> F::Elem {
        self.field.determinant(&self.matrix)
    }

    pub fn rank(&self) -> usize {
        matrix::rank(&self.field, &self.matrix)
    }

    /// `A^2 = A`, i.e. the structure matrix is invertible.
    pub fn is_perfect(&self) -> bool {
        self.rank() == self.dim()
    }

    pub fn support(&self) -> SupportPattern {
        SupportPattern::from_fn(self.dim(), |k, i| !self.field.is_zero(self.entry(k, i)))
            .expect("dimension already validated")
    }

    pub fn zero_count(&self) -> usize {
        self.matrix.entries().filter(|e| self.field.is_zero(e)).count()
    }

    pub fn diag_zero_count(&self) -> usize {
        (0..self.dim()).filter(|&k| self.field.is_zero(self.entry(k, k))).count()
    }

    /// Structure matrix in the basis `f_i = d_i e_{sigma^-1(i)}`:
    /// `N[j][i] = (d_i^2 / d_j) M[sigma^-1(j)][sigma^-1(i)]`, which is
    /// `P^-1 M P^(2)` for the monomial matrix of [`MonomialMap::to_matrix`].
    pub fn apply_monomial(&self, p: &MonomialMap<F::Elem>) -> Result<Self, AlgebraError> {
        let n = self.dim();
        if p.dim() != n {
            return Err(AlgebraError::DimensionMismatch(n, p.dim()));
        }
        let f = &self.field;
        let tau = p.sigma.inverse();
        let inv_scales: Vec<F::Elem> =
            p.scales.iter().map(|d| f.inv(d).expect("scales are nonzero")).collect();
        let matrix = Matrix::from_fn(n, n, |j, i| {
            let coeff = f.mul(&f.mul(&p.scales[i], &p.scales[i]), &inv_scales[j]);
            f.mul(&coeff, self.entry(tau.apply(j), tau.apply(i)))
        });
        Ok(EvolutionAlgebra { field: f.clone(), matrix })
    }

    pub fn block_decompose(&self, m: usize) -> Result<BlockDecomposition<F::Elem>, AlgebraError> {
        let n = self.dim();
        if m == 0 || m >= n {
            return Err(AlgebraError::Split { split: m, n });
        }
        let head: Vec<usize> = (0..m).collect();
        let tail: Vec<usize> = (m..n).collect();
        Ok(BlockDecomposition {
            m,
            w: self.matrix.select(&head, &head),
            u: self.matrix.select(&head, &tail),
            l: self.matrix.select(&tail, &head),
            y: self.matrix.select(&tail, &tail),
        })
    }

    /// `A / I` for the basic ideal spanned by `s`, in the basis of the
    /// remaining classes. The empty set gives `A` back.
    pub fn quotient(&self, s: IndexSet) -> Result<Self, AlgebraError> {
        let n = self.dim();
        if s.iter().any(|i| i >= n) {
            return Err(AlgebraError::NotClosed(s));
        }
        if s == IndexSet::full(n) {
            return Err(AlgebraError::WholeAlgebra);
        }
        if !ideals::is_closed(&self.support(), s) {
            return Err(AlgebraError::NotClosed(s));
        }
        let rest: Vec<usize> = (0..n).filter(|&i| !s.contains(i)).collect();
        Ok(EvolutionAlgebra { field: self.field.clone(), matrix: self.matrix.select(&rest, &rest) })
    }

    /// The subalgebra on a closed index set, in the induced natural basis.
    pub fn restrict(&self, s: IndexSet) -> Result<Self, AlgebraError> {
        if s.is_empty() || s.iter().any(|i| i >= self.dim()) || !ideals::is_closed(&self.support(), s) {
            return Err(AlgebraError::NotClosed(s));
        }
        let idx: Vec<usize> = s.iter().collect();
        Ok(EvolutionAlgebra { field: self.field.clone(), matrix: self.matrix.select(&idx, &idx) })
    }

    pub fn row_strings(&self) -> Vec<Vec<String>> {
        self.matrix.rows().map(|r| r.iter().map(|e| self.field.format(e)).collect()).collect()
    }
}

impl<F: Field> fmt::Display for EvolutionAlgebra<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self.row_strings();
        let width = rows.iter().flatten().map(String::len).max().unwrap_or(1);
        for (k, row) in rows.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// An element `(sigma, d)` of `S_n ⋉ (K^×)^n`: the basis change `f_i = d_i e_{sigma^-1(i)}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialMap<E> {
    pub sigma: Permutation,
    pub scales: Vec<E>,
}

impl<E: Clone + PartialEq> MonomialMap<E> {
    pub fn new<F: Field<Elem = E>>(field: &F, sigma: Permutation, scales: Vec<E>) -> Result<Self, AlgebraError> {
        if sigma.degree() != scales.len() {
            return Err(AlgebraError::DimensionMismatch(sigma.degree(), scales.len()));
        }
        if let Some(i) = scales.iter().position(|d| field.is_zero(d)) {
            return Err(AlgebraError::ZeroScale(i));
        }
        Ok(MonomialMap { sigma, scales })
    }

    pub fn identity<F: Field<Elem = E>>(field: &F, n: usize) -> Self {
        MonomialMap { sigma: Permutation::identity(n), scales: vec![field.one(); n] }
    }

    pub fn permutation<F: Field<Elem = E>>(field: &F, sigma: Permutation) -> Self {
        let n = sigma.degree();
        MonomialMap { sigma, scales: vec![field.one(); n] }
    }

    pub fn dim(&self) -> usize {
        self.sigma.degree()
    }

    /// The map acting as `self` after `other`: `compose(p, q)·M = p·(q·M)`.
    pub fn compose<F: Field<Elem = E>>(&self, other: &Self, field: &F) -> Self {
        let tau = self.sigma.inverse();
        let scales =
            (0..self.dim()).map(|i| field.mul(&self.scales[i], &other.scales[tau.apply(i)])).collect();
        MonomialMap { sigma: self.sigma.compose(&other.sigma), scales }
    }

    pub fn inverse<F: Field<Elem = E>>(&self, field: &F) -> Self {
        let scales = (0..self.dim())
            .map(|i| field.inv(&self.scales[self.sigma.apply(i)]).expect("scales are nonzero"))
            .collect();
        MonomialMap { sigma: self.sigma.inverse(), scales }
    }

    /// The monomial matrix whose column `i` is `d_i e_{sigma^-1(i)}`.
    pub fn to_matrix<F: Field<Elem = E>>(&self, field: &F) -> Matrix<E> {
        let tau = self.sigma.inverse();
        Matrix::from_fn(self.dim(), self.dim(), |r, c| {
            if r == tau.apply(c) {
                self.scales[c].clone()
            } else {
                field.zero()
            }
        })
    }
}
