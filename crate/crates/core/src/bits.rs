//! Square boolean matrices of size at most 8, packed into a `u64`.

use std::fmt;

use thiserror::Error;

use crate::index_set::IndexSet;
use crate::perm::Permutation;

pub const MAX_DIM: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitsError {
    #[error("dimension {0} is outside 1..={MAX_DIM}")]
    Dimension(usize),
    #[error("row {row} has {found} cells, expected {expected}")]
    Ragged { row: usize, found: usize, expected: usize },
    #[error("unexpected character `{0}` (expected 0 or 1)")]
    BadCell(char),
}

/// Cell `(r, c)` occupies bit `n*n - 1 - (r*n + c)`, so comparing `bits`
/// compares matrices lexicographically in row-major order with `false < true`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitMatrix {
    n: u8,
    bits: u64,
}

impl BitMatrix {
    pub fn zeros(n: usize) -> Result<Self, BitsError> {
        if n == 0 || n > MAX_DIM {
            return Err(BitsError::Dimension(n));
        }
        Ok(BitMatrix { n: n as u8, bits: 0 })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> bool) -> Result<Self, BitsError> {
        let mut m = Self::zeros(n)?;
        for r in 0..n {
            for c in 0..n {
                m.set(r, c, f(r, c));
            }
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self, BitsError> {
        let n = rows.len();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(BitsError::Ragged { row: r, found: row.len(), expected: n });
            }
        }
        Self::from_fn(n, |r, c| rows[r][c])
    }

    /// Parses rows of `0`/`1` characters, e.g. `["1100", "0101", ..]`.
    pub fn parse_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self, BitsError> {
        let parsed = rows
            .iter()
            .map(|row| {
                row.as_ref()
                    .chars()
                    .map(|ch| match ch {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        other => Err(BitsError::BadCell(other)),
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_rows(&parsed)
    }

    pub fn dim(&self) -> usize {
        self.n as usize
    }

    fn mask(&self, r: usize, c: usize) -> u64 {
        let n = self.dim();
        debug_assert!(r < n && c < n);
        1u64 << (n * n - 1 - (r * n + c))
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.bits & self.mask(r, c) != 0
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let m = self.mask(r, c);
        if v {
            self.bits |= m;
        } else {
            self.bits &= !m;
        }
    }

    pub fn raw_bits(&self) -> u64 {
        self.bits
    }

    pub fn count_ones(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn row_set(&self, r: usize) -> IndexSet {
        (0..self.dim()).filter(|&c| self.get(r, c)).collect()
    }

    pub fn col_set(&self, c: usize) -> IndexSet {
        (0..self.dim()).filter(|&r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim(), |r, c| self.get(c, r)).expect("same dimension")
    }

    /// `B'[j][i] = B[sigma(j)][sigma(i)]`.
    pub fn permuted(&self, sigma: &Permutation) -> Self {
        assert_eq!(sigma.degree(), self.dim(), "permutation degree mismatch");
        Self::from_fn(self.dim(), |j, i| self.get(sigma.apply(j), sigma.apply(i))).expect("same dimension")
    }

    pub fn row_strings(&self) -> Vec<String> {
        (0..self.dim())
            .map(|r| (0..self.dim()).map(|c| if self.get(r, c) { '1' } else { '0' }).collect())
            .collect()
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.row_strings().join("\n"))
    }
}
