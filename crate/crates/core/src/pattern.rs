//! Support patterns: which structure constants are nonzero.
//!
//! A pattern is the zero/nonzero shape of a structure matrix, with the same
//! orientation (`P[k][i]` is set when `e_k` occurs in `e_i^2`). Families of
//! algebras are orbits of patterns under a permutation group.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::bits::{BitMatrix, BitsError};
use crate::graph::{associated_graph, DirectedGraph};
use crate::index_set::IndexSet;
use crate::perm::{PermSubgroup, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error(transparent)]
    Bits(#[from] BitsError),
    #[error("split {split} out of range for dimension {n}")]
    Split { split: usize, n: usize },
    #[error("pattern is not in block form for split {0}")]
    NotBlockForm(usize),
    #[error("block shapes do not fit: {0}")]
    BlockShape(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportPattern(BitMatrix);

/// Zero counts of the four blocks `(W U; L Y)` for a split `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockZeros {
    pub w: usize,
    pub u: usize,
    pub l: usize,
    pub y: usize,
}

impl SupportPattern {
    pub fn zeros(n: usize) -> Result<Self, PatternError> {
        Ok(SupportPattern(BitMatrix::zeros(n)?))
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> bool) -> Result<Self, PatternError> {
        Ok(SupportPattern(BitMatrix::from_fn(n, f)?))
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self, PatternError> {
        Ok(SupportPattern(BitMatrix::from_rows(rows)?))
    }

    pub fn parse_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self, PatternError> {
        Ok(SupportPattern(BitMatrix::parse_rows(rows)?))
    }

    pub fn from_bits(bits: BitMatrix) -> Self {
        SupportPattern(bits)
    }

    pub fn bits(&self) -> BitMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn get(&self, k: usize, i: usize) -> bool {
        self.0.get(k, i)
    }

    pub fn set(&mut self, k: usize, i: usize, v: bool) {
        self.0.set(k, i, v)
    }

    pub fn nonzero_count(&self) -> usize {
        self.0.count_ones()
    }

    pub fn zero_count(&self) -> usize {
        self.dim() * self.dim() - self.nonzero_count()
    }

    pub fn diag_zero_count(&self) -> usize {
        (0..self.dim()).filter(|&k| !self.get(k, k)).count()
    }

    /// Support of column `i`: the first-generation descendants of `i`.
    pub fn column(&self, i: usize) -> IndexSet {
        self.0.col_set(i)
    }

    pub fn row(&self, k: usize) -> IndexSet {
        self.0.row_set(k)
    }

    /// `P'[j][i] = P[sigma(j)][sigma(i)]`.
    pub fn permute(&self, sigma: &Permutation) -> Self {
        SupportPattern(self.0.permuted(sigma))
    }

    /// Lexicographically least member of the orbit under `group`.
    pub fn canonical(&self, group: &PermSubgroup) -> Self {
        group.iter().map(|s| self.permute(s)).min().expect("groups contain the identity")
    }

    pub fn orbit(&self, group: &PermSubgroup) -> BTreeSet<SupportPattern> {
        group.iter().map(|s| self.permute(s)).collect()
    }

    /// Whether some permutation `t` has `P[t(i)][i]` set for every `i`,
    /// decided by augmenting-path bipartite matching.
    pub fn generically_perfect(&self) -> bool {
        let n = self.dim();
        let mut row_owner: Vec<Option<usize>> = vec![None; n];
        fn augment(p: &SupportPattern, col: usize, seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
            for row in p.column(col).iter() {
                if seen[row] {
                    continue;
                }
                seen[row] = true;
                if owner[row].is_none_or(|c| augment(p, c, seen, owner)) {
                    owner[row] = Some(col);
                    return true;
                }
            }
            false
        }
        (0..n).all(|col| augment(self, col, &mut vec![false; n], &mut row_owner))
    }

    pub fn graph(&self) -> DirectedGraph {
        associated_graph(self)
    }

    pub fn fingerprint(&self) -> Fingerprint {
        let graph = self.graph();
        Fingerprint {
            zero_count: self.zero_count(),
            diag_zero_count: self.diag_zero_count(),
            degree_multiset: graph.sorted_degrees(),
            graph_class: graph.canonical(),
        }
    }

    fn check_split(&self, split: usize) -> Result<(), PatternError> {
        if split == 0 || split >= self.dim() {
            return Err(PatternError::Split { split, n: self.dim() });
        }
        Ok(())
    }

    /// True when the lower-left block (rows `split..`, columns `..split`) is zero.
    pub fn is_block_form(&self, split: usize) -> bool {
        (split..self.dim()).all(|k| (0..split).all(|i| !self.get(k, i)))
    }

    pub fn block_zeros(&self, split: usize) -> Result<BlockZeros, PatternError> {
        self.check_split(split)?;
        let n = self.dim();
        let count = |rows: std::ops::Range<usize>, cols: std::ops::Range<usize>| {
            rows.flat_map(|k| cols.clone().map(move |i| (k, i))).filter(|&(k, i)| !self.get(k, i)).count()
        };
        Ok(BlockZeros {
            w: count(0..split, 0..split),
            u: count(0..split, split..n),
            l: count(split..n, 0..split),
            y: count(split..n, split..n),
        })
    }

    /// The square sub-pattern on `indices`, in the given order.
    pub fn principal(&self, indices: &[usize]) -> Result<Self, PatternError> {
        SupportPattern::from_fn(indices.len(), |r, c| self.get(indices[r], indices[c]))
    }

    /// Assembles `(W U; 0 Y)`; `u` has `W.dim()` rows of `Y.dim()` cells.
    pub fn from_blocks(w: &SupportPattern, u: &[Vec<bool>], y: &SupportPattern) -> Result<Self, PatternError> {
        let m = w.dim();
        let n = m + y.dim();
        if u.len() != m || u.iter().any(|row| row.len() != y.dim()) {
            return Err(PatternError::BlockShape(format!("U must be {m}x{}", y.dim())));
        }
        SupportPattern::from_fn(n, |k, i| match (k < m, i < m) {
            (true, true) => w.get(k, i),
            (true, false) => u[k][i - m],
            (false, true) => false,
            (false, false) => y.get(k - m, i - m),
        })
    }

    pub fn direct_sum(&self, other: &SupportPattern) -> Result<Self, PatternError> {
        let zero = vec![vec![false; other.dim()]; self.dim()];
        Self::from_blocks(self, &zero, other)
    }

    pub fn row_strings(&self) -> Vec<String> {
        self.0.row_strings()
    }
}

/// Serialized as `0`/`1` row strings.
impl serde::Serialize for SupportPattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.row_strings().serialize(s)
    }
}

impl fmt::Display for SupportPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn permute_pattern(sigma: &Permutation, p: &SupportPattern) -> SupportPattern {
    p.permute(sigma)
}

pub fn canonical_pattern(p: &SupportPattern, group: &PermSubgroup) -> SupportPattern {
    p.canonical(group)
}

pub fn generically_perfect(p: &SupportPattern) -> bool {
    p.generically_perfect()
}

pub fn fingerprint(p: &SupportPattern) -> Fingerprint {
    p.fingerprint()
}

/// Relabeling invariants of a pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct Fingerprint {
    pub zero_count: usize,
    pub diag_zero_count: usize,
    /// Sorted `(out, in)` degree pairs.
    pub degree_multiset: Vec<(usize, usize)>,
    pub graph_class: DirectedGraph,
}

/// Cells a normal form keeps fixed, used to derive the admissible relabelings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BlockSpec {
    /// Block split `m`; the lower-left `(n-m) x m` block must stay zero. `0` means no block.
    pub split: usize,
    /// Rows whose zero/nonzero shape is part of the normal form.
    pub pinned_rows: Vec<usize>,
    /// Columns whose zero/nonzero shape is part of the normal form.
    pub pinned_cols: Vec<usize>,
}

impl BlockSpec {
    pub fn split(split: usize) -> Self {
        BlockSpec { split, ..Default::default() }
    }
}

/// The stabilizer of the cells that `spec` fixes, with their values read from `p`.
///
/// A relabeling is admissible when it maps every constrained cell to a
/// constrained cell carrying the same value, so any pattern in the normal form
/// stays in it.
pub fn allowed_permutations(p: &SupportPattern, spec: &BlockSpec) -> Result<PermSubgroup, PatternError> {
    let n = p.dim();
    if spec.split >= n {
        return Err(PatternError::Split { split: spec.split, n });
    }
    if spec.split > 0 && !p.is_block_form(spec.split) {
        return Err(PatternError::NotBlockForm(spec.split));
    }
    let mut fixed: Vec<Vec<Option<bool>>> = vec![vec![None; n]; n];
    if spec.split > 0 {
        for row in fixed.iter_mut().skip(spec.split) {
            for cell in row.iter_mut().take(spec.split) {
                *cell = Some(false);
            }
        }
    }
    for &r in &spec.pinned_rows {
        for (i, cell) in fixed[r].iter_mut().enumerate() {
            *cell = Some(p.get(r, i));
        }
    }
    for &c in &spec.pinned_cols {
        for (k, row) in fixed.iter_mut().enumerate() {
            row[c] = Some(p.get(k, c));
        }
    }
    Ok(PermSubgroup::filtered(n, |s| {
        (0..n).all(|j| (0..n).all(|i| fixed[j][i].is_none() || fixed[s.apply(j)][s.apply(i)] == fixed[j][i]))
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternPredicate {
    GenericallyPerfect,
    Connected,
    StronglyConnected,
}

impl PatternPredicate {
    pub fn holds(self, p: &SupportPattern) -> bool {
        match self {
            PatternPredicate::GenericallyPerfect => p.generically_perfect(),
            PatternPredicate::Connected => p.graph().is_connected(),
            PatternPredicate::StronglyConnected => p.graph().is_strongly_connected(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternConstraints {
    pub n: usize,
    pub forced_zero: Vec<(usize, usize)>,
    pub forced_nonzero: Vec<(usize, usize)>,
    pub predicates: Vec<PatternPredicate>,
}

impl PatternConstraints {
    pub fn new(n: usize) -> Self {
        PatternConstraints { n, forced_zero: Vec::new(), forced_nonzero: Vec::new(), predicates: Vec::new() }
    }

    pub fn require(mut self, pred: PatternPredicate) -> Self {
        self.predicates.push(pred);
        self
    }

    pub fn zero(mut self, k: usize, i: usize) -> Self {
        self.forced_zero.push((k, i));
        self
    }

    pub fn nonzero(mut self, k: usize, i: usize) -> Self {
        self.forced_nonzero.push((k, i));
        self
    }
}

/// Every pattern meeting `c`, in increasing lexicographic order.
pub fn enumerate_patterns(c: &PatternConstraints) -> Result<impl Iterator<Item = SupportPattern>, PatternError> {
    let base = {
        let mut p = SupportPattern::zeros(c.n)?;
        for &(k, i) in &c.forced_nonzero {
            p.set(k, i, true);
        }
        p
    };
    let free: Vec<(usize, usize)> = (0..c.n)
        .flat_map(|k| (0..c.n).map(move |i| (k, i)))
        .filter(|cell| !c.forced_zero.contains(cell) && !c.forced_nonzero.contains(cell))
        .collect();
    let predicates = c.predicates.clone();
    let count = 1u64 << free.len();
    Ok((0..count)
        .map(move |code| {
            let mut p = base;
            for (b, &(k, i)) in free.iter().enumerate() {
                if code >> (free.len() - 1 - b) & 1 == 1 {
                    p.set(k, i, true);
                }
            }
            p
        })
        .filter(move |p| predicates.iter().all(|pred| pred.holds(p))))
}
