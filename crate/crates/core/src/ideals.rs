//! Descendant sets and basic ideals.
//!
//! A basic ideal is spanned by the basis vectors of an index set `S` that is
//! closed under first descendants, so everything here works on the support
//! pattern. For perfect algebras this is independent of the natural basis.

use serde::Serialize;
use thiserror::Error;

use crate::algebra::EvolutionAlgebra;
use crate::field::Field;
use crate::index_set::IndexSet;
use crate::pattern::SupportPattern;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("index set {0} is not a proper nonempty subset")]
    NotProper(IndexSet),
    #[error("structure matrix is not in (W U; 0 w) form: {0}")]
    NotLastColumnForm(String),
}

fn check_index(p: &SupportPattern, i: usize) -> Result<(), IdealError> {
    if i >= p.dim() {
        return Err(IdealError::IndexOutOfRange { index: i, n: p.dim() });
    }
    Ok(())
}

fn check_set(p: &SupportPattern, s: IndexSet) -> Result<(), IdealError> {
    match s.iter().find(|&i| i >= p.dim()) {
        Some(index) => Err(IdealError::IndexOutOfRange { index, n: p.dim() }),
        None => Ok(()),
    }
}

/// `D^1(i)`: the support of column `i`.
pub fn first_descendants(p: &SupportPattern, i: usize) -> Result<IndexSet, IdealError> {
    check_index(p, i)?;
    Ok(p.column(i))
}

/// `D(i)`: everything reachable from `i` in one or more steps. `i` itself
/// appears only if it lies on a cycle or carries a loop.
pub fn descendants(p: &SupportPattern, i: usize) -> Result<IndexSet, IdealError> {
    check_index(p, i)?;
    Ok(reach(p, p.column(i)))
}

fn reach(p: &SupportPattern, start: IndexSet) -> IndexSet {
    let mut seen = start;
    let mut frontier: Vec<usize> = start.iter().collect();
    while let Some(v) = frontier.pop() {
        for w in p.column(v).iter() {
            if !seen.contains(w) {
                seen.insert(w);
                frontier.push(w);
            }
        }
    }
    seen
}

/// Smallest closed superset of `s`.
pub fn closure(p: &SupportPattern, s: IndexSet) -> Result<IndexSet, IdealError> {
    check_set(p, s)?;
    Ok(reach(p, s))
}

/// `D^1(i) ⊆ s` for every `i ∈ s`. No properness requirement.
pub fn is_closed(p: &SupportPattern, s: IndexSet) -> bool {
    s.iter().all(|i| p.column(i).is_subset(s))
}

pub fn is_basic_ideal(p: &SupportPattern, s: IndexSet) -> Result<bool, IdealError> {
    check_set(p, s)?;
    if s.is_empty() || s == IndexSet::full(p.dim()) {
        return Err(IdealError::NotProper(s));
    }
    Ok(is_closed(p, s))
}

/// Every closed proper nonempty index set, in lexicographic order.
pub fn closed_proper_sets(p: &SupportPattern) -> Vec<IndexSet> {
    let full = IndexSet::full(p.dim()).bits();
    let mut sets: Vec<IndexSet> =
        (1..full).map(IndexSet::from_bits).filter(|&s| is_closed(p, s)).collect();
    sets.sort();
    sets
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdealReport {
    pub all_closed_proper_sets: Vec<IndexSet>,
    pub maximal_basic_ideals: Vec<IndexSet>,
    pub is_basic_simple: bool,
    /// False when the algebra is not perfect; basic ideals then depend on the basis.
    pub basis_independent: bool,
}

impl IdealReport {
    pub fn maximal_dimension(&self) -> Option<usize> {
        self.maximal_basic_ideals.first().map(|s| s.len())
    }
}

/// Pattern-level report; `basis_independent` is left `true`.
pub fn maximal_basic_ideals(p: &SupportPattern) -> IdealReport {
    let all = closed_proper_sets(p);
    let top = all.iter().map(|s| s.len()).max().unwrap_or(0);
    let maximal = all.iter().copied().filter(|s| s.len() == top).collect();
    IdealReport { is_basic_simple: all.is_empty(), maximal_basic_ideals: maximal, all_closed_proper_sets: all, basis_independent: true }
}

pub fn ideal_report<F: Field>(a: &EvolutionAlgebra<F>) -> IdealReport {
    IdealReport { basis_independent: a.is_perfect(), ..maximal_basic_ideals(&a.support()) }
}

/// Dimension of the maximal basic ideals, `None` when basic simple.
pub fn maximal_ideal_dimension(p: &SupportPattern) -> Option<usize> {
    (1..p.dim()).rev().find(|&d| {
        let full = IndexSet::full(p.dim()).bits();
        (1..full).map(IndexSet::from_bits).any(|s| s.len() == d && is_closed(p, s))
    })
}

pub fn is_basic_simple(p: &SupportPattern) -> bool {
    (0..p.dim()).all(|i| reach(p, IndexSet::singleton(i)) == IndexSet::full(p.dim()))
}

pub fn is_simple<F: Field>(a: &EvolutionAlgebra<F>) -> bool {
    a.is_perfect() && a.support().graph().is_strongly_connected()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Irreducibility {
    Irreducible,
    Reducible,
    /// Not perfect: graph connectivity is not known to decide irreducibility.
    Unproven { graph_connected: bool },
}

pub fn is_irreducible<F: Field>(a: &EvolutionAlgebra<F>) -> Irreducibility {
    let connected = a.support().graph().is_connected();
    match (a.is_perfect(), connected) {
        (false, graph_connected) => Irreducibility::Unproven { graph_connected },
        (true, true) => Irreducibility::Irreducible,
        (true, false) => Irreducibility::Reducible,
    }
}

/// First pair of distinct closed 3-sets whose intersection is a closed 2-set.
pub fn satisfies_condition_323(p: &SupportPattern) -> Option<(IndexSet, IndexSet)> {
    let threes: Vec<IndexSet> = closed_proper_sets(p).into_iter().filter(|s| s.len() == 3).collect();
    threes.iter().enumerate().find_map(|(k, &s)| {
        threes[k + 1..].iter().find_map(|&t| {
            let both = s.intersection(t);
            (both.len() == 2 && is_closed(p, both)).then_some((s, t))
        })
    })
}

/// Checks `M = (W U; 0 w)` with `w != 0`: the last basis vector spans a
/// one-dimensional quotient.
fn check_last_column_form(p: &SupportPattern) -> Result<usize, IdealError> {
    let n = p.dim();
    if n < 2 {
        return Err(IdealError::NotLastColumnForm(format!("dimension {n} is too small")));
    }
    let last = n - 1;
    if (0..last).any(|i| p.get(last, i)) {
        return Err(IdealError::NotLastColumnForm("last row has a nonzero off-diagonal entry".into()));
    }
    if !p.get(last, last) {
        return Err(IdealError::NotLastColumnForm("last diagonal entry is zero".into()));
    }
    Ok(last)
}

fn unreached_by_others(p: &SupportPattern, i: usize) -> bool {
    (0..p.dim()).all(|j| j == i || !p.column(j).contains(i))
}

/// An index `i < n-1` that no other basis vector reaches and whose
/// first-descendant count differs from that of the last index, so swapping it
/// with the last index changes the zero counts of the blocks.
pub fn noninvariance_witness(p: &SupportPattern) -> Result<Option<usize>, IdealError> {
    let last = check_last_column_form(p)?;
    Ok((0..last).find(|&i| unreached_by_others(p, i) && p.column(i).len() != p.column(last).len()))
}

/// Some `i < n-1` lies in no `D^1(j)` with `j != i`.
pub fn has_exchangeable_index(p: &SupportPattern) -> Result<bool, IdealError> {
    let last = check_last_column_form(p)?;
    Ok((0..last).any(|i| unreached_by_others(p, i)))
}

/// Some `i < n-1` whose complement `T` in `{0..n-2}` is closed with `T ∪ {n-1}` closed too.
pub fn has_complementary_ideal_pair(p: &SupportPattern) -> Result<bool, IdealError> {
    let last = check_last_column_form(p)?;
    let head = IndexSet::full(last);
    Ok((0..last).any(|i| {
        let t = head.difference(IndexSet::singleton(i));
        !t.is_empty() && is_closed(p, t) && is_closed(p, t.union(IndexSet::singleton(last)))
    }))
}
