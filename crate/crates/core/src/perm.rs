//! Permutations of `{0, .., n-1}` and explicit permutation groups.
//!
//! Text forms use 1-based cycle notation, e.g. `(1,2,4,3)` or `(1,2)(3,4)`;
//! the identity prints as `id`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("malformed cycle notation `{0}`")]
    Malformed(String),
    #[error("point {point} out of range for degree {n}")]
    OutOfRange { point: usize, n: usize },
    #[error("point {0} repeated")]
    Repeated(usize),
    #[error("image list is not a bijection")]
    NotBijective,
}

/// A permutation stored as its image list: `sigma.apply(i) == images[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || std::mem::replace(&mut seen[x], true) {
                return Err(PermError::NotBijective);
            }
        }
        Ok(Permutation(images))
    }

    /// Parses 1-based cycle notation of degree `n`.
    pub fn from_cycles(text: &str, n: usize) -> Result<Self, PermError> {
        let text = text.trim();
        let mut images: Vec<usize> = (0..n).collect();
        if text == "id" || text == "()" {
            return Ok(Permutation(images));
        }
        let mut used = vec![false; n];
        let mut rest = text;
        while !rest.is_empty() {
            let inner = rest
                .strip_prefix('(')
                .and_then(|r| r.split_once(')'))
                .ok_or_else(|| PermError::Malformed(text.to_string()))?;
            let points = inner
                .0
                .split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|_| PermError::Malformed(text.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            for &p in &points {
                if p == 0 || p > n {
                    return Err(PermError::OutOfRange { point: p, n });
                }
                if std::mem::replace(&mut used[p - 1], true) {
                    return Err(PermError::Repeated(p));
                }
            }
            for (k, &p) in points.iter().enumerate() {
                images[p - 1] = points[(k + 1) % points.len()] - 1;
            }
            rest = inner.1.trim_start();
        }
        Ok(Permutation(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Permutation(inv)
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Self {
        Permutation(other.0.iter().map(|&x| self.0[x]).collect())
    }

    /// Lexicographic successor of the image list, if any.
    pub fn next_lex(&self) -> Option<Self> {
        let mut v = self.0.clone();
        let i = (1..v.len()).rev().find(|&i| v[i - 1] < v[i])?;
        let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1])?;
        v.swap(i - 1, j);
        v[i..].reverse();
        Some(Permutation(v))
    }

    /// All of `S_n` in lexicographic order of image lists.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        std::iter::successors(Some(Permutation::identity(n)), Permutation::next_lex)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.0[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.0[x];
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "id");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", body.join(","))?;
        }
        Ok(())
    }
}

/// A finite permutation group given by its full element list, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermSubgroup {
    degree: usize,
    elements: Vec<Permutation>,
}

impl PermSubgroup {
    pub fn symmetric(n: usize) -> Self {
        PermSubgroup { degree: n, elements: Permutation::all(n).collect() }
    }

    pub fn trivial(n: usize) -> Self {
        PermSubgroup { degree: n, elements: vec![Permutation::identity(n)] }
    }

    /// Elements of `S_n` satisfying `keep`; the caller guarantees closure.
    pub fn filtered(n: usize, keep: impl Fn(&Permutation) -> bool) -> Self {
        PermSubgroup { degree: n, elements: Permutation::all(n).filter(|s| keep(s)).collect() }
    }

    /// Pointwise stabilizer of `points`.
    pub fn fixing(n: usize, points: &[usize]) -> Self {
        Self::filtered(n, |s| points.iter().all(|&p| s.apply(p) == p))
    }

    /// Setwise stabilizer of `set`.
    pub fn stabilizing_set(n: usize, set: &[usize]) -> Self {
        Self::filtered(n, |s| set.iter().all(|&p| set.contains(&s.apply(p))))
    }

    /// Closure of the generators under composition.
    pub fn generated_by(n: usize, gens: &[Permutation]) -> Self {
        let mut elems: BTreeSet<Permutation> = BTreeSet::from([Permutation::identity(n)]);
        let mut frontier = vec![Permutation::identity(n)];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = g.compose(&x);
                if elems.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        PermSubgroup { degree: n, elements: elems.into_iter().collect() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, s: &Permutation) -> bool {
        self.elements.binary_search(s).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Permutation> {
        self.elements.iter()
    }

    pub fn is_closed(&self) -> bool {
        self.elements.iter().all(|a| {
            self.contains(&a.inverse()) && self.elements.iter().all(|b| self.contains(&a.compose(b)))
        })
    }
}
