//! The directed graph of a structure matrix: edge `i -> j` iff the
//! coefficient of `e_j` in `e_i^2` is nonzero.

use std::fmt;

use crate::bits::{BitMatrix, BitsError};
use crate::index_set::IndexSet;
use crate::pattern::SupportPattern;
use crate::perm::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedGraph(BitMatrix);

impl DirectedGraph {
    /// Adjacency rows of `0`/`1` characters; row `i` lists the out-edges of `i`.
    pub fn parse_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self, BitsError> {
        BitMatrix::parse_rows(rows).map(DirectedGraph)
    }

    pub fn from_adjacency(adj: BitMatrix) -> Self {
        DirectedGraph(adj)
    }

    pub fn adjacency(&self) -> BitMatrix {
        self.0
    }

    pub fn order(&self) -> usize {
        self.0.dim()
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.0.get(from, to)
    }

    pub fn successors(&self, v: usize) -> IndexSet {
        self.0.row_set(v)
    }

    pub fn predecessors(&self, v: usize) -> IndexSet {
        self.0.col_set(v)
    }

    fn reach(&self, start: usize, step: impl Fn(usize) -> IndexSet) -> IndexSet {
        let mut seen = IndexSet::singleton(start);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for w in step(v).iter() {
                if !seen.contains(w) {
                    seen.insert(w);
                    stack.push(w);
                }
            }
        }
        seen
    }

    pub fn is_strongly_connected(&self) -> bool {
        let all = IndexSet::full(self.order());
        self.reach(0, |v| self.successors(v)) == all && self.reach(0, |v| self.predecessors(v)) == all
    }

    /// Connectivity of the underlying undirected graph.
    pub fn is_connected(&self) -> bool {
        self.reach(0, |v| self.successors(v).union(self.predecessors(v))) == IndexSet::full(self.order())
    }

    /// `(out, in)` degree of each vertex in vertex order. Loops count once each way.
    pub fn degree_profile(&self) -> Vec<(usize, usize)> {
        (0..self.order()).map(|v| (self.successors(v).len(), self.predecessors(v).len())).collect()
    }

    pub fn sorted_degrees(&self) -> Vec<(usize, usize)> {
        let mut d = self.degree_profile();
        d.sort_unstable();
        d
    }

    /// The graph with vertex `v` renamed so that new vertex `j` is old `sigma(j)`.
    pub fn relabel(&self, sigma: &Permutation) -> Self {
        DirectedGraph(self.0.permuted(sigma))
    }

    /// Lexicographically least row-major adjacency over all relabelings.
    pub fn canonical(&self) -> Self {
        Permutation::all(self.order()).map(|s| self.relabel(&s)).min().expect("S_n is nonempty")
    }

    pub fn is_isomorphic(&self, other: &Self) -> bool {
        self.order() == other.order() && self.canonical() == other.canonical()
    }
}

/// The graph whose adjacency matrix is the transpose of the support.
pub fn associated_graph(p: &SupportPattern) -> DirectedGraph {
    DirectedGraph(p.bits().transpose())
}

/// Serialized as adjacency row strings.
impl serde::Serialize for DirectedGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.row_strings().serialize(s)
    }
}

impl fmt::Display for DirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(rows: &[&str]) -> DirectedGraph {
        DirectedGraph::parse_rows(rows).unwrap()
    }

    #[test]
    fn identity_support_gives_loops() {
        let p = SupportPattern::parse_rows(&["100", "010", "001"]).unwrap();
        let graph = associated_graph(&p);
        assert!((0..3).all(|v| graph.has_edge(v, v)));
        assert_eq!(graph.degree_profile(), vec![(1, 1); 3]);
        assert!(!graph.is_connected());
    }

    #[test]
    fn adjacency_is_transposed_support() {
        // column 0 of the support holds e_1^2 = e_2, so the edge is 1 -> 2
        let p = SupportPattern::parse_rows(&["00", "10"]).unwrap();
        let graph = associated_graph(&p);
        assert!(graph.has_edge(0, 1));
        assert!(!graph.has_edge(1, 0));
    }

    #[test]
    fn connectivity() {
        assert!(g(&["01", "10"]).is_strongly_connected());
        assert!(g(&["11", "11"]).is_strongly_connected());
        assert!(!g(&["11", "01"]).is_strongly_connected());
        assert!(g(&["11", "01"]).is_connected());
        assert!(g(&["1"]).is_strongly_connected());
        assert!(!g(&["1100", "1100", "0011", "0011"]).is_connected());
    }

    #[test]
    fn canonical_forms() {
        let a = g(&["0100", "0010", "0001", "1000"]);
        let b = a.relabel(&Permutation::from_cycles("(1,3,2)", 4).unwrap());
        assert_eq!(a.canonical(), b.canonical());
        assert_eq!(a.canonical().canonical(), a.canonical());
        assert_ne!(g(&["01", "10"]).canonical(), g(&["10", "01"]).canonical());
    }
}
