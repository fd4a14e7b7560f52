//! Finite-dimensional evolution algebras over exact fields: structure
//! matrices, basic ideals, associated graphs, support patterns, monomial
//! isomorphism testing and the pattern-level classification of perfect
//! non-simple four-dimensional algebras.

pub mod algebra;
pub mod bits;
pub mod classify;
pub mod field;
pub mod format;
pub mod graph;
pub mod ideals;
pub mod index_set;
pub mod isotest;
pub mod matrix;
pub mod pattern;
pub mod perm;
pub mod snf;

pub use algebra::{AlgebraError, BlockDecomposition, EvolutionAlgebra, MonomialMap};
pub use field::{Field, FieldError, FieldSpec, PrimeField, Rationals, Residue};
pub use graph::{associated_graph, DirectedGraph};
pub use index_set::IndexSet;
pub use matrix::Matrix;
pub use pattern::{Fingerprint, SupportPattern};
pub use perm::{PermSubgroup, Permutation};

pub type RationalAlgebra = EvolutionAlgebra<Rationals>;
pub type ModularAlgebra = EvolutionAlgebra<PrimeField>;
