//! Exact k-weights of positive-weighted labeled trees.
//!
//! The crate computes k-weights, decides when a family of `(n-1)`-weights
//! comes from a positive-weighted tree, rebuilds every realizing tree, and
//! describes the simplex of positive weights on any candidate topology. It
//! also converts between an `(n-1)`-family with a single equality and the
//! 2-weights of its star, and extends a k-family by the 2-weights such an
//! equality forces.
//!
//! All arithmetic is exact: weights are arbitrary-precision rationals.

pub mod cli;
pub mod error;
pub mod exec;
pub mod family;
pub mod lp;
pub mod multiweight;
pub mod oracle;
pub mod random;
pub mod rational;
pub mod reconstruct;
pub mod topology;
pub mod tree;

pub use error::{Error, Result};
pub use exec::Exec;
pub use family::{
    check_four_point, check_triangle, classify_family, is_positive_leaf_treelike, is_positive_treelike,
    FamilyClass, FamilyStatus, WeightFamily,
};
pub use lp::strictly_positive_solution;
pub use multiweight::{
    extend_family, mixed_treelike_equivalence, mixed_treelike_equivalence_in, nm1_to_two, two_to_nm1, Correspondence,
    EquivalenceReport, MixedFamily,
};
pub use oracle::{
    brute_force_k_weight, enumerate_topologies, enumerate_topologies_with, exhaustive_realizability,
    exhaustive_realizability_in, exhaustive_realizability_with, Grid, Realization, TopologyCatalog, TopologyConstraint,
};
pub use rational::Rational;
pub use reconstruct::{
    canonical_pseudostar, moduli_description, r_io, r_oi, realize_on_topology, reconstruct_equality_star,
    reconstruct_from_two_weights, SimplexDescription, SimplexKind, TwigFormula,
};
pub use topology::Topology;
pub use tree::{all_k_weights, k_weight, Label, LabelSubset, LabeledTree, VertexId, WeightedTree};
