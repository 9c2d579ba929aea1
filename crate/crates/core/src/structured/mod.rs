//! Theorem-backed constructions: the complete graph through commutation
//! classes of reduced words, the ordered path hypercube, and counting
//! formulas.

mod counts;
mod decomposition;
mod kn;
mod perm;
mod pn;

pub use counts::{
    a2_closed_form, binomial, count_commuting_subsets, counts_table_csv, fibonacci, fibonacci_nonlocal_count,
    triangular,
};
pub use decomposition::{subset_decomposition, DecompositionCase, DecompositionInternals, DecompositionWitness};
pub use kn::{
    kn_candidates, kn_extreme_points, realize, stopping_permutation, KnReference, KnVertices, MAX_STRUCTURED_N,
};
pub use perm::{class_representatives, commutation_classes, reduced_words, CommutationClass, Permutation, ReducedWord};
pub use pn::{pn_polytope, pn_subset_point, pn_subset_points, PnPolytope, SubsetPoint};
