//! Enumeration of attainable states and diffusion-polytope vertices on an
//! arbitrary graph.

mod explore;
mod polytope;
mod triangle;

pub use explore::{candidate_ops, explore, ExploreConfig, ReachableSet, ReachedState};
pub use polytope::{
    default_depth, hull_closure, polytope, ClassifiedVertex, Completeness, HullClosure, PolytopeConfig, PolytopeResult,
    VertexKind,
};
pub use triangle::{triangle_decomposition, triangle_lambdas, triangle_prune, TriangleBranch, TriangleDecomposition};
