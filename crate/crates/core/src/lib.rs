//! Diffusion polytopes of pairwise-averaging processes on graphs.
//!
//! A population vector on the vertices of a connected graph evolves by
//! averaging the populations at the two ends of an edge. The diffusion
//! polytope is the closed convex hull of every attainable vector. This crate
//! builds those polytopes in exact rational arithmetic, certifies their
//! vertices, and minimizes linear objectives (free-energy extraction) over them.

pub mod enumeration;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod ops;
pub mod optimize;
mod par;
pub mod plot;
pub mod population;
pub mod presets;
pub mod rational;
pub mod structured;

pub use enumeration::{
    explore, polytope, triangle_decomposition, triangle_prune, ClassifiedVertex, Completeness, ExploreConfig,
    PolytopeConfig, PolytopeResult, ReachableSet, VertexKind,
};
pub use error::{Error, Result};
pub use graph::DiffusionGraph;
pub use ops::{apply, apply_sequence, spread, AveragingOp, OperationSequence};
pub use optimize::{EnergyReport, Method, Objective};
pub use population::PopulationVector;
pub use rational::Rational;
