//! Exact convex-geometry kernel over finite point sets: hull membership,
//! vertex certification, edge tests and linear minimization.

mod hull;
pub mod simplex;

pub use hull::{
    edges, extreme_points, is_edge, is_in_hull, minimize, vertices, ExtremalityCertificate, HullMembership, Minimum,
    PointSet, WeightedPoint, Witness,
};
