//! Geometry of finite-dimensional normed spaces represented by their unit
//! balls: multiplicative (Banach-Mazur) distances, canonical positioning,
//! the two extreme geodesics between positioned bodies, and constructions
//! of pairwise non-isometric intermediate bodies in dimensions 2 and 3.
//!
//! The crate is organized around [`bodies::ConvexBody`], an immutable
//! origin-symmetric convex body that is either an exact 2D polygon, a 3D
//! polytope, or a gauge oracle. All higher layers ([`distance`],
//! [`geodesics`], [`families`]) are pure functions over bodies.

pub mod bodies;
pub mod distance;
pub mod error;
pub mod families;
pub mod geodesics;
pub mod io;
pub mod numeric;
pub mod svg;

pub use bodies::{lp_ball, ConvexBody};
pub use distance::{
    bm_distance, canonical_position, canonical_position_fixed, fixed_position_distance,
    known_lp_distance, DistanceReport, OptimizerConfig, PositionedPair,
};
pub use error::Error;
pub use geodesics::{b_lambda, c_lambda, build_path, GeodesicKind, GeodesicPath};
