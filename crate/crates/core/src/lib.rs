//! Containment-based size measures of convex polytopes with respect to a
//! convex gauge body that need not be centered.

pub mod ball;
pub mod error;
pub mod gauge;
pub mod geometry;
pub mod linprog;
pub mod radii;
pub mod render;
pub mod verify;

pub use error::{GeomError, Result};
pub use gauge::{GaugeBody, Method, RadiiResult};
pub use geometry::{vector, AffineFlat, Halfspace, Polytope, Subspace, Vector};
