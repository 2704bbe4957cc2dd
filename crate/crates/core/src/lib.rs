//! Exact census of congruence and similarity classes of triangles in planar
//! point sets, together with the two line lifts that turn repeated triangles
//! into rich points of a line arrangement:
//!
//! * orientation-preserving rigid motions taking `p` to `q` form a line in R³
//!   ([`motion`]);
//! * maps `z ↦ az + b` taking `p` to `q` form a line in C² ([`conformal`]).
//!
//! Everything is computed with exact rationals; no geometric decision depends
//! on a tolerance.

pub mod arrangement;
pub mod census;
pub mod conformal;
pub mod error;
pub mod generators;
pub mod keys;
pub mod motion;
pub mod oracle;
pub mod point;
pub mod rat;
pub mod report;

pub use error::{Error, Result};
pub use keys::KeyKind;
pub use point::{Point, PointSet};
pub use rat::{GaussRat, Rat};
