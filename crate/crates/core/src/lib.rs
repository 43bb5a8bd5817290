//! Exact computations on unimodular tropical fans.
//!
//! The crate builds the canonical compactification of a fan as a cubical cell complex
//! with multi-tangent coefficients, computes tropical (co)homology, Chow rings with
//! degree and Gysin maps, and checks Poincaré duality, the Kähler package, Keel's
//! decomposition and tropical Deligne resolutions. All arithmetic is exact.

pub mod chow;
pub mod complex;
pub mod error;
pub mod fan;
pub mod fixtures;
pub mod fm;
pub mod homology;
pub mod io;
pub mod kahler;
pub mod linalg;
pub mod matroid;
pub mod modification;
pub mod report;

pub use error::{Error, Result};
pub use fan::{Cone, Fan, StarFan};
pub use report::{Report, Verdict};
