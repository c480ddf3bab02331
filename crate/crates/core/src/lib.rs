//! Exact sum-of-squares certificates for nonnegative forms via facial
//! reduction, plus two-squares descent and a three-squares generator.

pub mod arith;
pub mod cert;
pub mod descent;
pub mod error;
pub mod facial;
pub mod gram;
pub mod linalg;
pub mod pipeline;
pub mod sdp;

pub use error::{Error, Result};
