//! Spherical growth series of positive braid monoids over simple elements,
//! computed with partition-indexed reduced transfer matrices.

pub mod bipartite;
pub mod cli;
pub mod error;
pub mod growth;
pub mod linalg;
pub mod oracle;
pub mod partitions;

pub use error::{Error, Result};
