//! Solving, counting and uniformly sampling local constraint problems on
//! graphs embedded in the hyperbolic plane.
//!
//! The pipeline runs from an embedded graph ([`tessellation::HypGraph`]) and
//! per-vertex neighborhood constraints ([`csp::HlcspInstance`]) through the
//! edge-constraint reduction ([`csp::reduce_to_hecsp`]), a tree decomposition
//! normalized to nice form ([`treedec`]), and a counting dynamic program
//! ([`engine`]) that decides, counts exactly, and samples uniformly.

pub mod csp;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod minesweeper;
pub mod tessellation;
pub mod toolkit;
pub mod treedec;

pub use error::{Error, Result};
