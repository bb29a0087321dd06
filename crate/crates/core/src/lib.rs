//! Tropical crossing numbers of trivalent graphs.
//!
//! The crate enumerates regular nodal subdivisions of lattice polygons,
//! skeletonizes their dual tropical curves and searches the resulting
//! graphs, level by level in the number of nodes.

pub mod cache;
pub mod driver;
pub mod dual;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod lattice;
pub mod rational;
pub mod regularity;
pub mod subdivision;

pub use error::{Error, Result};
