//! Local antimagic labelings: graphs, magic rectangles, constructions,
//! bounds and exact search.

pub mod constructions;
pub mod error;
pub mod families;
pub mod graph;
pub mod labeling;
pub mod magic;
pub mod solver;
pub mod verifier;

pub use error::{Error, Result};
pub use graph::Graph;
pub use labeling::EdgeLabeling;
