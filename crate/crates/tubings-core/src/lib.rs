//! Tubings of graphs and the algebra built on them: substitution, the signed
//! boundary, the pre-Lie coproduct, the Trias' and L-algebra structures on
//! disconnected tubings, and the operadic category of tubings.
//!
//! Nodes are 1-based everywhere; node sets are 64-bit masks.

pub mod census;
pub mod dtub;
pub mod chain;
pub mod error;
pub mod graph;
pub mod nodeset;
pub mod opcat;
pub mod operad;
pub mod substitution;
pub mod topology;
pub mod tubing;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{Graph, Relabeled};
pub use nodeset::NodeSet;
pub use tubing::{PairClass, Restriction, Tubing};
