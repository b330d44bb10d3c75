pub mod cli;
pub mod completion;
pub mod cycle_elim;
pub mod error;
pub mod graph;
pub mod label;
pub mod pipeline;
pub mod set_repr;
pub mod verifier;

pub use error::{Error, Result};
pub use graph::{check_map, enumerate_partial_automorphisms, EdgeLabelledGraph, MapMode, PartialMap, VertexId};
pub use label::Label;
