pub mod acceptance;
pub mod decompose;
pub mod error;
pub mod graph;
pub mod io;
pub mod raag;
pub mod rorg;
pub mod vcd;
pub mod witness;

pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};
