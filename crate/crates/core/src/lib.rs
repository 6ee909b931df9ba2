pub(crate) mod embed;
pub mod error;
pub mod generators;
pub mod grainline;
pub mod graph;
pub mod harness;
pub mod immersion;
pub mod io;
pub mod minors;
pub mod oracle;
pub mod separations;

pub use error::{Error, Result};
pub use graph::{Cut, Edge, Graph, Path, Vertex};
