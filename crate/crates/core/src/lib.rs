//! Local antimagic labelings of joins `(2k)P_2 ∨ O_m` and the graph
//! families derived from them by merging, splitting and rewiring vertices.
//!
//! The pipeline is: build a label matrix ([`schemes`]), turn it into a
//! labeled disjoint union ([`transforms::from_matrix`]), apply surgery, and
//! verify the result ([`labeling`]). [`oracle`] gives exact answers for
//! graphs with a handful of edges.

pub mod chromatic;
pub mod graph;
pub mod io;
pub mod labeling;
pub mod oracle;
pub mod params;
pub mod schemes;
pub mod sweep;
pub mod transforms;
pub mod vertex;

pub use graph::{Edge, Graph, GraphError};
pub use labeling::{EdgeLabeling, InducedColoring};
pub use params::{FamilyParams, Parity};
pub use schemes::{LabelMatrix, RowKey};
pub use transforms::LabeledGraph;
pub use vertex::VertexId;
