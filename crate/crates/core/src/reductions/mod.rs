//! HPC instances compiled into min s-t cut, lexicographically-first MIS and
//! submodular minimization inputs, plus their edge streams.

pub mod cut;
pub mod graph;
pub mod mis;
pub mod sfm;
pub mod stream;

pub use cut::{build_cut_graph, simplify_graph, to_undirected, UndirectedReduction};
pub use graph::{ladder_weight, Edge, LayeredGraph, Layout, Port, Provenance, VertexLabel};
pub use mis::build_mis_graph;
pub use sfm::{build_sfm_oracle, OracleStats, SubmodularOracle};
pub use stream::{emit_stream, EdgeStream, StreamHeader};
