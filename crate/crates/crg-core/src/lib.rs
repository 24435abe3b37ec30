//! Edge colorings of complete graphs and the canonical patterns that live in
//! them: monochromatic, rainbow, lexical and orderable cliques.
//!
//! The crate is organized around a normalized [`EdgeColoring`] type. On top of
//! it sit certified pattern detectors ([`detect`]), coloring generators and
//! the blow-up product ([`construct`]), structure counting and witness
//! extraction procedures ([`proof`]), and an exhaustive pattern-avoidance
//! search engine ([`search`]).

pub mod coloring;
pub mod construct;
pub mod detect;
pub mod io;
pub mod proof;
pub mod search;

pub use coloring::{ColorId, DeltaGoodness, EdgeColoring, RelabelMap, Vertex, VertexSet};
pub use detect::{Certificate, CliqueWitness, PatternKind};
pub use io::CrgDocument;
pub use proof::{ExtractionOutcome, ExtractionReport, SampleOutcome, StructureCounts};
pub use search::{
    ExistsOutcome, ExistsReport, PatternQuery, SearchLimits, SearchOutcome, SearchStatus,
    StopReason, Violation,
};
