//! Dynamic maximum k-edge coloring.
//!
//! A k-edge coloring colors a subset of the edges with colors `1..=k` so
//! that adjacent colored edges differ; the goal is to color as many edges as
//! possible while edges are inserted and deleted.
//!
//! * [`greedy::GreedyState`] keeps a maximal coloring, probing at most
//!   `min(k, Δ) + 1` colors per insertion.
//! * [`pipeline::Pipeline`] recolors a dynamic k-matching every `⌊ε·p⌋`
//!   updates, either from a maximal k-matching or from a sparsified and
//!   rounded fractional one.
//! * [`polytope`] and [`sparsifier`] hold the fractional machinery,
//!   [`oracle`] exhaustive ground truth, and [`bench`] the stream tooling
//!   behind the `kec` binary.
//!
//! ```
//! use kec::graph::{edge, UpdateEvent};
//! use kec::greedy::GreedyState;
//!
//! let mut st = GreedyState::new(3, 2);
//! for e in [edge(0, 1), edge(1, 2), edge(0, 2)] {
//!     st.apply(&UpdateEvent::insert(e)).unwrap();
//! }
//! assert_eq!(st.current_coloring().colored_count(), 2);
//! ```

pub mod bench;
pub mod coloring;
pub mod error;
pub mod graph;
pub mod greedy;
pub mod kmatch;
pub mod oracle;
pub mod pipeline;
pub mod polytope;
pub mod sparsifier;

pub use coloring::{Color, PartialColoring};
pub use error::{Error, Result};
pub use graph::{edge, parse_stream, DynamicGraph, Edge, Stream, UpdateEvent, UpdateKind};
pub use greedy::GreedyState;
pub use pipeline::{Pipeline, Variant};
