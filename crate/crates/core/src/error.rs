use thiserror::Error;

use crate::coloring::Color;
use crate::graph::{Edge, VertexId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),

    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },

    #[error("invalid update: {0}")]
    InvalidEvent(String),

    #[error("stream line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("color {color} is not free at both endpoints of {edge}")]
    ColorNotFree { edge: Edge, color: Color },

    #[error("color {color} outside palette [1, {palette}]")]
    ColorOutOfPalette { color: Color, palette: u32 },

    #[error("edge {0} is already colored")]
    AlreadyColored(Edge),

    #[error("palette of {palette} colors is too small to color {edge}")]
    PaletteTooSmall { palette: u32, edge: Edge },

    #[error("palette size overflows the color type")]
    PaletteOverflow,

    #[error("graph is not bipartite: edge {0} joins vertices on the same side")]
    NotBipartite(Edge),

    #[error("infeasible fractional assignment: {0}")]
    Infeasible(String),

    #[error("instance too large for exhaustive search: {m} edges exceeds limit {limit}")]
    OracleTooLarge { m: usize, limit: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}
