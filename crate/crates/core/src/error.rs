use crate::geom::Angle;

/// Errors produced by the watchman pipeline.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid polygon: {reason}{}", vertex_suffix(*.vertex))]
    InvalidPolygon {
        reason: String,
        vertex: Option<usize>,
    },
    #[error("vertex index {0} is out of range")]
    VertexOutOfRange(usize),
    #[error("mirror segment is degenerate")]
    DegenerateMirror,
    #[error("point ({x}, {y}) lies outside the polygon")]
    PointOutside { x: f64, y: f64 },
    #[error("{kind} event at {theta}: {detail}")]
    EventAngle {
        kind: &'static str,
        theta: Angle,
        vertex: Option<usize>,
        detail: String,
    },
    #[error("cuts were computed for different directions ({0} vs {1})")]
    MixedDirections(Angle, Angle),
    #[error("polygon reduction failed: {0}")]
    Reduction(String),
    #[error("triangulation failed: {0}")]
    Triangulation(String),
    #[error("need at least two essential edges, found {0}")]
    TooFewEssentialEdges(usize),
    #[error("frozen tour structure is infeasible: {0}")]
    InfeasibleStructure(String),
    #[error("oracle supports at most {max} gates, found {found}")]
    OracleScope { max: usize, found: usize },
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

fn vertex_suffix(v: Option<usize>) -> String {
    match v {
        Some(i) => format!(" (vertex {i})"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
