use std::path::PathBuf;

use thiserror::Error;

use crate::point::Point2;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("speed {speed:e} at t={t} is below the degeneracy cutoff {cutoff:e}")]
    DegenerateSpeed { t: f64, speed: f64, cutoff: f64 },

    #[error("tangential contact near {point:?} (angle {angle:e} rad)")]
    TangentialContact { point: Point2, angle: f64 },

    #[error("malformed path: {0}")]
    MalformedPath(String),

    #[error("bad knot vector length {len}: expected a positive multiple of 4")]
    BadLength { len: usize },

    #[error("index {index} out of range 1..={n}")]
    OutOfRange { index: usize, n: usize },

    #[error("no <path> element found{}", .id.as_ref().map(|i| format!(" with id '{i}'")).unwrap_or_default())]
    NoPathFound { id: Option<String> },

    #[error("unsupported path command '{0}'")]
    UnsupportedCommand(char),

    #[error("path is open: no closepath and endpoints {gap} apart")]
    OpenPath { gap: f64 },

    #[error("svg parse error: {0}")]
    Svg(String),

    #[error("degenerate knot: {0}")]
    DegenerateKnot(String),

    #[error("inconsistent symmetry spec: {0}")]
    InconsistentSpec(String),

    #[error("optimization changed the knot topology: {0}")]
    TopologyChanged(String),

    #[error("objective is not finite at the start point")]
    NonFiniteStart,

    #[error("non-finite objective value when probing coordinate {coord}")]
    NonFiniteProbe { coord: usize },

    #[error("over/under spec does not match the knot's crossings:\n{}", .0.join("\n"))]
    OverUnderMismatch(Vec<String>),

    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
