use thiserror::Error;

/// Rejections raised while reading or building a dual graph.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no components")]
    NoComponents,
    #[error("duplicate component `{0}`")]
    DuplicateComponent(String),
    #[error("duplicate node id `{0}`")]
    DuplicateNode(String),
    #[error("node `{node}` names unknown component `{component}`")]
    UnknownComponent { node: String, component: String },
    #[error("marked component `{0}` is not a component")]
    UnknownMarked(String),
    #[error("graph is disconnected; unreachable from the marked component: {0:?}")]
    Disconnected(Vec<String>),
    #[error("graph has {0} components; at most {max} are supported", max = crate::graph::MAX_VERTICES)]
    TooLarge(usize),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    Graph(#[from] GraphError),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no quasistable twist with coefficients in [-{bound}, {bound}]")]
    NotFound { bound: i64 },
    #[error("{count} quasistable twists with coefficients in [-{bound}, {bound}]; expected one")]
    MultipleFound { bound: i64, count: usize },
    #[error("no minimal candidate: {first:?} and {second:?} are incomparable")]
    NoMinimum {
        first: Vec<String>,
        second: Vec<String>,
    },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn invariant(msg: impl Into<String>) -> Error {
    Error::Invariant(msg.into())
}
