use alloc::string::String;
use core::fmt;

/// Everything that can go wrong inside the core algorithms.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A graph, tree, mapping or distribution violates one of its invariants.
    Invalid(String),
    /// The graph is not connected, so it has no spanning tree.
    Disconnected,
    /// Spanning-tree enumeration exceeded the configured cap.
    EnumerationOverflow { cap: usize },
    /// A weight vector (α or β) is identically zero.
    ZeroWeights,
    /// Bisections need an even number of vertices.
    OddVertexCount(usize),
    /// The instance is too large for an exhaustive routine.
    TooLarge { limit: usize, got: usize },
    /// A solver produced a solution whose certificate did not check out.
    Numerical(String),
    /// An edge whose removal disconnects the graph was found where none is allowed.
    CutEdge(usize),
    /// The rotation system is malformed or not a planar embedding.
    Rotation(String),
    /// The oracle could not produce a response.
    Oracle(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Invalid(msg) => write!(f, "invalid input: {msg}"),
            Error::Disconnected => write!(f, "graph is not connected"),
            Error::EnumerationOverflow { cap } => {
                write!(f, "more than {cap} spanning trees; raise the cap or use a heuristic method")
            }
            Error::ZeroWeights => write!(f, "weight vector is identically zero"),
            Error::OddVertexCount(n) => write!(f, "bisection needs an even vertex count, got {n}"),
            Error::TooLarge { limit, got } => write!(f, "instance too large: {got} exceeds limit {limit}"),
            Error::Numerical(msg) => write!(f, "numerical failure: {msg}"),
            Error::CutEdge(e) => write!(f, "edge {e} is a cut edge"),
            Error::Rotation(msg) => write!(f, "bad rotation system: {msg}"),
            Error::Oracle(msg) => write!(f, "oracle failure: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::error::Error::Invalid(alloc::format!($($arg)*))
    };
}
pub(crate) use invalid;
