use thiserror::Error;

/// Every failure the toolkit can report. Each variant names the violated
/// precondition so the CLI can surface it verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("edge endpoint {vertex} out of range for a graph on {vertex_count} vertices")]
    EndpointOutOfRange { vertex: usize, vertex_count: usize },

    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),

    #[error("loop on vertex {0} but loops are not allowed")]
    LoopNotAllowed(usize),

    #[error("graph has loops; operation requires a simple graph")]
    HasLoops,

    #[error("divisibility violation: 2d = {} does not divide n = {n}", 2 * .d)]
    Divisibility { n: usize, d: usize },

    #[error("parity violation: n*d = {n}*{d} is odd")]
    Parity { n: usize, d: usize },

    #[error("{what} = {value} is out of range {min}..={max}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },

    #[error("scale violation: {0}")]
    Scale(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("domain violation: {0}")]
    Domain(String),

    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    #[error("graph is not regular")]
    NotRegular,

    #[error("graph has no edges")]
    Edgeless,

    #[error("graph has no perfect matching")]
    NoPerfectMatching,

    #[error("graph is not bipartite")]
    NotBipartite,

    #[error("malformed graph text at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
