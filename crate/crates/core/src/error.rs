use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vertex {0} is out of range for a graph with {1} vertices")]
    VertexOutOfRange(usize, usize),

    #[error("edge ({0}, {1}) joins two V1 vertices (or is a V1 self-loop)")]
    SemiBipartiteViolation(usize, usize),

    #[error("edge ({0}, {1}) appears more than once")]
    DuplicateEdge(usize, usize),

    #[error("edge ({0}, {1}) has zero weight")]
    ZeroWeight(usize, usize),

    #[error("self-loop on vertex {0} must have a real weight")]
    ComplexSelfLoop(usize),

    #[error("vertex {0} cannot be a party: {1}")]
    PartyPlacement(usize, String),

    #[error("no such vertex: {0}")]
    NoSuchVertex(usize),

    #[error("matrix is not hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("expected a one-dimensional kernel, found dimension {0}")]
    DegenerateKernel(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("party {0} has zero amplitude in the zero eigenvector")]
    PartyUnsupported(usize),

    #[error("sender and receiver are the same vertex ({0})")]
    SameEndpoints(usize),

    #[error("time {t} is outside the protocol interval [0, {total}]")]
    TimeOutOfRange { t: f64, total: f64 },

    #[error("dark state undefined at t = {0}: a party control vanishes in the interior")]
    DarkStateUndefined(f64),

    #[error("invalid control schedule: {0}")]
    InvalidSchedule(String),

    #[error("integration unstable: unitarity defect {0:e}")]
    IntegrationUnstable(f64),

    #[error("no protocol time below {cap} reached error < {threshold}")]
    TStarNotFound { threshold: f64, cap: f64 },

    #[error("graph has no perfect matching")]
    NoMatching,

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
