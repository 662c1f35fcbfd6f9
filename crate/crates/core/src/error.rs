use thiserror::Error;

/// Errors raised by the graphon library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphonError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph has no edges")]
    NoEdges,
    #[error("vertex {0} is isolated")]
    IsolatedVertex(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex id {id} out of range for {n} vertices")]
    VertexOutOfRange { id: usize, n: usize },
    #[error("graphon has zero 1-norm")]
    ZeroGraphon,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cell values are not symmetric at ({0}, {1})")]
    Asymmetric(usize, usize),
    #[error("cell value {value} at ({row}, {col}) outside [{lower}, {upper}]")]
    ValueOutOfRange {
        row: usize,
        col: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },
    #[error("edge probability {value} at (x = {x}, y = {y}) is not in [0, 1]")]
    ProbabilityOutOfRange { x: f64, y: f64, value: f64 },
    #[error("resolution {k} exceeds the exact-mode limit of {limit}")]
    ResolutionTooLarge { k: usize, limit: usize },
    #[error("incompatible grids: {0}")]
    IncompatibleGrids(String),
    #[error("sample points are not sorted at index {0}")]
    UnsortedPoints(usize),
    #[error("schedule is not strictly increasing at index {0}")]
    NonIncreasingSchedule(usize),
    #[error("eigensolver did not converge after {iterations} iterations (worst residual {worst_residual:e})")]
    NoConvergence {
        iterations: usize,
        worst_residual: f64,
        residuals: Vec<f64>,
    },
    #[error("design matrix is zero")]
    ZeroDesign,
    #[error("design matrix is rank deficient (condition number {condition:e}); try a degree below {degree}")]
    RankDeficient { condition: f64, degree: usize },
    #[error("not enough data: {0}")]
    InsufficientData(String),
    #[error("step {step}: {source}")]
    AtStep {
        step: usize,
        source: Box<GraphonError>,
    },
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl GraphonError {
    pub fn at_step(self, step: usize) -> Self {
        GraphonError::AtStep {
            step,
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = GraphonError> = std::result::Result<T, E>;
