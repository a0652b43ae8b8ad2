use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter lies outside the domain of the operation.
    Domain(&'static str),
    /// Two edges of a loop cross, or two loops touch.
    SelfIntersection {
        loop_a: usize,
        loop_b: usize,
    },
    /// Adjacent edges are (anti)parallel, i.e. the interior angle is 0, pi or 2 pi.
    CollinearAdjacentEdges {
        loop_index: usize,
        vertex: usize,
    },
    /// Fewer than three vertices, a zero-length edge, or zero area.
    DegenerateLoop {
        loop_index: usize,
    },
    TriangulationFailure,
    QuadratureNonConvergence {
        integral: &'static str,
        value: f64,
        error: f64,
    },
    PvNonConvergence {
        residual: f64,
        tolerance: f64,
    },
    BudgetExceeded {
        nodes: usize,
        budget: usize,
    },
    EigenFailure,
    IndexOutOfRange {
        index: usize,
        len: usize,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::SelfIntersection { loop_a, loop_b } if loop_a == loop_b => {
                write!(f, "loop {loop_a} intersects itself")
            }
            Error::SelfIntersection { loop_a, loop_b } => {
                write!(f, "loops {loop_a} and {loop_b} intersect")
            }
            Error::CollinearAdjacentEdges { loop_index, vertex } => write!(
                f,
                "edges adjacent to vertex {vertex} of loop {loop_index} are collinear"
            ),
            Error::DegenerateLoop { loop_index } => write!(f, "loop {loop_index} is degenerate"),
            Error::TriangulationFailure => write!(f, "ear clipping failed to triangulate polygon"),
            Error::QuadratureNonConvergence {
                integral,
                value,
                error,
            } => write!(
                f,
                "quadrature for {integral} did not converge (value {value:e}, error estimate {error:e})"
            ),
            Error::PvNonConvergence {
                residual,
                tolerance,
            } => write!(
                f,
                "principal value extrapolation residual {residual:e} exceeds {tolerance:e}"
            ),
            Error::BudgetExceeded { nodes, budget } => {
                write!(f, "grid needs {nodes} nodes, budget is {budget}")
            }
            Error::EigenFailure => write!(f, "symmetric eigendecomposition failed"),
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range for length {len}")
            }
        }
    }
}

impl core::error::Error for Error {}
