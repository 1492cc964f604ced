use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate metric: smallest eigenvalue {min_eigenvalue:e}")]
    DegenerateMetric { min_eigenvalue: f64 },

    #[error("zero direction: holomorphic sectional curvature needs a nonzero tangent vector")]
    ZeroDirection,

    #[error("positivity violated (s ≥ 1/n²): n = {n}, s = {s}")]
    PositivityViolated { n: u32, s: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("finite-difference step {0:e} below 1e-12")]
    StepUnderflow(f64),

    #[error("imaginary residue {0:e} exceeds 1e-10 in a real-valued curvature quantity")]
    ImaginaryResidue(f64),

    #[error("common bound k violated: factor maxima {left_max} and {right_max} differ")]
    CommonBoundViolated { left_max: f64, right_max: f64 },

    #[error("empty grid")]
    EmptyGrid,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
