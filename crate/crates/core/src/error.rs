use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unsupported generator kind for {0}")]
    UnsupportedKind(&'static str),
    #[error("generator is complex valued; use the complex evaluator")]
    ComplexValued,
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("{what} did not converge to tolerance {tol:e}")]
    NonConvergent { what: &'static str, tol: f64 },
    #[error("point set needs at least two points")]
    TooFewPoints,
    #[error("duplicate point {0} in point set")]
    DuplicatePoint(f64),
    #[error("window radius {radius} leaves no interior anchor")]
    WindowTooLarge { radius: f64 },
    #[error("jitter {jitter} must satisfy 0 <= jitter < alpha/2 = {half}")]
    JitterTooLarge { jitter: f64, half: f64 },
    #[error("no sampling points inside [-{t}, {t}]")]
    EmptyWindow { t: f64 },
    #[error("point set does not cover [-{t}, {t}]")]
    InsufficientCoverage { t: f64 },
    #[error("matrix entries are all below tolerance")]
    DegenerateMatrix,
    #[error("ill-conditioned: sigma_min^2 = {a:e} below floor {floor:e}")]
    IllConditioned { a: f64, floor: f64 },
    #[error("interpolation infeasible: relative residual {residual:e}")]
    Infeasible { residual: f64 },
    #[error("sample count {got} does not match {expected} window points")]
    SampleCountMismatch { got: usize, expected: usize },
    #[error("zero of F on or near the circle |z| = {radius}")]
    ZeroOnContour { radius: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergent { .. }
                | Error::IllConditioned { .. }
                | Error::Infeasible { .. }
                | Error::DegenerateMatrix
                | Error::ZeroOnContour { .. }
        )
    }
}
