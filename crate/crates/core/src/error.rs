use crate::expr::{EvalError, ParseError};
use crate::frame::FrameSample;

/// Errors raised by the geometry, frame and similarity layers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("evaluation failed at u = {u}: {source}")]
    Eval { u: f64, source: EvalError },
    #[error("parameter {u} outside domain [{min}, {max}]")]
    OutOfDomain { u: f64, min: f64, max: f64 },
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("curve is not regular at u = {u} (speed {speed:e})")]
    Irregular { u: f64, speed: f64 },
    #[error("director is not unit length at u = {u} (norm {norm})")]
    NonUnitDirector { u: f64, norm: f64 },
    #[error("cylindrical ruling at u = {u}: director derivative vanishes")]
    Cylindrical { u: f64 },
    #[error("singular surface point at (u, v) = ({u}, {v})")]
    SingularPoint { u: f64, v: f64 },
    #[error("k1 below threshold on {} interval(s) of striction arc length", .gaps.len())]
    CurvatureGap {
        gaps: Vec<(f64, f64)>,
        partial: Box<Vec<Option<FrameSample>>>,
    },
    #[error("not applicable: {0}")]
    Inapplicable(String),
    #[error("inconsistent striction data at s = {s}: <T, h> = {residual:e}")]
    InconsistentStriction { s: f64, residual: f64 },
    #[error("initial frame is not orthonormal (residual {0:e})")]
    InvalidFrame(f64),
    #[error("variable transformation must be positive, got {value} at {at}")]
    NonPositiveLambda { at: f64, value: f64 },
    #[error("total-curvature ranges do not overlap")]
    EmptyOverlap,
    #[error("cannot compare a cylindrical surface with a non-cylindrical one")]
    MixedKinds,
    #[error("surface `{0}` is not developable")]
    NotDevelopable(String),
    #[error("surface `{0}` is not a conoid")]
    NotConoid(String),
    #[error("surface `{0}` is not cylindrical")]
    NotCylindrical(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn eval(u: f64) -> impl FnOnce(EvalError) -> Error {
        move |source| Error::Eval { u, source }
    }
}
