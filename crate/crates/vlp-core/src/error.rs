use thiserror::Error;

/// Why a specular reflection off a mirror element is not usable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum InvalidReflection {
    /// The specular point falls outside the W x H aperture of the element.
    #[error("reflection point outside the mirror aperture")]
    OutOfAperture,
    /// LED or PD sits on the back side of the mirror plane.
    #[error("endpoint behind the mirror plane")]
    BehindPlane,
    /// Incidence so shallow that the link is numerically meaningless.
    #[error("grazing incidence")]
    GrazingIncidence,
}

#[derive(Debug, Error)]
pub enum VlpError {
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(&'static str),

    #[error("gimbal lock: normal too close to vertical for tilt extraction")]
    GimbalLock,

    #[error("argument outside domain: {0}")]
    OutOfDomain(&'static str),

    #[error("invalid reflection for element {element}: {reason}")]
    InvalidLink { element: usize, reason: InvalidReflection },

    /// Noise swamped the signal; the sample statistics admit no estimate.
    #[error("degenerate sample: {0}")]
    DegenerateSample(&'static str),

    /// Minimum sits on the search boundary; the grid range is too small.
    #[error("grid exhausted: minimum at boundary (d_max too small)")]
    GridExhausted,

    #[error("singular geometry: {0}")]
    SingularGeometry(&'static str),

    #[error("singular normal equations in the least-squares update")]
    SingularNormalEquations,

    #[error("no bracket for the power solve: {0}")]
    NoBracket(&'static str),

    #[error("config parse error at {path}: {msg}")]
    ParseError { path: String, msg: String },

    #[error("config validation error: {0}")]
    ValidationError(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = VlpError> = std::result::Result<T, E>;
