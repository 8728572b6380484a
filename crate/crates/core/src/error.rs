use thiserror::Error;

/// Errors raised by the analysis pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("unknown line `{0}`")]
    UnknownLine(String),
    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),
    #[error("duplicate incidence ({0}, {1})")]
    DuplicateIncidence(String, String),
    #[error("missing coordinates for `{0}`")]
    MissingCoordinate(String),
    #[error("zero vector given as homogeneous coordinates for `{0}`")]
    ZeroVector(String),
    #[error("point `{0}` is at infinity")]
    PointAtInfinity(String),
    #[error("line `{0}` passes through the origin")]
    LineThroughOrigin(String),
    #[error("projective transformation is singular")]
    SingularTransform,
    #[error("pins must be four distinct points, got {0}")]
    PinCount(usize),
    #[error("pinned points {0}, {1}, {2} are collinear")]
    CollinearPins(String, String, String),
    #[error("lines `{0}` and `{1}` do not meet in a finite point")]
    ParallelLines(String, String),
    #[error("geometry is not linear-space-like: `{0}` and `{1}` share more than one element")]
    NotLinearSpace(String, String),
    #[error("matrix is not orthogonal")]
    NotOrthogonal,
    #[error("a polarity has no fixed points")]
    PolarityFixedSubspace,
    #[error("group closure exceeds {0} elements")]
    GroupTooLarge(usize),
    #[error("group does not preserve the configuration: {0}")]
    NotPreserved(String),
    #[error("inconsistent stabilizer data for `{0}`")]
    Stabilizer(String),
    #[error("exact arithmetic requires rational input, found float {0}")]
    InexactInput(f64),
    #[error("no nontrivial motion to trace")]
    ZeroMotion,
    #[error("corrector stalled at t = {0}")]
    StalledCorrector(f64),
    #[error("affine chart degenerated at t = {0}")]
    ChartDegenerate(f64),
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
