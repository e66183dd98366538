use thiserror::Error;

/// Errors raised by the geometry kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("pole of a generalized trigonometric function at t = {0}")]
    Pole(f64),
    #[error("argument outside the function domain: {0}")]
    Domain(String),
    #[error("point violates the model constraint: {0}")]
    InvalidPoint(String),
    #[error("antipodal points: geodesic direction is undefined")]
    Antipodal,
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("side lengths do not form a triangle (cosine argument {0})")]
    NotATriangle(f64),
    #[error("points are collinear")]
    Collinear,
    #[error("no geodesic circle passes through the three points")]
    NoCircumcircle,
    #[error("polygon is not convex: {0}")]
    NotConvex(String),
    #[error("side {index} has length {length} >= pi/sqrt(lambda)")]
    SideTooLong { index: usize, length: f64 },
    #[error("points do not lie in an open hemisphere")]
    NotInHemisphere,
    #[error("polygon needs at least {min} vertices, got {got}")]
    TooFewVertices { min: usize, got: usize },
    #[error("vertices {0} and {1} coincide")]
    DuplicateVertex(usize, usize),
    #[error("radius {radius} exceeds the admissible bound {limit}")]
    RadiusTooLarge { radius: f64, limit: f64 },
    #[error("no convex polygon generated for seed {seed} after {attempts} attempts")]
    GenerationFailed { seed: u64, attempts: usize },
    #[error("empty point set")]
    EmptyInput,
    #[error("invalid half-side parameter: {0}")]
    InvalidFrakE(String),
    #[error("half-side parameter inconsistent with side {index} (length {length})")]
    FrakEInconsistent { index: usize, length: f64 },
    #[error("side {index}: chord half-length tangent {chord} exceeds support radius tangent {radius}")]
    ChordTooLong { index: usize, chord: f64, radius: f64 },
    #[error("support arcs not convex at vertex {vertex} (theta = {theta})")]
    ConvexityViolated { vertex: usize, theta: f64 },
    #[error("offset radius {radius} leaves the convexity regime (limit {limit})")]
    RadiusOverflow { radius: f64, limit: f64 },
    #[error("turning half-angle {0} too small for a connector")]
    DegenerateTheta(f64),
    #[error("{what} = {value:e} exceeds tolerance {tolerance:e}")]
    ToleranceExceeded {
        what: &'static str,
        value: f64,
        tolerance: f64,
    },
    #[error("index {index} out of range for {len} vertices")]
    InvalidIndex { index: usize, len: usize },
}

pub type Result<T> = std::result::Result<T, GeomError>;
