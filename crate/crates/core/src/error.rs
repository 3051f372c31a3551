//! Error type shared by the geometry and dynamics modules.

use thiserror::Error;

/// Everything that can go wrong in the kernel.
///
/// Tolerances mentioned in the variants assume unit-scale conics: all
/// thresholds are relative to the outer conic's semi-major axis.
#[derive(Debug, Error)]
pub enum Error {
    #[error("semi-axes must be positive, got a = {a}, b = {b}")]
    NonPositiveAxis { a: f64, b: f64 },

    #[error("conic is not a real ellipse")]
    NotAnEllipse,

    #[error("conic matrix is singular (det = {det:.3e})")]
    SingularConic { det: f64 },

    #[error("affine map is singular (det = {det:.3e})")]
    SingularMap { det: f64 },

    #[error("line coefficients are degenerate (affine part vanishes)")]
    DegenerateLine,

    #[error("point ({x}, {y}) is not on the conic (form value {value:.3e})")]
    NotOnConic { x: f64, y: f64, value: f64 },

    #[error("pole lies at infinity (homogeneous w = {w:.3e})")]
    PointAtInfinity { w: f64 },

    #[error("vertex ({x}, {y}) is not strictly exterior to the inner conic")]
    VertexInsideInner { x: f64, y: f64 },

    #[error("point ({x}, {y}) is interior to the circle")]
    InteriorPoint { x: f64, y: f64 },

    #[error("conic is not a circle (relative axis deviation {deviation:.3e})")]
    NotACircle { deviation: f64 },

    #[error("outer conic must be the unit circle in the normalized frame")]
    NotUnitCircle,

    #[error("quadrature did not reach tolerance {tol:.3e} (best error {err:.3e})")]
    QuadratureFailure { tol: f64, err: f64 },

    #[error("no bracketing interval: {reason}")]
    NoBracket { reason: String },

    #[error("degenerate configuration: {reason}")]
    Degenerate { reason: String },

    #[error("polygon needs at least 3 vertices, got {n}")]
    TooFewVertices { n: usize },

    #[error("polygon has zero perimeter")]
    ZeroPerimeter,

    #[error("signed area too small (|A| = {area:.3e}, threshold {threshold:.3e})")]
    ZeroSignedArea { area: f64, threshold: f64 },

    #[error("edge {index} is not tangent to the conic (defect {defect:.3e})")]
    EdgeNotTangent { index: usize, defect: f64 },

    #[error("points are collinear; no finite circle fits")]
    CollinearPoints,

    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("family invariant violated: {reason}")]
    InvalidFamily { reason: String },

    #[error("at sample t = {t}: {source}")]
    AtParameter {
        t: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wrap an error with the family parameter at which it occurred.
    pub fn at_parameter(self, t: f64) -> Error {
        Error::AtParameter {
            t,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
