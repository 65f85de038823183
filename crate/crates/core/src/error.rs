use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("points are collinear")]
    CollinearInput,
    #[error("linear fractional map has a pole at x = {0}")]
    PoleAt(f64),
    #[error("x = {0} is not a fixed point")]
    NotAFixedPoint(f64),
    #[error("geodesic distance changed by {delta:e} when the face-sequence bound was raised to {max_faces}")]
    NotConverged { delta: f64, max_faces: usize },
    #[error("the hexagon is undefined at the sharp vertex of T")]
    SharpVertexDegenerate,
    #[error("I_{j} I_{k}^-1 is a translation and has no rotation center")]
    TranslationPair { j: usize, k: usize },
    #[error("x = {0} lies outside the domain of the curve J")]
    OutOfDomain(f64),
    #[error("({x}, {y}) lies outside the fundamental domain T")]
    NotInT { x: f64, y: f64 },
    #[error("({x}, {y}) lies outside face {face}")]
    OffSurface { face: u8, x: f64, y: f64 },
    #[error("face id {0} is not in 0..8")]
    InvalidFace(u8),
    #[error("index {0} is out of range")]
    InvalidIndex(usize),
}
