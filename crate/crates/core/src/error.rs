use thiserror::Error;

use crate::lattice::DualIndex;

/// Lattice vertex label `(m, n)`.
pub type VertexIndex = (i64, i64);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot invert quaternion of norm {norm:e}")]
    ZeroQuaternion { norm: f64 },

    #[error("degenerate quadrilateral: points Q{} and Q{} coincide", .pair.0, .pair.1)]
    DegenerateQuadrilateral { pair: (usize, usize) },

    #[error("distances are not realizable in R^4 (-det = {neg_det:e})")]
    NonRealizable { neg_det: f64 },

    #[error("cross ratio {re} + {im}i is a pole of the identity orbit")]
    DegenerateOrbit { re: f64, im: f64 },

    #[error("no fourth point with real cross ratio {ratio}: W + ratio is singular")]
    NoSolution { ratio: f64 },

    #[error("cross ratio parameter must be non-zero")]
    ZeroParameter,

    #[error("base quadrilateral is not concircular (|Im DV| = {imag:e})")]
    NotConcircular { imag: f64 },

    #[error("initial point coincides with a base vertex")]
    CoincidentInitialPoint,

    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("points do not lie on a common 2-sphere (residual {residual:e})")]
    NotCospherical { residual: f64 },

    #[error("points lie on a 2-plane but not on a round 2-sphere")]
    PlanarCarrier,

    #[error("point set is collinear or coincident")]
    CollinearPoints,

    #[error("invalid lattice window: {0}")]
    InvalidWindow(String),

    #[error("value count {got} does not match window size {expected}")]
    ValueCount { expected: usize, got: usize },

    #[error("vertex {index:?} lies outside the lattice window")]
    OutOfWindow { index: VertexIndex },

    #[error("nets live on different lattice windows")]
    WindowMismatch,

    #[error("degenerate elementary quadrilateral at {index:?}")]
    DegenerateFace { index: DualIndex },

    #[error("zero edge at {index:?}")]
    ZeroEdge { index: VertexIndex },

    #[error("net is not isothermic (max |DV + 1| = {deviation:e})")]
    NotIsothermic { deviation: f64 },

    #[error("Christoffel system is not integrable (worst cycle residual {residual:e} at {index:?})")]
    NotIntegrable { residual: f64, index: DualIndex },

    #[error("transform does not close across the periodic seam (monodromy {monodromy:e})")]
    NotPeriodic { monodromy: f64 },

    #[error("solver degeneracy at vertex {index:?}: {source}")]
    SolverDegeneracy {
        index: VertexIndex,
        #[source]
        source: Box<Error>,
    },

    #[error("lattice consistency violated at {index:?} (deviation {deviation:e})")]
    Inconsistent { index: VertexIndex, deviation: f64 },

    #[error("seed value coincides with the net at {index:?}")]
    SeedOnNet { index: VertexIndex },

    #[error("nets are not a Darboux pair (residual {residual:e} at {index:?})")]
    NotDarbouxPair { residual: f64, index: DualIndex },

    #[error("Darboux parameters must be distinct")]
    EqualParameters,

    #[error("permutability verification failed (residual {residual:e})")]
    PermutabilityFailed { residual: f64 },

    #[error("net is not R^3-valued (max |Re| = {max_real:e})")]
    NotImaginary { max_real: f64 },

    #[error("cmc condition `{condition}` violated (residual {residual:e})")]
    CmcViolation { condition: &'static str, residual: f64 },

    #[error("empty initial sphere: 1 - lambda/lambda_p = {value} gives no admissible seed")]
    EmptyInitialSphere { value: f64 },

    #[error("seed direction must be a unit 3-vector (|d| = {norm})")]
    BadDirection { norm: f64 },

    #[error("vertex {index:?} is not interior")]
    NotInterior { index: VertexIndex },

    #[error("mean curvature undefined at {index:?}: sphere centre is not unique")]
    UndefinedCurvature { index: VertexIndex },

    #[error("malformed net document: {0}")]
    Format(String),

    #[error("unsupported format version {0:?}")]
    Version(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
