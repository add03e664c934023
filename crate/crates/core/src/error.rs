use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug)]
pub enum Error {
    #[error("non-invertible: series is identically zero")]
    NonInvertible,

    #[error("insufficient precision: coefficient of q^{wanted} requested, known only below q^{known_end}")]
    InsufficientPrecision { wanted: i64, known_end: i64 },

    #[error("square-free required: N = {0} has a square factor")]
    SquareFreeRequired(u64),

    #[error("{d} does not divide the level {level}")]
    NotDivisor { d: u64, level: u64 },

    #[error("invalid eta quotient: {0}")]
    InvalidEtaQuotient(String),

    #[error("matrix is singular: {0}")]
    SingularMatrix(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquareMatrix { rows: usize, cols: usize },

    #[error("point is not in the upper half-plane")]
    NotInUpperHalfPlane,

    #[error("point too close to the real axis (Im = {im:.3e}); reduction would be unreliable")]
    PointTooLow { im: f64 },

    #[error("tail threshold r = {0} rejected; r >= 1 required")]
    TailThreshold(String),

    #[error("m = {m} is not coprime to the level N = {level}")]
    NotCoprime { m: u64, level: u64 },

    #[error("m must be positive")]
    NonPositiveIndex,

    #[error("no built-in upper-half-plane divisor for {form} at level {level}")]
    NoDivisorPreset { form: String, level: u64 },

    #[error("cannot parse form spec {0:?}")]
    BadFormSpec(String),

    #[error("series must have unit leading coefficient (found {0})")]
    NonUnitLeading(String),

    #[error("{0}")]
    InvalidInput(String),

    #[error("not enough admissible data points: {0}")]
    NotEnoughData(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
