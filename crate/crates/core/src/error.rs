use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid knot sequence: {0}")]
    Knots(String),

    #[error("radius {x} outside the box [0, {box_radius}]")]
    OutOfBox { x: f64, box_radius: f64 },

    #[error("derivative order {order} not available for splines of order {spline_order}")]
    DerivativeOrder { order: usize, spline_order: usize },

    #[error("quadrature needs at least one point")]
    EmptyQuadrature,

    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("eigen-decomposition failed: {0}")]
    Eigen(String),

    #[error("invalid quantum numbers: {0}")]
    QuantumNumbers(String),

    #[error("symmetry mismatch: {0} vs {1}")]
    SymmetryMismatch(String, String),

    #[error("configuration basis for {0} is empty")]
    EmptyBasis(String),

    #[error("density is not normalized: integral = {0}")]
    NotNormalized(f64),

    #[error("reduced density matrix has eigenvalue {0:e} below tolerance")]
    NegativeEigenvalue(f64),

    #[error("label table has {labels} labels but only {states} resonances in {block}")]
    TooManyLabels {
        block: String,
        labels: usize,
        states: usize,
    },

    #[error("wavenumber must be positive, got {0}")]
    Wavenumber(f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}
