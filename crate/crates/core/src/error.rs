//! Error type shared by all modules.

use num_complex::Complex;

/// Errors reported by the library. Preconditions that callers can violate
/// map to dedicated variants; internal failures that cannot occur for valid
/// inputs panic instead.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid lattice: M and N must be >= 1 (got M={m}, N={n})")]
    InvalidLattice { m: u32, n: u32 },

    #[error("field has {got} entries but the lattice has {want} sites")]
    ShapeMismatch { got: usize, want: usize },

    #[error("gamma index out of range: {0} (must be 0..=3)")]
    GammaIndex(usize),

    #[error("B = 0 is a pole of the one-dimensional lattice sum")]
    ZeroB,

    #[error("|arg B| = {arg_b} exceeds pi/4; the geometric-series evaluation is not proven there")]
    ArgBOutOfRange { arg_b: f64 },

    #[error("dense oracle size guard: problem size {size} exceeds limit {limit}")]
    SizeGuard { size: usize, limit: usize },

    #[error("x0 = 0: the reduced radial integral needs exponential damping")]
    ZeroTimeSeparation,

    #[error("eps must be > 0 (got {0}); the Wightman integral is not absolutely convergent")]
    NonpositiveEps(f64),

    #[error("mass must be > 0 (got {0})")]
    NonpositiveMass(f64),

    #[error("|2 l^2 S| = {0} >= 1: outside the analyticity disc of the Wick two-point function")]
    WickThreshold(f64),

    #[error("insertion points must be pairwise distinct")]
    CoincidentPoints,

    #[error("imaginary-time ordering violated: gap between insertions {j} and {k} is {gap}")]
    TubeOrdering { j: usize, k: usize, gap: f64 },

    #[error("analyticity violated: |P_n| = {p_n_abs} >= 1 (largest entry |a_{j}{k}| = {entry_abs} at gap {gap})")]
    AnalyticityViolation {
        p_n_abs: f64,
        j: usize,
        k: usize,
        entry_abs: f64,
        gap: f64,
    },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("quadrature dimension {0} exceeds cap {1}")]
    DimensionCap(usize, usize),

    #[error("spinor index list has {got} entries for {want} insertion points")]
    SpinorIndexCount { got: usize, want: usize },

    #[error("contour height {eps} must exceed the fundamental length {ell} for the interacting kernel")]
    BelowFundamentalLength { eps: f64, ell: f64 },

    #[error("contour height {eps} exceeds the test function's strip K_max = {k_max}")]
    OutsideTestFunctionStrip { eps: f64, k_max: f64 },

    #[error("separation x = {x:?} is not a lattice point")]
    OffLattice { x: [f64; 4] },

    #[error("accelerated Dirac path unavailable: {0}")]
    AccelUnavailable(String),

    #[error("unknown difference scheme {0:?}")]
    UnknownScheme(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),
}

/// Convenience alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Relative error with a floor on the denominator, so exponentially small
/// reference values do not turn rounding noise into infinities.
pub fn rel_error(value: Complex<f64>, reference: Complex<f64>) -> f64 {
    (value - reference).norm() / reference.norm().max(1e-300)
}
