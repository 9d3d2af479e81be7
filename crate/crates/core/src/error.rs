use thiserror::Error;

/// Errors raised by the duality model.
///
/// Variants fall into two families: validation failures (an input breaks a
/// physical invariant) and numerical failures (an estimator or sweep cannot
/// produce a meaningful value). [`DualityError::is_numerical`] tells them apart.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DualityError {
    #[error("{what} is not normalized: norm² = {norm_sq} (expected 1)")]
    NotNormalized { what: &'static str, norm_sq: f64 },

    #[error("environment states have different dimensions: |m⟩ has {m}, |n⟩ has {n}")]
    DimensionMismatch { m: usize, n: usize },

    #[error("environment dimension must be at least 1")]
    EmptyEnvironment,

    #[error("populations p_a = {p_a}, p_b = {p_b} must be nonnegative and sum to 1")]
    InvalidPopulations { p_a: f64, p_b: f64 },

    #[error(
        "Cauchy-Schwarz bound violated: |gamma| = {gamma_abs} exceeds sqrt(p_a*p_b) = {bound}"
    )]
    CauchySchwarz { gamma_abs: f64, bound: f64 },

    #[error("{name} = {value} is outside its allowed range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("coherency matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("coherency matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("angle grid is invalid: {0}")]
    InvalidGrid(String),

    #[error("need at least {required} angles, got {got}")]
    TooFewAngles { required: usize, got: usize },

    #[error("which-path counts are missing or empty")]
    MissingWhichPath,

    #[error("fringe scan is degenerate: max + min rate is zero")]
    DegenerateScan,

    #[error("fringe fit is singular: angles do not determine a + b cos(theta) + c sin(theta)")]
    SingularFit,

    #[error("fitted mean level a = {a} is not positive; fit is unphysical")]
    UnphysicalFit { a: f64 },

    #[error("duality residual {residual:e} too large for a right triangle")]
    ResidualTooLarge { residual: f64 },
}

impl DualityError {
    /// True for failures of a numerical procedure rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            DualityError::DegenerateScan
                | DualityError::SingularFit
                | DualityError::UnphysicalFit { .. }
                | DualityError::ResidualTooLarge { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, DualityError>;
