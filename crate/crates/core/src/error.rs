use thiserror::Error;

/// Errors raised while building inputs or running procedures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GbhError {
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
    #[error("expected {expected} values for this layout, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("p-value at index {index} is outside [0, 1]: {value}")]
    OutOfRange { index: usize, value: f64 },
    #[error("weight at index {index} must be a non-negative number or +inf, got {value}")]
    InvalidWeight { index: usize, value: f64 },
    #[error("inputs are bound to different layouts")]
    LayoutMismatch,
    #[error("variant {variant} cannot be used with a {layout} layout")]
    VariantMismatch {
        variant: &'static str,
        layout: &'static str,
    },
    #[error("variant requires every cell to hold the same number of hypotheses")]
    UnequalCells,
    #[error("lambda must lie in (0, 1), got {0}")]
    BadLambda(f64),
    #[error("alpha must lie in (0, 1), got {0}")]
    BadAlpha(f64),
    #[error("group has no p-values")]
    EmptyGroup,
    #[error("invalid proportions: {0}")]
    InvalidProportions(String),
    #[error("oracle procedure needs null proportions")]
    MissingProportions,
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, GbhError>;

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda < 1.0 {
        Ok(())
    } else {
        Err(GbhError::BadLambda(lambda))
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(GbhError::BadAlpha(alpha))
    }
}
