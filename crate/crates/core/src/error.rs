use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("direction ({n1}, {n2}, {n3}) is not unit-normalized (|n|² = {norm_sqr})")]
    InvalidDirection {
        n1: f64,
        n2: f64,
        n3: f64,
        norm_sqr: f64,
    },

    #[error("invalid barrier parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("degenerate interior wavenumber: |omega0 - V0| = {k_minus:e} (omega0 = {omega0}, V0 = {v0})")]
    DegenerateWavenumber { k_minus: f64, omega0: f64, v0: f64 },

    #[error("raw mode ratios R± are singular at sin(theta) = {sin_theta:e}; use the regular combinations")]
    ComplexLimitDegeneracy { sin_theta: f64 },

    #[error("singular linear system: pivot {pivot:e} below threshold {threshold:e}")]
    SingularSystem { pivot: f64, threshold: f64 },

    #[error("linear solve residual {residual:e} exceeds tolerance")]
    InaccurateSolution { residual: f64 },

    #[error("non-finite entry in linear system")]
    NonFinite,

    #[error("invalid sampling grid: {0}")]
    InvalidGrid(String),

    #[error("quaternionic fraction undefined: total transmission is zero")]
    UndefinedFraction,

    #[error("layer stack must contain at least one segment")]
    EmptyStack,
}
