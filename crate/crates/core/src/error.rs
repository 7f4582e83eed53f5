use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("speed {speed} is not subluminal (must satisfy 0 <= v < 1)")]
    Superluminal { speed: f64 },

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("photon frequency must be positive, got {omega}")]
    NonPositiveFrequency { omega: f64 },

    #[error("direction {0:?} is not a unit vector")]
    NotUnitDirection([f64; 3]),

    #[error("four-velocity is not unit timelike and future pointing (norm {norm}, t = {t})")]
    NotUnitVelocity { norm: f64, t: f64 },

    #[error("worldline is discontinuous between segments {index} and {next}", next = .index + 1)]
    Discontinuous { index: usize },

    #[error("worldline needs at least one segment")]
    EmptyWorldline,

    #[error("q.p vanishes; soft factor is singular")]
    NullContraction,

    #[error("argument {x} outside the domain of {function}")]
    Domain { function: &'static str, x: f64 },

    #[error(
        "infrared divergence: the undressed functional diverges for lambda_ir = 0 because the \
         leading soft current j_div gives a log-divergent int d(omega)/omega; set lambda_ir > 0 \
         or use the dressed functional"
    )]
    InfraredDivergence,

    #[error("quadrature would need {panels} panels (limit {limit})")]
    TooManyPanels { panels: usize, limit: usize },
}
