use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("cell ({row}, {col}) is not a Nash equilibrium of the game")]
    NotAnEquilibrium {
        row: &'static str,
        col: &'static str,
    },

    #[error("mixing denominator {value} is zero within tolerance")]
    DegenerateDenominator { value: f64 },

    #[error("expected a {expected} game, got {found}")]
    WrongClass {
        expected: &'static str,
        found: &'static str,
    },

    #[error("parameters (d_g = {d_g}, d_r = {d_r}) are outside the quantum prisoner's dilemma regime (d_g > 0, d_r > 0)")]
    OutOfRegime { d_g: f64, d_r: f64 },

    #[error("gamma = {gamma} is outside the {phase} phase{}", describe_interval(.interval))]
    OutOfPhase {
        phase: &'static str,
        gamma: f64,
        interval: Option<(f64, f64)>,
    },

    #[error("threshold {name} is undefined for (d_g = {d_g}, d_r = {d_r})")]
    UndefinedThreshold {
        name: &'static str,
        d_g: f64,
        d_r: f64,
    },

    #[error("sensitivity index undefined: p* = {p_star} is zero within tolerance")]
    DegenerateBase { p_star: f64 },
}

fn describe_interval(interval: &Option<(f64, f64)>) -> String {
    match interval {
        Some((lo, hi)) => format!(" [{lo}, {hi}]"),
        None => " (parameters admit no such phase)".to_string(),
    }
}
