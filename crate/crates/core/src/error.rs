use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scenario or parameter set violates one of the model invariants.
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    /// A numeric argument lies outside the domain of an operation.
    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: f64 },

    /// A closed form was asked to evaluate outside the regime it describes.
    #[error("regime violation: {0}")]
    Regime(String),

    /// `f(lo)` and `f(hi)` have the same strict sign.
    #[error("invalid bracket [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    InvalidBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    /// A root scan found no sign change in the admissible range.
    #[error("no root: {0}")]
    NoRoot(String),

    /// The strategy and its parameters (or the scenario) disagree.
    #[error("strategy/parameter mismatch: {0}")]
    Mismatch(String),

    /// No rule fired while a robot still had to evacuate.
    #[error("simulation deadlock at t = {time}: {reason}")]
    Deadlock { time: f64, reason: String },

    /// The run did not terminate before the time cap.
    #[error("simulation exceeded time cap {cap} (t = {time})")]
    TimeCap { cap: f64, time: f64 },

    /// Violated internal consistency check.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
