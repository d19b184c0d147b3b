use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("spatial momentum {0:?} is too close to zero; H/E is undefined")]
    ZeroMomentum([f64; 3]),

    #[error("Lorentz image drifted off the light cone: |p'| = {spatial}, |p0'| = {energy}")]
    OffShellDrift { spatial: f64, energy: f64 },

    #[error("equation family {0} has no subsidiary condition")]
    UnsupportedFamily(String),

    #[error("coupling kappa must be nonzero for the {0} family")]
    ZeroKappa(String),

    #[error("grid point p0 = {p0}, p = {spatial:?} lies on the mass shell")]
    OnShellPointInGrid { p0: f64, spatial: [f64; 3] },

    #[error("syntax error at byte {offset}: expected one of {}", expected.join(", "))]
    Syntax { offset: usize, expected: Vec<String> },

    #[error("gamma index {index} at byte {offset} is outside 0..=3")]
    Index { offset: usize, index: String },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
