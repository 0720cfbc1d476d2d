//! Error types shared across the kernel.

use thiserror::Error;

/// Any failure produced by the kernel.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum KernelError {
    #[error("lexical error at position {position}: {message}")]
    Lexical { position: usize, message: String },

    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate parametrization: |phi_u x phi_v| < 1e-12 at (u, v) = ({u}, {v})")]
    DegenerateParametrization { u: f64, v: f64 },

    #[error("curve failed validation: {0}")]
    ValidationFailed(String),

    #[error("zero speed: |gamma'| <= 1e-12 at s = {0}")]
    ZeroSpeed(f64),

    #[error("Frenet frame undefined: curvature {kappa} below 1e-12 at s = {s}")]
    UndefinedFrame { s: f64, kappa: f64 },

    #[error("curvature vanishes on the grid: kappa = {kappa} at s = {s}")]
    CurvatureVanishes { s: f64, kappa: f64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("Darboux field {kind} vanishes at s = {s}")]
    VanishingField { kind: &'static str, s: f64 },

    #[error("non-finite sample: {0}")]
    NonFiniteSample(String),

    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("{curvature} is neither identically zero nor bounded away from zero on the grid (max |.| = {max_abs}, min |.| = {min_abs}); cannot pick a case")]
    CaseAmbiguity {
        curvature: &'static str,
        min_abs: f64,
        max_abs: f64,
    },

    #[error("divisor {curvature} too small: min |{curvature}| = {min_abs} < 1e-9 on the grid")]
    DivisorTooSmall {
        curvature: &'static str,
        min_abs: f64,
    },

    #[error("regularity violated for {family}: |{component}| = {min_abs} < 1e-9 at s = {s}")]
    RegularityViolation {
        family: &'static str,
        component: &'static str,
        min_abs: f64,
        s: f64,
    },

    #[error("missing constant {0}")]
    MissingConstant(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

pub type Result<T> = std::result::Result<T, KernelError>;
