//! Error types shared across the library.

use thiserror::Error;

/// Library-wide error type.
///
/// Variants are grouped in two classes: invalid input (bad parameters,
/// malformed grids) and numerical failure (singular backgrounds,
/// non-convergence). [`Error::is_numerical`] distinguishes them, which the
/// CLI maps onto its exit codes.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violates its documented range or consistency rule.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A grid is malformed (non-uniform spacing, too few nodes, ...).
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// Evaluation left the representable floating-point range.
    #[error("numerical range exceeded while evaluating {context}")]
    NumericalRange { context: String },

    /// The Λ>0 branch denominator |f(ζ)|² - 1 vanishes at this point.
    #[error("singular locus: |f(ζ)|² = 1 at ({x}, {y}) on the Λ>0 branch")]
    SingularLocus { x: f64, y: f64 },

    /// f'(ζ) = 0 makes b⁻¹ vanish and the dilaton diverge; never clamped.
    #[error("degenerate background: f'(ζ) = 0 at ({x}, {y})")]
    DegenerateBackground { x: f64, y: f64 },

    /// A grid node sits closer to a singular locus or a zero of f' than
    /// the safety margin allows.
    #[error(
        "grid touches singularity: node ({x}, {y}) is within {margin} of a \
         singular locus or a zero of f' (estimated distance {distance})"
    )]
    GridTouchesSingularity {
        x: f64,
        y: f64,
        margin: f64,
        distance: f64,
    },

    /// Eigenvalue solver failed; the message carries iteration diagnostics.
    #[error("eigensolver failed: {0}")]
    EigenFailure(String),

    /// Implicit-midpoint fixed point did not converge within the iteration cap.
    #[error(
        "integrator step failed: fixed point not converged after {iterations} \
         iterations at t = {t} (residual {residual})"
    )]
    StepFailure {
        t: f64,
        iterations: usize,
        residual: f64,
    },

    /// Adaptive quadrature exhausted its subdivision budget.
    #[error("quadrature failed to converge: {0}")]
    QuadratureFailure(String),

    /// A trajectory has too few oscillations for period measurement.
    #[error("non-oscillatory trajectory: {0}")]
    NonOscillatory(String),

    /// Configuration file problem (missing, malformed, unknown key).
    #[error("config error: {0}")]
    Config(String),

    /// Filesystem failure while reading inputs or writing results.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for runtime numerical failures, false for input validation errors.
    pub fn is_numerical(&self) -> bool {
        !matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::InvalidGrid(_)
                | Error::Config(_)
                | Error::Io(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
