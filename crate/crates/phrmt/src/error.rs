use thiserror::Error;

/// Errors produced by the simulation library.
///
/// Diagnostic magnitudes are reported as `f64` regardless of the scalar type
/// the computation ran in.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration violated a structural invariant (dimensions, grids,
    /// indices).
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Two shared eigenvalues were closer than the tie threshold; the
    /// eigenvector pairing is not reproducible. Resampling is advised.
    #[error("degenerate spectrum: eigenvalue gap {gap:.3e} below {threshold:.3e} (resample advised)")]
    DegenerateSpectrum { gap: f64, threshold: f64 },

    /// An eigenvalue that must be strictly positive fell below the rank
    /// threshold.
    #[error("rank deficiency: eigenvalue {value:.3e} at index {index} below threshold {threshold:.3e}")]
    RankDeficient {
        index: usize,
        value: f64,
        threshold: f64,
    },

    /// A matrix required by a transformation is singular or too close to
    /// singular to invert reliably.
    #[error("ill-conditioned matrix: condition estimate {cond:.3e} exceeds {limit:.3e}")]
    IllConditioned { cond: f64, limit: f64 },

    /// Parameters outside the domain where the closed forms are defined.
    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),

    /// The step-halving integrator failed to reach its convergence criterion.
    #[error("ode oracle failed to converge: residual {residual:.3e} after {max_steps} steps per interval")]
    OracleDivergence { residual: f64, max_steps: usize },

    /// A quantity that must be real came out with a non-negligible imaginary
    /// part.
    #[error("complex residue: imaginary part {imag:.3e} exceeds tolerance {tolerance:.3e}")]
    ComplexResidue { imag: f64, tolerance: f64 },

    /// A density-matrix eigenvalue fell outside `[0, 1]` beyond tolerance.
    #[error("invalid density eigenvalue {value:.6e} outside [0, 1]")]
    InvalidDensity { value: f64 },

    /// An operation was called with inconsistent arguments.
    #[error("invalid argument: {0}")]
    Argument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
