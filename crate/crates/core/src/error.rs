use alloc::boxed::Box;
use core::fmt;

use num_complex::Complex64;

/// Pipeline stage an error was raised in, used to annotate `reconstruct` failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    AnnihilatorMatrix,
    SolveAnnihilator,
    ExtractJumps,
    FundamentalBasis,
    BasisMomentMatrix,
    SolveAmplitudes,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::AnnihilatorMatrix => "annihilator_matrix",
            Stage::SolveAnnihilator => "solve_annihilator",
            Stage::ExtractJumps => "extract_jumps",
            Stage::FundamentalBasis => "fundamental_basis",
            Stage::BasisMomentMatrix => "basis_moment_matrix",
            Stage::SolveAmplitudes => "solve_amplitudes",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("polynomial is identically zero under the trim tolerance")]
    ZeroPolynomial,
    #[error("eigenvalue iteration did not converge for a degree-{degree} companion matrix")]
    RootsDidNotConverge { degree: usize },
    #[error("input contains non-finite values")]
    NonFinite,
    #[error("length mismatch: need {needed}, got {found}")]
    LengthMismatch { needed: usize, found: usize },
    #[error("{size}x{size} Hankel matrix is numerically singular (sigma_min/sigma_max = {ratio:e})")]
    SingularHankel { size: usize, ratio: f64 },
    #[error("nodes {first} and {second} coincide within the separation tolerance")]
    CoincidentNodes { first: usize, second: usize },
    #[error("kernel transform vanishes at the origin")]
    ZeroAtOrigin,
    #[error("kernel transform vanishes at frequency {k}")]
    VanishingFhat { k: i64 },
    #[error("kernel has no closed-form transform to evaluate at integer frequencies")]
    NoTransformEvaluator,
    #[error("Fourier coefficient for frequency {k} is missing")]
    MissingCoefficient { k: i64 },
    #[error("node {index} sits at the origin; partial-fraction weights are undefined")]
    NodeAtZero { index: usize },
    #[error("node modulus {modulus} is off the unit circle")]
    OffCircleNode { modulus: f64 },
    #[error("moment index {needed} required, only 0..={available} available")]
    InsufficientMoments { needed: usize, available: usize },
    #[error("no annihilating operator at this order and degree layout")]
    EmptyNullspace,
    #[error("invalid operator: {0}")]
    InvalidOperator(&'static str),
    #[error("expected {expected} jump points, found {found} qualifying common roots")]
    JumpCountMismatch { expected: usize, found: usize },
    #[error("leading coefficient vanishes near x = {x}")]
    SingularLeadingCoefficient { x: f64 },
    #[error("ODE integration failed near x = {x}")]
    IntegrationFailure { x: f64 },
    #[error("adaptive quadrature on [{a}, {b}] did not reach tolerance")]
    QuadratureFailure { a: f64, b: f64 },
    #[error("basis moment matrix is rank deficient (condition {condition:e})")]
    RankDeficientBasis { condition: f64 },
    #[error("piece type not supported by this operation")]
    UnsupportedPiece,
    #[error("moment sequence is identically zero")]
    DegenerateMoments,
    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
    #[error("stage {stage}: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at(stage: Stage) -> impl FnOnce(Error) -> Error {
        move |source| Error::Stage {
            stage,
            source: Box::new(source),
        }
    }

    /// The innermost error, with stage annotations stripped.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root_cause(),
            other => other,
        }
    }

    pub fn stage(&self) -> Option<Stage> {
        match self {
            Error::Stage { stage, .. } => Some(*stage),
            _ => None,
        }
    }
}

/// Non-fatal conditions reported alongside a result.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    IllConditioned { condition: f64 },
    AmbiguousNullspace { dimension: usize },
    RejectedRoot { root: Complex64 },
    /// Common-root extraction failed and the jumps came from a grid search instead.
    JumpsFromScan { objective: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;
