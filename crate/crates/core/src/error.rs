use thiserror::Error;

/// Crate-wide result type.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors produced by the model, dynamics, and observable layers.
#[derive(Debug, Error)]
pub enum Error {
    /// A physical parameter or problem field violated its invariant.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The weak-field validity ratio needs the transition halfwidth Γ.
    #[error("validity ratio requires halfwidth")]
    MissingHalfwidth,

    /// A Hamiltonian handed to a unitary integrator was not Hermitian.
    #[error(
        "non-Hermitian Hamiltonian at t = {t}: deviation {deviation:.3e} exceeds {tolerance:.3e}"
    )]
    NonHermitian {
        t: f64,
        deviation: f64,
        tolerance: f64,
    },

    /// The eigendecomposition residual failed its post-check.
    #[error("eigendecomposition residual {residual:.3e} exceeds bound {bound:.3e}")]
    EigenResidual { residual: f64, bound: f64 },

    /// The state or Hamiltonian picked up a non-finite value during evolution.
    #[error("numerical abort: non-finite value at t = {t}")]
    NumericalAbort { t: f64 },

    /// Free-mode classification hit an eigenvalue indistinguishable from zero.
    #[error("degenerate rest frame: eigenvalue {eigenvalue:.3e} cannot be classified")]
    DegenerateRestFrame { eigenvalue: f64 },

    /// No spectral peak stood out from the population signal.
    #[error("no oscillation detected")]
    NoOscillation,

    /// A 2-component state was supplied where a 4-component one was required,
    /// or vice versa.
    #[error("component count mismatch: {0}")]
    ComponentMismatch(String),

    /// A dipole expectation value was requested without a coupling operator.
    #[error("dipole expectation requires a coupling operator (coupling is none)")]
    NoDipoleOperator,

    /// A Hermitian expectation value came out with a large imaginary part.
    #[error("expectation value has imaginary residue {residue:.3e}")]
    ImaginaryResidue { residue: f64 },
}
