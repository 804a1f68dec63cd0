//! Four-component spinor dynamics for a two-level atom in a classical laser
//! field.
//!
//! The crate is organized around a fixed 4×4 operator algebra (Pauli blocks,
//! the Dirac matrices α and β, the extra diagonal matrix β¹, and the spin
//! operator Σ), the Hamiltonians built from it, and unitary time evolution of
//! two- and four-component states:
//!
//! - [`algebra`] — operator constructors and algebraic identities.
//! - [`model`] — physical parameters, classical field models, and Hamiltonian
//!   assembly for every supported model variant.
//! - [`dynamics`] — fixed-step unitary integrators, the rest-energy phase
//!   transformation, and free plane-wave mode classification.
//! - [`observables`] — norms, populations, block populations, dipole
//!   expectation values, and oscillation-frequency extraction.
//! - [`cli`] — the batch front end (config parsing, runs, sweeps, checks).
//!
//! States are four-component spinors (Ψ₁, Ψ₂, Ψ₃, Ψ₄) stored zero-indexed:
//! component Ψ_k lives at index `k - 1`. The upper pair (Ψ₁, Ψ₂) forms the
//! particle block, the lower pair (Ψ₃, Ψ₄) the antiparticle block.
//!
//! A static z-polarized field drives the (Ψ₂, Ψ₄) pair through a textbook
//! Rabi oscillation at 2μE₀/ħ:
//!
//! ```
//! use diratom::dynamics::{evolve, EvolutionProblem, InitialState, IntegratorKind};
//! use diratom::model::{CouplingKind, FieldModel, ModelKind, PhysicalParams};
//! use diratom::{Spinor4, C64};
//!
//! let mu_e0 = 0.5;
//! let problem = EvolutionProblem {
//!     model: ModelKind::TransformedLiteral,
//!     coupling: CouplingKind::AlphaE,
//!     params: PhysicalParams { mass: 1.0, omega: 0.25, mu: 1.0, ..Default::default() },
//!     field: FieldModel::Static { amplitude: [0.0, 0.0, mu_e0] },
//!     initial_state: InitialState::Four(Spinor4::new(
//!         C64::new(0.0, 0.0),
//!         C64::new(1.0, 0.0),
//!         C64::new(0.0, 0.0),
//!         C64::new(0.0, 0.0),
//!     )),
//!     t0: 0.0,
//!     t1: 10.0,
//!     dt: 0.001,
//!     integrator: IntegratorKind::ExpMidpoint,
//!     sample_stride: 10,
//! };
//! let trajectory = evolve(&problem).unwrap();
//! for (t, state) in trajectory.times.iter().zip(&trajectory.states) {
//!     let expected = (mu_e0 * t).sin().powi(2);
//!     assert!((state[3].norm_sqr() - expected).abs() < 1e-8);
//! }
//! ```

pub mod algebra;
pub mod cli;
pub mod dynamics;
pub mod model;
pub mod observables;

mod error;

pub use error::{Error, Result};

/// Double-precision complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// 2×2 complex matrix; houses the Pauli matrices and two-level Hamiltonians.
pub type Matrix2 = nalgebra::Matrix2<C64>;

/// 4×4 complex matrix; houses α, β, β¹, Σ and the four-component Hamiltonians.
pub type Matrix4 = nalgebra::Matrix4<C64>;

/// Four complex amplitudes (Ψ₁..Ψ₄); the state of the four-component models.
pub type Spinor4 = nalgebra::Vector4<C64>;

/// Two complex amplitudes (upper, lower); the state of the baseline model.
pub type State2 = nalgebra::Vector2<C64>;
