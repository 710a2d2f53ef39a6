//! Pseudo-Hermitian random-matrix simulation library.
//!
//! The crate builds a random bipartite operator quartet `(R, S, T, U)` from a
//! seeded Gaussian block, reduces it onto the Schmidt-paired eigenbasis of its
//! Wishart blocks, solves the time-dependent Dyson-metric flow for the
//! pseudo-Hermitian combinations `A₁ = Û + bR̂ + icŜ` and
//! `A₂ = Û + bT̂Û^(-1/2) − icŜ`, and evolves Bell states of the generator
//! eigenstates to produce von Neumann entropy dynamics: aperiodic oscillation
//! for `b > c`, and saturation to a constant plateau for `b < c`.
//!
//! All numerical code is generic over the real scalar type via
//! [`scalar::Scalar`]; `f64` aliases are provided at the crate root and are
//! what the companion CLI uses.

pub mod checks;
pub mod dynamics;
pub mod ensemble;
pub mod entanglement;
pub mod error;
pub mod figures;
pub mod linalg;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};

/// Default real scalar used by the CLI and acceptance suites.
pub type Real = f64;
/// Complex number over [`Real`].
pub type C64 = num_complex::Complex<Real>;
/// Dense complex matrix over [`Real`].
pub type CMatrix64 = linalg::CMatrix<Real>;
/// Dense complex vector over [`Real`].
pub type CVector64 = linalg::CVector<Real>;
