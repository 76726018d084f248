//! Numerical laboratory for position-dependent-mass systems sourced by exact
//! dilaton backgrounds.
//!
//! The library covers four layers:
//!
//! * [`dilaton`] — exact static solutions of the 2D Liouville equation built
//!   from holomorphic functions f(ζ), with residual verification, the dilaton
//!   field φ, the scale factor b and the effective mass m = m₀·b^(-1/2);
//! * [`quantum`] — the symmetrically factorized PDM kinetic operator, the
//!   radial oscillator Hamiltonian in self-adjoint form and its bound
//!   spectrum;
//! * [`classical`] — Hamiltonian dynamics of a particle with position
//!   dependent mass, symplectic (implicit midpoint) integration and period
//!   measurement;
//! * [`string`] — dilaton-string energetics: potential, energy density,
//!   tension by quadrature and in closed form, and weak-energy-condition
//!   diagnostics.
//!
//! The `pdm-lab` binary exposes these as `liouville`, `spectrum`,
//! `classical`, `string` and `verify` subcommands.

pub mod classical;
pub mod cli;
pub mod dilaton;
pub mod eigen;
pub mod error;
pub mod expr;
pub mod io;
pub mod quad;
pub mod quantum;
pub mod string;
pub mod verify;

pub use error::{Error, Result};
pub use expr::HolomorphicExpr;
