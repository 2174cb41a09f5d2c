//! Numerical toolkit for the monochromatically driven Jaynes-Cummings model.
//!
//! The crate builds the chain of Hamiltonians describing a driven oscillator
//! coupled to a qubit (full lab-frame model, rotating-wave model, stationary
//! rotating-frame model and its displaced form), diagonalizes them with a
//! banded Hermitian eigensolver, propagates states with a split-step
//! integrator, extracts Floquet quasienergies, and renders spin-resolved
//! Husimi functions. A closed-form semiclassical two-branch theory is
//! provided as an oracle for the numerics, and [`harness`] wires everything
//! into figure-reproduction scenarios driven by a CLI.
//!
//! Basis convention: the joint oscillator-qubit space is ordered by the flat
//! index `k = 2n + s`, where `n` is the photon number and `s = 1` is the
//! excited qubit state (`σz = +1`).

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::type_complexity)]

pub mod eigensolve;
pub mod error;
pub mod evolution;
pub mod hamiltonians;
pub mod harness;
pub mod husimi;
pub mod linalg;
pub mod observables;
pub mod operators;
pub mod semiclassical;

mod par;

pub use error::{Error, Result};
pub use linalg::{BandedHermitian, CMatrix};
pub use num_complex::Complex64 as C64;
