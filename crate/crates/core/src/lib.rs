//! Deterministic simulator for a four-party quantum secret-sharing scheme
//! built on three-qubit Grover search.
//!
//! A dealer encodes a 3-bit share as the marked state of `U_m |S_k>`, where
//! `|S_k>` is a product of `|+>`, `|->`, `|+i>`, `|-i>` eigenstates taken from
//! a fixed 64-entry catalog. The three participants jointly apply
//! `U_{S_k} U_M U_{S_k}` and read the share off the measured outcome.
//!
//! Modules:
//! - [`statevec`]: exact amplitude vectors for up to four qubits.
//! - [`grover`]: the two reflections, the two-phase decode and shot sampling.
//! - [`catalog`]: the initial-state catalog and decode-table generation.
//! - [`protocol`]: the dealer/participant session state machine.
//! - [`attacks`]: the four attack analyses.
//! - [`cli`]: the `grover-qss` command-line front end.

pub mod attacks;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod grover;
pub mod protocol;
pub mod report;
pub mod rng;
pub mod statevec;

pub use error::{QssError, Result};
pub use statevec::{BasisLabel, EigenAxis, StateVector, C64};
