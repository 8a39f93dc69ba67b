//! Numerical core for a lattice analogue of strong-field quantum electrodynamics.
//!
//! A 1+1 dimensional Dirac field discretized on a staggered tight-binding chain
//! maps onto the Fermi-Hubbard form
//!
//! ```text
//! H = -(J/2) sum_n (c_n^dag c_{n+1} + h.c.) + sum_n (Phi_n + (-1)^n M) c_n^dag c_n
//! ```
//!
//! with hopping J = 1/l on lattice spacing l, staggered mass M and external
//! potential Phi_n. The crate provides:
//!
//! * the chain model and potential sampling ([`model`]),
//! * symmetric tridiagonal and dense eigensolvers ([`eigen`]),
//! * in-gap bound-state extraction and supercriticality tracing ([`spectral`]),
//! * analytic continuum and lattice oracles, including the Woods-Saxon
//!   bound-state condition built on a complex log-gamma ([`cgamma`], [`oracles`]),
//! * Crank-Nicolson time evolution and Bogoliubov pair counting ([`dynamics`]),
//! * WKB and exact Bloch band structure of a bichromatic optical lattice with
//!   Wannier-orbital construction ([`bands`]),
//! * small-chain many-body exact diagonalization with the Jordan-Wigner
//!   hard-core-boson mapping ([`manybody`]).
//!
//! The crate is `no_std` (with `alloc`) so the numerics can be embedded
//! anywhere; file formats, parallel scan drivers and the CLI live in the
//! companion `latqed` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

pub mod bands;
pub mod cgamma;
pub mod dynamics;
pub mod eigen;
pub mod manybody;
pub mod model;
pub mod numerics;
pub mod oracles;
pub mod spectral;

use alloc::string::String;
use core::fmt;

/// Error type shared by all numerical modules.
///
/// The three variants mirror the failure categories surfaced by the CLI:
/// invalid setup, a numerical method failing to converge, and a request that
/// leaves the physical regime an operation is defined on.
#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// Inconsistent or out-of-range inputs (lengths, indices, invariants).
    Config(String),
    /// A numerical procedure failed (no convergence, singular solve, ...).
    Numeric(String),
    /// Parameters outside the physical regime of the operation
    /// (no bracketing root, supercriticality not reached, WKB above barrier, ...).
    Regime(String),
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::Config(msg) => write!(f, "configuration error: {}", msg),
            CoreError::Numeric(msg) => write!(f, "numeric error: {}", msg),
            CoreError::Regime(msg) => write!(f, "regime error: {}", msg),
        }
    }
}

/// Convenience alias used across the crate.
pub type Result<T> = core::result::Result<T, CoreError>;
