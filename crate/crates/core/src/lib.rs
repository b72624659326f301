//! Exact matrix point counts on elliptic curves and the `X_lambda` family of
//! K3 surfaces over prime fields, together with the distribution machinery
//! for their normalized error terms.
//!
//! The crate is `no_std` (with `alloc`); everything here is pure computation.
//! IO, the CLI, and parallel prime sweeps live in the companion
//! `matrixpoints` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod curves;
pub mod dist;
pub mod engines;
pub mod field;
pub mod oracle;
pub mod primes;
pub mod qseries;
pub mod quad;

mod error;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
