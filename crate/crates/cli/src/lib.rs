//! Sweep drivers, on-disk formats, and verification suites for the
//! matrixpoints library; the `matrixpoints` binary is the front end.

pub mod formats;
pub mod sweep;
pub mod verify;
