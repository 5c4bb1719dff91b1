//! Eisenstein series of integral weight, their harmonic Maass pre-images, and
//! the number-theoretic oracles used to check them.

pub mod arith;
pub mod chars;
pub mod coeffs;
pub mod config;
pub mod cyclo;
pub mod error;
pub mod forms;
pub mod lattice;
pub mod lfun;
pub mod mp;
pub mod oracles;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
