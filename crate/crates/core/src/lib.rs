//! Order-p torsion in Sp(p−1, ℤ[1/n]).
//!
//! Conjugacy classes of elements of odd prime order p are parametrized by pairs
//! (𝔞, a) of an ideal of ℤ[1/n][ξ_p] and a real element with 𝔞·𝔞̄ = (a). This crate
//! counts and enumerates those classes, builds explicit symplectic matrices for
//! them, recovers the class of a given matrix and describes centralizers, all in
//! exact arithmetic.

pub mod acceptance;
pub mod cli;
pub mod cyclo;
pub mod error;
pub mod linalg;
pub mod localization;
pub mod oracle;
pub mod pairs;
pub mod splitting;
pub mod sunits;
pub mod symplectic;

pub use error::{Error, Result};
