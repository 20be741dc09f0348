//! Exact distributions of fixed-space dimensions for the finite classical
//! groups, with every formula cross-checked three ways: q-series identities
//! evaluated in exact rational arithmetic, brute-force enumeration of small
//! matrix groups over finite fields, and seeded Monte Carlo sampling.
//!
//! The crate is organized as:
//!
//! - [`exactnum`]: arbitrary-precision rationals, q-Pochhammer symbols,
//!   Gaussian binomials, and classical group orders;
//! - [`qidentity`]: the master double sum, its closed forms, and a truncated
//!   formal-power-series engine;
//! - [`dist`]: exact fixed-space distributions and their limits;
//! - [`moments`]: exact moments, limiting moments, Galois numbers, and
//!   stabilization scans;
//! - [`orthopoly`]: discrete orthogonal-polynomial weights matching the
//!   limiting distributions, and the randomized-rank series identities;
//! - [`fqlinalg`]: small finite fields, matrices, kernels, and bilinear /
//!   sesquilinear form predicates;
//! - [`sampler`]: uniform random elements, exhaustive enumeration, and the
//!   Monte Carlo comparison harness;
//! - [`verify`]: the named verification suites exposed by the CLI.

pub mod error;
pub mod exactnum;
pub mod interval;
pub mod qidentity;
pub mod dist;
pub mod fqlinalg;
pub mod sampler;
pub mod moments;
pub mod orthopoly;
pub mod verify;

pub use error::{Error, Result};
pub use exactnum::{Family, GroupSpec, Rational};
