//! Mixing times, correlation decay and area laws for local Lindblad
//! semigroups on spin lattices and free-fermionic chains.

pub mod cli;
pub mod correlations;
pub mod error;
pub mod fermion;
pub mod harness;
pub mod lattice;
pub mod linalg;
pub mod mixing;
pub mod model;
pub mod models;
pub mod random;
pub mod spin_system;

pub use error::{Error, Result};
