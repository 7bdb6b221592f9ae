//! Integral forms of lattice vertex operator algebras, computed exactly.

pub mod audit;
pub mod catalog;
pub mod cvcc;
pub mod error;
pub mod exact;
pub mod fock;
pub mod registry;
pub mod symmetry;
pub mod vertex;
pub mod voa;

pub use error::{Error, Result};
