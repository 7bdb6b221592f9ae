//! Conformal vectors of central charge 1/2 and their Miyamoto involutions.

mod ising;
mod miyamoto;

pub use ising::{
    cvcc_aa1, cvcc_ee8, default_ee8_embedding, first_norm_four, ising_check, ising_constructions,
    square_minus_one, Aa1Construction, CheckLine, Ee8Construction, IsingConstruction, IsingKind,
    IsingParams, IsingReport, IsingVector,
};
pub use miyamoto::{miyamoto, stabilization_check, MiyamotoData, StabilizationLine};
