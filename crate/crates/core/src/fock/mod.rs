//! Partitions, creation-operator monomials and the series E^- with its
//! Jacobi-Trudi determinants.

mod monomial;
mod partition;
mod polynomial;
mod series;

pub use monomial::{FockMonomial, Oscillator};
pub use partition::{colored_partitions, partitions, split_colors, Partition};
pub use polynomial::{fock_mul, FockPolynomial};
pub(crate) use series::{s_product, schur_from_series};
pub use series::{
    e_minus_lattice, e_minus_series, jacobi_trudi_terms, lattice_coords, m1z_basis, schur_element,
};
