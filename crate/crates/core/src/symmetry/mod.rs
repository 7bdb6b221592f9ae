//! Lifted lattice isometries acting on V_L, equivariant surgery on graded
//! forms, and eigenlattices of involutions.

mod eigen;
mod isometry;
mod surgery;

pub use eigen::{eigen_split, tensor_swap, CharacterSplit};
pub use isometry::{group_closure, lift_isometry, theta, LiftedIsometry};
pub use surgery::{
    fixed_form, intersect_forms, module_product_span, orbit_intersection, sum_forms,
    tensor_element, tensor_form, translate_forms,
};
