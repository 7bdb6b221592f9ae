//! Vertex operators on V_L: modes, the Virasoro action, closure of integer
//! spans under all modes, the adjoint identity, and trace forms.

mod adjoint;
mod generate;
mod mode;
mod trace;
mod virasoro;

pub use adjoint::{invariance_check, pair_adjoint_check, InvarianceReport};
pub use generate::generated_form;
pub use mode::{modes_into, vertex_mode, vertex_modes};
pub use trace::{trace_form, TraceForm};
pub use virasoro::{bracket_holds, is_quasi_primary, omega, virasoro_mode, virasoro_with, VirasoroConfig};
