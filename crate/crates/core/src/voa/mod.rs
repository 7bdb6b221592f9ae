//! The lattice vertex operator algebra V_L over Q: elements, graded monomial
//! bases, the integral and dual forms, and the two invariant pairings.

mod basis;
mod cocycle;
mod element;
mod form;
mod gram;
mod pairing;
mod space;

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

pub use basis::{dual_form_basis, voa_basis, BasisElement, BasisKind, SymbolicElement, SymbolicTerm};
pub use cocycle::{make_cocycle, Cocycle};
pub use element::VoaElement;
pub use form::{quotient_invariants, GradedZForm};
pub use gram::{basis_gram, graded_gram, gram_blocks, monomial_gram, GramBlock};
pub use pairing::{
    monomial_pairing, pair, pair_genfun, pair_symbolic, pairing_backends, ContractionPairing, Form,
    GenfunPairing, PairingBackend,
};
pub use space::{ChargeBlock, WeightSpace};

use crate::error::Result;
use crate::exact::{lattice_dual, EvenLattice, LatticeVector, Rat, RatMatrix};
use crate::fock::{e_minus_lattice, FockPolynomial};

/// A lattice together with its cocycle and caches shared by all computations on V_L.
pub struct LatticeVoa {
    lattice: EvenLattice,
    cocycle: Cocycle,
    dual_gram: RatMatrix,
    spaces: RwLock<HashMap<u32, Arc<WeightSpace>>>,
    series: RwLock<HashMap<LatticeVector, Arc<Vec<FockPolynomial>>>>,
}

impl LatticeVoa {
    pub fn new(lattice: EvenLattice) -> Result<Self> {
        let cocycle = make_cocycle(&lattice);
        let dual_gram = lattice_dual(&lattice)?;
        Ok(LatticeVoa {
            lattice,
            cocycle,
            dual_gram,
            spaces: RwLock::new(HashMap::new()),
            series: RwLock::new(HashMap::new()),
        })
    }

    pub fn lattice(&self) -> &EvenLattice {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    /// Gram matrix of the dual basis (the inverse Gram matrix).
    pub fn dual_gram(&self) -> &RatMatrix {
        &self.dual_gram
    }

    /// Coordinates of the dual basis vector beta_i in the lattice basis.
    pub fn dual_vector(&self, i: usize) -> Vec<Rat> {
        self.dual_gram.row(i).to_vec()
    }

    pub fn vacuum(&self) -> VoaElement {
        VoaElement::vacuum(self.rank())
    }

    pub fn space(&self, degree: u32) -> Result<Arc<WeightSpace>> {
        if let Some(s) = self.spaces.read().expect("lock").get(&degree) {
            return Ok(s.clone());
        }
        let s = Arc::new(WeightSpace::new(&self.lattice, degree)?);
        self.spaces
            .write()
            .expect("lock")
            .entry(degree)
            .or_insert_with(|| s.clone());
        Ok(s)
    }

    /// s_{alpha,0}, ..., s_{alpha,n} (possibly longer), cached per alpha.
    pub fn series(&self, alpha: &LatticeVector, n: u32) -> Arc<Vec<FockPolynomial>> {
        if let Some(s) = self.series.read().expect("lock").get(alpha) {
            if s.len() > n as usize {
                return s.clone();
            }
        }
        let s = Arc::new(e_minus_lattice(alpha, n.max(4)));
        let mut w = self.series.write().expect("lock");
        let slot = w.entry(alpha.clone()).or_insert_with(|| s.clone());
        if slot.len() < s.len() {
            *slot = s.clone();
        }
        slot.clone()
    }

    /// Rational inner product of coordinate vectors.
    pub fn inner_rat(&self, a: &[Rat], b: &[Rat]) -> Rat {
        let g = self.lattice.gram();
        let mut s = Rat::from_integer(0.into());
        for (i, x) in a.iter().enumerate() {
            if num_traits::Zero::is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if g[i][j] != 0 && !num_traits::Zero::is_zero(y) {
                    s += x * y * Rat::from_integer(g[i][j].into());
                }
            }
        }
        s
    }
}
