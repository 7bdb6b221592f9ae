use std::collections::HashMap;

use num_traits::Zero;

use super::VoaElement;
use crate::error::{Error, Result};
use crate::exact::{short_vectors, EvenLattice, LatticeVector, Rat, RatMatrix, RatRow};
use crate::fock::{colored_partitions, FockMonomial, FockPolynomial};

/// Monomials of one charge inside a weight space, occupying `start..start + len`.
#[derive(Clone, Debug)]
pub struct ChargeBlock {
    pub charge: LatticeVector,
    pub start: usize,
    pub monomials: Vec<FockMonomial>,
    index: HashMap<FockMonomial, usize>,
}

impl ChargeBlock {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn range(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.len()
    }

    pub fn position(&self, m: &FockMonomial) -> Option<usize> {
        self.index.get(m).map(|i| self.start + i)
    }
}

/// The monomial basis of a graded piece: charges ordered by (norm, coordinates),
/// then Fock monomials in canonical order.
#[derive(Clone, Debug)]
pub struct WeightSpace {
    degree: u32,
    blocks: Vec<ChargeBlock>,
    by_charge: HashMap<LatticeVector, usize>,
    dim: usize,
}

impl WeightSpace {
    pub fn new(l: &EvenLattice, degree: u32) -> Result<Self> {
        let d = l.rank();
        let g = RatMatrix::from_i64(l.gram())?;
        let mut charges: Vec<(i64, LatticeVector)> = vec![(0, LatticeVector::zero(d))];
        if d > 0 {
            let bound = Rat::from_integer((2 * i64::from(degree)).into());
            for (v, norm) in short_vectors(&g, &bound)? {
                charges.push((norm.to_integer().try_into().expect("small norm"), LatticeVector(v)));
            }
        }
        charges.sort();
        let mut blocks = Vec::with_capacity(charges.len());
        let mut by_charge = HashMap::with_capacity(charges.len());
        let mut start = 0;
        for (norm, charge) in charges {
            let fock_degree = i64::from(degree) - norm / 2;
            let monomials = colored_partitions(d, fock_degree as u32);
            let index = monomials
                .iter()
                .enumerate()
                .map(|(i, m)| (m.clone(), i))
                .collect();
            by_charge.insert(charge.clone(), blocks.len());
            let len = monomials.len();
            blocks.push(ChargeBlock {
                charge,
                start,
                monomials,
                index,
            });
            start += len;
        }
        Ok(WeightSpace {
            degree,
            blocks,
            by_charge,
            dim: start,
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[ChargeBlock] {
        &self.blocks
    }

    pub fn block(&self, charge: &LatticeVector) -> Option<&ChargeBlock> {
        self.by_charge.get(charge).map(|&i| &self.blocks[i])
    }

    pub fn block_index(&self, charge: &LatticeVector) -> Option<usize> {
        self.by_charge.get(charge).copied()
    }

    /// Block containing coordinate `i`.
    pub fn block_of(&self, i: usize) -> &ChargeBlock {
        let k = self.blocks.partition_point(|b| b.start + b.len() <= i);
        &self.blocks[k]
    }

    pub fn label(&self, i: usize) -> (&LatticeVector, &FockMonomial) {
        let b = self.block_of(i);
        (&b.charge, &b.monomials[i - b.start])
    }

    pub fn position(&self, charge: &LatticeVector, m: &FockMonomial) -> Option<usize> {
        self.block(charge)?.position(m)
    }

    /// Coordinates of a homogeneous element of this weight.
    pub fn coords(&self, u: &VoaElement) -> Result<RatRow> {
        let mut out = RatRow::new();
        for (a, m, c) in u.terms() {
            let i = self.position(a, m).ok_or_else(|| {
                Error::invalid(format!(
                    "term {m} e^{a} does not have weight {}",
                    self.degree
                ))
            })?;
            out.insert(i, c.clone());
        }
        Ok(out)
    }

    pub fn element(&self, coords: &RatRow) -> VoaElement {
        let mut parts: std::collections::BTreeMap<usize, FockPolynomial> = Default::default();
        for (i, c) in coords {
            if c.is_zero() {
                continue;
            }
            let b = self.block_of(*i);
            let k = self.by_charge[&b.charge];
            parts
                .entry(k)
                .or_default()
                .add_term(b.monomials[i - b.start].clone(), c.clone());
        }
        let mut out = VoaElement::zero();
        for (k, p) in parts {
            out.add_part(&self.blocks[k].charge, &p, &Rat::from_integer(1.into()));
        }
        out
    }

    pub fn basis_element(&self, i: usize) -> VoaElement {
        let (a, m) = self.label(i);
        VoaElement::term(a.clone(), m.clone(), Rat::from_integer(1.into()))
    }
}
