use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;

use super::{pair, BasisElement, Form, LatticeVoa, PairingBackend, VoaElement, WeightSpace};
use crate::error::Result;
use crate::exact::{Rat, RatMatrix};
use crate::fock::FockMonomial;

/// A diagonal block of a Gram matrix: `gram[a][b]` pairs `rows[a]` with `rows[b]`,
/// and every entry outside the union of blocks vanishes.
#[derive(Clone, Debug)]
pub struct GramBlock {
    pub rows: Vec<usize>,
    pub gram: RatMatrix,
}

/// Dense Gram matrix of a list of elements.
pub fn graded_gram(voa: &LatticeVoa, elements: &[VoaElement], form: Form) -> RatMatrix {
    let n = elements.len();
    let rows: Vec<Vec<Rat>> = (0..n)
        .into_par_iter()
        .map(|i| (0..n).map(|j| pair(voa, &elements[i], &elements[j], form)).collect())
        .collect();
    RatMatrix::from_rows(rows).expect("square")
}

/// Dense Gram matrix of basis elements through a chosen backend.
pub fn basis_gram(
    voa: &LatticeVoa,
    basis: &[BasisElement],
    backend: &dyn PairingBackend,
    form: Form,
) -> RatMatrix {
    let n = basis.len();
    let rows: Vec<Vec<Rat>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| backend.pair(voa, &basis[i], &basis[j], form))
                .collect()
        })
        .collect();
    RatMatrix::from_rows(rows).expect("square")
}

fn modes(m: &FockMonomial) -> Vec<u32> {
    let mut v: Vec<u32> = m.factors().iter().map(|o| o.mode).collect();
    v.sort_unstable();
    v
}

/// Orthogonal decomposition of the Gram matrix of the monomial basis of `space`.
/// Monomials only pair when their charges are partners and their mode multisets agree.
pub fn gram_blocks(voa: &LatticeVoa, space: &WeightSpace, form: Form) -> Vec<GramBlock> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (k, b) in space.blocks().iter().enumerate() {
        let partner = form.partner(&b.charge);
        let pk = space.block_index(&partner).expect("partner charge has the same norm");
        if pk < k {
            continue;
        }
        let mut by_modes: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
        for (i, m) in b.monomials.iter().enumerate() {
            by_modes.entry(modes(m)).or_default().push(b.start + i);
        }
        if pk != k {
            let p = &space.blocks()[pk];
            for (i, m) in p.monomials.iter().enumerate() {
                by_modes.entry(modes(m)).or_default().push(p.start + i);
            }
        }
        groups.extend(by_modes.into_values());
    }
    let l = voa.lattice();
    groups
        .into_par_iter()
        .map(|rows| {
            let labels: Vec<_> = rows.iter().map(|&i| space.label(i)).collect();
            let gram = RatMatrix::from_fn(rows.len(), rows.len(), |a, b| {
                let (ca, ma) = labels[a];
                let (cb, mb) = labels[b];
                if &form.partner(ca) != cb {
                    return Rat::zero();
                }
                Rat::from_integer(super::monomial_pairing(l, ma, mb, form))
            });
            GramBlock { rows, gram }
        })
        .collect()
}

/// Dense Gram matrix of the monomial basis of weight `degree`.
pub fn monomial_gram(voa: &LatticeVoa, degree: u32, form: Form) -> Result<RatMatrix> {
    let space = voa.space(degree)?;
    let n = space.dim();
    let mut m = RatMatrix::zeros(n, n);
    for b in gram_blocks(voa, &space, form) {
        for (a, &i) in b.rows.iter().enumerate() {
            for (c, &j) in b.rows.iter().enumerate() {
                m.set(i, j, b.gram.get(a, c).clone());
            }
        }
    }
    Ok(m)
}
