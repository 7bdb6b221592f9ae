use num_traits::One;
use serde::Serialize;

use super::{LatticeVoa, VoaElement};
use crate::error::Result;
use crate::exact::{LatticeVector, Rat};
use crate::fock::{
    e_minus_series, jacobi_trudi_terms, lattice_coords, s_product, schur_from_series,
    split_colors, FockMonomial, FockPolynomial,
};

/// How a label (a colored partition) is turned into a Fock polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BasisKind {
    /// prod s_{g_i, n} over the label's factors g_i(-n).
    SProduct,
    /// prod_i s_{lambda_i}(g_i), lambda_i the parts of color i.
    Schur,
    /// prod_i s_{lambda_i}(b_i) with b_i the dual basis.
    DualSchur,
    /// prod_i s_{lambda_i}(-b_i); dual to `Schur` under the bilinear form.
    DualSchurBilinear,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BasisElement {
    pub charge: LatticeVector,
    pub label: FockMonomial,
    pub kind: BasisKind,
}

/// Sum of rational multiples of products of s_{v, n}, tensored with e^charge.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicElement {
    pub charge: LatticeVector,
    pub terms: Vec<SymbolicTerm>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicTerm {
    pub coeff: Rat,
    /// Factors s_{v, n} as (coordinates of v, n).
    pub factors: Vec<(Vec<Rat>, u32)>,
}

impl BasisElement {
    pub fn weight(&self, voa: &LatticeVoa) -> i64 {
        i64::from(self.label.degree()) + voa.lattice().norm(&self.charge) / 2
    }

    fn color_vector(&self, voa: &LatticeVoa, i: usize) -> Vec<Rat> {
        match self.kind {
            BasisKind::SProduct | BasisKind::Schur => lattice_coords(&voa.lattice().basis(i)),
            BasisKind::DualSchur => voa.dual_vector(i),
            BasisKind::DualSchurBilinear => voa.dual_vector(i).iter().map(|x| -x).collect(),
        }
    }

    pub fn fock_part(&self, voa: &LatticeVoa) -> FockPolynomial {
        let d = voa.rank();
        let deg = self.label.degree();
        match self.kind {
            BasisKind::SProduct => {
                let series: Vec<Vec<FockPolynomial>> = (0..d)
                    .map(|i| voa.series(&voa.lattice().basis(i), deg).as_ref().clone())
                    .collect();
                s_product(&self.label, &series)
            }
            _ => {
                let mut out = FockPolynomial::one();
                for (i, lambda) in split_colors(&self.label, d).iter().enumerate() {
                    if lambda.is_empty() {
                        continue;
                    }
                    let top = lambda.parts()[0] + lambda.len() as u32;
                    let s = e_minus_series(&self.color_vector(voa, i), top);
                    out = out.mul(&schur_from_series(&s, lambda));
                }
                out
            }
        }
    }

    pub fn element(&self, voa: &LatticeVoa) -> VoaElement {
        VoaElement::from_part(self.charge.clone(), self.fock_part(voa))
    }

    pub fn symbolic(&self, voa: &LatticeVoa) -> SymbolicElement {
        let d = voa.rank();
        let terms = match self.kind {
            BasisKind::SProduct => vec![SymbolicTerm {
                coeff: Rat::one(),
                factors: self
                    .label
                    .factors()
                    .iter()
                    .map(|o| (self.color_vector(voa, o.index), o.mode))
                    .collect(),
            }],
            _ => {
                let mut acc = vec![SymbolicTerm {
                    coeff: Rat::one(),
                    factors: Vec::new(),
                }];
                for (i, lambda) in split_colors(&self.label, d).iter().enumerate() {
                    if lambda.is_empty() {
                        continue;
                    }
                    let v = self.color_vector(voa, i);
                    let jt = jacobi_trudi_terms(lambda);
                    let mut next = Vec::with_capacity(acc.len() * jt.len());
                    for t in &acc {
                        for (sign, idx) in &jt {
                            let mut factors = t.factors.clone();
                            factors.extend(idx.iter().map(|&n| (v.clone(), n)));
                            next.push(SymbolicTerm {
                                coeff: &t.coeff * Rat::from_integer((*sign).into()),
                                factors,
                            });
                        }
                    }
                    acc = next;
                }
                acc
            }
        };
        SymbolicElement {
            charge: self.charge.clone(),
            terms,
        }
    }
}

impl SymbolicElement {
    /// Expands into an ordinary element; used to cross-check the two representations.
    pub fn expand(&self) -> VoaElement {
        let mut p = FockPolynomial::zero();
        for t in &self.terms {
            let mut prod = FockPolynomial::one();
            for (v, n) in &t.factors {
                prod = prod.mul(&e_minus_series(v, *n)[*n as usize]);
            }
            p.add_scaled(&prod, &t.coeff);
        }
        VoaElement::from_part(self.charge.clone(), p)
    }
}

fn labelled(voa: &LatticeVoa, degree: u32, kind: BasisKind) -> Result<Vec<BasisElement>> {
    let space = voa.space(degree)?;
    Ok(space
        .blocks()
        .iter()
        .flat_map(|b| {
            b.monomials.iter().map(move |m| BasisElement {
                charge: b.charge.clone(),
                label: m.clone(),
                kind,
            })
        })
        .collect())
}

/// The s-product basis of the integral form in weight `degree`, in weight-space order.
pub fn voa_basis(voa: &LatticeVoa, degree: u32) -> Result<Vec<BasisElement>> {
    labelled(voa, degree, BasisKind::SProduct)
}

/// Schur-type basis of weight `degree`: primal (`dual = false`) or dual.
pub fn dual_form_basis(voa: &LatticeVoa, degree: u32, dual: bool) -> Result<Vec<BasisElement>> {
    labelled(
        voa,
        degree,
        if dual {
            BasisKind::DualSchur
        } else {
            BasisKind::Schur
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, EvenLattice};
    use crate::fock::Oscillator;

    #[test]
    fn a1_dual_degree_one() {
        let voa = LatticeVoa::new(EvenLattice::named(vec![vec![2]], "A1").unwrap()).unwrap();
        let dual = dual_form_basis(&voa, 1, true).unwrap();
        let zero_charge: Vec<_> = dual.iter().filter(|b| b.charge.is_zero()).collect();
        assert_eq!(zero_charge.len(), 1);
        let e = zero_charge[0].element(&voa);
        let want = VoaElement::term(
            LatticeVector(vec![0]),
            FockMonomial::new(vec![Oscillator::new(0, 1)]),
            rat(1, 2),
        );
        assert_eq!(e, want);
    }

    #[test]
    fn symbolic_expansion_matches() {
        let voa = LatticeVoa::new(
            EvenLattice::named(vec![vec![2, -1], vec![-1, 2]], "A2").unwrap(),
        )
        .unwrap();
        for kind in [BasisKind::SProduct, BasisKind::Schur, BasisKind::DualSchur] {
            for b in labelled(&voa, 3, kind).unwrap() {
                assert_eq!(b.symbolic(&voa).expand(), b.element(&voa));
            }
        }
    }

    #[test]
    fn primal_schur_in_rank_one() {
        let voa = LatticeVoa::new(EvenLattice::named(vec![vec![2]], "A1").unwrap()).unwrap();
        let b = dual_form_basis(&voa, 2, false).unwrap();
        let labels: Vec<String> = b
            .iter()
            .filter(|x| x.charge.is_zero())
            .map(|x| x.label.to_string())
            .collect();
        assert_eq!(labels, vec!["g1(-1)^2", "g1(-2)"]);
    }
}
