use std::fmt;

use num_traits::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{EvenLattice, IntMatrix, LatticeVector, LinearMap, Rat};
use crate::fock::{FockMonomial, FockPolynomial};
use crate::voa::{Cocycle, LatticeVoa, VoaElement};

/// An automorphism of V_L lifting an isometry sigma of L: e^{g_i} -> eta_i e^{sigma g_i},
/// h(-n) -> (sigma h)(-n). Signs on other exponentials follow from the cocycle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LiftedIsometry {
    /// Column j holds the coordinates of sigma(g_j).
    sigma: Vec<Vec<i64>>,
    signs: Vec<i64>,
    /// delta_ij = eps(sigma g_i, sigma g_j) eps(g_i, g_j) for i < j, as parity bits.
    delta: Vec<Vec<bool>>,
}

impl LiftedIsometry {
    pub fn new(l: &EvenLattice, sigma: Vec<Vec<i64>>, signs: Vec<i64>) -> Result<Self> {
        let d = l.rank();
        if signs.len() != d || signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::invalid("signs must be a list of +1/-1 of length rank"));
        }
        if !l.is_isometry(&sigma) {
            return Err(Error::NotIsometry("matrix does not preserve the Gram matrix".into()));
        }
        let cocycle = Cocycle::new(l);
        let col = |j: usize| LatticeVector((0..d).map(|i| sigma[i][j]).collect());
        let mut delta = vec![vec![false; d]; d];
        for i in 0..d {
            for j in i + 1..d {
                let s = cocycle.sign(&col(i), &col(j)) * cocycle.basis_sign(i, j);
                delta[i][j] = s == -1;
            }
        }
        Ok(LiftedIsometry { sigma, signs, delta })
    }

    pub fn identity(l: &EvenLattice) -> Self {
        let d = l.rank();
        let sigma = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
        Self::new(l, sigma, vec![1; d]).expect("identity is an isometry")
    }

    pub fn rank(&self) -> usize {
        self.signs.len()
    }

    pub fn sigma(&self) -> &[Vec<i64>] {
        &self.sigma
    }

    pub fn signs(&self) -> &[i64] {
        &self.signs
    }

    pub fn image(&self, a: &LatticeVector) -> LatticeVector {
        let d = self.rank();
        LatticeVector((0..d).map(|i| (0..d).map(|j| self.sigma[i][j] * a.0[j]).sum()).collect())
    }

    /// The sign eta(alpha) in g(e^alpha) = eta(alpha) e^{sigma alpha}.
    pub fn eta(&self, a: &LatticeVector) -> i64 {
        let d = self.rank();
        let mut odd = false;
        for i in 0..d {
            if a.0[i].rem_euclid(2) == 1 && self.signs[i] == -1 {
                odd = !odd;
            }
            for j in i + 1..d {
                if self.delta[i][j] && (a.0[i] * a.0[j]).rem_euclid(2) == 1 {
                    odd = !odd;
                }
            }
        }
        if odd {
            -1
        } else {
            1
        }
    }

    fn map_fock(&self, p: &FockPolynomial) -> FockPolynomial {
        let d = self.rank();
        let mut out = FockPolynomial::zero();
        for (m, c) in p.terms() {
            let mut prod = FockPolynomial::constant(c.clone());
            for o in m.factors() {
                let mut lin = FockPolynomial::zero();
                for k in 0..d {
                    let s = self.sigma[k][o.index];
                    if s != 0 {
                        lin.add_term(FockMonomial::single(k, o.mode), Rat::from_integer(s.into()));
                    }
                }
                prod = prod.mul(&lin);
            }
            out.add_scaled(&prod, &Rat::one());
        }
        out
    }

    pub fn apply(&self, u: &VoaElement) -> VoaElement {
        let mut out = VoaElement::zero();
        for (a, p) in u.parts() {
            let s = Rat::from_integer(self.eta(a).into());
            out.add_part(&self.image(a), &self.map_fock(p), &s);
        }
        out
    }

    /// `self` after `first`.
    pub fn compose(&self, l: &EvenLattice, first: &Self) -> Result<Self> {
        let d = self.rank();
        let sigma: Vec<Vec<i64>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).map(|k| self.sigma[i][k] * first.sigma[k][j]).sum())
                    .collect()
            })
            .collect();
        let signs = (0..d)
            .map(|i| {
                let b = l.basis(i);
                first.eta(&b) * self.eta(&first.image(&b))
            })
            .collect();
        Self::new(l, sigma, signs)
    }

    pub fn inverse(&self, l: &EvenLattice) -> Result<Self> {
        let m = IntMatrix::from_i64(&self.sigma)?.to_rat().inverse()?;
        let inv = m
            .to_int()
            .ok_or_else(|| Error::NotIsometry("inverse is not integral".into()))?;
        let d = self.rank();
        let sigma: Vec<Vec<i64>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| i64::try_from(inv.get(i, j)).expect("small entries"))
                    .collect()
            })
            .collect();
        let probe = Self::new(l, sigma.clone(), vec![1; d])?;
        let signs = (0..d).map(|i| self.eta(&probe.image(&l.basis(i)))).collect();
        Self::new(l, sigma, signs)
    }

    pub fn is_identity(&self) -> bool {
        let d = self.rank();
        self.signs.iter().all(|&s| s == 1)
            && (0..d).all(|i| (0..d).all(|j| self.sigma[i][j] == i64::from(i == j)))
    }

    /// The action on the monomial coordinates of a weight space.
    pub fn matrix(&self, voa: &LatticeVoa, degree: u32) -> Result<LinearMap> {
        let space = voa.space(degree)?;
        let rows = (0..space.dim())
            .into_par_iter()
            .map(|i| space.coords(&self.apply(&space.basis_element(i))))
            .collect::<Result<Vec<_>>>()?;
        Ok(LinearMap::new(space.dim(), rows))
    }

    /// Checks g(e^a e^b) = g(e^a) g(e^b) on all pairs of basis vectors.
    pub fn verify(&self, l: &EvenLattice) -> Result<()> {
        let c = Cocycle::new(l);
        let d = self.rank();
        for i in 0..d {
            for j in 0..d {
                let (a, b) = (l.basis(i), l.basis(j));
                let lhs = c.sign(&a, &b) * self.eta(&(&a + &b));
                let rhs = self.eta(&a) * self.eta(&b) * c.sign(&self.image(&a), &self.image(&b));
                if lhs != rhs {
                    return Err(Error::Structural(format!(
                        "sign data inconsistent on e^{a} e^{b}"
                    )));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for LiftedIsometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sigma={:?} signs={:?}", self.sigma, self.signs)
    }
}

/// The standard lift of -1: e^a <-> e^{-a}, h -> -h.
pub fn theta(l: &EvenLattice) -> LiftedIsometry {
    let d = l.rank();
    let sigma = (0..d).map(|i| (0..d).map(|j| -i64::from(i == j)).collect()).collect();
    LiftedIsometry::new(l, sigma, vec![1; d]).expect("-1 is an isometry")
}

pub fn lift_isometry(l: &EvenLattice, sigma: Vec<Vec<i64>>, signs: Option<Vec<i64>>) -> Result<LiftedIsometry> {
    let signs = signs.unwrap_or_else(|| vec![1; l.rank()]);
    let g = LiftedIsometry::new(l, sigma, signs)?;
    g.verify(l)?;
    Ok(g)
}

/// All elements of the group generated by `gens`, identity first.
pub fn group_closure(l: &EvenLattice, gens: &[LiftedIsometry], limit: usize) -> Result<Vec<LiftedIsometry>> {
    let mut elems = vec![LiftedIsometry::identity(l)];
    let mut seen: std::collections::HashSet<LiftedIsometry> = elems.iter().cloned().collect();
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let h = g.compose(l, &elems[i])?;
            if seen.insert(h.clone()) {
                if elems.len() >= limit {
                    return Err(Error::invalid(format!("group has more than {limit} elements")));
                }
                elems.push(h);
            }
        }
        i += 1;
    }
    Ok(elems)
}
