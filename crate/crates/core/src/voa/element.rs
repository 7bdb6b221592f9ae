use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::exact::{EvenLattice, LatticeVector, Rat};
use crate::fock::{FockMonomial, FockPolynomial};

/// Finite rational combination of `monomial (x) e^charge` terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct VoaElement(BTreeMap<LatticeVector, FockPolynomial>);

impl VoaElement {
    pub fn zero() -> Self {
        VoaElement(BTreeMap::new())
    }

    pub fn vacuum(rank: usize) -> Self {
        Self::exp(LatticeVector::zero(rank))
    }

    /// The element e^alpha.
    pub fn exp(alpha: LatticeVector) -> Self {
        Self::from_part(alpha, FockPolynomial::one())
    }

    pub fn from_part(charge: LatticeVector, p: FockPolynomial) -> Self {
        let mut map = BTreeMap::new();
        if !p.is_zero() {
            map.insert(charge, p);
        }
        VoaElement(map)
    }

    pub fn term(charge: LatticeVector, m: FockMonomial, c: Rat) -> Self {
        Self::from_part(charge, FockPolynomial::monomial(m, c))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parts(&self) -> impl Iterator<Item = (&LatticeVector, &FockPolynomial)> {
        self.0.iter()
    }

    pub fn part(&self, charge: &LatticeVector) -> Option<&FockPolynomial> {
        self.0.get(charge)
    }

    pub fn charges(&self) -> impl Iterator<Item = &LatticeVector> {
        self.0.keys()
    }

    /// Every (charge, monomial, coefficient) triple.
    pub fn terms(&self) -> impl Iterator<Item = (&LatticeVector, &FockMonomial, &Rat)> {
        self.0
            .iter()
            .flat_map(|(a, p)| p.terms().map(move |(m, c)| (a, m, c)))
    }

    pub fn num_terms(&self) -> usize {
        self.0.values().map(FockPolynomial::len).sum()
    }

    pub fn add_part(&mut self, charge: &LatticeVector, p: &FockPolynomial, c: &Rat) {
        if p.is_zero() || c.is_zero() {
            return;
        }
        let entry = self
            .0
            .entry(charge.clone())
            .or_insert_with(FockPolynomial::zero);
        entry.add_scaled(p, c);
        if entry.is_zero() {
            self.0.remove(charge);
        }
    }

    pub fn add_term(&mut self, charge: &LatticeVector, m: FockMonomial, c: Rat) {
        self.add_part(charge, &FockPolynomial::monomial(m, Rat::one()), &c);
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Rat) {
        for (a, p) in &other.0 {
            self.add_part(a, p, c);
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Rat::one());
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-Rat::one());
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        VoaElement(self.0.iter().map(|(a, p)| (a.clone(), p.scale(c))).collect())
    }

    /// Multiplies the Fock part of every term by `p`.
    pub fn mul_fock(&self, p: &FockPolynomial) -> Self {
        let mut out = Self::zero();
        for (a, q) in &self.0 {
            out.add_part(a, &q.mul(p), &Rat::one());
        }
        out
    }

    /// Weight of a term: Fock degree plus half the charge norm.
    pub fn term_weight(l: &EvenLattice, charge: &LatticeVector, m: &FockMonomial) -> i64 {
        i64::from(m.degree()) + l.norm(charge) / 2
    }

    /// Common weight of all terms; `None` for zero or inhomogeneous elements.
    pub fn weight(&self, l: &EvenLattice) -> Option<i64> {
        let mut w = None;
        for (a, m, _) in self.terms() {
            let t = Self::term_weight(l, a, m);
            match w {
                None => w = Some(t),
                Some(x) if x != t => return None,
                _ => {}
            }
        }
        w
    }

    /// The weight-`n` component.
    pub fn component(&self, l: &EvenLattice, n: i64) -> Self {
        let mut out = Self::zero();
        for (a, m, c) in self.terms() {
            if Self::term_weight(l, a, m) == n {
                out.add_term(a, m.clone(), c.clone());
            }
        }
        out
    }

    /// Coefficient of the vacuum.
    pub fn vacuum_coefficient(&self) -> Rat {
        self.0
            .iter()
            .find(|(a, _)| a.is_zero())
            .map(|(_, p)| p.coeff(&FockMonomial::one()))
            .unwrap_or_else(Rat::zero)
    }

    pub fn is_integral(&self) -> bool {
        self.terms().all(|(_, _, c)| crate::exact::is_integral(c))
    }
}

impl fmt::Display for VoaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(a, p)| {
                if a.is_zero() {
                    format!("[{p}]")
                } else {
                    format!("[{p}] e^{a}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
