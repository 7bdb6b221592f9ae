use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{FockMonomial, Oscillator};
use crate::exact::Rat;

/// Finite rational combination of Fock monomials; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FockPolynomial(BTreeMap<FockMonomial, Rat>);

impl FockPolynomial {
    pub fn zero() -> Self {
        FockPolynomial(BTreeMap::new())
    }

    pub fn one() -> Self {
        Self::monomial(FockMonomial::one(), Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(FockMonomial::one(), c)
    }

    pub fn monomial(m: FockMonomial, c: Rat) -> Self {
        let mut map = BTreeMap::new();
        if !c.is_zero() {
            map.insert(m, c);
        }
        FockPolynomial(map)
    }

    /// `h(-mode)` for `h` with the given coordinates in the lattice basis.
    pub fn linear(coords: &[Rat], mode: u32) -> Self {
        let mut map = BTreeMap::new();
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                map.insert(FockMonomial::single(i, mode), c.clone());
            }
        }
        FockPolynomial(map)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FockMonomial, &Rat)> {
        self.0.iter()
    }

    pub fn coeff(&self, m: &FockMonomial) -> Rat {
        self.0.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, m: FockMonomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Rat) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.0 {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        FockPolynomial(self.0.iter().map(|(m, v)| (m.clone(), v * c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.0 {
            for (b, y) in &other.0 {
                out.add_term(a.mul(b), x * y);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Degree of the first term; `None` for zero or mixed degrees.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.0.keys().map(FockMonomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn max_degree(&self) -> u32 {
        self.0.keys().map(FockMonomial::degree).max().unwrap_or(0)
    }

    /// Applies a derivation sending `g_i(-n)` to `image(i, n)` (a scalar).
    pub fn derive(&self, image: impl Fn(Oscillator) -> Rat) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.0 {
            for (o, k) in m.grouped() {
                let v = image(o);
                if v.is_zero() {
                    continue;
                }
                let rest = m.remove(o).expect("factor present");
                out.add_term(rest, c * v * Rat::from_integer(k.into()));
            }
        }
        out
    }
}

/// Bilinear product of creation-operator polynomials.
pub fn fock_mul(p: &FockPolynomial, q: &FockPolynomial) -> FockPolynomial {
    p.mul(q)
}

impl Add for &FockPolynomial {
    type Output = FockPolynomial;
    fn add(self, o: &FockPolynomial) -> FockPolynomial {
        let mut out = self.clone();
        out.add_scaled(o, &Rat::one());
        out
    }
}

impl Sub for &FockPolynomial {
    type Output = FockPolynomial;
    fn sub(self, o: &FockPolynomial) -> FockPolynomial {
        let mut out = self.clone();
        out.add_scaled(o, &-Rat::one());
        out
    }
}

impl Neg for &FockPolynomial {
    type Output = FockPolynomial;
    fn neg(self) -> FockPolynomial {
        self.scale(&-Rat::one())
    }
}

impl Mul for &FockPolynomial {
    type Output = FockPolynomial;
    fn mul(self, o: &FockPolynomial) -> FockPolynomial {
        FockPolynomial::mul(self, o)
    }
}

impl FromIterator<(FockMonomial, Rat)> for FockPolynomial {
    fn from_iter<I: IntoIterator<Item = (FockMonomial, Rat)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (m, c) in iter {
            out.add_term(m, c);
        }
        out
    }
}

impl fmt::Display for FockPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(m, c)| {
                if m.is_one() {
                    c.to_string()
                } else if c.is_one() {
                    m.to_string()
                } else {
                    format!("{c} {m}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
