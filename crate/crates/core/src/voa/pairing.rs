use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;

use super::{BasisElement, LatticeVoa, SymbolicElement, VoaElement};
use crate::error::Error;
use crate::exact::{binomial_rat, EvenLattice, Int, LatticeVector, Rat};
use crate::fock::FockMonomial;
use crate::registry::Registry;

/// Which invariant pairing: (e^a, e^b) = delta(a, -b) or (e^a | e^b) = delta(a, b).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Form {
    Bilinear,
    Hermitian,
}

impl Form {
    /// Charge that pairs nontrivially with `charge`.
    pub fn partner(self, charge: &LatticeVector) -> LatticeVector {
        match self {
            Form::Bilinear => -charge,
            Form::Hermitian => charge.clone(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Form::Bilinear => "bilinear",
            Form::Hermitian => "hermitian",
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Form {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "bilinear" => Ok(Form::Bilinear),
            "hermitian" => Ok(Form::Hermitian),
            other => Err(Error::invalid(format!("unknown form '{other}'"))),
        }
    }
}

fn permanent(m: &[Vec<i128>]) -> i128 {
    let k = m.len();
    let mut dp = vec![0i128; 1 << k];
    dp[0] = 1;
    for mask in 0usize..(1 << k) {
        if dp[mask] == 0 {
            continue;
        }
        let row = mask.count_ones() as usize;
        if row == k {
            continue;
        }
        for (c, &x) in m[row].iter().enumerate() {
            if mask & (1 << c) == 0 && x != 0 {
                dp[mask | (1 << c)] += dp[mask] * x;
            }
        }
    }
    dp[(1 << k) - 1]
}

/// Pairing of two Fock monomials, ignoring the charge factor.
pub fn monomial_pairing(l: &EvenLattice, a: &FockMonomial, b: &FockMonomial, form: Form) -> Int {
    if a.degree() != b.degree() || a.len() != b.len() {
        return Int::zero();
    }
    let mut by_mode: BTreeMap<u32, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for o in a.factors() {
        by_mode.entry(o.mode).or_default().0.push(o.index);
    }
    for o in b.factors() {
        by_mode.entry(o.mode).or_default().1.push(o.index);
    }
    let g = l.gram();
    let mut total = Int::one();
    for (mode, (left, right)) in by_mode {
        if left.len() != right.len() {
            return Int::zero();
        }
        let m: Vec<Vec<i128>> = left
            .iter()
            .map(|&i| right.iter().map(|&j| i128::from(mode) * i128::from(g[i][j])).collect())
            .collect();
        let p = permanent(&m);
        if p == 0 {
            return Int::zero();
        }
        total *= Int::from(p);
    }
    if form == Form::Bilinear && a.len() % 2 == 1 {
        total = -total;
    }
    total
}

/// Pairing by contraction: annihilators are moved across with [a(m), b(n)] = m (a, b) delta_{m+n,0}.
pub fn pair(voa: &LatticeVoa, u: &VoaElement, v: &VoaElement, form: Form) -> Rat {
    let l = voa.lattice();
    let mut s = Rat::zero();
    for (a, p) in u.parts() {
        let Some(q) = v.part(&form.partner(a)) else {
            continue;
        };
        for (m1, c1) in p.terms() {
            for (m2, c2) in q.terms() {
                let x = monomial_pairing(l, m1, m2, form);
                if !x.is_zero() {
                    s += c1 * c2 * Rat::from_integer(x);
                }
            }
        }
    }
    s
}

/// Coefficient of prod w_i^{m_i} prod x_j^{n_j} in prod_{i,j} (1 - w_i x_j)^{(a_i, b_j)}
/// (bilinear, times delta(alpha, -beta)) or with exponent -(a_i, b_j) (hermitian, times
/// delta(alpha, beta)).
#[allow(clippy::too_many_arguments)]
pub fn pair_genfun(
    voa: &LatticeVoa,
    alphas: &[Vec<Rat>],
    ms: &[u32],
    betas: &[Vec<Rat>],
    ns: &[u32],
    alpha: &LatticeVector,
    beta: &LatticeVector,
    form: Form,
) -> Rat {
    if &form.partner(alpha) != beta {
        return Rat::zero();
    }
    let total_m: u32 = ms.iter().sum();
    let total_n: u32 = ns.iter().sum();
    if total_m != total_n {
        return Rat::zero();
    }
    let k = alphas.len();
    let l = betas.len();
    let exps: Vec<Vec<Rat>> = alphas
        .iter()
        .map(|a| {
            betas
                .iter()
                .map(|b| {
                    let e = voa.inner_rat(a, b);
                    match form {
                        Form::Bilinear => e,
                        Form::Hermitian => -e,
                    }
                })
                .collect()
        })
        .collect();
    let mut rows: Vec<u32> = ms.to_vec();
    let mut cols: Vec<u32> = ns.to_vec();
    let mut acc = Rat::zero();
    tables(0, 0, k, l, &mut rows, &mut cols, &exps, Rat::one(), &mut acc);
    acc
}

/// Sums the product of cell weights over all nonnegative integer tables with the given margins.
#[allow(clippy::too_many_arguments)]
fn tables(
    i: usize,
    j: usize,
    k: usize,
    l: usize,
    rows: &mut [u32],
    cols: &mut [u32],
    exps: &[Vec<Rat>],
    weight: Rat,
    acc: &mut Rat,
) {
    if i == k {
        if cols.iter().all(|&c| c == 0) {
            *acc += weight;
        }
        return;
    }
    if j == l {
        if rows[i] == 0 {
            tables(i + 1, 0, k, l, rows, cols, exps, weight, acc);
        }
        return;
    }
    let max = rows[i].min(cols[j]);
    // The last column must absorb the whole remaining row sum.
    let range: Vec<u32> = if j + 1 == l {
        if rows[i] <= cols[j] {
            vec![rows[i]]
        } else {
            vec![]
        }
    } else {
        (0..=max).collect()
    };
    for t in range {
        let mut c = binomial_rat(&exps[i][j], t);
        if t % 2 == 1 {
            c = -c;
        }
        if c.is_zero() {
            continue;
        }
        rows[i] -= t;
        cols[j] -= t;
        tables(i, j + 1, k, l, rows, cols, exps, &weight * &c, acc);
        rows[i] += t;
        cols[j] += t;
    }
}

/// Pairing of two symbolic elements through generating-function extraction.
pub fn pair_symbolic(voa: &LatticeVoa, a: &SymbolicElement, b: &SymbolicElement, form: Form) -> Rat {
    if form.partner(&a.charge) != b.charge {
        return Rat::zero();
    }
    let mut s = Rat::zero();
    for ta in &a.terms {
        let (av, am): (Vec<Vec<Rat>>, Vec<u32>) = ta.factors.iter().cloned().unzip();
        for tb in &b.terms {
            let (bv, bn): (Vec<Vec<Rat>>, Vec<u32>) = tb.factors.iter().cloned().unzip();
            let x = pair_genfun(voa, &av, &am, &bv, &bn, &a.charge, &b.charge, form);
            if !x.is_zero() {
                s += &ta.coeff * &tb.coeff * x;
            }
        }
    }
    s
}

/// A way of evaluating the pairing on basis elements.
pub trait PairingBackend: Send + Sync {
    fn name(&self) -> &'static str;
    fn pair(&self, voa: &LatticeVoa, a: &BasisElement, b: &BasisElement, form: Form) -> Rat;
}

pub struct ContractionPairing;

impl PairingBackend for ContractionPairing {
    fn name(&self) -> &'static str {
        "contraction"
    }

    fn pair(&self, voa: &LatticeVoa, a: &BasisElement, b: &BasisElement, form: Form) -> Rat {
        if form.partner(&a.charge) != b.charge {
            return Rat::zero();
        }
        pair(voa, &a.element(voa), &b.element(voa), form)
    }
}

pub struct GenfunPairing;

impl PairingBackend for GenfunPairing {
    fn name(&self) -> &'static str {
        "genfun"
    }

    fn pair(&self, voa: &LatticeVoa, a: &BasisElement, b: &BasisElement, form: Form) -> Rat {
        if form.partner(&a.charge) != b.charge {
            return Rat::zero();
        }
        pair_symbolic(voa, &a.symbolic(voa), &b.symbolic(voa), form)
    }
}

pub fn pairing_backends() -> Registry<dyn PairingBackend> {
    let mut r: Registry<dyn PairingBackend> = Registry::new();
    r.register("contraction", Box::new(ContractionPairing));
    r.register("genfun", Box::new(GenfunPairing));
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat_int, EvenLattice};
    use crate::fock::Oscillator;

    fn a1() -> LatticeVoa {
        LatticeVoa::new(EvenLattice::named(vec![vec![2]], "A1").unwrap()).unwrap()
    }

    fn mono(modes: &[u32]) -> FockMonomial {
        FockMonomial::new(modes.iter().map(|&m| Oscillator::new(0, m)).collect())
    }

    #[test]
    fn exponential_rules() {
        let voa = a1();
        let a = LatticeVector(vec![1]);
        let ea = VoaElement::exp(a.clone());
        let ema = VoaElement::exp(-&a);
        assert_eq!(pair(&voa, &ea, &ema, Form::Bilinear), rat_int(1));
        assert_eq!(pair(&voa, &ea, &ea, Form::Hermitian), rat_int(1));
        assert_eq!(pair(&voa, &ea, &ea, Form::Bilinear), rat_int(0));
    }

    #[test]
    fn contraction_values() {
        let l = EvenLattice::named(vec![vec![2]], "A1").unwrap();
        assert_eq!(monomial_pairing(&l, &mono(&[1]), &mono(&[1]), Form::Hermitian), Int::from(2));
        assert_eq!(monomial_pairing(&l, &mono(&[1]), &mono(&[1]), Form::Bilinear), Int::from(-2));
        assert_eq!(monomial_pairing(&l, &mono(&[1, 1]), &mono(&[1, 1]), Form::Hermitian), Int::from(8));
        assert_eq!(monomial_pairing(&l, &mono(&[2]), &mono(&[2]), Form::Hermitian), Int::from(4));
        assert_eq!(monomial_pairing(&l, &mono(&[2]), &mono(&[1, 1]), Form::Hermitian), Int::from(0));
    }

    #[test]
    fn genfun_examples() {
        let voa = a1();
        let z = LatticeVector(vec![0]);
        let g = vec![rat_int(1)];
        // (1 - w x)^{-2}: coefficient of wx is 2 = (g, g).
        let h = pair_genfun(&voa, &[g.clone()], &[1], &[g.clone()], &[1], &z, &z, Form::Hermitian);
        assert_eq!(h, rat_int(2));
        let off = pair_genfun(&voa, &[g.clone()], &[1], &[g.clone()], &[2], &z, &z, Form::Hermitian);
        assert!(off.is_zero());
        let a = LatticeVector(vec![1]);
        let b = pair_genfun(&voa, &[], &[], &[], &[], &a, &a, Form::Bilinear);
        assert!(b.is_zero());
    }
}
