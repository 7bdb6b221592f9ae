use num_traits::One;

use super::{colored_partitions, FockMonomial, FockPolynomial, Partition};
use crate::exact::{factorial, EvenLattice, LatticeVector, Rat};

pub fn lattice_coords(v: &LatticeVector) -> Vec<Rat> {
    v.0.iter().map(|&c| Rat::from_integer(c.into())).collect()
}

/// Coefficients s_0, ..., s_n of exp(sum_{k>0} h(-k) z^k / k) for the vector
/// `h` with the given coordinates.
pub fn e_minus_series(coords: &[Rat], n: u32) -> Vec<FockPolynomial> {
    let n = n as usize;
    let mut acc = vec![FockPolynomial::zero(); n + 1];
    acc[0] = FockPolynomial::one();
    for k in 1..=n {
        let x = FockPolynomial::linear(coords, k as u32).scale(&Rat::new(1.into(), (k as i64).into()));
        if x.is_zero() {
            continue;
        }
        // exp(x z^k) truncated at z^n.
        let mut factor = vec![FockPolynomial::zero(); n + 1];
        let mut pow = FockPolynomial::one();
        let mut m = 0usize;
        while m * k <= n {
            factor[m * k] = pow.scale(&Rat::new(1.into(), factorial(m as u64)));
            pow = pow.mul(&x);
            m += 1;
        }
        let mut next = vec![FockPolynomial::zero(); n + 1];
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in factor.iter().enumerate().take(n + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                next[i + j].add_scaled(&a.mul(b), &Rat::one());
            }
        }
        acc = next;
    }
    acc
}

pub fn e_minus_lattice(alpha: &LatticeVector, n: u32) -> Vec<FockPolynomial> {
    e_minus_series(&lattice_coords(alpha), n)
}

/// Signed multisets of indices in the expansion of det(s_{l_i + j - i}).
///
/// Each term lists the nonzero indices (sorted, descending); index 0 stands
/// for s_0 = 1 and is dropped.
pub fn jacobi_trudi_terms(lambda: &Partition) -> Vec<(i64, Vec<u32>)> {
    let parts = lambda.parts();
    let k = parts.len();
    let mut terms: std::collections::BTreeMap<Vec<u32>, i64> = std::collections::BTreeMap::new();
    let mut perm: Vec<usize> = (0..k).collect();
    permute(&mut perm, 0, 1, &mut |p, sign| {
        let mut idx = Vec::with_capacity(k);
        for (i, &pi) in p.iter().enumerate() {
            let v = parts[i] as i64 + pi as i64 - i as i64;
            if v < 0 {
                return;
            }
            if v > 0 {
                idx.push(v as u32);
            }
        }
        idx.sort_unstable_by(|a, b| b.cmp(a));
        *terms.entry(idx).or_insert(0) += sign;
    });
    terms.into_iter().filter(|(_, c)| *c != 0).map(|(t, c)| (c, t)).collect()
}

fn permute(p: &mut Vec<usize>, start: usize, sign: i64, f: &mut dyn FnMut(&[usize], i64)) {
    if start == p.len() {
        f(p, sign);
        return;
    }
    for i in start..p.len() {
        p.swap(start, i);
        permute(p, start + 1, if i == start { sign } else { -sign }, f);
        p.swap(start, i);
    }
}

/// Jacobi-Trudi element s_lambda(h) = det(s_{h, l_i + j - i}).
pub fn schur_element(coords: &[Rat], lambda: &Partition) -> FockPolynomial {
    let top = lambda.parts().first().copied().unwrap_or(0) + lambda.len() as u32;
    let s = e_minus_series(coords, top);
    schur_from_series(&s, lambda)
}

pub(crate) fn schur_from_series(s: &[FockPolynomial], lambda: &Partition) -> FockPolynomial {
    let mut out = FockPolynomial::zero();
    for (sign, idx) in jacobi_trudi_terms(lambda) {
        let prod = idx
            .iter()
            .fold(FockPolynomial::one(), |acc, &i| acc.mul(&s[i as usize]));
        out.add_scaled(&prod, &Rat::from_integer(sign.into()));
    }
    out
}

/// The products s_{g_{i_1}, n_1} ... s_{g_{i_k}, n_k} of total degree `degree`,
/// one per colored partition, in canonical label order.
pub fn m1z_basis(l: &EvenLattice, degree: u32) -> Vec<FockPolynomial> {
    let d = l.rank();
    let series: Vec<Vec<FockPolynomial>> =
        (0..d).map(|i| e_minus_lattice(&l.basis(i), degree)).collect();
    colored_partitions(d, degree)
        .iter()
        .map(|label| s_product(label, &series))
        .collect()
}

/// Product over the factors g_i(-n) of `label` of the series entry s_{v_i, n}.
pub(crate) fn s_product(label: &FockMonomial, series: &[Vec<FockPolynomial>]) -> FockPolynomial {
    label.factors().iter().fold(FockPolynomial::one(), |acc, o| {
        acc.mul(&series[o.index][o.mode as usize])
    })
}
