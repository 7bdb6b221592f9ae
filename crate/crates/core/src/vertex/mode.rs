use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::exact::{binomial, LatticeVector, Rat};
use crate::fock::{FockMonomial, FockPolynomial, Oscillator};
use crate::voa::{LatticeVoa, VoaElement};

/// Fock-valued Laurent polynomial in z, keyed by the exponent.
type Laurent = BTreeMap<i64, FockPolynomial>;

fn push(w: &mut Laurent, e: i64, p: FockPolynomial) {
    if p.is_zero() {
        return;
    }
    let slot = w.entry(e).or_default();
    slot.add_scaled(&p, &Rat::one());
    if slot.is_zero() {
        w.remove(&e);
    }
}

fn rat(v: i64) -> Rat {
    Rat::from_integer(v.into())
}

/// The annihilation part of d^{(n-1)}/dz h(z) for h = g_i, n = `o.mode`:
/// sum_{m >= 0} (-1)^{n-1} C(m+n-1, n-1) h(m) z^{-m-n}, acting on a charge-beta vector.
fn annihilate(voa: &LatticeVoa, w: &Laurent, o: Oscillator, beta_pairings: &[i64]) -> Laurent {
    let g = voa.lattice().gram();
    let n = i64::from(o.mode);
    let sign = if n % 2 == 1 { 1 } else { -1 };
    let mut out = Laurent::new();
    for (&e, q) in w {
        let zero_mode = beta_pairings[o.index];
        if zero_mode != 0 {
            push(&mut out, e - n, q.scale(&rat(sign * zero_mode)));
        }
        let top = q.terms().flat_map(|(m, _)| m.factors().iter().map(|f| f.mode)).max().unwrap_or(0);
        for m in 1..=top {
            let d = q.derive(|f| {
                if f.mode == m {
                    rat(i64::from(m) * g[o.index][f.index])
                } else {
                    Rat::zero()
                }
            });
            if d.is_zero() {
                continue;
            }
            let c = binomial(u64::from(m) + n as u64 - 1, n as u64 - 1) * sign;
            push(&mut out, e - i64::from(m) - n, d.scale(&Rat::from_integer(c)));
        }
    }
    out
}

/// E^+(-alpha, z): substitutes g_j(-n) -> g_j(-n) - (alpha, g_j) z^{-n}.
fn translate(w: &Laurent, alpha_pairings: &[i64]) -> Laurent {
    if alpha_pairings.iter().all(|&p| p == 0) {
        return w.clone();
    }
    let mut out = Laurent::new();
    for (&e, q) in w {
        for (m, c) in q.terms() {
            // Each group (o, k) expands as sum_t C(k, t) o^{k-t} (-p)^t z^{-t n}.
            let mut acc: Vec<(i64, Vec<Oscillator>, Rat)> = vec![(e, Vec::new(), c.clone())];
            for (o, k) in m.grouped() {
                let p = alpha_pairings[o.index];
                let mut next = Vec::new();
                for (ex, fs, cf) in &acc {
                    for t in 0..=k {
                        if t > 0 && p == 0 {
                            break;
                        }
                        let mut f = fs.clone();
                        f.extend(std::iter::repeat(o).take((k - t) as usize));
                        let coef = cf
                            * Rat::from_integer(binomial(u64::from(k), u64::from(t)))
                            * rat(-p).pow(t as i32);
                        next.push((ex - i64::from(t) * i64::from(o.mode), f, coef));
                    }
                }
                acc = next;
            }
            for (ex, fs, cf) in acc {
                push(&mut out, ex, FockPolynomial::monomial(FockMonomial::new(fs), cf));
            }
        }
    }
    out
}

/// Power series sum_{q <= n} K_q z^q for prod_a C_a(z) * E^-(-alpha, z), where
/// C_a(z) = sum_{t >= 0} C(t+n_a-1, n_a-1) h_a(-(t+n_a)) z^t.
fn creation(voa: &LatticeVoa, alpha: &LatticeVector, factors: &[Oscillator], n: usize) -> Vec<FockPolynomial> {
    let series = voa.series(alpha, n as u32);
    let mut acc: Vec<FockPolynomial> = series[..=n].to_vec();
    for o in factors {
        let na = u64::from(o.mode);
        let c: Vec<FockPolynomial> = (0..=n)
            .map(|t| {
                FockPolynomial::monomial(
                    FockMonomial::single(o.index, o.mode + t as u32),
                    Rat::from_integer(binomial(t as u64 + na - 1, na - 1)),
                )
            })
            .collect();
        let mut next = vec![FockPolynomial::zero(); n + 1];
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in c.iter().enumerate().take(n + 1 - i) {
                next[i + j].add_scaled(&a.mul(b), &Rat::one());
            }
        }
        acc = next;
    }
    acc
}

/// The coefficients of z^{-k-1}, k in `ks`, in Y(m e^alpha, z) q e^beta, without the
/// cocycle sign.
fn mode_terms(
    voa: &LatticeVoa,
    alpha: &LatticeVector,
    m: &FockMonomial,
    beta: &LatticeVector,
    q: &FockPolynomial,
    ks: &[i64],
) -> Vec<FockPolynomial> {
    let l = voa.lattice();
    let ab = l.inner(alpha, beta);
    let alpha_pairings = l.pairings(alpha);
    let beta_pairings = l.pairings(beta);
    let factors = m.factors();
    let r = factors.len();
    let mut base = Laurent::new();
    base.insert(ab, q.clone());
    let base = translate(&base, &alpha_pairings);
    let mut out = vec![FockPolynomial::zero(); ks.len()];
    for mask in 0u32..(1 << r) {
        let mut w = base.clone();
        let mut rest = Vec::new();
        for (a, &o) in factors.iter().enumerate() {
            if mask & (1 << a) != 0 {
                w = annihilate(voa, &w, o, &beta_pairings);
                if w.is_empty() {
                    break;
                }
            } else {
                rest.push(o);
            }
        }
        if w.is_empty() {
            continue;
        }
        // Creation coefficient -k-1-e for each exponent e.
        let top = ks
            .iter()
            .filter_map(|&k| w.keys().map(|&e| -k - 1 - e).max())
            .max()
            .unwrap_or(-1);
        if top < 0 {
            continue;
        }
        let kc = creation(voa, alpha, &rest, top as usize);
        for (slot, &k) in out.iter_mut().zip(ks) {
            for (&e, p) in &w {
                let qn = -k - 1 - e;
                if qn >= 0 && !kc[qn as usize].is_zero() {
                    slot.add_scaled(&kc[qn as usize].mul(p), &Rat::one());
                }
            }
        }
    }
    out
}

/// The mode u_k v.
pub fn vertex_mode(voa: &LatticeVoa, u: &VoaElement, k: i64, v: &VoaElement) -> VoaElement {
    vertex_modes(voa, u, &[k], v).pop().expect("one mode")
}

/// u_k v for each k in `ks`, sharing the expansion of Y(u, z) v.
pub fn vertex_modes(voa: &LatticeVoa, u: &VoaElement, ks: &[i64], v: &VoaElement) -> Vec<VoaElement> {
    let mut jobs = Vec::new();
    for (alpha, p) in u.parts() {
        for (beta, q) in v.parts() {
            for (m, c) in p.terms() {
                jobs.push((alpha, m, c, beta, q));
            }
        }
    }
    type Job<'a> = (&'a LatticeVector, &'a FockMonomial, &'a Rat, &'a LatticeVector, &'a FockPolynomial);
    let run = |&(alpha, m, c, beta, q): &Job| {
        let t = mode_terms(voa, alpha, m, beta, q, ks);
        let sign = rat(voa.cocycle().sign(alpha, beta));
        (alpha + beta, t, c * sign)
    };
    let parts: Vec<_> = if jobs.len() > 32 {
        jobs.par_iter().map(run).collect()
    } else {
        jobs.iter().map(run).collect()
    };
    let mut out = vec![VoaElement::zero(); ks.len()];
    for (target, ts, c) in parts {
        for (slot, t) in out.iter_mut().zip(ts) {
            if !t.is_zero() {
                slot.add_part(&target, &t, &c);
            }
        }
    }
    out
}

/// Nonzero modes u_k v landing in weights `0..=max_weight`, highest weight first.
/// Inhomogeneous inputs give nothing.
pub fn modes_into(
    voa: &LatticeVoa,
    u: &VoaElement,
    v: &VoaElement,
    max_weight: i64,
) -> Vec<(i64, VoaElement)> {
    let l = voa.lattice();
    let (Some(a), Some(b)) = (u.weight(l), v.weight(l)) else {
        return Vec::new();
    };
    let ks: Vec<i64> = (0..=max_weight).rev().map(|n| a + b - n - 1).collect();
    ks.iter()
        .copied()
        .zip(vertex_modes(voa, u, &ks, v))
        .filter(|(_, w)| !w.is_zero())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat_int, EvenLattice};

    fn a1() -> LatticeVoa {
        LatticeVoa::new(EvenLattice::named(vec![vec![2]], "A1").unwrap()).unwrap()
    }

    #[test]
    fn vacuum_is_identity() {
        let voa = a1();
        let g = VoaElement::term(LatticeVector(vec![1]), FockMonomial::single(0, 2), rat_int(3));
        assert_eq!(vertex_mode(&voa, &voa.vacuum(), -1, &g), g);
        assert!(vertex_mode(&voa, &voa.vacuum(), 0, &g).is_zero());
        // v_{-1} vac = v
        assert_eq!(vertex_mode(&voa, &g, -1, &voa.vacuum()), g);
    }

    #[test]
    fn exponential_products() {
        let voa = a1();
        let a = LatticeVector(vec![1]);
        let ea = VoaElement::exp(a.clone());
        let ema = VoaElement::exp(-&a);
        let eps = rat_int(voa.cocycle().sign(&a, &(-&a)));
        let got = vertex_mode(&voa, &ea, -1, &ema);
        let s2 = voa.series(&a, 2)[2].clone();
        assert_eq!(got, VoaElement::from_part(LatticeVector(vec![0]), s2.scale(&eps)));
        assert_eq!(vertex_mode(&voa, &ea, 1, &ema), voa.vacuum().scale(&eps));
        for k in -1..4 {
            assert!(vertex_mode(&voa, &ea, k, &ea).is_zero());
        }
    }

    #[test]
    fn heisenberg_modes() {
        let voa = a1();
        let h = VoaElement::term(LatticeVector(vec![0]), FockMonomial::single(0, 1), rat_int(1));
        // h_0 e^a = (h, a) e^a and h_1 h = (h, h) vac.
        let ea = VoaElement::exp(LatticeVector(vec![1]));
        assert_eq!(vertex_mode(&voa, &h, 0, &ea), ea.scale(&rat_int(2)));
        assert_eq!(vertex_mode(&voa, &h, 1, &h), voa.vacuum().scale(&rat_int(2)));
        assert!(vertex_mode(&voa, &h, 0, &h).is_zero());
    }
}
