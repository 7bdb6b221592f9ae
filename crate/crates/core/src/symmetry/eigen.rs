use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{AbelianInvariants, Int, LinearMap, Rat, RatRow, ZModule};

/// Eigenmodules of a commuting family of involutions on a module A, and the
/// quotient of A by their sum.
#[derive(Clone, Debug, Serialize)]
pub struct CharacterSplit {
    /// One sign per involution.
    pub characters: Vec<Vec<i8>>,
    #[serde(skip)]
    pub modules: Vec<ZModule>,
    pub ranks: Vec<usize>,
    pub quotient: AbelianInvariants,
    /// For a single involution: the number of size-2 Jordan blocks mod 2.
    pub jordan_r: Option<usize>,
}

fn scaled(t: &LinearMap, s: i8) -> LinearMap {
    if s == 1 {
        return t.clone();
    }
    let m = t.to_matrix();
    LinearMap::from_fn(m.rows(), m.cols(), |i| {
        t.image_of(i).iter().map(|(c, v)| (*c, -v)).collect()
    })
}

fn same(a: &RatRow, b: &RatRow) -> bool {
    let nz = |r: &RatRow| r.iter().filter(|(_, v)| !v.is_zero()).map(|(c, v)| (*c, v.clone())).collect::<Vec<_>>();
    nz(a) == nz(b)
}

/// Integer matrix of `t` in the basis of `a` (row i = coefficients of t(b_i)).
fn local_matrix(a: &ZModule, t: &LinearMap) -> Result<Vec<Vec<Int>>> {
    a.basis()
        .iter()
        .map(|b| {
            let c = a
                .coefficients(&t.apply(b))
                .ok_or_else(|| Error::NotInvariant("involution does not preserve the module".into()))?;
            let mut row = vec![Int::zero(); a.rank()];
            for (j, v) in c.into_iter().enumerate() {
                row[j] = v;
            }
            Ok(row)
        })
        .collect()
}

/// Rank over GF(2).
fn rank_mod2(m: &[Vec<Int>]) -> usize {
    let two = Int::from(2);
    let mut rows: Vec<Vec<bool>> = m
        .iter()
        .map(|r| r.iter().map(|v| !(v % &two).is_zero()).collect())
        .collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][c]) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && r[c] {
                for (x, y) in r.iter_mut().zip(&pivot) {
                    *x ^= *y;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn eigen_split(a: &ZModule, involutions: &[LinearMap]) -> Result<CharacterSplit> {
    for (i, t) in involutions.iter().enumerate() {
        for b in a.basis() {
            let once = t.apply(&b);
            if !same(&t.apply(&once), &b) {
                return Err(Error::invalid(format!("map {i} is not an involution on the module")));
            }
            if !a.contains_vector(&once) {
                return Err(Error::NotInvariant(format!("map {i} does not preserve the module")));
            }
            for (j, s) in involutions.iter().enumerate().skip(i + 1) {
                if !same(&s.apply(&once), &t.apply(&s.apply(&b))) {
                    return Err(Error::invalid(format!("maps {i} and {j} do not commute")));
                }
            }
        }
    }
    let k = involutions.len();
    let mut characters = Vec::with_capacity(1 << k);
    let mut modules = Vec::with_capacity(1 << k);
    for mask in 0..(1usize << k) {
        let chi: Vec<i8> = (0..k).map(|i| if mask & (1 << i) == 0 { 1 } else { -1 }).collect();
        let maps: Vec<LinearMap> = involutions
            .iter()
            .zip(&chi)
            .map(|(t, &s)| scaled(t, s))
            .collect();
        modules.push(a.fixed(&maps)?);
        characters.push(chi);
    }
    let tel = ZModule::sum_all(a.dim(), &modules);
    let quotient = tel.quotient_invariants(a)?;
    let jordan_r = if k == 1 {
        let mut m = local_matrix(a, &involutions[0])?;
        for (i, row) in m.iter_mut().enumerate() {
            row[i] -= Int::one();
        }
        Some(rank_mod2(&m))
    } else {
        None
    };
    let ranks = modules.iter().map(ZModule::rank).collect();
    Ok(CharacterSplit {
        characters,
        modules,
        ranks,
        quotient,
        jordan_r,
    })
}

/// The coordinate swap e_i (x) e_j -> e_j (x) e_i on Z^n (x) Z^n.
pub fn tensor_swap(n: usize) -> LinearMap {
    LinearMap::from_fn(n * n, n * n, |k| {
        let (i, j) = (k / n, k % n);
        RatRow::from([(j * n + i, Rat::one())])
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    #[test]
    fn swap_on_plane() {
        let a = ZModule::standard(2);
        let t = LinearMap::from_fn(2, 2, |i| RatRow::from([(1 - i, Rat::one())]));
        let s = eigen_split(&a, &[t]).unwrap();
        assert_eq!(s.jordan_r, Some(1));
        assert_eq!(s.quotient.divisors, vec![int(2)]);
        let id = eigen_split(&a, &[LinearMap::identity(2)]).unwrap();
        assert!(id.quotient.is_trivial());
    }

    #[test]
    fn tensor_square_swap() {
        let s = eigen_split(&ZModule::standard(9), &[tensor_swap(3)]).unwrap();
        assert_eq!(s.quotient.divisors, vec![int(2); 3]);
        assert_eq!(s.jordan_r, Some(3));
    }

    #[test]
    fn rejects_non_involution() {
        let t = LinearMap::from_fn(1, 1, |_| RatRow::from([(0, Rat::from_integer(2.into()))]));
        assert!(eigen_split(&ZModule::standard(1), &[t]).is_err());
    }
}
