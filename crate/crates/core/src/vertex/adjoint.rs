use num_traits::Zero;
use serde::Serialize;

use super::{omega, vertex_mode, virasoro_with};
use crate::error::{Error, Result};
use crate::exact::{factorial, Int, Rat};
use crate::voa::{LatticeVoa, VoaElement};

/// Value of the adjoint sum on a pair of equal-weight vectors, with its
/// integrality relative to a denominator bound.
#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub weight: i64,
    #[serde(serialize_with = "crate::exact::ser_rat")]
    pub value: Rat,
    #[serde(serialize_with = "crate::exact::ser_int")]
    pub denominator: Int,
    pub within_bound: bool,
}

/// sum_{j >= 0} (-1)^m / j! vac-coefficient of (L(1)^j u)_{2m-j-1} v, u of weight m.
fn adjoint_sum(voa: &LatticeVoa, u: &VoaElement, m: i64, v: &VoaElement, w: &VoaElement) -> Rat {
    let mut total = Rat::zero();
    let mut cur = u.clone();
    let mut j = 0i64;
    while !cur.is_zero() && j <= m {
        let x = vertex_mode(voa, &cur, 2 * m - j - 1, v).vacuum_coefficient();
        total += x / Rat::from_integer(factorial(j as u64));
        cur = virasoro_with(voa, w, 1, &cur);
        j += 1;
    }
    if m % 2 == 1 {
        -total
    } else {
        total
    }
}

/// Evaluates the adjoint expression for homogeneous `u`, `v` of the same weight and
/// checks that it lies in (1/d) Z.
pub fn invariance_check(voa: &LatticeVoa, u: &VoaElement, v: &VoaElement, d: &Int) -> Result<InvarianceReport> {
    let l = voa.lattice();
    let (Some(a), Some(b)) = (u.weight(l), v.weight(l)) else {
        return Err(Error::invalid("invariance check needs homogeneous vectors"));
    };
    if a != b {
        return Err(Error::invalid(format!("weights {a} and {b} differ")));
    }
    let value = adjoint_sum(voa, u, a, v, &omega(voa));
    let scaled = &value * Rat::from_integer(d.clone());
    Ok(InvarianceReport {
        weight: a,
        within_bound: scaled.is_integer(),
        value,
        denominator: d.clone(),
    })
}

/// Res_z z^{-1} (vac, Y(e^{z L(1)} (-z^{-2})^{L(0)} u, z^{-1}) v), summed over the
/// homogeneous components of `u`.
pub fn pair_adjoint_check(voa: &LatticeVoa, u: &VoaElement, v: &VoaElement) -> Rat {
    let l = voa.lattice();
    let w = omega(voa);
    let mut weights: Vec<i64> = u
        .terms()
        .map(|(a, m, _)| VoaElement::term_weight(l, a, m))
        .collect();
    weights.sort_unstable();
    weights.dedup();
    weights
        .into_iter()
        .map(|m| adjoint_sum(voa, &u.component(l, m), m, v, &w))
        .sum()
}
