use num_traits::Zero;
use serde::Serialize;

use super::vertex_mode;
use crate::error::{Error, Result};
use crate::exact::{common_denominator, Int, LatticeVector, Rat};
use crate::fock::{FockMonomial, Oscillator};
use crate::voa::{GradedZForm, LatticeVoa, VoaElement};

/// omega = 1/2 sum_{i,j} (G^{-1})_{ij} g_i(-1) g_j(-1).
pub fn omega(voa: &LatticeVoa) -> VoaElement {
    let d = voa.rank();
    let inv = voa.dual_gram();
    let half = Rat::new(1.into(), 2.into());
    let mut out = VoaElement::zero();
    for i in 0..d {
        for j in 0..d {
            let c = inv.get(i, j);
            if c.is_zero() {
                continue;
            }
            let m = FockMonomial::new(vec![Oscillator::new(i, 1), Oscillator::new(j, 1)]);
            out.add_term(&LatticeVector::zero(d), m, c * &half);
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct VirasoroConfig {
    #[serde(skip)]
    pub omega: VoaElement,
    #[serde(serialize_with = "crate::exact::ser_rat")]
    pub central_charge: Rat,
    /// Least positive s with s * omega in R_2.
    #[serde(serialize_with = "crate::exact::ser_int")]
    pub s: Int,
}

impl VirasoroConfig {
    pub fn new(voa: &LatticeVoa) -> Result<Self> {
        let omega = omega(voa);
        let r2 = GradedZForm::integral(voa, 2)?;
        let coords = r2.space().coords(&omega)?;
        let coeffs = r2
            .module()
            .rational_coefficients(&coords)
            .ok_or_else(|| Error::Structural("omega lies outside the span of R_2".into()))?;
        let s = common_denominator(coeffs.iter());
        Ok(VirasoroConfig {
            omega,
            central_charge: Rat::from_integer(voa.rank().into()),
            s,
        })
    }
}

/// L(n) v = omega_{n+1} v.
pub fn virasoro_mode(voa: &LatticeVoa, n: i64, v: &VoaElement) -> VoaElement {
    vertex_mode(voa, &omega(voa), n + 1, v)
}

/// Same as `virasoro_mode` for a prebuilt conformal vector.
pub fn virasoro_with(voa: &LatticeVoa, omega: &VoaElement, n: i64, v: &VoaElement) -> VoaElement {
    vertex_mode(voa, omega, n + 1, v)
}

pub fn is_quasi_primary(voa: &LatticeVoa, v: &VoaElement) -> bool {
    virasoro_mode(voa, 1, v).is_zero()
}

/// Checks [L(m), L(n)] = (m - n) L(m + n) + (m^3 - m)/12 c delta_{m+n,0} on `v`
/// for the Virasoro field of `omega` with central charge `c`.
pub fn bracket_holds(
    voa: &LatticeVoa,
    omega: &VoaElement,
    c: &Rat,
    m: i64,
    n: i64,
    v: &VoaElement,
) -> bool {
    let l = |k: i64, x: &VoaElement| virasoro_with(voa, omega, k, x);
    let lhs = l(m, &l(n, v)).minus(&l(n, &l(m, v)));
    let mut rhs = l(m + n, v).scale(&Rat::from_integer((m - n).into()));
    if m + n == 0 {
        let k = Rat::new(((m * m * m - m) as i64).into(), 12.into()) * c;
        rhs.add_scaled(v, &k);
    }
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat_int, EvenLattice};
    use crate::voa::voa_basis;

    fn a1() -> LatticeVoa {
        LatticeVoa::new(EvenLattice::named(vec![vec![2]], "A1").unwrap()).unwrap()
    }

    #[test]
    fn grading_and_central_charge() {
        let voa = a1();
        let w = omega(&voa);
        for n in 0..3 {
            for b in voa_basis(&voa, n).unwrap() {
                let e = b.element(&voa);
                assert_eq!(virasoro_mode(&voa, 0, &e), e.scale(&rat_int(n.into())));
            }
        }
        let half = Rat::new(1.into(), 2.into());
        assert_eq!(vertex_mode(&voa, &w, 3, &w), voa.vacuum().scale(&half));
        assert!(virasoro_mode(&voa, -1, &voa.vacuum()).is_zero());
        assert!(is_quasi_primary(&voa, &w));
        assert!(is_quasi_primary(&voa, &VoaElement::exp(LatticeVector(vec![1]))));
        assert!(is_quasi_primary(&voa, &voa.vacuum()));
    }

    #[test]
    fn l1_kills_weight_one() {
        let voa = a1();
        for b in voa_basis(&voa, 1).unwrap() {
            assert!(virasoro_mode(&voa, 1, &b.element(&voa)).is_zero());
        }
    }

    #[test]
    fn multiplier_for_a1() {
        // omega = g(-1)^2 / 4 while R_2 contains g(-1)^2 and s_{g,2}.
        let cfg = VirasoroConfig::new(&a1()).unwrap();
        assert_eq!(cfg.s, int(4));
    }
}
