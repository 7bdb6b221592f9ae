use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{rat, short_vectors, EvenLattice, LatticeVector, Rat, RatMatrix};
use crate::fock::{FockMonomial, Oscillator};
use crate::registry::Registry;
use crate::vertex::{bracket_holds, vertex_modes};
use crate::voa::{LatticeVoa, VoaElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IsingKind {
    AA1,
    EE8,
}

impl fmt::Display for IsingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IsingKind::AA1 => "AA1",
            IsingKind::EE8 => "EE8",
        })
    }
}

/// A candidate conformal vector of central charge 1/2.
#[derive(Clone, Debug)]
pub struct IsingVector {
    pub e: VoaElement,
    pub kind: IsingKind,
    pub provenance: String,
}

/// h(-1)^2 for a lattice vector h, in monomial coordinates.
pub fn square_minus_one(coords: &[Rat]) -> VoaElement {
    let d = coords.len();
    let mut out = VoaElement::zero();
    for i in 0..d {
        for j in 0..d {
            let c = &coords[i] * &coords[j];
            if c.is_zero() {
                continue;
            }
            let m = FockMonomial::new(vec![Oscillator::new(i, 1), Oscillator::new(j, 1)]);
            out.add_term(&LatticeVector::zero(d), m, c);
        }
    }
    out
}

/// 1/16 a(-1)^2 + sign/4 (e^a + e^{-a}) for a of norm 4.
pub fn cvcc_aa1(voa: &LatticeVoa, alpha: &LatticeVector, sign: i64) -> Result<IsingVector> {
    let l = voa.lattice();
    l.check(alpha)?;
    if l.norm(alpha) != 4 {
        return Err(Error::invalid(format!("{alpha} has norm {}, not 4", l.norm(alpha))));
    }
    if sign != 1 && sign != -1 {
        return Err(Error::invalid("sign must be + or -"));
    }
    let coords: Vec<Rat> = alpha.0.iter().map(|&c| Rat::from_integer(c.into())).collect();
    let mut e = square_minus_one(&coords).scale(&rat(1, 16));
    let q = rat(sign, 4);
    e.add_scaled(&VoaElement::exp(alpha.clone()), &q);
    e.add_scaled(&VoaElement::exp(-alpha), &q);
    Ok(IsingVector {
        e,
        kind: IsingKind::AA1,
        provenance: format!("alpha={alpha} sign={}", if sign > 0 { "+" } else { "-" }),
    })
}

/// 1/32 q + 1/32 sum_{a in E/+-, (a,a)=4} phi(a) (e^a + e^{-a}), where E is spanned by
/// `embedding` (Gram 2 E8) and q = sum_{ij} (G_E^{-1})_{ij} a_i(-1) a_j(-1) is the sum of
/// u(-1)^2 over an orthonormal basis u of E. The coefficient of q is the one forced by
/// e_3 e = vac/4.
pub fn cvcc_ee8(voa: &LatticeVoa, embedding: &[LatticeVector], phi: &[i64]) -> Result<IsingVector> {
    let l = voa.lattice();
    if embedding.len() != 8 || phi.len() != 8 {
        return Err(Error::invalid("EE8 data needs 8 generators and 8 signs"));
    }
    if phi.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::invalid("phi values must be +1 or -1"));
    }
    for a in embedding {
        l.check(a)?;
    }
    let ge: Vec<Vec<i64>> = embedding
        .iter()
        .map(|a| embedding.iter().map(|b| l.inner(a, b)).collect())
        .collect();
    let sub = EvenLattice::new(ge.clone(), None)
        .map_err(|_| Error::invalid("embedding does not span a positive definite even lattice"))?;
    if sub.det() != 256.into() {
        return Err(Error::invalid(format!("embedded lattice has det {}, not 2^8", sub.det())));
    }
    let gr = RatMatrix::from_i64(&ge)?;
    let vecs = short_vectors(&gr, &Rat::from_integer(4.into()))?;
    if vecs.iter().any(|(_, n)| n < &Rat::from_integer(4.into())) {
        return Err(Error::invalid("embedded lattice has vectors of norm below 4"));
    }
    let to_l = |c: &[i64]| -> LatticeVector {
        let mut v = vec![0i64; l.rank()];
        for (k, a) in embedding.iter().enumerate() {
            for (i, x) in a.0.iter().enumerate() {
                v[i] += c[k] * x;
            }
        }
        LatticeVector(v)
    };
    let inv = gr.inverse()?;
    let d = l.rank();
    let mut e = VoaElement::zero();
    for i in 0..8 {
        for j in 0..8 {
            let c = inv.get(i, j);
            if c.is_zero() {
                continue;
            }
            let ai = &embedding[i];
            let aj = &embedding[j];
            for p in 0..d {
                for r in 0..d {
                    let x = ai.0[p] * aj.0[r];
                    if x == 0 {
                        continue;
                    }
                    let m = FockMonomial::new(vec![Oscillator::new(p, 1), Oscillator::new(r, 1)]);
                    e.add_term(&LatticeVector::zero(d), m, c * rat(x, 32));
                }
            }
        }
    }
    let mut orbits = 0;
    for (c, _) in &vecs {
        // One representative per sign pair: first nonzero coordinate positive.
        if c.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            continue;
        }
        let sign: i64 = c
            .iter()
            .zip(phi)
            .filter(|(x, _)| x.rem_euclid(2) == 1)
            .map(|(_, s)| *s)
            .product();
        let a = to_l(c);
        let w = rat(sign, 32);
        e.add_scaled(&VoaElement::exp(a.clone()), &w);
        e.add_scaled(&VoaElement::exp(-&a), &w);
        orbits += 1;
    }
    if orbits != 120 {
        return Err(Error::invalid(format!("found {orbits} norm-4 pairs, expected 120")));
    }
    Ok(IsingVector {
        e,
        kind: IsingKind::EE8,
        provenance: format!("phi={phi:?}"),
    })
}

/// The whole lattice, when it has the rank and determinant of sqrt2 E8; other
/// lattices need an explicit embedding.
pub fn default_ee8_embedding(l: &EvenLattice) -> Result<Vec<LatticeVector>> {
    if l.rank() != 8 {
        return Err(Error::invalid("EE8 construction needs a rank-8 lattice or an explicit embedding"));
    }
    let det = l.det();
    if det == 256.into() {
        return Ok((0..8).map(|i| l.basis(i)).collect());
    }
    Err(Error::invalid(format!("no default embedding for a lattice of determinant {det}")))
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct IsingReport {
    pub checks: Vec<CheckLine>,
}

impl IsingReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// e_1 e = 2e, e_2 e = 0, e_3 e = vac/4, e_k e = 0 for k >= 4, and the c = 1/2
/// Virasoro bracket for (m, n) in [-2, 2]^2 on weight spaces up to `bracket_degree`.
pub fn ising_check(voa: &LatticeVoa, e: &VoaElement, bracket_degree: u32) -> Result<IsingReport> {
    let mut checks = Vec::new();
    let mut line = |name: &str, pass: bool, detail: String| {
        checks.push(CheckLine {
            name: name.to_string(),
            pass,
            detail,
        })
    };
    let mut modes = vertex_modes(voa, e, &[1, 2, 3, 4, 5, 6], e).into_iter();
    let mut next = || modes.next().expect("six modes");
    let e1 = next();
    let want = e.scale(&Rat::from_integer(2.into()));
    let ratio = ratio_to(&e1, e);
    line(
        "e_1 e = 2e",
        e1 == want,
        ratio.map_or_else(|| "not a multiple of e".into(), |r| format!("e_1 e = {r} e")),
    );
    let e2 = next();
    line("e_2 e = 0", e2.is_zero(), format!("{} terms", e2.num_terms()));
    let e3 = next();
    let quarter = voa.vacuum().scale(&rat(1, 4));
    line(
        "e_3 e = vac/4",
        e3 == quarter,
        format!("vacuum coefficient {}", e3.vacuum_coefficient()),
    );
    let high: Vec<i64> = (4..=6).filter(|_| !next().is_zero()).collect();
    line("e_k e = 0 (k >= 4)", high.is_empty(), format!("nonzero at {high:?}"));

    let c = rat(1, 2);
    let mut failures = Vec::new();
    let mut tested = 0usize;
    for n in 0..=bracket_degree {
        let space = voa.space(n)?;
        let basis: Vec<VoaElement> = (0..space.dim()).map(|i| space.basis_element(i)).collect();
        for a in -2i64..=2 {
            for b in -2i64..a {
                let bad: Vec<usize> = basis
                    .par_iter()
                    .enumerate()
                    .filter(|(_, v)| !bracket_holds(voa, e, &c, a, b, v))
                    .map(|(i, _)| i)
                    .collect();
                tested += basis.len();
                if let Some(i) = bad.first() {
                    failures.push(format!("[L({a}),L({b})] on degree {n} vector {i}"));
                }
            }
        }
    }
    line(
        "Virasoro bracket, c = 1/2",
        failures.is_empty(),
        if failures.is_empty() {
            format!("{tested} evaluations")
        } else {
            failures.join("; ")
        },
    );
    Ok(IsingReport { checks })
}

/// `x = r y` for a rational r, if so.
fn ratio_to(x: &VoaElement, y: &VoaElement) -> Option<Rat> {
    let (a, m, c) = y.terms().next()?;
    let r = x.part(a).map_or_else(Rat::zero, |p| p.coeff(m)) / c;
    (y.scale(&r) == *x).then_some(r)
}

/// Parameters for building an Ising vector.
#[derive(Clone, Debug, Default)]
pub struct IsingParams {
    pub alpha: Option<LatticeVector>,
    pub sign: i64,
    pub embedding: Option<Vec<LatticeVector>>,
    pub phi: Option<Vec<i64>>,
}

pub trait IsingConstruction: Send + Sync {
    fn name(&self) -> &'static str;
    fn build(&self, voa: &LatticeVoa, params: &IsingParams) -> Result<IsingVector>;
}

pub struct Aa1Construction;

impl IsingConstruction for Aa1Construction {
    fn name(&self) -> &'static str {
        "AA1"
    }

    fn build(&self, voa: &LatticeVoa, params: &IsingParams) -> Result<IsingVector> {
        let alpha = match &params.alpha {
            Some(a) => a.clone(),
            None => first_norm_four(voa.lattice())?,
        };
        cvcc_aa1(voa, &alpha, if params.sign == 0 { 1 } else { params.sign })
    }
}

pub struct Ee8Construction;

impl IsingConstruction for Ee8Construction {
    fn name(&self) -> &'static str {
        "EE8"
    }

    fn build(&self, voa: &LatticeVoa, params: &IsingParams) -> Result<IsingVector> {
        let emb = match &params.embedding {
            Some(e) => e.clone(),
            None => default_ee8_embedding(voa.lattice())?,
        };
        let phi = params.phi.clone().unwrap_or_else(|| vec![1; 8]);
        cvcc_ee8(voa, &emb, &phi)
    }
}

pub fn ising_constructions() -> Registry<dyn IsingConstruction> {
    let mut r: Registry<dyn IsingConstruction> = Registry::new();
    r.register("AA1", Box::new(Aa1Construction));
    r.register("EE8", Box::new(Ee8Construction));
    r
}

/// The first vector of norm 4 in enumeration order (positive first coordinate).
pub fn first_norm_four(l: &EvenLattice) -> Result<LatticeVector> {
    let g = RatMatrix::from_i64(l.gram())?;
    let four = Rat::from_integer(4.into());
    short_vectors(&g, &four)?
        .into_iter()
        .filter(|(_, n)| *n == four)
        .map(|(c, _)| c)
        .find(|c| c.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0))
        .map(LatticeVector)
        .ok_or_else(|| Error::invalid("lattice has no vectors of norm 4"))
}
