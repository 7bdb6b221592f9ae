//! Per-degree audits of graded integral forms: determinants, parity,
//! discriminant groups, d(n) and the orthogonal block structure.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{min_norm, ser_int, ser_rat, snf, AbelianInvariants, Int, MinNorm, Rat, RatMatrix};
use crate::voa::{graded_gram, Form, GradedZForm, LatticeVoa};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Blocks sharing charge norm, size and determinant.
#[derive(Clone, Debug, Serialize)]
pub struct BlockClass {
    pub charge_norm: i64,
    pub count: usize,
    pub size: usize,
    #[serde(serialize_with = "ser_rat")]
    pub det: Rat,
    /// Every block in the class is an identity matrix.
    pub identity: bool,
    /// Every block in the class has the same Gram matrix.
    pub uniform: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeAudit {
    pub degree: u32,
    pub form: String,
    pub dim: usize,
    pub rank: usize,
    #[serde(serialize_with = "ser_rat")]
    pub det: Rat,
    /// `None` when the Gram matrix is not integral.
    pub parity: Option<Parity>,
    pub discriminant: Option<AbelianInvariants>,
    #[serde(serialize_with = "ser_int")]
    pub denominator: Int,
    pub block_count: usize,
    pub blocks: Vec<BlockClass>,
    /// Dense determinant agrees with the block product (only below the dense limit).
    pub det_check: Option<bool>,
    #[serde(serialize_with = "ser_opt_rat")]
    pub min_norm: Option<Rat>,
}

fn ser_opt_rat<S: serde::Serializer>(r: &Option<Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => ser_rat(r, s),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct AuditOptions {
    pub min_norm: bool,
    /// Largest rank for which the dense determinant is also computed.
    pub dense_limit: usize,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            min_norm: false,
            dense_limit: 64,
        }
    }
}

fn parity_of(m: &RatMatrix) -> Option<Parity> {
    let int = m.to_int()?;
    let even = (0..int.rows()).all(|i| (int.get(i, i) % 2u32).is_zero());
    Some(if even { Parity::Even } else { Parity::Odd })
}

fn diagonal_min(m: &RatMatrix) -> Option<Rat> {
    (0..m.rows()).map(|i| m.get(i, i).clone()).min()
}

/// Exact minimum of the form given by `g` (positive definite).
pub fn exact_min(g: &RatMatrix) -> Result<Option<Rat>> {
    let Some(bound) = diagonal_min(g) else {
        return Ok(None);
    };
    Ok(match min_norm(g, &bound)? {
        MinNorm::Found { min, .. } => Some(min),
        MinNorm::NoneBelowBound => None,
    })
}

pub fn audit_form(voa: &LatticeVoa, r: &GradedZForm, form: Form, opts: AuditOptions) -> Result<DegreeAudit> {
    let blocks = r.gram_blocks(voa, form);
    let basis = r.basis_rows();
    let l = voa.lattice();
    let dets: Vec<Rat> = blocks
        .par_iter()
        .map(|b| b.gram.det())
        .collect::<Result<_>>()?;
    let det = dets.iter().fold(Rat::one(), |a, d| a * d);

    let mut classes: BTreeMap<(i64, usize, Rat), (Vec<usize>, bool, bool)> = BTreeMap::new();
    for (k, b) in blocks.iter().enumerate() {
        let c = *basis[b.rows[0]].keys().next().expect("nonzero row");
        let norm = l.norm(r.space().label(c).0);
        let slot = classes
            .entry((norm, b.rows.len(), dets[k].clone()))
            .or_insert_with(|| (Vec::new(), true, true));
        if let Some(&first) = slot.0.first() {
            slot.2 &= blocks[first].gram == b.gram;
        }
        slot.1 &= b.gram.is_identity();
        slot.0.push(k);
    }
    let classes = classes
        .into_iter()
        .map(|((charge_norm, size, det), (ks, identity, uniform))| BlockClass {
            charge_norm,
            count: ks.len(),
            size,
            det,
            identity,
            uniform,
        })
        .collect();

    let integral: Option<Vec<_>> = blocks.iter().map(|b| b.gram.to_int()).collect();
    let (parity, discriminant) = match &integral {
        Some(ints) => {
            let odd = blocks.iter().any(|b| parity_of(&b.gram) == Some(Parity::Odd));
            let disc = ints
                .par_iter()
                .map(|m| snf(m).0)
                .reduce(AbelianInvariants::trivial, |a, b| a.direct_sum(&b));
            (Some(if odd { Parity::Odd } else { Parity::Even }), Some(disc))
        }
        None => (None, None),
    };
    let denominator = blocks
        .iter()
        .flat_map(|b| b.gram.entries().map(|x| x.denom().clone()).collect::<Vec<_>>())
        .fold(Int::one(), |acc, d| crate::exact::lcm(&acc, &d));
    let det_check = if r.rank() <= opts.dense_limit {
        Some(r.gram(voa, form).det()? == det)
    } else {
        None
    };
    let min = if opts.min_norm {
        let mins: Vec<Option<Rat>> = blocks
            .par_iter()
            .map(|b| exact_min(&b.gram))
            .collect::<Result<_>>()?;
        mins.into_iter().flatten().min()
    } else {
        None
    };
    Ok(DegreeAudit {
        degree: r.degree(),
        form: form.name().to_string(),
        dim: r.dim(),
        rank: r.rank(),
        det,
        parity,
        discriminant,
        denominator,
        block_count: blocks.len(),
        blocks: classes,
        det_check,
        min_norm: min,
    })
}

/// The zero-charge part J of a degree-2 form, with J1 (supported on products
/// of two weight-one oscillators) and J2 (supported on weight-two oscillators).
#[derive(Clone, Debug, Serialize)]
pub struct JBlockAudit {
    pub rank: usize,
    #[serde(serialize_with = "ser_rat")]
    pub det: Rat,
    pub parity: Option<Parity>,
    pub j1_rank: usize,
    pub j2_rank: usize,
    /// J1 and J2 are orthogonal.
    pub orthogonal: bool,
    #[serde(serialize_with = "ser_int")]
    pub index: Int,
    #[serde(serialize_with = "ser_rat")]
    pub sum_det: Rat,
    #[serde(serialize_with = "ser_opt_rat")]
    pub min_norm: Option<Rat>,
}

pub fn j_block_audit(voa: &LatticeVoa, r2: &GradedZForm, form: Form, with_min: bool) -> Result<JBlockAudit> {
    if r2.degree() != 2 {
        return Err(Error::invalid("the J block lives in degree 2"));
    }
    let space = r2.space().clone();
    let zero = crate::exact::LatticeVector::zero(voa.rank());
    let block = space
        .block(&zero)
        .ok_or_else(|| Error::invalid("no zero-charge block"))?;
    let coords: Vec<usize> = block.range().collect();
    let (c1, c2): (Vec<usize>, Vec<usize>) = coords
        .iter()
        .partition(|&&c| space.label(c).1.factors().iter().all(|f| f.mode == 1));
    let j = r2.restrict(&coords)?;
    let j1 = r2.restrict(&c1)?;
    let j2 = r2.restrict(&c2)?;
    let gj = j.gram(voa, form);
    let sum = j1.sum(&j2)?;
    let index = match sum.index_in(&j)? {
        crate::exact::Index::Finite(k) => k,
        crate::exact::Index::Infinite => return Err(Error::Invariant("J1 + J2 has infinite index in J".into())),
    };
    let e1 = j1.basis_elements();
    let e2 = j2.basis_elements();
    let both: Vec<_> = e1.iter().chain(&e2).cloned().collect();
    let g = graded_gram(voa, &both, form);
    let orthogonal = (0..e1.len()).all(|a| (e1.len()..both.len()).all(|b| g.get(a, b).is_zero()));
    let min = if with_min { exact_min(&gj)? } else { None };
    Ok(JBlockAudit {
        rank: j.rank(),
        det: gj.det()?,
        parity: parity_of(&gj),
        j1_rank: j1.rank(),
        j2_rank: j2.rank(),
        orthogonal,
        index,
        sum_det: sum.gram(voa, form).det()?,
        min_norm: min,
    })
}
