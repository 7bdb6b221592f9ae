use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{rat, Index, LinearMap, Rat, RatMatrix, RatRow};
use crate::vertex::vertex_mode;
use crate::voa::{GradedZForm, LatticeVoa, VoaElement};

/// e_1 on one weight space, its eigenvalues and the involution t(e).
#[derive(Clone, Debug, Serialize)]
pub struct MiyamotoData {
    pub degree: u32,
    pub dim: usize,
    /// (eigenvalue, multiplicity), ascending.
    pub eigenvalues: Vec<(String, usize)>,
    pub minus_dim: usize,
    #[serde(skip)]
    pub e1: LinearMap,
    #[serde(skip)]
    pub t: LinearMap,
    pub involutive: bool,
}

/// {0, 1/2, 1/16} + j for 0 <= j, up to `degree`.
fn candidates(degree: u32) -> Vec<(Rat, bool)> {
    let mut out = Vec::new();
    for j in 0..=i64::from(degree) {
        out.push((Rat::from_integer(j.into()), false));
        out.push((rat(2 * j + 1, 2), false));
        out.push((rat(16 * j + 1, 16), true));
    }
    out.retain(|(x, _)| *x <= Rat::from_integer(degree.into()));
    out.sort();
    out
}

fn components(rows: &[RatRow]) -> Vec<Vec<usize>> {
    let n = rows.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, r) in rows.iter().enumerate() {
        for &j in r.keys() {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a] = b;
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    groups.into_values().collect()
}

struct Block {
    coords: Vec<usize>,
    eigen: Vec<(Rat, usize, bool)>,
    t: RatMatrix,
}

fn split_block(rows: &[RatRow], coords: Vec<usize>, degree: u32) -> Result<Block> {
    let s = coords.len();
    let a = RatMatrix::from_fn(s, s, |i, j| {
        rows[coords[i]].get(&coords[j]).cloned().unwrap_or_else(Rat::zero)
    });
    let mut eigvecs: Vec<Vec<Rat>> = Vec::with_capacity(s);
    let mut signs: Vec<Rat> = Vec::with_capacity(s);
    let mut eigen = Vec::new();
    for (lambda, sixteenth) in candidates(degree) {
        let shifted = RatMatrix::from_fn(s, s, |i, j| {
            let x = a.get(i, j).clone();
            if i == j {
                x - &lambda
            } else {
                x
            }
        });
        let k = shifted.left_kernel();
        if k.is_empty() {
            continue;
        }
        eigen.push((lambda.clone(), k.len(), sixteenth));
        let sign = if sixteenth { -Rat::one() } else { Rat::one() };
        for v in k {
            eigvecs.push(v);
            signs.push(sign.clone());
        }
    }
    if eigvecs.len() != s {
        return Err(Error::Structural(format!(
            "e_1 is not diagonalizable with eigenvalues in {{0, 1/2, 1/16}} + Z on a block of size {s} ({} eigenvectors)",
            eigvecs.len()
        )));
    }
    let w = RatMatrix::from_rows(eigvecs)?;
    let winv = w.inverse()?;
    let d = RatMatrix::from_fn(s, s, |i, j| if i == j { signs[i].clone() } else { Rat::zero() });
    let t = winv.mul(&d)?.mul(&w)?;
    Ok(Block { coords, eigen, t })
}

pub fn miyamoto(voa: &LatticeVoa, e: &VoaElement, degree: u32) -> Result<MiyamotoData> {
    let space = voa.space(degree)?;
    let dim = space.dim();
    let rows = (0..dim)
        .into_par_iter()
        .map(|i| space.coords(&vertex_mode(voa, e, 1, &space.basis_element(i))))
        .collect::<Result<Vec<_>>>()?;
    let blocks = components(&rows)
        .into_par_iter()
        .map(|c| split_block(&rows, c, degree))
        .collect::<Result<Vec<_>>>()?;
    let mut eig: BTreeMap<Rat, usize> = BTreeMap::new();
    let mut minus_dim = 0;
    let mut t_rows = vec![RatRow::new(); dim];
    for b in &blocks {
        for (l, k, sixteenth) in &b.eigen {
            *eig.entry(l.clone()).or_default() += k;
            if *sixteenth {
                minus_dim += k;
            }
        }
        for (i, &ci) in b.coords.iter().enumerate() {
            for (j, &cj) in b.coords.iter().enumerate() {
                let x = b.t.get(i, j);
                if !x.is_zero() {
                    t_rows[ci].insert(cj, x.clone());
                }
            }
        }
    }
    let t = LinearMap::new(dim, t_rows);
    let involutive = t.then(&t).is_identity();
    Ok(MiyamotoData {
        degree,
        dim,
        eigenvalues: eig
            .into_iter()
            .map(|(l, k)| (crate::exact::rat_string(&l), k))
            .collect(),
        minus_dim,
        e1: LinearMap::new(dim, rows),
        t,
        involutive,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilizationLine {
    pub degree: u32,
    pub span_preserved: bool,
    pub form_preserved: bool,
    /// |R_n : R_n cap t R_n|.
    pub index: String,
}

/// Whether t(e) maps the rational span of each R_n to itself, with the index data
/// of t R_n against R_n.
pub fn stabilization_check(
    voa: &LatticeVoa,
    e: &VoaElement,
    forms: &[GradedZForm],
) -> Result<Vec<StabilizationLine>> {
    let r2 = forms
        .iter()
        .find(|f| f.degree() == 2)
        .map_or_else(|| GradedZForm::integral(voa, 2), |f| Ok(f.clone()))?;
    let coords = r2.space().coords(e)?;
    if !r2.module().spans_vector(&coords) {
        return Err(Error::invalid("e lies outside the rational span of the form"));
    }
    forms
        .iter()
        .map(|r| {
            let m = miyamoto(voa, e, r.degree())?;
            let img = r.image(&m.t)?;
            let meet = r.intersect(&img)?;
            let index = match meet.index_in(r)? {
                Index::Finite(n) => n.to_string(),
                Index::Infinite => "infinite".to_string(),
            };
            Ok(StabilizationLine {
                degree: r.degree(),
                span_preserved: img.module().same_rational_span(r.module()),
                form_preserved: img == *r,
                index,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cvcc::{cvcc_aa1, ising_check};
    use crate::exact::{EvenLattice, LatticeVector};

    #[test]
    fn rank_one_norm_four() {
        let voa = LatticeVoa::new(EvenLattice::named(vec![vec![4]], "RANK1(4)").unwrap()).unwrap();
        for sign in [1, -1] {
            let e = cvcc_aa1(&voa, &LatticeVector(vec![1]), sign).unwrap();
            let report = ising_check(&voa, &e.e, 2).unwrap();
            assert!(report.passed(), "{:?}", report.checks);
            let forms: Vec<_> = (0..=3).map(|n| GradedZForm::integral(&voa, n).unwrap()).collect();
            for n in 0..=3 {
                let m = miyamoto(&voa, &e.e, n).unwrap();
                assert!(m.involutive);
                assert_eq!(m.minus_dim, 0);
            }
            for line in stabilization_check(&voa, &e.e, &forms).unwrap() {
                assert!(line.span_preserved);
            }
        }
    }

    #[test]
    fn omega_is_not_ising() {
        let voa = LatticeVoa::new(EvenLattice::named(vec![vec![2]], "A1").unwrap()).unwrap();
        let w = crate::vertex::omega(&voa);
        let report = ising_check(&voa, &w, 0).unwrap();
        let e3 = report.checks.iter().find(|c| c.name.starts_with("e_3")).unwrap();
        assert!(!e3.pass);
        assert!(e3.detail.ends_with("1/2"));
    }
}
