use num_traits::Zero;
use rayon::prelude::*;

use super::vertex_mode;
use crate::error::{Error, Result};
use crate::exact::{snf, AbelianInvariants, Int, IntMatrix};
use crate::voa::{GradedZForm, LatticeVoa};

/// f_m(a, b) = trace(ad a ad b) on a degree-m form, ad c: x -> c_{m-1} x.
#[derive(Clone, Debug)]
pub struct TraceForm {
    pub degree: u32,
    pub matrix: IntMatrix,
    pub rank: usize,
    pub invariants: AbelianInvariants,
}

/// Matrix of ad(a) in the module basis (column j = image of basis vector j).
fn ad_matrix(voa: &LatticeVoa, form: &GradedZForm, a: usize) -> Result<Vec<Vec<Int>>> {
    let basis = form.basis_elements();
    let k = i64::from(form.degree()) - 1;
    let r = basis.len();
    let mut cols = vec![vec![Int::zero(); r]; r];
    for (j, x) in basis.iter().enumerate() {
        let y = vertex_mode(voa, &basis[a], k, x);
        let coords = form.space().coords(&y)?;
        let c = form
            .module()
            .rational_coefficients(&coords)
            .ok_or_else(|| Error::Invariant("ad(a) leaves the rational span".into()))?;
        for (i, v) in c.into_iter().enumerate() {
            if !v.is_integer() {
                return Err(Error::Invariant(format!(
                    "ad of basis vector {a} has non-integral coefficient {v}"
                )));
            }
            cols[i][j] = v.to_integer();
        }
    }
    Ok(cols)
}

pub fn trace_form(voa: &LatticeVoa, form: &GradedZForm) -> Result<TraceForm> {
    let r = form.rank();
    let ads = (0..r)
        .into_par_iter()
        .map(|a| ad_matrix(voa, form, a))
        .collect::<Result<Vec<_>>>()?;
    let entries: Vec<Vec<Int>> = (0..r)
        .into_par_iter()
        .map(|a| {
            (0..r)
                .map(|b| {
                    let mut t = Int::zero();
                    for i in 0..r {
                        for j in 0..r {
                            if !ads[a][i][j].is_zero() && !ads[b][j][i].is_zero() {
                                t += &ads[a][i][j] * &ads[b][j][i];
                            }
                        }
                    }
                    t
                })
                .collect()
        })
        .collect();
    let matrix = IntMatrix::from_rows(entries)?;
    let (invariants, rank) = snf(&matrix);
    Ok(TraceForm {
        degree: form.degree(),
        matrix,
        rank,
        invariants,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::EvenLattice;

    #[test]
    fn small_trace_forms() {
        let voa = LatticeVoa::new(EvenLattice::named(vec![vec![2]], "A1").unwrap()).unwrap();
        let f0 = trace_form(&voa, &GradedZForm::integral(&voa, 0).unwrap()).unwrap();
        assert_eq!(f0.matrix, IntMatrix::from_i64(&[vec![1]]).unwrap());
        let f1 = trace_form(&voa, &GradedZForm::integral(&voa, 1).unwrap()).unwrap();
        assert_eq!(f1.matrix.rows(), 3);
        assert_eq!(f1.rank, 3);
    }
}
