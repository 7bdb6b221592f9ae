use rayon::prelude::*;

use super::LiftedIsometry;
use crate::error::{Error, Result};
use crate::exact::LatticeVector;
use crate::fock::{FockMonomial, FockPolynomial, Oscillator};
use crate::vertex::vertex_mode;
use crate::voa::{GradedZForm, LatticeVoa, VoaElement};

/// Checks g R_n = R_n for every generator and degree, then returns the fixed points.
pub fn fixed_form(voa: &LatticeVoa, forms: &[GradedZForm], group: &[LiftedIsometry]) -> Result<Vec<GradedZForm>> {
    forms
        .iter()
        .map(|r| {
            let maps = group
                .iter()
                .map(|g| g.matrix(voa, r.degree()))
                .collect::<Result<Vec<_>>>()?;
            for (gi, m) in maps.iter().enumerate() {
                let img = r.image(m)?;
                if img != *r {
                    let witness = r
                        .basis_rows()
                        .iter()
                        .position(|v| !r.module().contains_vector(&m.apply(v)))
                        .unwrap_or(0);
                    return Err(Error::NotInvariant(format!(
                        "generator {gi} moves basis vector {witness} of degree {} out of the form",
                        r.degree()
                    )));
                }
            }
            r.fixed(&maps)
        })
        .collect()
}

pub fn intersect_forms(forms: &[GradedZForm]) -> Result<GradedZForm> {
    let (first, rest) = forms
        .split_first()
        .ok_or_else(|| Error::invalid("empty family of forms"))?;
    rest.iter().try_fold(first.clone(), |acc, f| acc.intersect(f))
}

pub fn sum_forms(forms: &[GradedZForm]) -> Result<GradedZForm> {
    let (first, rest) = forms
        .split_first()
        .ok_or_else(|| Error::invalid("empty family of forms"))?;
    rest.iter().try_fold(first.clone(), |acc, f| acc.sum(f))
}

/// g R for one group element, degree by degree.
pub fn translate_forms(voa: &LatticeVoa, forms: &[GradedZForm], g: &LiftedIsometry) -> Result<Vec<GradedZForm>> {
    forms
        .iter()
        .map(|r| r.image(&g.matrix(voa, r.degree())?))
        .collect()
}

/// S_n = intersection of g R_n over all listed group elements.
pub fn orbit_intersection(
    voa: &LatticeVoa,
    forms: &[GradedZForm],
    group: &[LiftedIsometry],
) -> Result<Vec<GradedZForm>> {
    forms
        .par_iter()
        .map(|r| {
            let images = group
                .iter()
                .map(|g| r.image(&g.matrix(voa, r.degree())?))
                .collect::<Result<Vec<_>>>()?;
            intersect_forms(&images)
        })
        .collect()
}

/// Z-span of all x_k y with x in X, y in Y, landing in weights 0..=max_degree.
/// `xs[n]` and `ys[n]` are the degree-n pieces.
pub fn module_product_span(
    voa: &LatticeVoa,
    xs: &[GradedZForm],
    ys: &[GradedZForm],
    max_degree: u32,
) -> Result<Vec<GradedZForm>> {
    let xb: Vec<(i64, Vec<VoaElement>)> = xs.iter().map(|f| (i64::from(f.degree()), f.basis_elements())).collect();
    let yb: Vec<(i64, Vec<VoaElement>)> = ys.iter().map(|f| (i64::from(f.degree()), f.basis_elements())).collect();
    let mut jobs = Vec::new();
    for (a, us) in &xb {
        for (b, vs) in &yb {
            for u in us {
                for v in vs {
                    jobs.push((*a, *b, u, v));
                }
            }
        }
    }
    let products: Vec<(u32, VoaElement)> = jobs
        .par_iter()
        .flat_map_iter(|&(a, b, u, v)| {
            (0..=i64::from(max_degree)).filter_map(move |n| {
                let w = vertex_mode(voa, u, a + b - n - 1, v);
                (!w.is_zero()).then_some((n as u32, w))
            })
        })
        .collect();
    (0..=max_degree)
        .map(|n| {
            let elems: Vec<VoaElement> = products
                .iter()
                .filter(|(d, _)| *d == n)
                .map(|(_, w)| w.clone())
                .collect();
            GradedZForm::from_elements(voa, n, &elems)
        })
        .collect()
}

/// u (x) v inside V_{L + M}, where u lives in V_L (rank `rank_l`) and v in V_M.
pub fn tensor_element(u: &VoaElement, v: &VoaElement, rank_l: usize) -> VoaElement {
    let mut out = VoaElement::zero();
    for (a, p) in u.parts() {
        for (b, q) in v.parts() {
            let mut charge = a.0.clone();
            charge.extend_from_slice(&b.0);
            let mut shifted = FockPolynomial::zero();
            for (m, c) in q.terms() {
                let f = m
                    .factors()
                    .iter()
                    .map(|o| Oscillator::new(o.index + rank_l, o.mode))
                    .collect();
                shifted.add_term(FockMonomial::new(f), c.clone());
            }
            out.add_part(&LatticeVector(charge), &p.mul(&shifted), &num_traits::One::one());
        }
    }
    out
}

/// (A (x) B)_n = sum_{i+j=n} A_i (x) B_j inside V_{L + M}; `prod` must be built on the
/// orthogonal sum with L first.
pub fn tensor_form(
    prod: &LatticeVoa,
    a: &[GradedZForm],
    b: &[GradedZForm],
    rank_l: usize,
) -> Result<Vec<GradedZForm>> {
    let top = a.len().min(b.len());
    let ab: Vec<Vec<VoaElement>> = a.iter().map(GradedZForm::basis_elements).collect();
    let bb: Vec<Vec<VoaElement>> = b.iter().map(GradedZForm::basis_elements).collect();
    (0..top)
        .map(|n| {
            let mut elems = Vec::new();
            for i in 0..=n {
                for u in &ab[i] {
                    for v in &bb[n - i] {
                        elems.push(tensor_element(u, v, rank_l));
                    }
                }
            }
            GradedZForm::from_elements(prod, n as u32, &elems)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::EvenLattice;
    use crate::symmetry::theta;

    fn a1() -> LatticeVoa {
        LatticeVoa::new(EvenLattice::named(vec![vec![2]], "A1").unwrap()).unwrap()
    }

    fn forms(voa: &LatticeVoa, top: u32) -> Vec<GradedZForm> {
        (0..=top).map(|n| GradedZForm::integral(voa, n).unwrap()).collect()
    }

    #[test]
    fn theta_fixed_points() {
        let voa = a1();
        let r = forms(&voa, 2);
        let fixed = fixed_form(&voa, &r, &[theta(voa.lattice())]).unwrap();
        assert_eq!(fixed[1].rank(), 1);
        let plus = VoaElement::exp(LatticeVector(vec![1])).plus(&VoaElement::exp(LatticeVector(vec![-1])));
        assert!(fixed[1].contains_element(&plus).unwrap());
        let same = fixed_form(&voa, &r, &[LiftedIsometry::identity(voa.lattice())]).unwrap();
        assert_eq!(same, r);
    }

    #[test]
    fn products_contain_inputs() {
        let voa = a1();
        let r = forms(&voa, 2);
        let vac = vec![GradedZForm::from_elements(&voa, 0, &[voa.vacuum()]).unwrap()];
        let span = module_product_span(&voa, &r, &vac, 2).unwrap();
        for n in 0..3 {
            assert!(span[n].contains(&r[n]).unwrap());
        }
        assert_eq!(intersect_forms(&[r[2].clone(), r[2].clone()]).unwrap(), r[2]);
    }

    #[test]
    fn tensor_ranks() {
        let voa = a1();
        let l = voa.lattice();
        let prod = LatticeVoa::new(l.orthogonal_sum(l, None)).unwrap();
        let r = forms(&voa, 2);
        let t = tensor_form(&prod, &r, &r, 1).unwrap();
        let dims: Vec<usize> = r.iter().map(GradedZForm::rank).collect();
        assert_eq!(t[2].rank(), dims[0] * dims[2] * 2 + dims[1] * dims[1]);
        assert_eq!(t[2], GradedZForm::integral(&prod, 2).unwrap());
    }
}
