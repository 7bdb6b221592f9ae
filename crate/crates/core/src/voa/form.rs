use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{dual_form_basis, gram_blocks, voa_basis, Form, GramBlock, LatticeVoa, VoaElement, WeightSpace};
use crate::error::{Error, Result};
use crate::exact::{lcm, AbelianInvariants, Index, Int, LinearMap, Rat, RatMatrix, RatRow, ZModule};

/// A Z-submodule of one weight space, stored in monomial coordinates.
#[derive(Clone, Debug)]
pub struct GradedZForm {
    space: Arc<WeightSpace>,
    module: ZModule,
}

impl PartialEq for GradedZForm {
    fn eq(&self, o: &Self) -> bool {
        self.space.degree() == o.space.degree() && self.module == o.module
    }
}

impl Eq for GradedZForm {}

impl GradedZForm {
    pub fn new(space: Arc<WeightSpace>, module: ZModule) -> Result<Self> {
        if module.dim() != space.dim() {
            return Err(Error::Dimension(format!(
                "module in dimension {} for a weight space of dimension {}",
                module.dim(),
                space.dim()
            )));
        }
        Ok(GradedZForm { space, module })
    }

    pub fn zero(voa: &LatticeVoa, degree: u32) -> Result<Self> {
        let space = voa.space(degree)?;
        let module = ZModule::zero(space.dim());
        Ok(GradedZForm { space, module })
    }

    /// The Z-span of homogeneous elements of weight `degree`.
    pub fn from_elements(voa: &LatticeVoa, degree: u32, elements: &[VoaElement]) -> Result<Self> {
        let space = voa.space(degree)?;
        let rows = elements
            .par_iter()
            .map(|e| space.coords(e))
            .collect::<Result<Vec<_>>>()?;
        let module = ZModule::from_rat_rows(space.dim(), &rows);
        Ok(GradedZForm { space, module })
    }

    /// R_n, the degree-n piece of the integral form spanned by the s-products.
    pub fn integral(voa: &LatticeVoa, degree: u32) -> Result<Self> {
        let basis = voa_basis(voa, degree)?;
        let elems: Vec<VoaElement> = basis.par_iter().map(|b| b.element(voa)).collect();
        Self::from_elements(voa, degree, &elems)
    }

    /// U_n, spanned by the dual Schur basis.
    pub fn dual_schur(voa: &LatticeVoa, degree: u32) -> Result<Self> {
        let basis = dual_form_basis(voa, degree, true)?;
        let elems: Vec<VoaElement> = basis.par_iter().map(|b| b.element(voa)).collect();
        Self::from_elements(voa, degree, &elems)
    }

    pub fn degree(&self) -> u32 {
        self.space.degree()
    }

    pub fn space(&self) -> &Arc<WeightSpace> {
        &self.space
    }

    pub fn module(&self) -> &ZModule {
        &self.module
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn rank(&self) -> usize {
        self.module.rank()
    }

    pub fn is_full_rank(&self) -> bool {
        self.module.is_full_rank()
    }

    pub fn basis_rows(&self) -> Vec<RatRow> {
        self.module.basis()
    }

    pub fn basis_elements(&self) -> Vec<VoaElement> {
        self.module
            .basis()
            .iter()
            .map(|r| self.space.element(r))
            .collect()
    }

    fn with_module(&self, module: ZModule) -> Self {
        GradedZForm {
            space: self.space.clone(),
            module,
        }
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.degree() != o.degree() || self.dim() != o.dim() {
            return Err(Error::Dimension("forms live in different weight spaces".into()));
        }
        Ok(())
    }

    pub fn contains(&self, o: &Self) -> Result<bool> {
        self.check(o)?;
        Ok(self.module.contains(&o.module))
    }

    pub fn contains_element(&self, u: &VoaElement) -> Result<bool> {
        let v = self.space.coords(u)?;
        Ok(self.module.contains_vector(&v))
    }

    pub fn intersect(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self.with_module(self.module.intersect(&o.module)?))
    }

    pub fn sum(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self.with_module(self.module.sum(&o.module)?))
    }

    pub fn image(&self, map: &LinearMap) -> Result<Self> {
        Ok(self.with_module(self.module.image(map)?))
    }

    pub fn fixed(&self, maps: &[LinearMap]) -> Result<Self> {
        Ok(self.with_module(self.module.fixed(maps)?))
    }

    pub fn scale(&self, k: &Rat) -> Self {
        self.with_module(self.module.scale(k))
    }

    /// Index of `self` in `sup`.
    pub fn index_in(&self, sup: &Self) -> Result<Index> {
        self.check(sup)?;
        self.module.index_in(&sup.module)
    }

    /// The part supported on the given monomial coordinates.
    pub fn restrict(&self, coords: &[usize]) -> Result<Self> {
        let inner = self.module.restrict_to(coords)?;
        Ok(self.with_module(inner.embed(self.dim(), coords)))
    }

    /// Orthogonal blocks of the Gram matrix of the module basis;
    /// `rows` index into `basis_rows()`.
    pub fn gram_blocks(&self, voa: &LatticeVoa, form: Form) -> Vec<GramBlock> {
        let mono = gram_blocks(voa, &self.space, form);
        let basis = self.module.basis();
        let mut block_of = vec![usize::MAX; self.dim()];
        for (k, b) in mono.iter().enumerate() {
            for &i in &b.rows {
                block_of[i] = k;
            }
        }
        let mut parent: Vec<usize> = (0..mono.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for r in &basis {
            let mut it = r.keys().map(|&c| block_of[c]);
            if let Some(first) = it.next() {
                for b in it {
                    let (x, y) = (find(&mut parent, first), find(&mut parent, b));
                    if x != y {
                        parent[x] = y;
                    }
                }
            }
        }
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for (k, r) in basis.iter().enumerate() {
            if let Some(&c) = r.keys().next() {
                let root = find(&mut parent, block_of[c]);
                groups.entry(root).or_default().push(k);
            }
        }
        let mut groups: Vec<Vec<usize>> = groups.into_values().collect();
        groups.sort();
        // Local position of every coordinate inside its monomial block.
        let mut local = vec![0usize; self.dim()];
        for b in &mono {
            for (a, &i) in b.rows.iter().enumerate() {
                local[i] = a;
            }
        }
        groups
            .into_par_iter()
            .map(|rows| {
                // M v for each basis row, computed through the monomial blocks.
                let images: Vec<RatRow> = rows
                    .iter()
                    .map(|&k| {
                        let mut out = RatRow::new();
                        for (c, x) in &basis[k] {
                            let b = &mono[block_of[*c]];
                            let a = local[*c];
                            for (j, &col) in b.rows.iter().enumerate() {
                                let g = b.gram.get(a, j);
                                if !g.is_zero() {
                                    *out.entry(col).or_insert_with(Rat::zero) += x * g;
                                }
                            }
                        }
                        out
                    })
                    .collect();
                let gram = RatMatrix::from_fn(rows.len(), rows.len(), |a, b| {
                    dot(&images[a], &basis[rows[b]])
                });
                GramBlock { rows, gram }
            })
            .collect()
    }

    /// Dense Gram matrix of the module basis.
    pub fn gram(&self, voa: &LatticeVoa, form: Form) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.rank(), self.rank());
        for b in self.gram_blocks(voa, form) {
            for (a, &i) in b.rows.iter().enumerate() {
                for (c, &j) in b.rows.iter().enumerate() {
                    m.set(i, j, b.gram.get(a, c).clone());
                }
            }
        }
        m
    }

    /// d(n): the least positive integer making every Gram entry integral.
    pub fn denominator(&self, voa: &LatticeVoa, form: Form) -> Int {
        self.gram_blocks(voa, form)
            .iter()
            .flat_map(|b| b.gram.entries().map(|x| x.denom().clone()).collect::<Vec<_>>())
            .fold(Int::one(), |acc, d| lcm(&acc, &d))
    }

    /// The dual module inside the rational span, with respect to `form`.
    pub fn dual(&self, voa: &LatticeVoa, form: Form) -> Result<Self> {
        let basis = self.module.basis();
        let blocks = self.gram_blocks(voa, form);
        let rows: Vec<Vec<RatRow>> = blocks
            .par_iter()
            .map(|b| -> Result<Vec<RatRow>> {
                let inv = b.gram.inverse()?;
                Ok((0..b.rows.len())
                    .map(|a| {
                        let mut out = RatRow::new();
                        for (c, &k) in b.rows.iter().enumerate() {
                            let w = inv.get(a, c);
                            if w.is_zero() {
                                continue;
                            }
                            for (col, x) in &basis[k] {
                                *out.entry(*col).or_insert_with(Rat::zero) += w * x;
                            }
                        }
                        out.retain(|_, v| !v.is_zero());
                        out
                    })
                    .collect())
            })
            .collect::<Result<Vec<_>>>()?;
        let rows: Vec<RatRow> = rows.into_iter().flatten().collect();
        Ok(self.with_module(ZModule::from_rat_rows(self.dim(), &rows)))
    }

    pub fn is_self_dual(&self, voa: &LatticeVoa, form: Form) -> Result<bool> {
        Ok(self.dual(voa, form)? == *self)
    }
}

fn dot(a: &RatRow, b: &RatRow) -> Rat {
    let (small, big) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut s = Rat::zero();
    for (c, x) in small {
        if let Some(y) = big.get(c) {
            s += x * y;
        }
    }
    s
}

/// Invariants of `sup / sub`.
pub fn quotient_invariants(sub: &GradedZForm, sup: &GradedZForm) -> Result<AbelianInvariants> {
    sub.check(sup)?;
    sub.module.quotient_invariants(&sup.module)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, EvenLattice};

    fn voa(gram: Vec<Vec<i64>>, name: &str) -> LatticeVoa {
        LatticeVoa::new(EvenLattice::named(gram, name).unwrap()).unwrap()
    }

    #[test]
    fn degree_one_discriminants() {
        let a1 = voa(vec![vec![2]], "A1");
        let r = GradedZForm::integral(&a1, 1).unwrap();
        let u = GradedZForm::dual_schur(&a1, 1).unwrap();
        assert_eq!(quotient_invariants(&r, &u).unwrap().divisors, vec![int(2)]);
        assert_eq!(r.dual(&a1, Form::Hermitian).unwrap(), u);
        let a2 = voa(vec![vec![2, -1], vec![-1, 2]], "A2");
        let r = GradedZForm::integral(&a2, 1).unwrap();
        let u = GradedZForm::dual_schur(&a2, 1).unwrap();
        assert_eq!(quotient_invariants(&r, &u).unwrap().divisors, vec![int(3)]);
    }

    #[test]
    fn integral_form_is_integral() {
        let a2 = voa(vec![vec![2, -1], vec![-1, 2]], "A2");
        for n in 0..4 {
            let r = GradedZForm::integral(&a2, n).unwrap();
            assert!(r.is_full_rank());
            for form in [Form::Bilinear, Form::Hermitian] {
                assert_eq!(r.denominator(&a2, form), int(1));
            }
        }
    }
}
