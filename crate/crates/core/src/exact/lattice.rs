use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Signed;
use serde::Serialize;

use super::{snf, AbelianInvariants, Int, IntMatrix, RatMatrix};
use crate::error::{Error, Result};

/// Integer coordinates in the basis of a lattice.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![0; rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        LatticeVector(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn scale(&self, k: i64) -> Self {
        LatticeVector(self.0.iter().map(|&c| c * k).collect())
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, o: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, o: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A positive definite even lattice given by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenLattice {
    gram: Vec<Vec<i64>>,
    name: Option<String>,
}

impl EvenLattice {
    pub fn new(gram: Vec<Vec<i64>>, name: Option<String>) -> Result<Self> {
        let d = gram.len();
        if gram.iter().any(|r| r.len() != d) {
            return Err(Error::invalid("Gram matrix is not square"));
        }
        for i in 0..d {
            if gram[i][i] % 2 != 0 {
                return Err(Error::invalid(format!("diagonal entry {i} is odd")));
            }
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::invalid("Gram matrix is not symmetric"));
                }
            }
        }
        let m = IntMatrix::from_i64(&gram)?;
        for (k, minor) in m.leading_minors()?.into_iter().enumerate() {
            if !minor.is_positive() {
                return Err(Error::invalid(format!(
                    "Gram matrix is not positive definite (leading minor {} is {minor})",
                    k + 1
                )));
            }
        }
        Ok(EvenLattice { gram, name })
    }

    pub fn named(gram: Vec<Vec<i64>>, name: &str) -> Result<Self> {
        Self::new(gram, Some(name.to_string()))
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn label(&self) -> String {
        self.name
            .clone()
            .unwrap_or_else(|| format!("L(rank {})", self.rank()))
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn gram_matrix(&self) -> IntMatrix {
        IntMatrix::from_i64(&self.gram).expect("square by construction")
    }

    pub fn inner(&self, a: &LatticeVector, b: &LatticeVector) -> i64 {
        let mut s = 0;
        for (i, &ai) in a.0.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            let row = &self.gram[i];
            for (j, &bj) in b.0.iter().enumerate() {
                s += ai * row[j] * bj;
            }
        }
        s
    }

    pub fn norm(&self, a: &LatticeVector) -> i64 {
        self.inner(a, a)
    }

    /// Inner products (a, g_j) with every basis vector.
    pub fn pairings(&self, a: &LatticeVector) -> Vec<i64> {
        (0..self.rank())
            .map(|j| a.0.iter().enumerate().map(|(i, &c)| c * self.gram[i][j]).sum())
            .collect()
    }

    pub fn basis(&self, i: usize) -> LatticeVector {
        LatticeVector::unit(self.rank(), i)
    }

    pub fn check(&self, a: &LatticeVector) -> Result<()> {
        if a.len() != self.rank() {
            return Err(Error::Dimension(format!(
                "vector of length {} in lattice of rank {}",
                a.len(),
                self.rank()
            )));
        }
        Ok(())
    }

    pub fn det(&self) -> Int {
        self.gram_matrix().det().expect("square")
    }

    /// Lattice with Gram matrix multiplied by `k`.
    pub fn scaled(&self, k: i64, name: Option<String>) -> Result<Self> {
        if k <= 0 {
            return Err(Error::invalid("scale factor must be positive"));
        }
        let gram = self
            .gram
            .iter()
            .map(|r| r.iter().map(|v| v * k).collect())
            .collect();
        Self::new(gram, name)
    }

    pub fn orthogonal_sum(&self, other: &Self, name: Option<String>) -> Self {
        let d = self.rank() + other.rank();
        let mut gram = vec![vec![0; d]; d];
        for i in 0..self.rank() {
            gram[i][..self.rank()].copy_from_slice(&self.gram[i]);
        }
        for i in 0..other.rank() {
            gram[self.rank() + i][self.rank()..].copy_from_slice(&other.gram[i]);
        }
        EvenLattice { gram, name }
    }

    /// Whether `sigma` (columns = images of basis vectors) preserves the form.
    pub fn is_isometry(&self, sigma: &[Vec<i64>]) -> bool {
        let d = self.rank();
        if sigma.len() != d || sigma.iter().any(|r| r.len() != d) {
            return false;
        }
        let col = |j: usize| LatticeVector((0..d).map(|i| sigma[i][j]).collect());
        (0..d).all(|i| (0..d).all(|j| self.inner(&col(i), &col(j)) == self.gram[i][j]))
    }
}

/// Gram matrix of the dual basis.
pub fn lattice_dual(l: &EvenLattice) -> Result<RatMatrix> {
    l.gram_matrix().to_rat().inverse()
}

/// Invariants of L*/L.
pub fn discriminant_group(l: &EvenLattice) -> AbelianInvariants {
    snf(&l.gram_matrix()).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn rejects_bad_grams() {
        assert!(EvenLattice::new(vec![vec![1]], None).is_err());
        assert!(EvenLattice::new(vec![vec![2, 1], vec![0, 2]], None).is_err());
        assert!(EvenLattice::new(vec![vec![2, 3], vec![3, 2]], None).is_err());
    }

    #[test]
    fn duals_and_discriminants() {
        let a1 = EvenLattice::named(vec![vec![2]], "A1").unwrap();
        assert_eq!(lattice_dual(&a1).unwrap().get(0, 0), &rat(1, 2));
        assert_eq!(discriminant_group(&a1).divisors, vec![int(2)]);
        let a2 = EvenLattice::named(vec![vec![2, -1], vec![-1, 2]], "A2").unwrap();
        let d = lattice_dual(&a2).unwrap();
        assert_eq!(d.get(0, 1), &rat(1, 3));
        assert_eq!(discriminant_group(&a2).divisors, vec![int(3)]);
    }

    proptest! {
        #[test]
        fn discriminant_order_is_determinant(seed in proptest::collection::vec(-2i64..3, 36), d in 1usize..7) {
            // B^T B + 2 I is even after doubling, positive definite.
            let b: Vec<Vec<i64>> = (0..d).map(|i| seed[i * 6..i * 6 + d].to_vec()).collect();
            let mut g = vec![vec![0i64; d]; d];
            for i in 0..d {
                for j in 0..d {
                    let s: i64 = (0..d).map(|k| b[k][i] * b[k][j]).sum();
                    g[i][j] = 2 * s + if i == j { 2 } else { 0 };
                }
            }
            let l = EvenLattice::new(g, None).unwrap();
            prop_assert_eq!(discriminant_group(&l).order().unwrap(), l.det());
        }
    }
}
