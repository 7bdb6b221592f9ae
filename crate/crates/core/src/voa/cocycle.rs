use crate::exact::{EvenLattice, LatticeVector};

/// Bimultiplicative sign function on a lattice, stored on basis pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    /// `odd[i][j]` is true when eps(g_i, g_j) = -1.
    odd: Vec<Vec<bool>>,
}

impl Cocycle {
    /// eps(g_i, g_j) = 1 for i < j, (-1)^{(g_i, g_j)} for i > j, (-1)^{(g_i, g_i)/2} on the diagonal.
    pub fn new(l: &EvenLattice) -> Self {
        let g = l.gram();
        let d = l.rank();
        let odd = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| match i.cmp(&j) {
                        std::cmp::Ordering::Less => false,
                        std::cmp::Ordering::Greater => g[i][j].rem_euclid(2) == 1,
                        std::cmp::Ordering::Equal => (g[i][i] / 2).rem_euclid(2) == 1,
                    })
                    .collect()
            })
            .collect();
        Cocycle { odd }
    }

    pub fn rank(&self) -> usize {
        self.odd.len()
    }

    pub fn basis_sign(&self, i: usize, j: usize) -> i64 {
        if self.odd[i][j] {
            -1
        } else {
            1
        }
    }

    /// eps(a, b) in {1, -1}.
    pub fn sign(&self, a: &LatticeVector, b: &LatticeVector) -> i64 {
        let mut parity = 0i64;
        for (i, &ai) in a.0.iter().enumerate() {
            if ai.rem_euclid(2) == 0 {
                continue;
            }
            for (j, &bj) in b.0.iter().enumerate() {
                if self.odd[i][j] && bj.rem_euclid(2) == 1 {
                    parity ^= 1;
                }
            }
        }
        if parity == 0 {
            1
        } else {
            -1
        }
    }
}

pub fn make_cocycle(l: &EvenLattice) -> Cocycle {
    Cocycle::new(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a2() -> EvenLattice {
        EvenLattice::named(vec![vec![2, -1], vec![-1, 2]], "A2").unwrap()
    }

    #[test]
    fn basis_values() {
        let a1 = EvenLattice::named(vec![vec![2]], "A1").unwrap();
        let c = make_cocycle(&a1);
        assert_eq!(c.sign(&a1.basis(0), &a1.basis(0)), -1);
        let r4 = EvenLattice::named(vec![vec![4]], "RANK1(4)").unwrap();
        assert_eq!(make_cocycle(&r4).sign(&r4.basis(0), &r4.basis(0)), 1);
        let l = a2();
        let c = make_cocycle(&l);
        assert_eq!(c.sign(&l.basis(0), &l.basis(1)) * c.sign(&l.basis(1), &l.basis(0)), -1);
    }

    proptest! {
        #[test]
        fn diagonal_and_commutator(a in proptest::collection::vec(-4i64..5, 2), b in proptest::collection::vec(-4i64..5, 2)) {
            let l = a2();
            let c = make_cocycle(&l);
            let (a, b) = (LatticeVector(a), LatticeVector(b));
            let half = l.norm(&a) / 2;
            prop_assert_eq!(c.sign(&a, &a), if half % 2 == 0 { 1 } else { -1 });
            let ip = l.inner(&a, &b);
            prop_assert_eq!(c.sign(&a, &b) * c.sign(&b, &a), if ip.rem_euclid(2) == 0 { 1 } else { -1 });
        }
    }
}
