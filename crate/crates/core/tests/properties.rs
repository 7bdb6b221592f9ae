use num_traits::One;
use proptest::prelude::*;

use ivoa_core::catalog::resolve_lattice;
use ivoa_core::exact::{int, rat_int, Index, LatticeVector, LinearMap, Rat, RatMatrix, RatRow, ZModule};
use ivoa_core::fock::{e_minus_series, FockPolynomial};
use ivoa_core::symmetry::{eigen_split, lift_isometry, LiftedIsometry};
use ivoa_core::vertex::vertex_mode;
use ivoa_core::voa::{make_cocycle, pair, voa_basis, Form, LatticeVoa};

fn rows(m: &[Vec<i64>]) -> Vec<RatRow> {
    m.iter()
        .map(|r| r.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i, rat_int(x))).collect())
        .collect()
}

fn module(dim: usize, m: &[Vec<i64>]) -> ZModule {
    ZModule::from_rat_rows(dim, &rows(m))
}

fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

/// A random unimodular matrix and its inverse, as products of elementary operations.
fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let id: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let (mut u, mut v) = (id.clone(), id.clone());
    for &(i, j, c) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        let mut e = id.clone();
        e[i][j] = c;
        let mut f = id.clone();
        f[i][j] = -c;
        u = matmul(&u, &e);
        v = matmul(&f, &v);
    }
    (u, v)
}

/// Block diagonal: `swaps` copies of [[0,1],[1,0]], then `plus` ones and `minus` minus ones.
fn normal_form(swaps: usize, plus: usize, minus: usize) -> Vec<Vec<i64>> {
    let n = 2 * swaps + plus + minus;
    let mut m = vec![vec![0; n]; n];
    for s in 0..swaps {
        m[2 * s][2 * s + 1] = 1;
        m[2 * s + 1][2 * s] = 1;
    }
    for i in 2 * swaps..n {
        m[i][i] = if i < 2 * swaps + plus { 1 } else { -1 };
    }
    m
}

fn a2_reflections() -> [Vec<Vec<i64>>; 2] {
    // Columns are images of the simple roots.
    [vec![vec![-1, 1], vec![0, 1]], vec![vec![1, 0], vec![1, -1]]]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn e_minus_convolution(c in proptest::collection::vec(-3i64..4, 1..4), n in 0u32..7) {
        let a: Vec<Rat> = c.iter().map(|&x| rat_int(x)).collect();
        let b: Vec<Rat> = c.iter().map(|&x| rat_int(-x)).collect();
        let (s, t) = (e_minus_series(&a, n), e_minus_series(&b, n));
        let mut acc = FockPolynomial::zero();
        for i in 0..=n as usize {
            acc.add_scaled(&s[i].mul(&t[n as usize - i]), &Rat::one());
        }
        let want = if n == 0 { FockPolynomial::one() } else { FockPolynomial::zero() };
        prop_assert_eq!(acc, want);
    }

    #[test]
    fn cocycle_condition_on_d4(
        a in proptest::collection::vec(-2i64..3, 4),
        b in proptest::collection::vec(-2i64..3, 4),
        c in proptest::collection::vec(-2i64..3, 4),
    ) {
        let l = resolve_lattice("D(4)").unwrap();
        let e = make_cocycle(&l);
        let (a, b, c) = (LatticeVector(a), LatticeVector(b), LatticeVector(c));
        prop_assert_eq!(e.sign(&a, &b) * e.sign(&(&a + &b), &c), e.sign(&a, &(&b + &c)) * e.sign(&b, &c));
        let skew = if l.inner(&a, &b).rem_euclid(2) == 0 { 1 } else { -1 };
        prop_assert_eq!(e.sign(&a, &b) * e.sign(&b, &a), skew);
    }

    #[test]
    fn random_involutions_have_quotient_two_to_r(
        swaps in 0usize..3,
        plus in 0usize..3,
        minus in 0usize..3,
        ops in proptest::collection::vec((0usize..8, 0usize..8, -2i64..3), 0..12),
    ) {
        let n = 2 * swaps + plus + minus;
        prop_assume!(n > 0);
        let (u, v) = unimodular(n, &ops);
        let m = matmul(&matmul(&u, &normal_form(swaps, plus, minus)), &v);
        let t = LinearMap::from_matrix(&RatMatrix::from_i64(&m).unwrap());
        let s = eigen_split(&ZModule::standard(n), &[t]).unwrap();
        prop_assert_eq!(s.jordan_r, Some(swaps));
        prop_assert_eq!(s.quotient.order(), Some(int(1 << swaps)));
        prop_assert_eq!(s.ranks.iter().sum::<usize>(), n);
    }

    #[test]
    fn module_sum_and_intersection(
        a in proptest::collection::vec(proptest::collection::vec(-4i64..5, 3), 3),
        b in proptest::collection::vec(proptest::collection::vec(-4i64..5, 3), 3),
    ) {
        let (x, y) = (module(3, &a), module(3, &b));
        let s = x.sum(&y).unwrap();
        let i = x.intersect(&y).unwrap();
        prop_assert!(s.contains(&x) && s.contains(&y));
        prop_assert!(x.contains(&i) && y.contains(&i));
        prop_assert_eq!(s.rank() + i.rank(), x.rank() + y.rank());
        if x.rank() == 3 && y.rank() == 3 {
            // |X + Y : Y| = |X : X cap Y|
            let lhs = y.index_in(&s).unwrap();
            let rhs = i.index_in(&x).unwrap();
            prop_assert!(matches!(lhs, Index::Finite(_)));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn weyl_isometries_preserve_modes_and_forms(word in proptest::collection::vec(0usize..2, 0..6), k in -1i64..2) {
        let v = LatticeVoa::new(resolve_lattice("A2").unwrap()).unwrap();
        let l = v.lattice();
        let refl = a2_reflections();
        let mut g = LiftedIsometry::identity(l);
        for &i in &word {
            let r = lift_isometry(l, refl[i].clone(), None).unwrap();
            g = r.compose(l, &g).unwrap();
        }
        prop_assert!(l.is_isometry(g.sigma()));
        let b1 = voa_basis(&v, 1).unwrap();
        for x in b1.iter().step_by(2) {
            for y in b1.iter().skip(1).step_by(2) {
                let (p, q) = (x.element(&v), y.element(&v));
                prop_assert_eq!(pair(&v, &g.apply(&p), &g.apply(&q), Form::Bilinear), pair(&v, &p, &q, Form::Bilinear));
                prop_assert_eq!(g.apply(&vertex_mode(&v, &p, k, &q)), vertex_mode(&v, &g.apply(&p), k, &g.apply(&q)));
            }
        }
    }
}

#[test]
fn normal_forms_are_involutions() {
    let m = normal_form(2, 1, 1);
    let (id, _) = unimodular(6, &[]);
    assert_eq!(matmul(&m, &m), id);
}
