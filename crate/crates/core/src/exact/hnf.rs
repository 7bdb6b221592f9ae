use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{xgcd, Int, IntMatrix, Matrix};

/// Elementary divisors of a finitely generated abelian group, plus its free rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianInvariants {
    /// Divisors greater than one, each dividing the next.
    #[serde(serialize_with = "super::ser_ints")]
    pub divisors: Vec<Int>,
    pub free_rank: usize,
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        AbelianInvariants {
            divisors: Vec::new(),
            free_rank: 0,
        }
    }

    pub fn from_diagonal(diag: impl IntoIterator<Item = Int>, free_rank: usize) -> Self {
        let mut primes_by_exp: Vec<Int> = diag
            .into_iter()
            .map(|d| d.abs())
            .filter(|d| !d.is_one() && !d.is_zero())
            .collect();
        normalize_chain(&mut primes_by_exp);
        AbelianInvariants {
            divisors: primes_by_exp,
            free_rank,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.divisors.is_empty() && self.free_rank == 0
    }

    /// Group order, `None` when the group is infinite.
    pub fn order(&self) -> Option<Int> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.divisors.iter().fold(Int::one(), |a, d| a * d))
    }

    /// Merges the invariants of a direct sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut all = self.divisors.clone();
        all.extend(other.divisors.iter().cloned());
        normalize_chain(&mut all);
        AbelianInvariants {
            divisors: all,
            free_rank: self.free_rank + other.free_rank,
        }
    }

    pub fn divisors_i64(&self) -> Vec<i64> {
        self.divisors
            .iter()
            .map(|d| i64::try_from(d).unwrap_or(i64::MAX))
            .collect()
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.divisors.iter().map(|d| format!("Z/{d}")).collect();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Rewrites an arbitrary list of cyclic orders as an invariant-factor chain.
fn normalize_chain(ds: &mut Vec<Int>) {
    // Repeatedly replace (a, b) by (gcd, lcm); this converges to the chain.
    let n = ds.len();
    for i in 0..n {
        for j in i + 1..n {
            let g = ds[i].gcd(&ds[j]);
            let l = &ds[i] / &g * &ds[j];
            ds[i] = g;
            ds[j] = l;
        }
    }
    ds.retain(|d| !d.is_one());
}

/// Row-style Hermite normal form: `H = U M` with `U` unimodular.
///
/// `H` is upper echelon with positive pivots, entries above each pivot in
/// `[0, pivot)`, and zero rows at the bottom.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut rows = m.to_rows();
    let mut u = IntMatrix::identity(m.rows()).to_rows();
    let rank = hnf_rows(&mut rows, Some(&mut u), m.cols());
    let _ = rank;
    (
        Matrix::from_rows_unchecked(rows, m.rows(), m.cols()),
        Matrix::from_rows_unchecked(u, m.rows(), m.rows()),
    )
}

/// In-place HNF on dense rows, optionally tracking the transform. Returns rank.
pub(crate) fn hnf_rows(
    rows: &mut [Vec<Int>],
    mut transform: Option<&mut Vec<Vec<Int>>>,
    cols: usize,
) -> usize {
    let n = rows.len();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        loop {
            let Some(p) = (r..n)
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()))
            else {
                break;
            };
            swap_both(rows, transform.as_deref_mut(), r, p);
            let mut done = true;
            for i in r + 1..n {
                if rows[i][c].is_zero() {
                    continue;
                }
                let a = rows[r][c].clone();
                let b = rows[i][c].clone();
                if b.is_multiple_of(&a) {
                    let q = &b / &a;
                    sub_mul(rows, i, r, &q);
                    if let Some(t) = transform.as_deref_mut() {
                        sub_mul(t, i, r, &q);
                    }
                } else {
                    let (g, x, y) = xgcd(&a, &b);
                    let (ag, bg) = (&a / &g, &b / &g);
                    combine(rows, r, i, &x, &y, &bg, &ag);
                    if let Some(t) = transform.as_deref_mut() {
                        combine(t, r, i, &x, &y, &bg, &ag);
                    }
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows.get(r).map_or(true, |row| row[c].is_zero()) {
            continue;
        }
        if rows[r][c].is_negative() {
            negate(&mut rows[r]);
            if let Some(t) = transform.as_deref_mut() {
                negate(&mut t[r]);
            }
        }
        let pivot = rows[r][c].clone();
        for i in 0..r {
            if rows[i][c].is_zero() {
                continue;
            }
            let q = rows[i][c].div_floor(&pivot);
            if q.is_zero() {
                continue;
            }
            sub_mul(rows, i, r, &q);
            if let Some(t) = transform.as_deref_mut() {
                sub_mul(t, i, r, &q);
            }
        }
        r += 1;
    }
    r
}

fn swap_both(rows: &mut [Vec<Int>], t: Option<&mut Vec<Vec<Int>>>, a: usize, b: usize) {
    rows.swap(a, b);
    if let Some(t) = t {
        t.swap(a, b);
    }
}

fn negate(row: &mut [Int]) {
    for v in row.iter_mut() {
        *v = -std::mem::take(v);
    }
}

/// rows[i] -= q * rows[r]
fn sub_mul(rows: &mut [Vec<Int>], i: usize, r: usize, q: &Int) {
    let (src, dst) = pick(rows, r, i);
    for (d, s) in dst.iter_mut().zip(src.iter()) {
        if !s.is_zero() {
            *d -= q * s;
        }
    }
}

/// (rows[r], rows[i]) <- (x rows[r] + y rows[i], -bg rows[r] + ag rows[i])
fn combine(rows: &mut [Vec<Int>], r: usize, i: usize, x: &Int, y: &Int, bg: &Int, ag: &Int) {
    let (pr, pi) = pick(rows, r, i);
    for (a, b) in pr.iter_mut().zip(pi.iter_mut()) {
        if a.is_zero() && b.is_zero() {
            continue;
        }
        let na = x * &*a + y * &*b;
        let nb = ag * &*b - bg * &*a;
        *a = na;
        *b = nb;
    }
}

fn pick<T>(v: &mut [T], a: usize, b: usize) -> (&mut T, &mut T) {
    assert_ne!(a, b);
    if a < b {
        let (x, y) = v.split_at_mut(b);
        (&mut x[a], &mut y[0])
    } else {
        let (x, y) = v.split_at_mut(a);
        (&mut y[0], &mut x[b])
    }
}

/// Smith invariants of an integer matrix: divisors greater than one and rank.
pub fn snf(m: &IntMatrix) -> (AbelianInvariants, usize) {
    let diag = smith_diagonal(m.to_rows(), m.cols());
    let rank = diag.len();
    (AbelianInvariants::from_diagonal(diag, 0), rank)
}

/// Nonzero Smith diagonal entries (positive, divisibility chain).
pub(crate) fn smith_diagonal(mut a: Vec<Vec<Int>>, cols: usize) -> Vec<Int> {
    // Pre-reducing to HNF keeps entries small and drops zero rows.
    let rank = hnf_rows(&mut a, None, cols);
    a.truncate(rank);
    let n = a.len();
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        loop {
            let Some((pi, pj)) = (k..n)
                .flat_map(|i| (k..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !a[i][j].is_zero())
                .min_by(|&(i1, j1), &(i2, j2)| a[i1][j1].abs().cmp(&a[i2][j2].abs()))
            else {
                break;
            };
            a.swap(k, pi);
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
            let p = a[k][k].clone();
            let mut clean = true;
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let q = a[i][k].div_floor(&p);
                sub_mul(&mut a, i, k, &q);
                if !a[i][k].is_zero() {
                    clean = false;
                }
            }
            for j in k + 1..cols {
                if a[k][j].is_zero() {
                    continue;
                }
                let q = a[k][j].div_floor(&p);
                for row in a.iter_mut() {
                    let t = &q * &row[k];
                    row[j] -= t;
                }
                if !a[k][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let bad = (k + 1..n).find(|&i| (k + 1..cols).any(|j| !a[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let (dst, src) = pick(&mut a, k, i);
                    for (d, s) in dst.iter_mut().zip(src.iter()) {
                        *d += s;
                    }
                }
                None => break,
            }
        }
        diag.push(a[k][k].abs());
    }
    diag
}

impl<T> Matrix<T> {
    pub(crate) fn from_rows_unchecked(rows: Vec<Vec<T>>, r: usize, c: usize) -> Self {
        Matrix::from_parts(r, c, rows.into_iter().flatten().collect())
    }
}
