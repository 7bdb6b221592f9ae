use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{round_div, Int, IntMatrix, Rat, RatMatrix};
use crate::error::{Error, Result};

/// Result of an exact minimum search below a bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinNorm {
    Found { min: Rat, witness: Vec<Int> },
    NoneBelowBound,
}

impl MinNorm {
    pub fn value(&self) -> Option<&Rat> {
        match self {
            MinNorm::Found { min, .. } => Some(min),
            MinNorm::NoneBelowBound => None,
        }
    }
}

/// Integral LLL (delta = 3/4) on a positive definite integer Gram matrix.
///
/// Returns `(reduced_gram, h)` where row `i` of `h` gives the `i`-th reduced
/// basis vector in the original coordinates, so `reduced = h G h^T`.
pub fn lll_gram(g: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    if !g.is_square() || !g.is_symmetric() {
        return Err(Error::invalid("LLL needs a symmetric Gram matrix"));
    }
    let n = g.rows();
    let mut b: Vec<Vec<Int>> = g.to_rows();
    let mut h: Vec<Vec<Int>> = IntMatrix::identity(n).to_rows();
    if n <= 1 {
        return Ok((g.clone(), IntMatrix::identity(n)));
    }
    // d[i + 1] is the i-th Gram determinant; d[0] = 1.
    let mut d: Vec<Int> = vec![Int::zero(); n + 1];
    let mut lam: Vec<Vec<Int>> = vec![vec![Int::zero(); n]; n];
    d[0] = Int::one();
    d[1] = b[0][0].clone();
    if !d[1].is_positive() {
        return Err(Error::invalid("Gram matrix is not positive definite"));
    }
    let mut k = 1usize;
    let mut kmax = 0usize;
    let three = Int::from(3);
    let four = Int::from(4);
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = b[k][j].clone();
                for i in 0..j {
                    u = (&d[i + 1] * &u - &lam[k][i] * &lam[j][i]) / &d[i];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if !u.is_positive() {
                        return Err(Error::invalid("Gram matrix is not positive definite"));
                    }
                    d[k + 1] = u;
                }
            }
        }
        loop {
            red(k, k - 1, &mut b, &mut h, &mut lam, &d);
            let lhs = &four * &d[k + 1] * &d[k - 1];
            let rhs = &three * &d[k] * &d[k] - &four * &lam[k][k - 1] * &lam[k][k - 1];
            if lhs < rhs {
                swap(k, kmax, &mut b, &mut h, &mut lam, &mut d);
                k = k.saturating_sub(1).max(1);
            } else {
                for l in (0..k - 1).rev() {
                    red(k, l, &mut b, &mut h, &mut lam, &d);
                }
                k += 1;
                break;
            }
        }
    }
    Ok((
        IntMatrix::from_rows(b).expect("square"),
        IntMatrix::from_rows(h).expect("square"),
    ))
}

fn red(k: usize, l: usize, b: &mut [Vec<Int>], h: &mut [Vec<Int>], lam: &mut [Vec<Int>], d: &[Int]) {
    let two_lam = &lam[k][l] * Int::from(2);
    if two_lam.abs() <= d[l + 1] {
        return;
    }
    let q = round_div(&lam[k][l], &d[l + 1]);
    let n = b.len();
    for j in 0..n {
        let t = &q * &h[l][j];
        h[k][j] -= t;
    }
    // b_k <- b_k - q b_l in Gram form.
    let bkk = &b[k][k] - Int::from(2) * &q * &b[k][l] + &q * &q * &b[l][l];
    for i in 0..n {
        if i != k {
            let v = &b[k][i] - &q * &b[l][i];
            b[k][i] = v.clone();
            b[i][k] = v;
        }
    }
    b[k][k] = bkk;
    lam[k][l] -= &q * &d[l + 1];
    for i in 0..l {
        let t = &q * &lam[l][i];
        lam[k][i] -= t;
    }
}

fn swap(
    k: usize,
    kmax: usize,
    b: &mut [Vec<Int>],
    h: &mut [Vec<Int>],
    lam: &mut [Vec<Int>],
    d: &mut [Int],
) {
    h.swap(k, k - 1);
    b.swap(k, k - 1);
    for row in b.iter_mut() {
        row.swap(k, k - 1);
    }
    for j in 0..k - 1 {
        let t = lam[k][j].clone();
        lam[k][j] = lam[k - 1][j].clone();
        lam[k - 1][j] = t;
    }
    let l = lam[k][k - 1].clone();
    let bb = (&d[k - 1] * &d[k + 1] + &l * &l) / &d[k];
    for i in k + 1..=kmax {
        let t = lam[i][k].clone();
        lam[i][k] = (&d[k + 1] * &lam[i][k - 1] - &l * &t) / &d[k];
        lam[i][k - 1] = (&bb * &t + &l * &lam[i][k]) / &d[k + 1];
    }
    d[k] = bb;
}

/// Quadratic-form decomposition Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2.
fn cholesky(g: &RatMatrix) -> Vec<Vec<Rat>> {
    let n = g.rows();
    let mut a = g.to_rows();
    let mut q = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        q[i][i] = a[i][i].clone();
        for j in i + 1..n {
            q[i][j] = &a[i][j] / &a[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                let t = &q[i][k] * &q[i][l] * &q[i][i];
                a[k][l] -= t;
            }
        }
    }
    q
}

fn isqrt_floor(r: &Rat) -> Int {
    if !r.is_positive() {
        return Int::zero();
    }
    r.floor().to_integer().sqrt()
}

struct Enumerator<'a> {
    q: &'a [Vec<Rat>],
    n: usize,
    x: Vec<Int>,
}

impl Enumerator<'_> {
    /// Visits every nonzero x with Q(x) <= bound (up to global sign when `half`),
    /// calling `visit(x, Q(x))`. The visitor may lower the bound by returning it.
    fn run(&mut self, bound: Rat, half: bool, visit: &mut dyn FnMut(&[Int], &Rat) -> Option<Rat>) {
        let mut bound = bound;
        self.level(self.n, Rat::zero(), &mut bound, half, true, visit);
    }

    fn level(
        &mut self,
        i: usize,
        used: Rat,
        bound: &mut Rat,
        half: bool,
        all_zero_above: bool,
        visit: &mut dyn FnMut(&[Int], &Rat) -> Option<Rat>,
    ) {
        if i == 0 {
            if !all_zero_above {
                if let Some(nb) = visit(&self.x, &used) {
                    *bound = nb;
                }
            }
            return;
        }
        let i = i - 1;
        let qi = &self.q[i];
        let mut c = Rat::zero();
        for j in i + 1..self.n {
            if !self.x[j].is_zero() {
                c -= &qi[j] * Rat::from_integer(self.x[j].clone());
            }
        }
        let budget = &*bound - &used;
        if budget.is_negative() {
            return;
        }
        let r = &budget / &qi[i];
        let s = isqrt_floor(&r) + Int::one();
        let mut lo = c.floor().to_integer() - &s;
        let mut hi = c.ceil().to_integer() + &s;
        let fits = |x: &Int, c: &Rat, r: &Rat| {
            let t = Rat::from_integer(x.clone()) - c;
            &(&t * &t) <= r
        };
        while lo <= hi && !fits(&lo, &c, &r) {
            lo += 1;
        }
        while hi >= lo && !fits(&hi, &c, &r) {
            hi -= 1;
        }
        if half && all_zero_above && lo.is_negative() {
            lo = Int::zero();
        }
        let mut x = lo;
        while x <= hi {
            let t = Rat::from_integer(x.clone()) - &c;
            let contrib = &qi[i] * &t * &t;
            let next = &used + contrib;
            if next <= *bound {
                self.x[i] = x.clone();
                let zero_above = all_zero_above && x.is_zero();
                self.level(i, next, bound, half, zero_above, visit);
            }
            x += 1;
        }
        self.x[i] = Int::zero();
    }
}

fn prepare(g: &RatMatrix) -> Result<(IntMatrix, Int, IntMatrix, RatMatrix)> {
    if !g.is_square() || !g.is_symmetric() {
        return Err(Error::invalid("Gram matrix must be square and symmetric"));
    }
    let (gi, den) = g.clear_denominators();
    for (k, m) in gi.leading_minors()?.into_iter().enumerate() {
        if !m.is_positive() {
            return Err(Error::invalid(format!(
                "Gram matrix is not positive definite (leading minor {} is {m})",
                k + 1
            )));
        }
    }
    let (red_gram, h) = lll_gram(&gi)?;
    let red_rat = red_gram.to_rat().scale(&Rat::new(Int::one(), den.clone()));
    Ok((red_gram, den, h, red_rat))
}

fn to_original(x: &[Int], h: &IntMatrix) -> Vec<Int> {
    let n = h.cols();
    let mut out = vec![Int::zero(); n];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            *o += xi * h.get(i, j);
        }
    }
    out
}

/// Exact minimum norm of nonzero lattice vectors, if it is at most `bound`.
///
/// LLL only shapes the search tree; the answer comes from exhaustive
/// enumeration below the current best value.
pub fn min_norm(g: &RatMatrix, bound: &Rat) -> Result<MinNorm> {
    if !bound.is_positive() {
        return Err(Error::invalid("bound must be positive"));
    }
    let (red_gram, den, h, red_rat) = prepare(g)?;
    let n = g.rows();
    if n == 0 {
        return Ok(MinNorm::NoneBelowBound);
    }
    let step = Rat::new(Int::one(), den.clone());
    let mut best: Option<(Rat, Vec<Int>)> = None;
    for i in 0..n {
        let v = Rat::new(red_gram.get(i, i).clone(), den.clone());
        if &v <= bound && best.as_ref().map_or(true, |(b, _)| &v < b) {
            let mut x = vec![Int::zero(); n];
            x[i] = Int::one();
            best = Some((v, x));
        }
    }
    let q = cholesky(&red_rat);
    let mut en = Enumerator {
        q: &q,
        n,
        x: vec![Int::zero(); n],
    };
    let start = match &best {
        Some((b, _)) => b - &step,
        None => bound.clone(),
    };
    if !start.is_negative() {
        en.run(start, true, &mut |x, val| {
            best = Some((val.clone(), x.to_vec()));
            Some(val - &step)
        });
    }
    Ok(match best {
        Some((min, x)) => MinNorm::Found {
            min,
            witness: to_original(&x, &h),
        },
        None => MinNorm::NoneBelowBound,
    })
}

/// All nonzero vectors with norm at most `bound`, both signs, in original
/// coordinates, sorted by (norm, coordinates).
pub fn short_vectors(g: &RatMatrix, bound: &Rat) -> Result<Vec<(Vec<i64>, Rat)>> {
    if bound.is_negative() {
        return Ok(Vec::new());
    }
    let n = g.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let (_, _, h, red_rat) = prepare(g)?;
    let q = cholesky(&red_rat);
    let mut en = Enumerator {
        q: &q,
        n,
        x: vec![Int::zero(); n],
    };
    let mut out: Vec<(Vec<i64>, Rat)> = Vec::new();
    let mut overflow = false;
    en.run(bound.clone(), true, &mut |x, val| {
        let orig = to_original(x, &h);
        let small: Option<Vec<i64>> = orig.iter().map(|v| v.to_i64()).collect();
        match small {
            Some(v) => {
                out.push((v.iter().map(|c| -c).collect(), val.clone()));
                out.push((v, val.clone()));
            }
            None => overflow = true,
        }
        None
    });
    if overflow {
        return Err(Error::invalid("short vector coordinates exceed 64 bits"));
    }
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};
    use proptest::prelude::*;

    fn e8() -> RatMatrix {
        let mut g = vec![vec![0i64; 8]; 8];
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = 2;
        }
        for (a, b) in [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)] {
            g[a][b] = -1;
            g[b][a] = -1;
        }
        RatMatrix::from_i64(&g).unwrap()
    }

    #[test]
    fn e8_minimum_and_roots() {
        let g = e8();
        let m = min_norm(&g, &rat_int(4)).unwrap();
        assert_eq!(m.value(), Some(&rat_int(2)));
        let roots = short_vectors(&g, &rat_int(2)).unwrap();
        assert_eq!(roots.len(), 240);
        let upto4 = short_vectors(&g, &rat_int(4)).unwrap();
        assert_eq!(upto4.len(), 240 + 2160);
    }

    #[test]
    fn identity_minimum() {
        let g = RatMatrix::identity(10);
        assert_eq!(min_norm(&g, &rat_int(3)).unwrap().value(), Some(&rat_int(1)));
        assert_eq!(min_norm(&g, &rat(1, 2)).unwrap(), MinNorm::NoneBelowBound);
        assert!(min_norm(&g, &rat_int(0)).is_err());
    }

    #[test]
    fn lll_preserves_determinant() {
        let g = IntMatrix::from_i64(&[vec![10, 7, 3], vec![7, 6, 2], vec![3, 2, 4]]).unwrap();
        let (r, h) = lll_gram(&g).unwrap();
        assert_eq!(r.det().unwrap(), g.det().unwrap());
        assert_eq!(h.mul(&g).unwrap().mul(&h.transpose()).unwrap(), r);
        assert!(h.det().unwrap().abs().is_one());
    }

    fn brute_min(g: &[Vec<i64>], r: i64) -> i64 {
        let n = g.len();
        let mut best = i64::MAX;
        let mut x = vec![-r; n];
        loop {
            if x.iter().any(|&v| v != 0) {
                let mut s = 0;
                for i in 0..n {
                    for j in 0..n {
                        s += x[i] * g[i][j] * x[j];
                    }
                }
                best = best.min(s);
            }
            let mut i = 0;
            loop {
                if i == n {
                    return best;
                }
                x[i] += 1;
                if x[i] <= r {
                    break;
                }
                x[i] = -r;
                i += 1;
            }
        }
    }

    proptest! {
        #[test]
        fn agrees_with_box_enumeration(seed in proptest::collection::vec(-2i64..3, 16), n in 1usize..5) {
            // Diagonally dominant, so the minimum is attained in a small box.
            let b: Vec<Vec<i64>> = (0..n).map(|i| seed[i * 4..i * 4 + n].to_vec()).collect();
            let mut g = vec![vec![0i64; n]; n];
            for i in 0..n {
                for j in 0..n {
                    g[i][j] = (0..n).map(|k| b[k][i] * b[k][j]).sum::<i64>() + if i == j { 1 } else { 0 };
                }
            }
            let gm = RatMatrix::from_i64(&g).unwrap();
            let brute = brute_min(&g, 4);
            let got = min_norm(&gm, &rat_int(1000)).unwrap();
            prop_assert_eq!(got.value().cloned(), Some(rat_int(brute)));
            if let MinNorm::Found { witness, .. } = got {
                let mut s = Int::zero();
                for i in 0..n { for j in 0..n { s += &witness[i] * Int::from(g[i][j]) * &witness[j]; } }
                prop_assert_eq!(s, Int::from(brute));
            }
        }
    }
}
