use std::fmt;

use num_integer::Integer;
use num_traits::{Num, One, Zero};

use super::{Int, Rat};
use crate::error::{Error, Result};

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<Int>;
pub type RatMatrix = Matrix<Rat>;

impl<T> Matrix<T> {
    pub(crate) fn from_parts(rows: usize, cols: usize, data: Vec<T>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds an `rows x cols` matrix; panics only if the closure does.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn map<U: Clone + Zero>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (r, c) = (self.rows + other.rows, self.cols + other.cols);
        Matrix::from_fn(r, c, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j).clone()
            } else if i >= self.rows && j >= self.cols {
                other.get(i - self.rows, j - self.cols).clone()
            } else {
                T::zero()
            }
        })
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }
}

impl<T: Clone + Num> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out: Matrix<T> = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).clone();
                    out.set(i, j, cur + a.clone() * b.clone());
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|v| v.clone() * s.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("matrix sum shape mismatch".into()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("matrix difference shape mismatch".into()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        })
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Self) -> Self {
        Matrix::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            self.get(i / other.rows, j / other.cols).clone()
                * other.get(i % other.rows, j % other.cols).clone()
        })
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }
}

impl IntMatrix {
    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Int::from(v)).collect())
                .collect(),
        )
    }

    pub fn to_rat(&self) -> RatMatrix {
        self.map(|v| Rat::from_integer(v.clone()))
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn det(&self) -> Result<Int> {
        if !self.is_square() {
            return Err(Error::Dimension("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Int::one());
        }
        let mut a = self.clone();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(p) => {
                        a.swap_rows(k, p);
                        sign = -sign;
                    }
                    None => return Ok(Int::zero()),
                }
            }
            let pivot = a.get(k, k).clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&pivot * a.get(i, j) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
                a.set(i, k, Int::zero());
            }
            prev = pivot;
        }
        Ok(sign * a.get(n - 1, n - 1).clone())
    }

    /// Leading principal minors, in order of size 1..=n.
    pub fn leading_minors(&self) -> Result<Vec<Int>> {
        (1..=self.rows)
            .map(|k| {
                let idx: Vec<usize> = (0..k).collect();
                self.submatrix(&idx, &idx).det()
            })
            .collect()
    }
}

impl RatMatrix {
    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Ok(IntMatrix::from_i64(rows)?.to_rat())
    }

    /// Least positive integer `d` with `d * self` integral.
    pub fn denominator(&self) -> Int {
        super::common_denominator(self.entries())
    }

    pub fn is_integral(&self) -> bool {
        self.entries().all(super::is_integral)
    }

    /// Returns the integer matrix, or `None` if some entry is fractional.
    pub fn to_int(&self) -> Option<IntMatrix> {
        if !self.is_integral() {
            return None;
        }
        Some(self.map(|v| v.to_integer()))
    }

    /// Integer matrix `d * self` with `d` the common denominator.
    pub fn clear_denominators(&self) -> (IntMatrix, Int) {
        let d = self.denominator();
        let scaled = self.map(|v| (v * Rat::from_integer(d.clone())).to_integer());
        (scaled, d)
    }

    pub fn det(&self) -> Result<Rat> {
        if !self.is_square() {
            return Err(Error::Dimension("determinant of non-square matrix".into()));
        }
        let (m, d) = self.clear_denominators();
        let det = m.det()?;
        let scale = num_traits::pow(d, self.rows);
        Ok(Rat::new(det, scale))
    }

    /// Row echelon data over Q: returns (reduced rows, pivot columns).
    ///
    /// Rows are kept integral and primitive during elimination; the
    /// returned matrix is in reduced form up to row scaling.
    fn echelon(&self) -> (Vec<Vec<Int>>, Vec<usize>) {
        let mut rows: Vec<Vec<Int>> = (0..self.rows)
            .map(|i| {
                let d = super::common_denominator(self.row(i));
                let r: Vec<Int> = self
                    .row(i)
                    .iter()
                    .map(|v| (v * Rat::from_integer(d.clone())).to_integer())
                    .collect();
                primitive(r)
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by_key(|&i| rows[i].iter().filter(|v| !v.is_zero()).count())
            else {
                continue;
            };
            rows.swap(r, p);
            let pivot_row = rows[r].clone();
            let pv = pivot_row[c].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let g = pv.gcd(&row[c]);
                let a = &pv / &g;
                let b = &row[c] / &g;
                for j in 0..row.len() {
                    if pivot_row[j].is_zero() && row[j].is_zero() {
                        continue;
                    }
                    row[j] = &a * &row[j] - &b * &pivot_row[j];
                }
                let taken = std::mem::take(row);
                *row = primitive(taken);
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(r);
        (rows, pivots)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    /// Basis of the right null space {x : M x = 0}, as rows.
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        let (rows, pivots) = self.echelon();
        let mut is_pivot = vec![None; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(r);
        }
        let mut out = Vec::new();
        for f in 0..self.cols {
            if is_pivot[f].is_some() {
                continue;
            }
            let mut x = vec![Rat::zero(); self.cols];
            x[f] = Rat::one();
            for (r, &c) in pivots.iter().enumerate() {
                if !rows[r][f].is_zero() {
                    x[c] = -Rat::new(rows[r][f].clone(), rows[r][c].clone());
                }
            }
            out.push(x);
        }
        out
    }

    /// Basis of the left null space {y : y M = 0}, as rows.
    pub fn left_kernel(&self) -> Vec<Vec<Rat>> {
        self.transpose().kernel()
    }

    pub fn inverse(&self) -> Result<RatMatrix> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a: Vec<Vec<Rat>> = self.to_rows();
        let mut inv: Vec<Vec<Rat>> = RatMatrix::identity(n).to_rows();
        for c in 0..n {
            let p = (c..n)
                .find(|&i| !a[i][c].is_zero())
                .ok_or_else(|| Error::Defect("singular matrix has no inverse".into()))?;
            a.swap(c, p);
            inv.swap(c, p);
            let pv = a[c][c].clone();
            for j in 0..n {
                a[c][j] /= &pv;
                inv[c][j] /= &pv;
            }
            for i in 0..n {
                if i == c || a[i][c].is_zero() {
                    continue;
                }
                let f = a[i][c].clone();
                for j in 0..n {
                    if !a[c][j].is_zero() {
                        let t = &f * &a[c][j];
                        a[i][j] -= t;
                    }
                    if !inv[c][j].is_zero() {
                        let t = &f * &inv[c][j];
                        inv[i][j] -= t;
                    }
                }
            }
        }
        Matrix::from_rows(inv)
    }
}

fn primitive(mut row: Vec<Int>) -> Vec<Int> {
    let g = row.iter().fold(Int::zero(), |acc, v| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for v in row.iter_mut() {
            *v = &*v / &g;
        }
    }
    row
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = (0..self.cols)
                .map(|j| self.data[i * self.cols + j].to_string())
                .collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}
