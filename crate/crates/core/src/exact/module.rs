use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::hnf::{hnf_rows, smith_diagonal};
use super::{AbelianInvariants, Int, IntMatrix, Rat};
use crate::error::{Error, Result};

/// Sparse integer row: strictly increasing column indices, no zero entries.
pub type SparseRow = Vec<(usize, Int)>;

/// Sparse rational vector keyed by coordinate.
pub type RatRow = BTreeMap<usize, Rat>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Index {
    Finite(Int),
    Infinite,
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(n) => write!(f, "{n}"),
            Index::Infinite => write!(f, "infinite"),
        }
    }
}

/// A finitely generated subgroup of Q^dim, stored as `rows / denom` with
/// `rows` in canonical Hermite normal form and `denom` minimal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZModule {
    dim: usize,
    rows: Vec<SparseRow>,
    denom: Int,
}

impl ZModule {
    pub fn zero(dim: usize) -> Self {
        ZModule {
            dim,
            rows: Vec::new(),
            denom: Int::one(),
        }
    }

    /// The standard lattice Z^dim.
    pub fn standard(dim: usize) -> Self {
        ZModule {
            dim,
            rows: (0..dim).map(|i| vec![(i, Int::one())]).collect(),
            denom: Int::one(),
        }
    }

    pub fn from_int_rows(dim: usize, rows: Vec<SparseRow>) -> Self {
        Self::canonical(dim, rows, Int::one())
    }

    pub fn from_rat_rows(dim: usize, rows: &[RatRow]) -> Self {
        let d = super::common_denominator(rows.iter().flat_map(|r| r.values()));
        let dr = Rat::from_integer(d.clone());
        let ints = rows
            .iter()
            .map(|r| {
                r.iter()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(&c, v)| (c, (v * &dr).to_integer()))
                    .collect()
            })
            .collect();
        Self::canonical(dim, ints, d)
    }

    pub fn from_matrix(m: &IntMatrix) -> Self {
        let rows = (0..m.rows())
            .map(|i| {
                m.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, v)| (j, v.clone()))
                    .collect()
            })
            .collect();
        Self::from_int_rows(m.cols(), rows)
    }

    fn canonical(dim: usize, rows: Vec<SparseRow>, denom: Int) -> Self {
        let mut rows = hnf_sparse(dim, rows);
        let mut g = denom.clone();
        for r in &rows {
            for (_, v) in r {
                if g.is_one() {
                    break;
                }
                g = g.gcd(v);
            }
        }
        let mut denom = denom;
        if !g.is_one() {
            for r in rows.iter_mut() {
                for (_, v) in r.iter_mut() {
                    *v = &*v / &g;
                }
            }
            denom /= &g;
        }
        ZModule { dim, rows, denom }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// HNF rows; the module is their span divided by [`Self::denominator`].
    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn denominator(&self) -> &Int {
        &self.denom
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r[0].0).collect()
    }

    /// Basis vectors with their rational coordinates.
    pub fn basis(&self) -> Vec<RatRow> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|(c, v)| (*c, Rat::new(v.clone(), self.denom.clone())))
                    .collect()
            })
            .collect()
    }

    pub fn to_matrix(&self) -> super::RatMatrix {
        let mut m = super::RatMatrix::zeros(self.rank(), self.dim);
        for (i, r) in self.rows.iter().enumerate() {
            for (c, v) in r {
                m.set(i, *c, Rat::new(v.clone(), self.denom.clone()));
            }
        }
        m
    }

    pub fn is_integral(&self) -> bool {
        self.denom.is_one()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim
    }

    /// Coefficients of `v` in the HNF basis over Q, `None` outside the rational span.
    pub fn rational_coefficients(&self, v: &RatRow) -> Option<Vec<Rat>> {
        let mut cur = v.clone();
        cur.retain(|_, x| !x.is_zero());
        let mut out = vec![Rat::zero(); self.rank()];
        for (k, row) in self.rows.iter().enumerate() {
            let p = row[0].0;
            if let Some((&first, _)) = cur.iter().next() {
                if first < p {
                    return None;
                }
            } else {
                break;
            }
            let Some(c) = cur.get(&p).cloned() else {
                continue;
            };
            let q = c * Rat::new(self.denom.clone(), row[0].1.clone());
            for (col, val) in row {
                let delta = &q * Rat::new(val.clone(), self.denom.clone());
                let e = cur.entry(*col).or_insert_with(Rat::zero);
                *e -= delta;
                if e.is_zero() {
                    cur.remove(col);
                }
            }
            out[k] = q;
        }
        if cur.is_empty() {
            Some(out)
        } else {
            None
        }
    }

    /// Integer coefficients of `v` in the HNF basis, `None` if `v` is not in the module.
    pub fn coefficients(&self, v: &RatRow) -> Option<Vec<Int>> {
        let c = self.rational_coefficients(v)?;
        if c.iter().all(super::is_integral) {
            Some(c.into_iter().map(|x| x.to_integer()).collect())
        } else {
            None
        }
    }

    pub fn contains_vector(&self, v: &RatRow) -> bool {
        self.coefficients(v).is_some()
    }

    pub fn spans_vector(&self, v: &RatRow) -> bool {
        self.rational_coefficients(v).is_some()
    }

    pub fn contains(&self, other: &ZModule) -> bool {
        self.dim == other.dim && other.basis().par_iter().all(|v| self.contains_vector(v))
    }

    pub fn same_rational_span(&self, other: &ZModule) -> bool {
        self.dim == other.dim
            && self.rank() == other.rank()
            && self.pivots() == other.pivots()
            && other.basis().par_iter().all(|v| self.spans_vector(v))
    }

    fn check_dim(&self, other: &ZModule) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::Dimension(format!(
                "ambient dimensions {} and {} differ",
                self.dim, other.dim
            )));
        }
        Ok(())
    }

    /// Coefficient matrix of `self`'s basis in `sup`'s basis.
    fn coefficient_rows(&self, sup: &ZModule) -> Result<Vec<SparseRow>> {
        self.check_dim(sup)?;
        self.basis()
            .par_iter()
            .enumerate()
            .map(|(i, v)| {
                let c = sup.rational_coefficients(v).ok_or_else(|| {
                    Error::Containment(format!("basis vector {i} lies outside the rational span"))
                })?;
                if !c.iter().all(super::is_integral) {
                    return Err(Error::Containment(format!(
                        "basis vector {i} is not an integral combination"
                    )));
                }
                Ok(c.into_iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(j, x)| (j, x.to_integer()))
                    .collect())
            })
            .collect()
    }

    /// Index of `self` in `sup`; errors unless `self` is a submodule.
    pub fn index_in(&self, sup: &ZModule) -> Result<Index> {
        let coeffs = self.coefficient_rows(sup)?;
        if self.rank() != sup.rank() {
            return Ok(Index::Infinite);
        }
        // Equal rational spans share pivot columns, so the coefficient
        // matrix is triangular with the pivot ratios on its diagonal.
        let mut idx = Int::one();
        for (i, row) in coeffs.iter().enumerate() {
            let d = row
                .iter()
                .find(|(j, _)| *j == i)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| Error::Defect("coefficient matrix is not triangular".into()))?;
            idx *= d.abs();
        }
        Ok(Index::Finite(idx))
    }

    /// Invariants of `sup / self`.
    pub fn quotient_invariants(&self, sup: &ZModule) -> Result<AbelianInvariants> {
        let coeffs = self.coefficient_rows(sup)?;
        let free = sup.rank() - self.rank();
        let groups = components(sup.rank(), &coeffs);
        let diags: Vec<Vec<Int>> = groups
            .into_par_iter()
            .map(|(cols, rows)| {
                let local: HashMap<usize, usize> =
                    cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
                let dense = rows
                    .iter()
                    .map(|&r| {
                        let mut v = vec![Int::zero(); cols.len()];
                        for (c, x) in &coeffs[r] {
                            v[local[c]] = x.clone();
                        }
                        v
                    })
                    .collect();
                smith_diagonal(dense, cols.len())
            })
            .collect();
        Ok(AbelianInvariants::from_diagonal(
            diags.into_iter().flatten(),
            free,
        ))
    }

    pub fn sum(&self, other: &ZModule) -> Result<ZModule> {
        self.check_dim(other)?;
        Ok(Self::sum_all(self.dim, &[self.clone(), other.clone()]))
    }

    pub fn sum_all(dim: usize, mods: &[ZModule]) -> ZModule {
        let d = mods.iter().fold(Int::one(), |acc, m| acc.lcm(&m.denom));
        let mut rows = Vec::new();
        for m in mods {
            let f = &d / &m.denom;
            for r in &m.rows {
                rows.push(r.iter().map(|(c, v)| (*c, v * &f)).collect());
            }
        }
        Self::canonical(dim, rows, d)
    }

    /// Intersection via the HNF of the stacked matrix [[A, A], [B, 0]].
    pub fn intersect(&self, other: &ZModule) -> Result<ZModule> {
        self.check_dim(other)?;
        let d = self.denom.lcm(&other.denom);
        let fa = &d / &self.denom;
        let fb = &d / &other.denom;
        let n = self.dim;
        let mut rows: Vec<SparseRow> = Vec::new();
        for r in &self.rows {
            let mut row: SparseRow = r.iter().map(|(c, v)| (*c, v * &fa)).collect();
            row.extend(r.iter().map(|(c, v)| (c + n, v * &fa)));
            rows.push(row);
        }
        for r in &other.rows {
            rows.push(r.iter().map(|(c, v)| (*c, v * &fb)).collect());
        }
        let h = hnf_sparse(2 * n, rows);
        let meet = h
            .into_iter()
            .filter(|r| r[0].0 >= n)
            .map(|r| r.into_iter().map(|(c, v)| (c - n, v)).collect())
            .collect();
        Ok(Self::canonical(n, meet, d))
    }

    pub fn intersect_all(mods: &[ZModule]) -> Result<ZModule> {
        let mut it = mods.iter();
        let first = it
            .next()
            .ok_or_else(|| Error::invalid("intersection of an empty family"))?;
        it.try_fold(first.clone(), |acc, m| acc.intersect(m))
    }

    pub fn image(&self, map: &LinearMap) -> Result<ZModule> {
        if map.dim_in != self.dim {
            return Err(Error::Dimension("map domain does not match module".into()));
        }
        let imgs: Vec<RatRow> = self.basis().par_iter().map(|v| map.apply(v)).collect();
        Ok(Self::from_rat_rows(map.dim_out, &imgs))
    }

    pub fn scale(&self, k: &Rat) -> ZModule {
        if k.is_zero() {
            return ZModule::zero(self.dim);
        }
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|(c, v)| (*c, v * k.numer())).collect())
            .collect();
        Self::canonical(self.dim, rows, &self.denom * k.denom())
    }

    /// Elements fixed by every map: the integer left kernel of the stacked
    /// differences `B (g - 1)`.
    pub fn fixed(&self, maps: &[LinearMap]) -> Result<ZModule> {
        for m in maps {
            if m.dim_in != self.dim || m.dim_out != self.dim {
                return Err(Error::Dimension("map is not an endomorphism".into()));
            }
        }
        let basis = self.basis();
        // Row k of the difference matrix, with the column blocks of all maps side by side.
        let diff: Vec<RatRow> = basis
            .par_iter()
            .map(|v| {
                let mut out = RatRow::new();
                for (g, m) in maps.iter().enumerate() {
                    let mut img = m.apply(v);
                    for (c, x) in v {
                        let e = img.entry(*c).or_insert_with(Rat::zero);
                        *e -= x;
                    }
                    for (c, x) in img {
                        if !x.is_zero() {
                            out.insert(g * self.dim + c, x);
                        }
                    }
                }
                out
            })
            .collect();
        let kernel = left_integer_kernel(&diff);
        let rows: Vec<RatRow> = kernel
            .par_iter()
            .map(|coeffs| {
                let mut acc = RatRow::new();
                for (k, c) in coeffs {
                    for (col, x) in &basis[*k] {
                        let e = acc.entry(*col).or_insert_with(Rat::zero);
                        *e += x * Rat::from_integer(c.clone());
                    }
                }
                acc.retain(|_, v| !v.is_zero());
                acc
            })
            .collect();
        Ok(Self::from_rat_rows(self.dim, &rows))
    }

    /// The submodule of elements supported on `coords` (in the given order), re-indexed.
    pub fn restrict_to(&self, coords: &[usize]) -> Result<ZModule> {
        let pos: HashMap<usize, usize> = coords.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let keep: Vec<LinearMap> = vec![LinearMap::from_fn(self.dim, self.dim, |i| {
            if pos.contains_key(&i) {
                RatRow::from([(i, Rat::one())])
            } else {
                RatRow::new()
            }
        })];
        let inside = self.fixed(&keep)?;
        let rows: Vec<RatRow> = inside
            .basis()
            .into_iter()
            .map(|r| r.into_iter().map(|(c, v)| (pos[&c], v)).collect())
            .collect();
        Ok(Self::from_rat_rows(coords.len(), &rows))
    }

    /// Image under the coordinate embedding `i -> coords[i]` into `dim` dimensions.
    pub fn embed(&self, dim: usize, coords: &[usize]) -> ZModule {
        let rows: Vec<RatRow> = self
            .basis()
            .into_iter()
            .map(|r| r.into_iter().map(|(c, v)| (coords[c], v)).collect())
            .collect();
        Self::from_rat_rows(dim, &rows)
    }
}

/// Index of the row module of `sub` in that of `sup`.
pub fn index_of(sub: &IntMatrix, sup: &IntMatrix) -> Result<Index> {
    ZModule::from_matrix(sub).index_in(&ZModule::from_matrix(sup))
}

/// Linear map in row convention: row `i` is the image of basis vector `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    pub dim_in: usize,
    pub dim_out: usize,
    images: Vec<RatRow>,
}

impl LinearMap {
    pub fn new(dim_out: usize, images: Vec<RatRow>) -> Self {
        LinearMap {
            dim_in: images.len(),
            dim_out,
            images,
        }
    }

    pub fn from_fn(dim_in: usize, dim_out: usize, f: impl Fn(usize) -> RatRow) -> Self {
        LinearMap {
            dim_in,
            dim_out,
            images: (0..dim_in).map(f).collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i| RatRow::from([(i, Rat::one())]))
    }

    pub fn from_matrix(m: &super::RatMatrix) -> Self {
        Self::from_fn(m.rows(), m.cols(), |i| {
            m.row(i)
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(j, v)| (j, v.clone()))
                .collect()
        })
    }

    pub fn to_matrix(&self) -> super::RatMatrix {
        let mut m = super::RatMatrix::zeros(self.dim_in, self.dim_out);
        for (i, r) in self.images.iter().enumerate() {
            for (j, v) in r {
                m.set(i, *j, v.clone());
            }
        }
        m
    }

    pub fn image_of(&self, i: usize) -> &RatRow {
        &self.images[i]
    }

    pub fn apply(&self, v: &RatRow) -> RatRow {
        let mut out = RatRow::new();
        for (i, x) in v {
            for (j, y) in &self.images[*i] {
                let e = out.entry(*j).or_insert_with(Rat::zero);
                *e += x * y;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &LinearMap) -> LinearMap {
        LinearMap {
            dim_in: self.dim_in,
            dim_out: next.dim_out,
            images: self.images.iter().map(|r| next.apply(r)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.dim_in == self.dim_out
            && self
                .images
                .iter()
                .enumerate()
                .all(|(i, r)| r.len() == 1 && r.get(&i).is_some_and(|v| v.is_one()))
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Connected components of the row/column support graph: (columns, rows) per component.
fn components(dim: usize, rows: &[SparseRow]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut uf = UnionFind::new(dim);
    for r in rows {
        for w in r.windows(2) {
            uf.union(w[0].0, w[1].0);
        }
    }
    let mut by_root: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (i, r) in rows.iter().enumerate() {
        if let Some((c, _)) = r.first() {
            let root = uf.find(*c);
            by_root.entry(root).or_default().1.push(i);
        }
    }
    for c in 0..dim {
        let root = uf.find(c);
        if let Some(e) = by_root.get_mut(&root) {
            e.0.push(c);
        }
    }
    by_root.into_values().collect()
}

/// Canonical HNF of sparse integer rows, computed per connected component.
pub(crate) fn hnf_sparse(dim: usize, rows: Vec<SparseRow>) -> Vec<SparseRow> {
    let rows: Vec<SparseRow> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    let groups = components(dim, &rows);
    let mut out: Vec<SparseRow> = groups
        .into_par_iter()
        .flat_map_iter(|(cols, idx)| {
            let local: HashMap<usize, usize> =
                cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
            let mut dense: Vec<Vec<Int>> = idx
                .iter()
                .map(|&r| {
                    let mut v = vec![Int::zero(); cols.len()];
                    for (c, x) in &rows[r] {
                        v[local[c]] = x.clone();
                    }
                    v
                })
                .collect();
            let rank = hnf_rows(&mut dense, None, cols.len());
            dense.truncate(rank);
            dense
                .into_iter()
                .map(|v| {
                    v.into_iter()
                        .enumerate()
                        .filter(|(_, x)| !x.is_zero())
                        .map(|(j, x)| (cols[j], x))
                        .collect::<SparseRow>()
                })
                .collect::<Vec<_>>()
        })
        .collect();
    out.sort_by_key(|r| r[0].0);
    out
}

/// Integer basis of {c in Z^n : c M = 0} for the rational rows `m`, sparse.
pub(crate) fn left_integer_kernel(m: &[RatRow]) -> Vec<SparseRow> {
    let n = m.len();
    // Rows that are already zero are free kernel directions.
    let mut out: Vec<SparseRow> = Vec::new();
    let nz: Vec<usize> = (0..n).filter(|&i| !m[i].is_empty()).collect();
    for i in 0..n {
        if m[i].is_empty() {
            out.push(vec![(i, Int::one())]);
        }
    }
    // Group the nonzero rows by shared columns.
    let mut col_ids: BTreeMap<usize, usize> = BTreeMap::new();
    for &i in &nz {
        for c in m[i].keys() {
            let k = col_ids.len();
            col_ids.entry(*c).or_insert(k);
        }
    }
    let mut uf = UnionFind::new(nz.len() + col_ids.len());
    for (a, &i) in nz.iter().enumerate() {
        for c in m[i].keys() {
            uf.union(a, nz.len() + col_ids[c]);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (a, &i) in nz.iter().enumerate() {
        groups.entry(uf.find(a)).or_default().push(i);
    }
    let found: Vec<Vec<SparseRow>> = groups
        .into_values()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|rows| {
            let mut cols: Vec<usize> = rows.iter().flat_map(|&i| m[i].keys().copied()).collect();
            cols.sort_unstable();
            cols.dedup();
            let local: HashMap<usize, usize> =
                cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
            let d = super::common_denominator(rows.iter().flat_map(|&i| m[i].values()));
            let dr = Rat::from_integer(d);
            let mut dense: Vec<Vec<Int>> = rows
                .iter()
                .map(|&i| {
                    let mut v = vec![Int::zero(); cols.len()];
                    for (c, x) in &m[i] {
                        v[local[c]] = (x * &dr).to_integer();
                    }
                    v
                })
                .collect();
            let mut u: Vec<Vec<Int>> = (0..rows.len())
                .map(|i| {
                    let mut v = vec![Int::zero(); rows.len()];
                    v[i] = Int::one();
                    v
                })
                .collect();
            let rank = hnf_rows(&mut dense, Some(&mut u), cols.len());
            let mut kern = u.split_off(rank);
            let _ = hnf_rows(&mut kern, None, rows.len());
            kern.into_iter()
                .map(|k| {
                    k.into_iter()
                        .enumerate()
                        .filter(|(_, x)| !x.is_zero())
                        .map(|(j, x)| (rows[j], x))
                        .collect()
                })
                .collect()
        })
        .collect();
    out.extend(found.into_iter().flatten());
    out
}

impl fmt::Display for ZModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Z-module of rank {} in Q^{} (denominator {})",
            self.rank(),
            self.dim,
            self.denom
        )
    }
}
