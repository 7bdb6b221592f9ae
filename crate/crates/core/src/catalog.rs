//! Named lattices and Gram-matrix files.

use std::path::Path;

use crate::error::{Error, Result};
use crate::exact::EvenLattice;
use crate::registry::Registry;

pub trait LatticeFamily: Send + Sync {
    fn name(&self) -> &'static str;
    fn describe(&self) -> &'static str;
    /// `arg` is the parenthesised or trailing integer, if any.
    fn build(&self, arg: Option<i64>) -> Result<EvenLattice>;
}

fn from_edges(n: usize, edges: &[(usize, usize)], scale: i64, name: String) -> Result<EvenLattice> {
    let mut g = vec![vec![0i64; n]; n];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = 2 * scale;
    }
    for &(a, b) in edges {
        g[a][b] = -scale;
        g[b][a] = -scale;
    }
    EvenLattice::new(g, Some(name))
}

const E8_EDGES: [(usize, usize); 7] = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];

pub struct RootA;
pub struct RootD;
pub struct RootE8;
pub struct ScaledE8;
pub struct RankOne;

fn need(arg: Option<i64>, family: &str) -> Result<i64> {
    arg.ok_or_else(|| Error::invalid(format!("{family} needs a size, e.g. {family}(2)")))
}

impl LatticeFamily for RootA {
    fn name(&self) -> &'static str {
        "A"
    }
    fn describe(&self) -> &'static str {
        "root lattice A(n), n >= 1"
    }
    fn build(&self, arg: Option<i64>) -> Result<EvenLattice> {
        let n = need(arg, "A")?;
        if n < 1 {
            return Err(Error::invalid("A(n) needs n >= 1"));
        }
        let n = n as usize;
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        from_edges(n, &edges, 1, format!("A{n}"))
    }
}

impl LatticeFamily for RootD {
    fn name(&self) -> &'static str {
        "D"
    }
    fn describe(&self) -> &'static str {
        "root lattice D(n), n >= 3"
    }
    fn build(&self, arg: Option<i64>) -> Result<EvenLattice> {
        let n = need(arg, "D")?;
        if n < 3 {
            return Err(Error::invalid("D(n) needs n >= 3"));
        }
        let n = n as usize;
        let mut edges: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
        edges.push((n - 3, n - 1));
        from_edges(n, &edges, 1, format!("D{n}"))
    }
}

impl LatticeFamily for RootE8 {
    fn name(&self) -> &'static str {
        "E8"
    }
    fn describe(&self) -> &'static str {
        "E8 root lattice, Bourbaki numbering"
    }
    fn build(&self, arg: Option<i64>) -> Result<EvenLattice> {
        if arg.is_some() {
            return Err(Error::invalid("E8 takes no size"));
        }
        from_edges(8, &E8_EDGES, 1, "E8".into())
    }
}

impl LatticeFamily for ScaledE8 {
    fn name(&self) -> &'static str {
        "EE8"
    }
    fn describe(&self) -> &'static str {
        "sqrt2 E8 (Gram matrix 2 E8)"
    }
    fn build(&self, arg: Option<i64>) -> Result<EvenLattice> {
        if arg.is_some() {
            return Err(Error::invalid("EE8 takes no size"));
        }
        from_edges(8, &E8_EDGES, 2, "EE8".into())
    }
}

impl LatticeFamily for RankOne {
    fn name(&self) -> &'static str {
        "RANK1"
    }
    fn describe(&self) -> &'static str {
        "rank one lattice with Gram [[2k]]"
    }
    fn build(&self, arg: Option<i64>) -> Result<EvenLattice> {
        let n = need(arg, "RANK1")?;
        if n <= 0 || n % 2 != 0 {
            return Err(Error::invalid("RANK1(m) needs a positive even m"));
        }
        EvenLattice::new(vec![vec![n]], Some(format!("RANK1({n})")))
    }
}

pub fn lattice_catalog() -> Registry<dyn LatticeFamily> {
    let mut r: Registry<dyn LatticeFamily> = Registry::new();
    r.register("A", Box::new(RootA));
    r.register("D", Box::new(RootD));
    r.register("E8", Box::new(RootE8));
    r.register("EE8", Box::new(ScaledE8));
    r.register("RANK1", Box::new(RankOne));
    r
}

/// Parses "rank" then `rank` rows of integers.
pub fn parse_gram(text: &str) -> Result<Vec<Vec<i64>>> {
    let mut nums = text.split_whitespace().map(|t| {
        t.parse::<i64>()
            .map_err(|_| Error::invalid(format!("not an integer: '{t}'")))
    });
    let d = nums
        .next()
        .ok_or_else(|| Error::invalid("empty lattice file"))??;
    if d <= 0 {
        return Err(Error::invalid("rank must be positive"));
    }
    let d = d as usize;
    let mut g = vec![vec![0i64; d]; d];
    for row in g.iter_mut() {
        for x in row.iter_mut() {
            *x = nums
                .next()
                .ok_or_else(|| Error::invalid("lattice file ends early"))??;
        }
    }
    if nums.next().is_some() {
        return Err(Error::invalid("trailing data in lattice file"));
    }
    Ok(g)
}

pub fn read_lattice_file(path: &Path) -> Result<EvenLattice> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
    EvenLattice::new(parse_gram(&text)?, name)
}

fn resolve_one(catalog: &Registry<dyn LatticeFamily>, spec: &str) -> Result<EvenLattice> {
    let spec = spec.trim();
    if let Some(f) = catalog.get(spec) {
        return f.build(None);
    }
    if let Some(open) = spec.find('(') {
        let name = &spec[..open];
        let inner = spec[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| Error::invalid(format!("unbalanced parentheses in '{spec}'")))?;
        let arg = inner
            .trim()
            .parse::<i64>()
            .map_err(|_| Error::invalid(format!("bad size in '{spec}'")))?;
        let f = catalog
            .get(name)
            .ok_or_else(|| Error::invalid(format!("unknown lattice family '{name}'")))?;
        return f.build(Some(arg));
    }
    let split = spec.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    if split < spec.len() && split > 0 {
        if let (Some(f), Ok(arg)) = (catalog.get(&spec[..split]), spec[split..].parse::<i64>()) {
            return f.build(Some(arg));
        }
    }
    Err(Error::invalid(format!(
        "unknown lattice '{spec}' (known: {})",
        catalog.names().join(", ")
    )))
}

/// A catalog name such as `A2`, `D(4)`, `E8`, `RANK1(4)`, an orthogonal sum
/// `A1+A1`, or a path to a Gram file.
pub fn resolve_lattice(spec: &str) -> Result<EvenLattice> {
    let path = Path::new(spec);
    if path.is_file() {
        return read_lattice_file(path);
    }
    let catalog = lattice_catalog();
    let mut parts = spec.split('+');
    let first = resolve_one(&catalog, parts.next().unwrap_or(""))?;
    let mut out = first;
    let mut any = false;
    for p in parts {
        let next = resolve_one(&catalog, p)?;
        out = out.orthogonal_sum(&next, None);
        any = true;
    }
    if any {
        out = EvenLattice::new(out.gram().to_vec(), Some(spec.trim().to_string()))?;
    }
    Ok(out)
}
