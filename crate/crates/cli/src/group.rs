use std::path::Path;

use ivoa_core::exact::{EvenLattice, LinearMap, RatMatrix};
use ivoa_core::symmetry::{lift_isometry, theta, LiftedIsometry};

use crate::{usage, CliError};

/// A square integer matrix file: the size d, then d rows, then optionally a line
/// `signs s_1 ... s_d`.
pub struct MatrixFile {
    pub rows: Vec<Vec<i64>>,
    pub signs: Option<Vec<i64>>,
}

fn ints(line: &str, what: &str) -> Result<Vec<i64>, CliError> {
    line.split_whitespace()
        .map(|t| t.parse::<i64>().map_err(|_| usage(format!("{what}: bad integer {t:?}"))))
        .collect()
}

pub fn read_matrix(path: &Path) -> Result<MatrixFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    let what = path.display().to_string();
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let d = lines
        .next()
        .ok_or_else(|| usage(format!("{what}: empty file")))?
        .parse::<usize>()
        .map_err(|_| usage(format!("{what}: first line must be the size")))?;
    let mut rows = Vec::with_capacity(d);
    for _ in 0..d {
        let line = lines.next().ok_or_else(|| usage(format!("{what}: expected {d} rows")))?;
        let r = ints(line, &what)?;
        if r.len() != d {
            return Err(usage(format!("{what}: row of length {} in a {d}x{d} matrix", r.len())));
        }
        rows.push(r);
    }
    let signs = match lines.next() {
        Some(l) => {
            let rest = l
                .strip_prefix("signs")
                .ok_or_else(|| usage(format!("{what}: unexpected line {l:?}")))?;
            let s = ints(rest, &what)?;
            if s.len() != d {
                return Err(usage(format!("{what}: expected {d} signs")));
            }
            Some(s)
        }
        None => None,
    };
    Ok(MatrixFile { rows, signs })
}

/// `theta` or a matrix file with optional signs.
pub fn read_generator(l: &EvenLattice, spec: &str) -> Result<LiftedIsometry, CliError> {
    if spec.eq_ignore_ascii_case("theta") {
        return Ok(theta(l));
    }
    let m = read_matrix(Path::new(spec))?;
    Ok(lift_isometry(l, m.rows, m.signs)?)
}

pub fn matrix_map(m: &MatrixFile) -> Result<LinearMap, CliError> {
    Ok(LinearMap::from_matrix(&RatMatrix::from_i64(&m.rows)?))
}

pub fn parse_coords(s: &str) -> Result<Vec<i64>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| usage(format!("bad coordinate {t:?}")))
        })
        .collect()
}
