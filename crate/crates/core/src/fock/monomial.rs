use std::fmt;

use serde::Serialize;

/// The creation operator `g_index(-mode)` for a basis vector `g_index`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Oscillator {
    pub index: usize,
    pub mode: u32,
}

impl Oscillator {
    pub fn new(index: usize, mode: u32) -> Self {
        assert!(mode >= 1, "creation modes are positive");
        Oscillator { index, mode }
    }
}

/// Commutative product of creation operators, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
pub struct FockMonomial(Vec<Oscillator>);

impl FockMonomial {
    pub fn one() -> Self {
        FockMonomial(Vec::new())
    }

    pub fn new(mut factors: Vec<Oscillator>) -> Self {
        factors.sort_unstable();
        FockMonomial(factors)
    }

    pub(crate) fn from_sorted(factors: Vec<Oscillator>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[0] <= w[1]));
        FockMonomial(factors)
    }

    pub fn single(index: usize, mode: u32) -> Self {
        FockMonomial(vec![Oscillator::new(index, mode)])
    }

    pub fn factors(&self) -> &[Oscillator] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|o| o.mode).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            if self.0[i] <= other.0[j] {
                out.push(self.0[i]);
                i += 1;
            } else {
                out.push(other.0[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        FockMonomial(out)
    }

    /// Removes one copy of `o`; `None` if absent.
    pub fn remove(&self, o: Oscillator) -> Option<Self> {
        let pos = self.0.iter().position(|x| *x == o)?;
        let mut v = self.0.clone();
        v.remove(pos);
        Some(FockMonomial(v))
    }

    /// Multiplicity of each distinct factor, in order.
    pub fn grouped(&self) -> Vec<(Oscillator, u32)> {
        let mut out: Vec<(Oscillator, u32)> = Vec::new();
        for &o in &self.0 {
            match out.last_mut() {
                Some((p, k)) if *p == o => *k += 1,
                _ => out.push((o, 1)),
            }
        }
        out
    }

    /// Product of factorials of the multiplicities.
    pub fn symmetry_factor(&self) -> u64 {
        self.grouped()
            .iter()
            .map(|(_, k)| (1..=u64::from(*k)).product::<u64>())
            .product()
    }
}

impl fmt::Display for FockMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .grouped()
            .into_iter()
            .map(|(o, k)| {
                if k == 1 {
                    format!("g{}(-{})", o.index + 1, o.mode)
                } else {
                    format!("g{}(-{})^{}", o.index + 1, o.mode, k)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}
