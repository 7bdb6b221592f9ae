use std::fmt;

use serde::Serialize;

use super::{FockMonomial, Oscillator};

/// Weakly decreasing list of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All partitions of `n`, largest first part first (reverse lexicographic).
pub fn partitions(n: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill(n, n, &mut cur, &mut out);
    out
}

fn fill(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition(cur.clone()));
        return;
    }
    for p in (1..=rest.min(max)).rev() {
        cur.push(p);
        fill(rest - p, p, cur, out);
        cur.pop();
    }
}

/// Multisets of (color, part) pairs with `colors` colors and total part sum `n`,
/// as Fock monomials in canonical order.
pub fn colored_partitions(colors: usize, n: u32) -> Vec<FockMonomial> {
    let slots: Vec<Oscillator> = (0..colors)
        .flat_map(|i| (1..=n).map(move |m| Oscillator::new(i, m)))
        .collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    choose(&slots, 0, n, &mut cur, &mut out);
    out.sort();
    out
}

fn choose(
    slots: &[Oscillator],
    from: usize,
    rest: u32,
    cur: &mut Vec<Oscillator>,
    out: &mut Vec<FockMonomial>,
) {
    if rest == 0 {
        out.push(FockMonomial::from_sorted(cur.clone()));
        return;
    }
    for s in from..slots.len() {
        let o = slots[s];
        if o.mode > rest {
            continue;
        }
        cur.push(o);
        choose(slots, s, rest - o.mode, cur, out);
        cur.pop();
    }
}

/// Splits a colored partition into one ordinary partition per color.
pub fn split_colors(m: &FockMonomial, colors: usize) -> Vec<Partition> {
    let mut parts = vec![Vec::new(); colors];
    for o in m.factors() {
        parts[o.index].push(o.mode);
    }
    parts.into_iter().map(Partition::new).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn euler(n: usize) -> Vec<u64> {
        let mut p = vec![0i64; n + 1];
        p[0] = 1;
        for m in 1..=n {
            let mut k = 1i64;
            let mut s = 0i64;
            loop {
                let g1 = (k * (3 * k - 1) / 2) as usize;
                if g1 > m {
                    break;
                }
                let sign = if k % 2 == 1 { 1 } else { -1 };
                s += sign * p[m - g1];
                let g2 = (k * (3 * k + 1) / 2) as usize;
                if g2 <= m {
                    s += sign * p[m - g2];
                }
                k += 1;
            }
            p[m] = s;
        }
        p.into_iter().map(|v| v as u64).collect()
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(0), vec![Partition::empty()]);
        assert_eq!(partitions(4).len(), 5);
        let p = euler(12);
        for n in 0..=12u32 {
            assert_eq!(partitions(n).len() as u64, p[n as usize]);
        }
        assert_eq!(partitions(10).len(), 42);
    }

    #[test]
    fn colored_counts() {
        assert_eq!(colored_partitions(1, 2).len(), 2);
        assert_eq!(colored_partitions(1, 4).len(), 5);
        assert_eq!(colored_partitions(2, 2).len(), 5);
        // 8 colors, degree 2: 8 single parts plus 36 unordered pairs.
        assert_eq!(colored_partitions(8, 2).len(), 44);
        assert_eq!(colored_partitions(3, 0).len(), 1);
    }
}
