use std::collections::BTreeMap;

use rayon::prelude::*;

use super::vertex_mode;
use crate::error::{Error, Result};
use crate::exact::ZModule;
use crate::voa::{GradedZForm, LatticeVoa, VoaElement};

/// The Z-span, in weights `0..=max_degree`, of everything reachable from the
/// generators by iterated modes u_k v with u, v already in the span. Products
/// whose inputs would have weight above `max_degree` are not formed.
pub fn generated_form(
    voa: &LatticeVoa,
    generators: &[VoaElement],
    max_degree: u32,
) -> Result<Vec<GradedZForm>> {
    let l = voa.lattice();
    let spaces = (0..=max_degree)
        .map(|n| voa.space(n))
        .collect::<Result<Vec<_>>>()?;
    let mut modules: Vec<ZModule> = spaces.iter().map(|s| ZModule::zero(s.dim())).collect();
    let mut all: Vec<Vec<VoaElement>> = vec![Vec::new(); max_degree as usize + 1];
    let mut frontier: Vec<Vec<VoaElement>> = vec![Vec::new(); max_degree as usize + 1];

    let mut sorted: Vec<&VoaElement> = generators.iter().collect();
    sorted.sort_by_key(|g| (g.weight(l), g.to_string()));
    for g in sorted {
        let w = g
            .weight(l)
            .ok_or_else(|| Error::invalid("generator is not homogeneous"))?;
        if w < 0 || w > i64::from(max_degree) {
            return Err(Error::invalid(format!("generator of weight {w} out of range")));
        }
        frontier[w as usize].push(g.clone());
    }
    for (n, f) in frontier.iter().enumerate() {
        let rows = f
            .iter()
            .map(|e| spaces[n].coords(e))
            .collect::<Result<Vec<_>>>()?;
        let gens = ZModule::from_rat_rows(spaces[n].dim(), &rows);
        modules[n] = modules[n].sum(&gens)?;
    }

    while frontier.iter().any(|f| !f.is_empty()) {
        for (n, f) in frontier.iter().enumerate() {
            all[n].extend(f.iter().cloned());
        }
        // Pairs with at least one factor from the frontier.
        let mut pairs: Vec<(usize, usize, &VoaElement, &VoaElement)> = Vec::new();
        for a in 0..=max_degree as usize {
            for b in 0..=max_degree as usize {
                for (i, u) in all[a].iter().enumerate() {
                    let u_new = i >= all[a].len() - frontier[a].len();
                    for (j, v) in all[b].iter().enumerate() {
                        let v_new = j >= all[b].len() - frontier[b].len();
                        if u_new || v_new {
                            pairs.push((a, b, u, v));
                        }
                    }
                }
            }
        }
        let products: Vec<(usize, VoaElement)> = pairs
            .par_iter()
            .flat_map_iter(|&(a, b, u, v)| {
                (0..=max_degree as i64).rev().filter_map(move |n| {
                    let k = a as i64 + b as i64 - n - 1;
                    let w = vertex_mode(voa, u, k, v);
                    (!w.is_zero()).then_some((n as usize, w))
                })
            })
            .collect();
        let mut by_degree: BTreeMap<usize, Vec<VoaElement>> = BTreeMap::new();
        for (n, w) in products {
            by_degree.entry(n).or_default().push(w);
        }
        let mut next: Vec<Vec<VoaElement>> = vec![Vec::new(); max_degree as usize + 1];
        for (n, ws) in by_degree {
            let coords = ws
                .iter()
                .map(|w| spaces[n].coords(w))
                .collect::<Result<Vec<_>>>()?;
            let fresh: Vec<usize> = coords
                .par_iter()
                .enumerate()
                .filter(|(_, c)| !modules[n].contains_vector(c))
                .map(|(i, _)| i)
                .collect();
            if fresh.is_empty() {
                continue;
            }
            let rows: Vec<_> = fresh.iter().map(|&i| coords[i].clone()).collect();
            let added = ZModule::from_rat_rows(spaces[n].dim(), &rows);
            modules[n] = modules[n].sum(&added)?;
            // Only the module's new basis vectors are fed back.
            next[n] = modules[n]
                .basis()
                .iter()
                .map(|r| spaces[n].element(r))
                .filter(|e| !all[n].contains(e))
                .collect();
        }
        frontier = next;
    }
    spaces
        .into_iter()
        .zip(modules)
        .map(|(s, m)| GradedZForm::new(s, m))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{EvenLattice, LatticeVector};

    #[test]
    fn rank_one_generation() {
        let voa = LatticeVoa::new(EvenLattice::named(vec![vec![2]], "A1").unwrap()).unwrap();
        let gens = vec![
            VoaElement::exp(LatticeVector(vec![1])),
            VoaElement::exp(LatticeVector(vec![-1])),
        ];
        let forms = generated_form(&voa, &gens, 3).unwrap();
        assert_eq!(forms[1].rank(), 3);
        for (n, f) in forms.iter().enumerate() {
            assert_eq!(f, &GradedZForm::integral(&voa, n as u32).unwrap());
        }
    }

    #[test]
    fn vacuum_generates_little() {
        let voa = LatticeVoa::new(EvenLattice::named(vec![vec![2]], "A1").unwrap()).unwrap();
        let forms = generated_form(&voa, &[voa.vacuum()], 2).unwrap();
        assert_eq!(forms[0].rank(), 1);
        assert_eq!(forms[1].rank(), 0);
        assert_eq!(forms[2].rank(), 0);
    }
}
