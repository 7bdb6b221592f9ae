//! Acceptance suite: one PASS/FAIL line per criterion, exact arithmetic throughout.
//! Runs with its own harness so the lines always reach the test output.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ivoa_core::audit::{audit_form, j_block_audit, AuditOptions, Parity};
use ivoa_core::catalog::resolve_lattice;
use ivoa_core::cvcc::{
    cvcc_aa1, cvcc_ee8, default_ee8_embedding, first_norm_four, ising_check, miyamoto,
    stabilization_check,
};
use ivoa_core::exact::{
    int, rat, rat_int, short_vectors, EvenLattice, Index, LatticeVector, LinearMap, Rat, RatMatrix,
    ZModule,
};
use ivoa_core::fock::{e_minus_lattice, e_minus_series, FockMonomial, FockPolynomial, Oscillator};
use ivoa_core::symmetry::{
    eigen_split, group_closure, lift_isometry, module_product_span, orbit_intersection, sum_forms,
    intersect_forms, tensor_swap, theta, translate_forms, LiftedIsometry,
};
use ivoa_core::vertex::{generated_form, modes_into, trace_form, vertex_mode};
use ivoa_core::voa::{
    pair, pairing_backends, voa_basis, BasisElement, BasisKind, Form, GradedZForm, LatticeVoa,
    VoaElement,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn voa(name: &str) -> LatticeVoa {
    LatticeVoa::new(resolve_lattice(name).unwrap()).unwrap()
}

fn forms(v: &LatticeVoa, top: u32) -> Vec<GradedZForm> {
    (0..=top).map(|n| GradedZForm::integral(v, n).unwrap()).collect()
}

fn poly(terms: &[(&[(usize, u32)], Rat)]) -> FockPolynomial {
    let mut p = FockPolynomial::zero();
    for (fs, c) in terms {
        let m = FockMonomial::new(fs.iter().map(|&(i, k)| Oscillator::new(i, k)).collect());
        p.add_term(m, c.clone());
    }
    p
}

fn neutral(v: &LatticeVoa, p: FockPolynomial) -> VoaElement {
    VoaElement::from_part(LatticeVector::zero(v.rank()), p)
}

fn lin(v: &LatticeVector, mode: u32) -> FockPolynomial {
    let c: Vec<Rat> = v.0.iter().map(|&x| rat_int(x)).collect();
    FockPolynomial::linear(&c, mode)
}

fn roots(l: &EvenLattice) -> Vec<LatticeVector> {
    let g = RatMatrix::from_i64(l.gram()).unwrap();
    short_vectors(&g, &rat_int(2))
        .unwrap()
        .into_iter()
        .map(|(v, _)| LatticeVector(v))
        .collect()
}

// 1. E^- coefficients.
fn c1() -> Outcome {
    let s = e_minus_series(&[rat_int(1)], 3);
    let want = [
        poly(&[(&[], rat_int(1))]),
        poly(&[(&[(0, 1)], rat_int(1))]),
        poly(&[(&[(0, 2)], rat(1, 2)), (&[(0, 1), (0, 1)], rat(1, 2))]),
        poly(&[
            (&[(0, 3)], rat(1, 3)),
            (&[(0, 1), (0, 2)], rat(1, 2)),
            (&[(0, 1), (0, 1), (0, 1)], rat(1, 6)),
        ]),
    ];
    let ok = s == want;
    outcome(ok, "s_0..s_3 of E^-(a, z) match the displayed coefficients")
}

// 2. Convolution identity.
fn c2() -> Outcome {
    let mut checked = 0;
    for name in ["A2", "E8"] {
        let l = resolve_lattice(name).unwrap();
        for i in 0..l.rank() {
            let a = l.basis(i);
            let s = e_minus_lattice(&a, 12);
            let t = e_minus_lattice(&-&a, 12);
            for n in 0..=12usize {
                let mut acc = FockPolynomial::zero();
                for i in 0..=n {
                    acc.add_scaled(&s[i].mul(&t[n - i]), &Rat::one());
                }
                let want = if n == 0 { FockPolynomial::one() } else { FockPolynomial::zero() };
                if acc != want {
                    return outcome(false, format!("{name} basis {i}, n = {n}"));
                }
                checked += 1;
            }
        }
    }
    outcome(true, format!("{checked} sums on A2 and E8 basis vectors, n <= 12"))
}

/// Both registered backends agree on every pair within each partner-charge block
/// (pairs across blocks vanish by charge in both).
fn backends_agree(v: &LatticeVoa, degree: u32, form: Form) -> Result<usize, String> {
    let reg = pairing_backends();
    let a = reg.get("contraction").unwrap();
    let b = reg.get("genfun").unwrap();
    let basis = voa_basis(v, degree).unwrap();
    let mut by_charge: BTreeMap<LatticeVector, Vec<&BasisElement>> = BTreeMap::new();
    for x in &basis {
        by_charge.entry(x.charge.clone()).or_default().push(x);
    }
    let mut n = 0;
    for (c, xs) in &by_charge {
        let Some(ys) = by_charge.get(&form.partner(c)) else { continue };
        for x in xs {
            for y in ys {
                if a.pair(v, x, y, form) != b.pair(v, x, y, form) {
                    return Err(format!("degree {degree} {form}: {:?} vs {:?}", x.label, y.label));
                }
                n += 1;
            }
        }
    }
    // Spot-check that cross-block pairs vanish in both.
    if let (Some(x), Some(y)) = (basis.first(), basis.last()) {
        if form.partner(&x.charge) != y.charge && (!a.pair(v, x, y, form).is_zero() || !b.pair(v, x, y, form).is_zero()) {
            return Err("cross-block pair is nonzero".into());
        }
    }
    Ok(n)
}

// 3. Pairing oracle equivalence.
fn c3() -> Outcome {
    let mut total = 0;
    for (name, top) in [("A2", 4), ("E8", 2)] {
        let v = voa(name);
        for form in [Form::Bilinear, Form::Hermitian] {
            for n in 0..=top {
                match backends_agree(&v, n, form) {
                    Ok(k) => total += k,
                    Err(e) => return outcome(false, format!("{name}: {e}")),
                }
            }
        }
    }
    outcome(true, format!("{total} same-block pairs agree (A2 <= 4, E8 <= 2, both forms)"))
}

// 4. Inner products of the degree-two elements.
fn c4() -> Outcome {
    let v = voa("E8");
    let l = v.lattice();
    let rs = roots(l);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let sample: Vec<&LatticeVector> = (0..24).map(|_| &rs[rng.gen_range(0..rs.len())]).collect();
    let h = Form::Hermitian;
    let s2 = |a: &LatticeVector| neutral(&v, e_minus_lattice(a, 2)[2].clone());
    for a in &sample {
        if pair(&v, &s2(a), &s2(a), h) != rat_int(3) {
            return outcome(false, format!("norm of s_(a,2) for a = {a}"));
        }
        for b in &sample {
            let ab = l.inner(a, b);
            let u = neutral(&v, lin(a, 2));
            let w = neutral(&v, lin(b, 2));
            if pair(&v, &u, &w, h) != rat_int(2 * ab) {
                return outcome(false, format!("(a(-2)|b(-2)) at {a}, {b}"));
            }
            let sq = neutral(&v, lin(b, 1).mul(&lin(b, 1)));
            if !pair(&v, &u, &sq, h).is_zero() {
                return outcome(false, "(a(-2)|b(-1)^2) nonzero");
            }
            let want = rat(ab, 2) + rat(ab * ab, 2);
            if pair(&v, &s2(a), &s2(b), h) != want {
                return outcome(false, format!("(s_(a,2)|s_(b,2)) at {a}, {b}"));
            }
        }
    }
    for _ in 0..200 {
        let q: Vec<&LatticeVector> = (0..4).map(|_| sample[rng.gen_range(0..sample.len())]).collect();
        let x = neutral(&v, lin(q[0], 1).mul(&lin(q[1], 1)));
        let y = neutral(&v, lin(q[2], 1).mul(&lin(q[3], 1)));
        let want = l.inner(q[0], q[2]) * l.inner(q[1], q[3]) + l.inner(q[0], q[3]) * l.inner(q[1], q[2]);
        if pair(&v, &x, &y, h) != rat_int(want) {
            return outcome(false, "(a(-1)b(-1)|c(-1)d(-1)) expansion");
        }
    }
    outcome(true, "24 E8 roots: norms, cross pairings and 200 four-root products")
}

// 5. Degree-1 audit of E8.
fn c5() -> Outcome {
    let v = voa("E8");
    let r1 = GradedZForm::integral(&v, 1).unwrap();
    let a = audit_form(&v, &r1, Form::Hermitian, AuditOptions::default()).unwrap();
    let blocks = r1.gram_blocks(&v, Form::Hermitian);
    let e8 = RatMatrix::from_i64(v.lattice().gram()).unwrap();
    let big = blocks.iter().filter(|b| b.rows.len() == 8).collect::<Vec<_>>();
    let ones = blocks.iter().filter(|b| b.rows.len() == 1 && b.gram.is_identity()).count();
    let ok = a.rank == 248
        && a.det == rat_int(1)
        && a.parity == Some(Parity::Odd)
        && big.len() == 1
        && big[0].gram == e8
        && ones == 240;
    outcome(ok, format!("rank {}, det {}, {}, Gram(E8) + I_{ones}", a.rank, a.det, a.parity.unwrap()))
}

// 6. Degree-2 audit of E8.
fn c6() -> Outcome {
    let v = voa("E8");
    let r2 = GradedZForm::integral(&v, 2).unwrap();
    let a = audit_form(&v, &r2, Form::Hermitian, AuditOptions::default()).unwrap();
    let e8 = RatMatrix::from_i64(v.lattice().gram()).unwrap();
    let blocks = r2.gram_blocks(&v, Form::Hermitian);
    let middle = blocks.iter().filter(|b| b.rows.len() == 8).collect::<Vec<_>>();
    let s_ok = a.blocks.iter().any(|c| c.charge_norm == 4 && c.count == 2160 && c.size == 1 && c.identity);
    let m_ok = middle.len() == 240 && middle.iter().all(|b| b.gram == e8);
    let j = j_block_audit(&v, &r2, Form::Hermitian, true).unwrap();
    let j_ok = j.rank == 44
        && j.det == rat_int(1)
        && j.parity == Some(Parity::Odd)
        && (j.j1_rank, j.j2_rank) == (36, 8)
        && j.orthogonal
        && j.index == int(256)
        && j.sum_det == rat_int(1 << 16)
        && j.min_norm == Some(rat_int(3));
    let sizes: usize = a.blocks.iter().map(|c| c.count * c.size).sum();
    let ok = a.rank == 4124 && sizes == 4124 && a.det == rat_int(1) && s_ok && m_ok && j_ok;
    outcome(
        ok,
        format!(
            "blocks 2160/1920/44, S = I, 240 x Gram(E8), det J = {}, |J:J1+J2| = {}, det(J1+J2) = {}, min J = {}",
            j.det,
            j.index,
            j.sum_det,
            j.min_norm.map_or("-".into(), |m| m.to_string())
        ),
    )
}

fn dual_partner(b: &BasisElement, form: Form) -> BasisElement {
    match form {
        Form::Hermitian => BasisElement {
            charge: b.charge.clone(),
            label: b.label.clone(),
            kind: BasisKind::DualSchur,
        },
        Form::Bilinear => BasisElement {
            charge: -&b.charge,
            label: b.label.clone(),
            kind: BasisKind::DualSchurBilinear,
        },
    }
}

// 7. Duality.
fn c7() -> Outcome {
    let v = voa("A2");
    for form in [Form::Hermitian, Form::Bilinear] {
        for n in 0..=5 {
            let primal = ivoa_core::voa::dual_form_basis(&v, n, false).unwrap();
            let mut by_charge: BTreeMap<LatticeVector, Vec<&BasisElement>> = BTreeMap::new();
            for x in &primal {
                by_charge.entry(x.charge.clone()).or_default().push(x);
            }
            for xs in by_charge.values() {
                for x in xs {
                    let d = dual_partner(x, form).element(&v);
                    for y in xs {
                        let want = if x == y { Rat::one() } else { Rat::zero() };
                        if pair(&v, &d, &y.element(&v), form) != want {
                            return outcome(false, format!("A2 degree {n} {form}"));
                        }
                    }
                }
            }
        }
    }
    let mut got = Vec::new();
    let mut ok = true;
    for (name, want) in [("A1", vec![2]), ("A2", vec![3]), ("EE8", vec![2; 8]), ("E8", vec![])] {
        let v = voa(name);
        let r1 = GradedZForm::integral(&v, 1).unwrap();
        let u1 = GradedZForm::dual_schur(&v, 1).unwrap();
        let q = ivoa_core::voa::quotient_invariants(&r1, &u1).unwrap();
        ok &= q.divisors_i64() == want && q.free_rank == 0;
        got.push(format!("{name} {:?}", q.divisors_i64()));
    }
    outcome(ok, format!("dual/primal Schur Gram = I on A2 <= 5; U1/R1: {}", got.join(", ")))
}

// 8. Integral closure.
fn c8() -> Outcome {
    for name in ["A1", "A2"] {
        let v = voa(name);
        let r = forms(&v, 3);
        let elems: Vec<(usize, Vec<VoaElement>)> = r.iter().map(|f| (f.degree() as usize, f.basis_elements())).collect();
        for (_, us) in &elems {
            for u in us {
                for (_, ws) in &elems {
                    for w in ws {
                        for (_, x) in modes_into(&v, u, w, 3) {
                            let n = x.weight(v.lattice()).unwrap() as usize;
                            if !r[n].contains_element(&x).unwrap() {
                                return outcome(false, format!("{name}: a mode leaves R_{n}"));
                            }
                        }
                    }
                }
            }
        }
        let gens: Vec<VoaElement> = (0..v.rank())
            .flat_map(|i| {
                let g = v.lattice().basis(i);
                [VoaElement::exp(g.clone()), VoaElement::exp(-&g)]
            })
            .collect();
        let gen = generated_form(&v, &gens, 3).unwrap();
        if gen != r {
            return outcome(false, format!("{name}: generated form differs from R"));
        }
    }
    let v = voa("E8");
    for n in 0..=2 {
        let r = GradedZForm::integral(&v, n).unwrap();
        for form in [Form::Bilinear, Form::Hermitian] {
            if !r.denominator(&v, form).is_one() {
                return outcome(false, format!("E8 degree {n} {form} Gram not integral"));
            }
        }
    }
    outcome(true, "A1/A2 modes stay in R and e^(+-g_i) generate R to degree 3; E8 Grams integral to degree 2")
}

fn a2_rotation(l: &EvenLattice) -> LiftedIsometry {
    lift_isometry(l, vec![vec![0, -1], vec![1, -1]], None).unwrap()
}

// 9. Intersection over a group orbit.
fn c9() -> Outcome {
    let v = voa("A2");
    let l = v.lattice();
    let gens = [theta(l), a2_rotation(l)];
    let group = group_closure(l, &gens, 64).unwrap();
    let r = forms(&v, 4);
    let s = orbit_intersection(&v, &r, &group).unwrap();
    let mut idx = Vec::new();
    for g in &gens {
        if translate_forms(&v, &s, g).unwrap() != s {
            return outcome(false, "S is not G-invariant");
        }
    }
    for (sn, rn) in s.iter().zip(&r) {
        match sn.index_in(rn).unwrap() {
            Index::Finite(k) => idx.push(k.to_string()),
            Index::Infinite => return outcome(false, "infinite index"),
        }
    }
    outcome(true, format!("|G| = {}, S invariant, |R_n : S_n| = [{}]", group.len(), idx.join(", ")))
}

/// A', A'' of the extension construction with D trivial, degree by degree.
fn extension_pair(v: &LatticeVoa, e_gens: &[LiftedIsometry], n_group: &[LiftedIsometry], top: u32) -> (Vec<GradedZForm>, Vec<GradedZForm>) {
    let mut a1 = Vec::new();
    let mut a2 = Vec::new();
    for r in forms(v, top) {
        let maps: Vec<LinearMap> = e_gens.iter().map(|g| g.matrix(v, r.degree()).unwrap()).collect();
        let split = eigen_split(r.module(), &maps).unwrap();
        let mut lows = Vec::new();
        let mut highs = Vec::new();
        for m in &split.modules {
            let a = GradedZForm::new(r.space().clone(), m.clone()).unwrap();
            let images: Vec<GradedZForm> = n_group
                .iter()
                .map(|g| a.image(&g.matrix(v, r.degree()).unwrap()).unwrap())
                .collect();
            // Stabilizer of the character: the elements fixing the eigenspace.
            let stab: Vec<GradedZForm> = images
                .into_iter()
                .filter(|x| x.module().same_rational_span(a.module()))
                .collect();
            lows.push(intersect_forms(&stab).unwrap());
            highs.push(sum_forms(&stab).unwrap());
        }
        a1.push(sum_forms(&lows).unwrap());
        a2.push(sum_forms(&highs).unwrap());
    }
    (a1, a2)
}

fn containments(v: &LatticeVoa, e_gens: &[LiftedIsometry], n_group: &[LiftedIsometry]) -> Result<String, String> {
    let top = 3;
    let (ap, app) = extension_pair(v, e_gens, n_group, top);
    let pp = module_product_span(v, &ap, &ap, top).unwrap();
    let ppp = module_product_span(v, &ap, &app, top).unwrap();
    for n in 0..=top as usize {
        let chain = [&ap[n], &pp[n], &ppp[n], &app[n]];
        for w in chain.windows(2) {
            if !w[1].contains(w[0]).unwrap() {
                return Err(format!("containment fails in degree {n}"));
            }
        }
        if !matches!(ap[n].index_in(&app[n]).unwrap(), Index::Finite(_)) {
            return Err(format!("A''/A' is not torsion in degree {n}"));
        }
    }
    Ok(format!("{} ranks {:?}", v.lattice().label(), ap.iter().map(GradedZForm::rank).collect::<Vec<_>>()))
}

// 10. Extension containments.
fn c10() -> Outcome {
    let mut notes = Vec::new();
    let v = voa("RANK1(4)");
    let l = v.lattice();
    let flip = lift_isometry(l, vec![vec![1]], Some(vec![-1])).unwrap();
    let e_gens = [theta(l), flip];
    let n_group = group_closure(l, &e_gens, 16).unwrap();
    match containments(&v, &e_gens, &n_group) {
        Ok(s) => notes.push(s),
        Err(e) => return outcome(false, format!("RANK1(4): {e}")),
    }
    let v = voa("A1+A1");
    let l = v.lattice();
    let s1 = lift_isometry(l, vec![vec![-1, 0], vec![0, 1]], None).unwrap();
    let s2 = lift_isometry(l, vec![vec![1, 0], vec![0, -1]], None).unwrap();
    let swap = lift_isometry(l, vec![vec![0, 1], vec![1, 0]], None).unwrap();
    let n_group = group_closure(l, &[s1.clone(), s2.clone(), swap], 64).unwrap();
    match containments(&v, &[s1, s2], &n_group) {
        Ok(s) => notes.push(s),
        Err(e) => return outcome(false, format!("A1+A1: {e}")),
    }
    outcome(true, format!("A' <= A'.A' <= A'.A'' <= A'' to degree 3: {}", notes.join("; ")))
}

fn ising_suite(v: &LatticeVoa, e: &VoaElement, bracket: u32, top: u32) -> Result<String, String> {
    let rep = ising_check(v, e, bracket).unwrap();
    if !rep.passed() {
        let bad: Vec<String> = rep.checks.iter().filter(|c| !c.pass).map(|c| format!("{}: {}", c.name, c.detail)).collect();
        return Err(bad.join("; "));
    }
    let mut sixteenth = 0;
    for n in 0..=top {
        let m = miyamoto(v, e, n).map_err(|x| x.to_string())?;
        if !m.involutive {
            return Err(format!("t(e)^2 != 1 in degree {n}"));
        }
        sixteenth += m.minus_dim;
    }
    let fs = forms(v, top);
    for line in stabilization_check(v, e, &fs).unwrap() {
        if !line.span_preserved {
            return Err(format!("rational span moved in degree {}", line.degree));
        }
    }
    Ok(format!("{} ok (1/16-dim {sixteenth})", v.lattice().label()))
}

// 11. Ising vectors.
fn c11() -> Outcome {
    let mut notes = Vec::new();
    let v = voa("RANK1(4)");
    for sign in [1, -1] {
        let e = cvcc_aa1(&v, &LatticeVector(vec![1]), sign).unwrap();
        match ising_suite(&v, &e.e, 2, 4) {
            Ok(s) => notes.push(s),
            Err(x) => return outcome(false, format!("RANK1(4): {x}")),
        }
    }
    let v = voa("E8");
    let a = first_norm_four(v.lattice()).unwrap();
    let e = cvcc_aa1(&v, &a, 1).unwrap();
    match ising_suite(&v, &e.e, 1, 2) {
        Ok(s) => notes.push(s),
        Err(x) => return outcome(false, format!("E8: {x}")),
    }
    let v = voa("EE8");
    let emb = default_ee8_embedding(v.lattice()).unwrap();
    let e = cvcc_ee8(&v, &emb, &[1; 8]).unwrap();
    match ising_suite(&v, &e.e, 0, 2) {
        Ok(s) => notes.push(s),
        Err(x) => return outcome(false, format!("EE8: {x}")),
    }
    outcome(true, notes.join("; "))
}

/// A random involution of Z^d with exactly r swap blocks, conjugated by a unimodular matrix.
fn random_involution(rng: &mut ChaCha8Rng, d: usize, r: usize) -> Vec<Vec<i64>> {
    let plus = rng.gen_range(0..=d - 2 * r);
    let mut t = vec![vec![0i64; d]; d];
    for k in 0..r {
        t[2 * k][2 * k + 1] = 1;
        t[2 * k + 1][2 * k] = 1;
    }
    for i in 2 * r..d {
        t[i][i] = if i - 2 * r < plus { 1 } else { -1 };
    }
    let mut u: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
    let mut ui = u.clone();
    for _ in 0..3 * d {
        let (i, j) = (rng.gen_range(0..d), rng.gen_range(0..d));
        if i == j {
            continue;
        }
        let c = if rng.gen_bool(0.5) { 1 } else { -1 };
        // u <- (1 + c E_ij) u, ui <- ui (1 - c E_ij)
        for k in 0..d {
            u[i][k] += c * u[j][k];
        }
        for row in ui.iter_mut() {
            row[j] -= c * row[i];
        }
    }
    let mul = |a: &[Vec<i64>], b: &[Vec<i64>]| -> Vec<Vec<i64>> {
        (0..d).map(|i| (0..d).map(|j| (0..d).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
    };
    mul(&mul(&u, &t), &ui)
}

// 12. Involutions on free abelian groups.
fn c12() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for trial in 0..100 {
        let d = rng.gen_range(1..=10);
        let r = rng.gen_range(0..=d / 2);
        let t = random_involution(&mut rng, d, r);
        let map = LinearMap::from_matrix(&RatMatrix::from_i64(&t).unwrap());
        let split = eigen_split(&ZModule::standard(d), &[map]).unwrap();
        let order = split.quotient.order().unwrap();
        if order != int(1 << r) || split.jordan_r != Some(r) {
            return outcome(false, format!("trial {trial}: d = {d}, r = {r}, quotient {order}"));
        }
    }
    let mut ranks = Vec::new();
    let mut expected = true;
    for n in 1..=6usize {
        let split = eigen_split(&ZModule::standard(n * n), &[tensor_swap(n)]).unwrap();
        let q = split.quotient.divisors_i64();
        expected &= q.len() == n * (n - 1) / 2 && q.iter().all(|&x| x == 2);
        ranks.push(q.len());
    }
    let stated = ranks.iter().enumerate().all(|(i, &k)| k == i + 1);
    let detail = format!(
        "2^r on 100 random involutions ok; swap on Z^n (x) Z^n gives (Z/2)^k with k = {ranks:?} = C(n,2){}, not (Z/2)^n",
        if expected { "" } else { " (unexpected)" }
    );
    outcome(stated, detail)
}

// 13. Trace form.
fn c13() -> Outcome {
    let v = voa("A1");
    let mut ranks = Vec::new();
    for m in 0..=2 {
        let r = GradedZForm::integral(&v, m).unwrap();
        match trace_form(&v, &r) {
            Ok(f) => ranks.push(format!("f_{m}: {}x{} rank {}", f.matrix.rows(), f.matrix.cols(), f.rank)),
            Err(e) => return outcome(false, format!("f_{m}: {e}")),
        }
    }
    outcome(true, format!("integral on R_m, m <= 2: {}", ranks.join(", ")))
}

/// Generalized binomial coefficient C(e, t).
fn binom(e: i64, t: u32) -> Rat {
    let mut x = Rat::one();
    for i in 0..i64::from(t) {
        x = x * rat(e - i, i + 1);
    }
    x
}

type Series = BTreeMap<Vec<i64>, FockPolynomial>;

fn series_mul(a: &Series, b: &Series, caps: &[i64]) -> Series {
    let mut out = Series::new();
    for (ka, pa) in a {
        for (kb, pb) in b {
            let k: Vec<i64> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
            if k.iter().skip(1).zip(caps).any(|(x, c)| x > c) {
                continue;
            }
            out.entry(k).or_default().add_scaled(&pa.mul(pb), &Rat::one());
        }
    }
    out.retain(|_, p| !p.is_zero());
    out
}

/// Y(A, z)B from the product formula, where A = exp(sum a_i(-n)/n w_i^n) e^a and
/// B = exp(sum b_j(-n)/n x_j^n) e^b, read off at z^{-k-1} w^m x^n.
fn product_formula(
    v: &LatticeVoa,
    alphas: &[LatticeVector],
    ms: &[u32],
    betas: &[LatticeVector],
    ns: &[u32],
    k: i64,
) -> VoaElement {
    let l = v.lattice();
    let sum = |xs: &[LatticeVector]| xs.iter().fold(LatticeVector::zero(l.rank()), |a, b| &a + b);
    let (a, b) = (sum(alphas), sum(betas));
    let (ka, kb) = (alphas.len(), betas.len());
    // Slots: z, w_1.., x_1.., then the Fock weight, capped at the weight of the answer.
    let vars = 2 + ka + kb;
    let mut caps: Vec<i64> = ms.iter().chain(ns).map(|&x| i64::from(x)).collect();
    let weight = l.norm(&a) / 2 + l.norm(&b) / 2 + caps.iter().sum::<i64>() - k - 1;
    let fock_weight = weight - l.norm(&(&a + &b)) / 2;
    if fock_weight < 0 {
        return VoaElement::zero();
    }
    let top = fock_weight as u32;
    caps.push(fock_weight);
    let fw = vars - 1;
    let key = |z: i64, slot: Option<(usize, i64)>, slot2: Option<(usize, i64)>| {
        let mut k = vec![0i64; vars];
        k[0] = z;
        for (i, e) in [slot, slot2].into_iter().flatten() {
            k[i] += e;
        }
        k
    };
    let mut acc: Series = BTreeMap::from([(vec![0; vars], FockPolynomial::one())]);
    for (i, ai) in alphas.iter().enumerate() {
        let s = e_minus_lattice(ai, top);
        let mut f = Series::new();
        for r in 0..=top {
            for t in 0..=r.min(ms[i]) {
                let p = s[r as usize].scale(&binom(i64::from(r), t));
                f.entry(key(i64::from(r - t), Some((1 + i, i64::from(t))), Some((fw, i64::from(r))))).or_default().add_scaled(&p, &Rat::one());
            }
        }
        acc = series_mul(&acc, &f, &caps);
    }
    for (j, bj) in betas.iter().enumerate() {
        let s = e_minus_lattice(bj, ns[j]);
        let mut f = Series::new();
        for r in 0..=ns[j] {
            f.insert(key(0, Some((1 + ka + j, i64::from(r))), Some((fw, i64::from(r)))), s[r as usize].clone());
        }
        acc = series_mul(&acc, &f, &caps);
    }
    for (i, ai) in alphas.iter().enumerate() {
        for (j, bj) in betas.iter().enumerate() {
            let e = l.inner(ai, bj);
            let mut f = Series::new();
            for t in 0..=(ms[i] + ns[j]) {
                let c = binom(e, t);
                for u in 0..=t {
                    let sign = if (t - u) % 2 == 0 { 1 } else { -1 };
                    let coef = &c * binom(i64::from(t), u) * rat_int(sign);
                    let k = key(e - i64::from(t), Some((1 + i, i64::from(u))), Some((1 + ka + j, i64::from(t - u))));
                    f.entry(k).or_default().add_scaled(&FockPolynomial::one(), &coef);
                }
            }
            acc = series_mul(&acc, &f, &caps);
        }
    }
    let mut target = vec![-k - 1];
    target.extend(&caps);
    let _ = kb;
    match acc.get(&target) {
        Some(p) => VoaElement::from_part(&a + &b, p.scale(&rat_int(v.cocycle().sign(&a, &b)))),
        None => VoaElement::zero(),
    }
}

// Extra: modes against the product formula.
fn c14() -> Outcome {
    let v = voa("A2");
    let l = v.lattice();
    let pool = [l.basis(0), l.basis(1), -&l.basis(1), &l.basis(0) + &l.basis(1)];
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut checked = 0;
    let mut nonzero = 0;
    for _ in 0..40 {
        let ka = rng.gen_range(1..=2);
        let kb = rng.gen_range(1..=2);
        let alphas: Vec<LatticeVector> = (0..ka).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect();
        let betas: Vec<LatticeVector> = (0..kb).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect();
        let ms: Vec<u32> = (0..ka).map(|_| rng.gen_range(0..=2)).collect();
        let ns: Vec<u32> = (0..kb).map(|_| rng.gen_range(0..=2)).collect();
        let coef = |xs: &[LatticeVector], ds: &[u32]| {
            xs.iter().zip(ds).fold(FockPolynomial::one(), |p, (x, &d)| p.mul(&e_minus_lattice(x, d)[d as usize]))
        };
        let sum = |xs: &[LatticeVector]| xs.iter().fold(LatticeVector::zero(2), |a, b| &a + b);
        let u = VoaElement::from_part(sum(&alphas), coef(&alphas, &ms));
        let w = VoaElement::from_part(sum(&betas), coef(&betas, &ns));
        for k in -3..=3 {
            let got = vertex_mode(&v, &u, k, &w);
            let want = product_formula(&v, &alphas, &ms, &betas, &ns, k);
            if got != want {
                return outcome(false, format!("a = {alphas:?} m = {ms:?}, b = {betas:?} n = {ns:?}, k = {k}"));
            }
            checked += 1;
            nonzero += usize::from(!got.is_zero());
        }
    }
    outcome(true, format!("{checked} modes ({nonzero} nonzero) on A2 with k, l <= 2 factors"))
}

fn main() {
    let criteria: [(&str, &str, fn() -> Outcome, u64); 14] = [
        ("1", "E^- coefficients", c1, 1),
        ("2", "convolution identity", c2, 10),
        ("3", "pairing oracle equivalence", c3, 120),
        ("4", "degree-two inner products", c4, 10),
        ("5", "E8 degree-1 audit", c5, 30),
        ("6", "E8 degree-2 audit", c6, 600),
        ("7", "duality", c7, 60),
        ("8", "integral closure", c8, 300),
        ("9", "orbit intersection", c9, 60),
        ("10", "extension containments", c10, 120),
        ("11", "Ising vectors", c11, 630),
        ("12", "involutions on free abelian groups", c12, 60),
        ("13", "trace form", c13, 60),
        ("+", "normal-ordered product identity", c14, 120),
    ];
    // Criterion 12 carries one statement that does not hold; it is reported, not enforced.
    let known = ["12"];
    let mut unexpected = Vec::new();
    for (id, name, f, budget) in criteria {
        let t = Instant::now();
        let o = f();
        let dt = t.elapsed();
        let in_time = dt <= Duration::from_secs(budget);
        let pass = o.pass && in_time;
        println!(
            "[{}] {id:>2} {name}: {} ({:.2}s, budget {budget}s)",
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            dt.as_secs_f64()
        );
        if !pass && !known.contains(&id) {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
