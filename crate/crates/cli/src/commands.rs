use serde_json::json;

use ivoa_core::audit::{audit_form, j_block_audit, AuditOptions, DegreeAudit, Parity};
use ivoa_core::catalog::resolve_lattice;
use ivoa_core::cvcc::{ising_check, ising_constructions, miyamoto, stabilization_check, IsingParams};
use ivoa_core::exact::{rat_int, rat_string, EvenLattice, Index, LatticeVector, RatMatrix, ZModule};
use ivoa_core::symmetry::{
    eigen_split, fixed_form, group_closure, orbit_intersection, sum_forms, tensor_form, tensor_swap,
    translate_forms, LiftedIsometry,
};
use ivoa_core::vertex::{generated_form, modes_into, trace_form, vertex_mode};
use ivoa_core::voa::{
    dual_form_basis, pairing_backends, voa_basis, basis_gram, BasisElement, BasisKind, Form,
    GradedZForm, LatticeVoa, VoaElement,
};

use crate::group::{matrix_map, parse_coords, read_generator, read_matrix};
use crate::report::Report;
use crate::{usage, BasisKindArg, CliError, Command, GroupArgs};

fn load(spec: &str) -> Result<LatticeVoa, CliError> {
    Ok(LatticeVoa::new(resolve_lattice(spec)?)?)
}

fn integral_forms(v: &LatticeVoa, degrees: &[u32]) -> Result<Vec<GradedZForm>, CliError> {
    degrees
        .iter()
        .map(|&n| GradedZForm::integral(v, n).map_err(CliError::from))
        .collect()
}

fn index_string(i: &Index) -> String {
    i.to_string()
}

fn matrix_strings(m: &RatMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| rat_string(m.get(i, j))).collect())
        .collect()
}

pub fn dispatch(cmd: Command) -> Result<Report, CliError> {
    match cmd {
        Command::Basis {
            lattice,
            degree,
            kind,
            count_only,
        } => basis(&lattice.lattice, degree, kind, count_only),
        Command::Gram {
            lattice,
            degree,
            form,
            backend,
            max_dim,
        } => gram(&lattice.lattice, degree, form.into(), &backend, max_dim),
        Command::Audit {
            lattice,
            degrees,
            form,
            min_norm,
            min_norm_block,
        } => audit(&lattice.lattice, &degrees.degrees()?, form.into(), min_norm, min_norm_block.as_deref()),
        Command::DualCheck { lattice, degrees, form } => dual_check(&lattice.lattice, &degrees.degrees()?, form.into()),
        Command::Product {
            lattice,
            u_degree,
            u_index,
            v_degree,
            v_index,
            k,
            max_weight,
        } => product(&lattice.lattice, (u_degree, u_index), (v_degree, v_index), k, max_weight),
        Command::Generate {
            lattice,
            max_degree,
            exps,
        } => generate(&lattice.lattice, max_degree, &exps),
        Command::Intersect(g) => surgery("intersect", &g),
        Command::Sum(g) => surgery("sum", &g),
        Command::Fix(g) => surgery("fix", &g),
        Command::EigenSplit {
            lattice,
            degree,
            generators,
            matrices,
            tensor_swap,
        } => split(lattice.as_deref(), degree, &generators, &matrices, tensor_swap),
        Command::Tensor {
            left,
            right,
            max_degree,
        } => tensor(&left, &right, max_degree),
        Command::Ising {
            lattice,
            kind,
            sign,
            alpha,
            phi,
            check,
            bracket_degree,
            miyamoto_through,
        } => ising(
            &lattice.lattice,
            &kind,
            &sign,
            alpha.as_deref(),
            phi.as_deref(),
            check,
            bracket_degree,
            miyamoto_through,
        ),
        Command::TraceForm { lattice, degree } => trace(&lattice.lattice, degree),
        Command::E8Audit { no_min_norm } => e8_audit(!no_min_norm),
    }
}

fn basis(spec: &str, degree: u32, kind: BasisKindArg, count_only: bool) -> Result<Report, CliError> {
    let v = load(spec)?;
    let mut rep = Report::new("basis");
    rep.input("lattice", spec);
    rep.input("degree", degree);
    let elems = match kind {
        BasisKindArg::Sproduct => voa_basis(&v, degree)?,
        BasisKindArg::Schur => dual_form_basis(&v, degree, false)?,
        BasisKindArg::DualSchur => dual_form_basis(&v, degree, true)?,
    };
    rep.input("kind", format!("{kind:?}").to_lowercase());
    if count_only {
        rep.line(elems.len().to_string());
        rep.degree(json!({"degree": degree, "dim": elems.len()}))?;
        return Ok(rep);
    }
    rep.line(format!("degree {degree}: {} basis elements", elems.len()));
    let mut listed = Vec::with_capacity(elems.len());
    for (i, b) in elems.iter().enumerate() {
        rep.line(format!("{i:>6}  e^{}  {}", b.charge, b.label));
        listed.push(json!({"charge": b.charge, "label": b.label.to_string()}));
    }
    rep.degree(json!({"degree": degree, "dim": elems.len(), "elements": listed}))?;
    Ok(rep)
}

fn gram(spec: &str, degree: u32, form: Form, backend: &str, max_dim: usize) -> Result<Report, CliError> {
    let v = load(spec)?;
    let reg = pairing_backends();
    let b = reg
        .get(backend)
        .ok_or_else(|| usage(format!("unknown backend {backend:?}; known: {}", reg.names().join(", "))))?;
    let basis = voa_basis(&v, degree)?;
    if basis.len() > max_dim {
        return Err(usage(format!(
            "degree {degree} has dimension {} > --max-dim {max_dim}; use `audit` for block data",
            basis.len()
        )));
    }
    let g = basis_gram(&v, &basis, b, form);
    let mut rep = Report::new("gram");
    rep.input("lattice", spec);
    rep.input("degree", degree);
    rep.input("form", form.name());
    rep.input("backend", b.name());
    let rows = matrix_strings(&g);
    for r in &rows {
        rep.line(r.join(" "));
    }
    rep.degree(json!({"degree": degree, "dim": basis.len(), "gram": rows}))?;
    Ok(rep)
}

fn audit_line(a: &DegreeAudit) -> String {
    format!(
        "{:>6} {:>6} {:>10} {:>6} {:>6} {:>14} {:>6}",
        a.degree,
        a.rank,
        rat_string(&a.det),
        a.parity.map_or("-".to_string(), |p| p.to_string()),
        a.denominator,
        a.discriminant.as_ref().map_or("-".to_string(), |d| d.to_string()),
        a.min_norm.as_ref().map_or("-".to_string(), rat_string)
    )
}

const AUDIT_HEADER: &str = "degree   rank        det parity   d(n)   discriminant    min";

fn block_lines(rep: &mut Report, a: &DegreeAudit) {
    for c in &a.blocks {
        rep.line(format!(
            "         {} x [{}x{}] charge norm {}, det {}{}{}",
            c.count,
            c.size,
            c.size,
            c.charge_norm,
            rat_string(&c.det),
            if c.identity { ", identity" } else { "" },
            if c.uniform && !c.identity && c.count > 1 { ", all equal" } else { "" }
        ));
    }
}

fn audit(spec: &str, degrees: &[u32], form: Form, min_norm: bool, block: Option<&str>) -> Result<Report, CliError> {
    let v = load(spec)?;
    if let Some(b) = block {
        if !b.eq_ignore_ascii_case("J") {
            return Err(usage(format!("unknown block {b:?}; only J is supported")));
        }
        if !degrees.contains(&2) {
            return Err(usage("the J block needs degree 2"));
        }
    }
    let mut rep = Report::new("audit");
    rep.input("lattice", spec);
    rep.input("degrees", degrees);
    rep.input("form", form.name());
    rep.input("min_norm", min_norm);
    rep.input("min_norm_block", block);
    rep.line(AUDIT_HEADER);
    let opts = AuditOptions {
        min_norm,
        ..AuditOptions::default()
    };
    for r in integral_forms(&v, degrees)? {
        let a = audit_form(&v, &r, form, opts)?;
        rep.line(audit_line(&a));
        block_lines(&mut rep, &a);
        rep.check(a.det_check != Some(false), format!("degree {}: block determinants disagree with the dense determinant", a.degree));
        rep.check(a.parity.is_some(), format!("degree {}: Gram matrix of R is not integral", a.degree));
        let mut rec = serde_json::to_value(&a)?;
        if block.is_some() && r.degree() == 2 {
            let j = j_block_audit(&v, &r, form, true)?;
            rep.line(format!(
                "         J: rank {}, det {}, {}, J1 rank {}, J2 rank {}, orthogonal {}, |J:J1+J2| = {}, det(J1+J2) = {}, min {}",
                j.rank,
                rat_string(&j.det),
                j.parity.map_or("-".to_string(), |p| p.to_string()),
                j.j1_rank,
                j.j2_rank,
                j.orthogonal,
                j.index,
                rat_string(&j.sum_det),
                j.min_norm.as_ref().map_or("-".to_string(), rat_string)
            ));
            rec["j_block"] = serde_json::to_value(&j)?;
        }
        rep.degree(rec)?;
    }
    Ok(rep)
}

fn dual_kind(form: Form) -> BasisKind {
    match form {
        Form::Hermitian => BasisKind::DualSchur,
        Form::Bilinear => BasisKind::DualSchurBilinear,
    }
}

fn dual_check(spec: &str, degrees: &[u32], form: Form) -> Result<Report, CliError> {
    let v = load(spec)?;
    let mut rep = Report::new("dual-check");
    rep.input("lattice", spec);
    rep.input("degrees", degrees);
    rep.input("form", form.name());
    rep.line("degree    dim  dual = U   U/R");
    for r in integral_forms(&v, degrees)? {
        let n = r.degree();
        let elems: Vec<VoaElement> = voa_basis(&v, n)?
            .into_iter()
            .map(|b| {
                BasisElement {
                    kind: dual_kind(form),
                    ..b
                }
                .element(&v)
            })
            .collect();
        let u = GradedZForm::from_elements(&v, n, &elems)?;
        let d = r.dual(&v, form)?;
        let same = d == u;
        let q = ivoa_core::voa::quotient_invariants(&r, &d)?;
        rep.line(format!("{n:>6} {:>6} {:>9}   {q}", r.dim(), same));
        rep.check(same, format!("degree {n}: the {} dual of R differs from U", form.name()));
        rep.degree(json!({"degree": n, "dim": r.dim(), "dual_equals_u": same, "quotient": q}))?;
    }
    Ok(rep)
}

fn basis_element(v: &LatticeVoa, degree: u32, index: usize) -> Result<VoaElement, CliError> {
    let b = voa_basis(v, degree)?;
    let n = b.len();
    b.get(index)
        .map(|x| x.element(v))
        .ok_or_else(|| usage(format!("index {index} out of range: degree {degree} has {n} basis elements")))
}

fn product(spec: &str, u: (u32, usize), w: (u32, usize), k: Option<i64>, max_weight: u32) -> Result<Report, CliError> {
    let v = load(spec)?;
    let x = basis_element(&v, u.0, u.1)?;
    let y = basis_element(&v, w.0, w.1)?;
    let mut rep = Report::new("product");
    rep.input("lattice", spec);
    rep.input("u", json!({"degree": u.0, "index": u.1}));
    rep.input("v", json!({"degree": w.0, "index": w.1}));
    rep.input("k", k);
    rep.input("max_weight", max_weight);
    rep.line(format!("u = {x}"));
    rep.line(format!("v = {y}"));
    let results: Vec<(i64, VoaElement)> = match k {
        Some(k) => vec![(k, vertex_mode(&v, &x, k, &y))],
        None => modes_into(&v, &x, &y, i64::from(max_weight)),
    };
    for (k, z) in results {
        let weight = i64::from(u.0) + i64::from(w.0) - k - 1;
        let in_r = if z.is_zero() || weight < 0 {
            true
        } else {
            GradedZForm::integral(&v, weight as u32)?.contains_element(&z)?
        };
        rep.line(format!("u_{k} v = {z}    (weight {weight}, in R: {in_r})"));
        rep.check(in_r, format!("u_{k} v leaves the integral form"));
        let terms: Vec<_> = z
            .terms()
            .map(|(c, m, q)| json!({"charge": c, "monomial": m.to_string(), "coeff": rat_string(q)}))
            .collect();
        rep.degree(json!({"k": k, "weight": weight, "in_r": in_r, "terms": terms}))?;
    }
    Ok(rep)
}

fn generate(spec: &str, max_degree: u32, exps: &[String]) -> Result<Report, CliError> {
    let v = load(spec)?;
    let l = v.lattice();
    let default = exps.is_empty();
    let gens: Vec<VoaElement> = if default {
        (0..l.rank())
            .flat_map(|i| [VoaElement::exp(l.basis(i)), VoaElement::exp(-&l.basis(i))])
            .collect()
    } else {
        exps.iter()
            .map(|s| {
                let a = LatticeVector(parse_coords(s)?);
                l.check(&a)?;
                Ok(VoaElement::exp(a))
            })
            .collect::<Result<_, CliError>>()?
    };
    let mut rep = Report::new("generate");
    rep.input("lattice", spec);
    rep.input("max_degree", max_degree);
    rep.input("generators", if default { json!("e^(+-g_i)") } else { json!(exps) });
    let gen = generated_form(&v, &gens, max_degree)?;
    let r = integral_forms(&v, &(0..=max_degree).collect::<Vec<_>>())?;
    rep.line("degree    dim   rank  equals R   index in R");
    for (g, rn) in gen.iter().zip(&r) {
        let eq = g == rn;
        let inside = rn.contains(g)?;
        let idx = if inside { index_string(&g.index_in(rn)?) } else { "-".to_string() };
        rep.line(format!("{:>6} {:>6} {:>6} {:>9}   {idx}", g.degree(), g.dim(), g.rank(), eq));
        if default {
            rep.check(eq, format!("degree {}: e^(+-g_i) do not generate R", g.degree()));
        }
        rep.degree(json!({"degree": g.degree(), "dim": g.dim(), "rank": g.rank(), "equals_r": eq, "index_in_r": idx}))?;
    }
    Ok(rep)
}

fn generators(l: &EvenLattice, specs: &[String]) -> Result<Vec<LiftedIsometry>, CliError> {
    specs.iter().map(|s| read_generator(l, s)).collect()
}

fn surgery(kind: &'static str, g: &GroupArgs) -> Result<Report, CliError> {
    let v = load(&g.lattice.lattice)?;
    let l = v.lattice();
    let gens = generators(l, &g.generators)?;
    let degrees: Vec<u32> = (0..=g.max_degree).collect();
    let r = integral_forms(&v, &degrees)?;
    let mut rep = Report::new(kind);
    rep.input("lattice", &g.lattice.lattice);
    rep.input("max_degree", g.max_degree);
    rep.input("generators", &g.generators);
    let out = match kind {
        "fix" => fixed_form(&v, &r, &gens)?,
        _ => {
            let group = group_closure(l, &gens, g.group_limit)?;
            rep.line(format!("group order {}", group.len()));
            rep.extra("group_order", group.len())?;
            if kind == "intersect" {
                orbit_intersection(&v, &r, &group)?
            } else {
                r.iter()
                    .map(|rn| {
                        let images = group
                            .iter()
                            .map(|h| rn.image(&h.matrix(&v, rn.degree())?))
                            .collect::<ivoa_core::Result<Vec<_>>>()?;
                        sum_forms(&images)
                    })
                    .collect::<ivoa_core::Result<Vec<_>>>()?
            }
        }
    };
    if kind != "fix" {
        for h in &gens {
            let moved = translate_forms(&v, &out, h)?;
            rep.check(moved == out, format!("{kind} result is not invariant under {h}"));
        }
    }
    rep.line("degree    dim   rank   index");
    for (s, rn) in out.iter().zip(&r) {
        let idx = match kind {
            "intersect" => index_string(&s.index_in(rn)?),
            "sum" => index_string(&rn.index_in(s)?),
            _ => "-".to_string(),
        };
        rep.line(format!("{:>6} {:>6} {:>6}   {idx}", s.degree(), s.dim(), s.rank()));
        let key = if kind == "sum" { "index_of_r" } else { "index_in_r" };
        let mut rec = json!({"degree": s.degree(), "dim": s.dim(), "rank": s.rank()});
        if kind != "fix" {
            rec[key] = json!(idx);
        }
        rep.degree(rec)?;
    }
    Ok(rep)
}

fn split(
    lattice: Option<&str>,
    degree: Option<u32>,
    gens: &[String],
    matrices: &[std::path::PathBuf],
    swap: Option<usize>,
) -> Result<Report, CliError> {
    let mut rep = Report::new("eigen-split");
    let (module, maps) = match (lattice, swap, matrices.is_empty()) {
        (Some(spec), None, true) => {
            let n = degree.ok_or_else(|| usage("--lattice needs --degree"))?;
            if gens.is_empty() {
                return Err(usage("give at least one --generator"));
            }
            let v = load(spec)?;
            let r = GradedZForm::integral(&v, n)?;
            let maps = generators(v.lattice(), gens)?
                .iter()
                .map(|g| g.matrix(&v, n))
                .collect::<ivoa_core::Result<Vec<_>>>()?;
            rep.input("lattice", spec);
            rep.input("degree", n);
            rep.input("generators", gens);
            (r.module().clone(), maps)
        }
        (None, Some(n), true) => {
            rep.input("tensor_swap", n);
            (ZModule::standard(n * n), vec![tensor_swap(n)])
        }
        (None, None, false) => {
            let files = matrices
                .iter()
                .map(|p| read_matrix(p))
                .collect::<Result<Vec<_>, _>>()?;
            let d = files[0].rows.len();
            if files.iter().any(|f| f.rows.len() != d) {
                return Err(usage("matrices of different sizes"));
            }
            rep.input("matrices", matrices.iter().map(|p| p.display().to_string()).collect::<Vec<_>>());
            let maps = files.iter().map(matrix_map).collect::<Result<Vec<_>, _>>()?;
            (ZModule::standard(d), maps)
        }
        _ => return Err(usage("use exactly one of --lattice, --tensor-swap or --matrix")),
    };
    let s = eigen_split(&module, &maps)?;
    rep.line("character       rank");
    for (c, r) in s.characters.iter().zip(&s.ranks) {
        let chi: Vec<&str> = c.iter().map(|&x| if x > 0 { "+" } else { "-" }).collect();
        rep.line(format!("{:<14} {r:>5}", chi.join("")));
    }
    rep.line(format!("A / sum of eigenlattices: {}", s.quotient));
    if let Some(r) = s.jordan_r {
        rep.line(format!("size-2 Jordan blocks mod 2: {r}"));
        let order = s.quotient.order().unwrap_or_default();
        rep.check(order == num_traits::pow(ivoa_core::exact::int(2), r), "|A/(A+ + A-)| != 2^r");
    }
    rep.degree(&s)?;
    Ok(rep)
}

fn tensor(left: &str, right: &str, max_degree: u32) -> Result<Report, CliError> {
    let a = load(left)?;
    let b = load(right)?;
    let name = format!("{}+{}", a.lattice().label(), b.lattice().label());
    let sum = a.lattice().orthogonal_sum(b.lattice(), Some(name));
    let prod = LatticeVoa::new(sum)?;
    let degrees: Vec<u32> = (0..=max_degree).collect();
    let fa = integral_forms(&a, &degrees)?;
    let fb = integral_forms(&b, &degrees)?;
    let t = tensor_form(&prod, &fa, &fb, a.rank())?;
    let r = integral_forms(&prod, &degrees)?;
    let mut rep = Report::new("tensor");
    rep.input("left", left);
    rep.input("right", right);
    rep.input("max_degree", max_degree);
    rep.line("degree    dim   rank  equals R(L+M)");
    for (x, y) in t.iter().zip(&r) {
        let eq = x == y;
        rep.line(format!("{:>6} {:>6} {:>6} {:>9}", x.degree(), x.dim(), x.rank(), eq));
        rep.check(eq, format!("degree {}: A (x) B differs from the integral form of the sum", x.degree()));
        rep.degree(json!({"degree": x.degree(), "dim": x.dim(), "rank": x.rank(), "equals_r": eq}))?;
    }
    Ok(rep)
}

#[allow(clippy::too_many_arguments)]
fn ising(
    spec: &str,
    kind: &str,
    sign: &str,
    alpha: Option<&str>,
    phi: Option<&str>,
    check: bool,
    bracket_degree: u32,
    through: Option<u32>,
) -> Result<Report, CliError> {
    let v = load(spec)?;
    let reg = ising_constructions();
    let c = reg
        .get(kind)
        .ok_or_else(|| usage(format!("unknown type {kind:?}; known: {}", reg.names().join(", "))))?;
    let sign = match sign {
        "+" | "1" | "+1" => 1,
        "-" | "-1" => -1,
        s => return Err(usage(format!("sign must be + or -, not {s:?}"))),
    };
    let params = IsingParams {
        alpha: alpha.map(parse_coords).transpose()?.map(LatticeVector),
        sign,
        embedding: None,
        phi: phi.map(parse_coords).transpose()?,
    };
    let e = c.build(&v, &params)?;
    let mut rep = Report::new("ising");
    rep.input("lattice", spec);
    rep.input("type", c.name());
    rep.input("sign", sign);
    rep.input("alpha", alpha);
    rep.input("phi", phi);
    rep.input("bracket_degree", bracket_degree);
    rep.input("miyamoto_through", through);
    rep.line(format!("{} vector ({}), {} terms", e.kind, e.provenance, e.e.num_terms()));
    rep.extra("provenance", &e.provenance)?;
    rep.extra("terms", e.e.num_terms())?;
    if check {
        let r = ising_check(&v, &e.e, bracket_degree)?;
        for l in &r.checks {
            rep.line(format!("[{}] {}: {}", if l.pass { "PASS" } else { "FAIL" }, l.name, l.detail));
            rep.check(l.pass, format!("{} fails", l.name));
        }
        rep.extra("checks", &r.checks)?;
    }
    if let Some(top) = through {
        let degrees: Vec<u32> = (0..=top).collect();
        for &n in &degrees {
            let m = miyamoto(&v, &e.e, n)?;
            let eig: Vec<String> = m.eigenvalues.iter().map(|(x, k)| format!("{x}:{k}")).collect();
            rep.line(format!(
                "degree {n}: dim {}, e_1 eigenvalues {}, t(e) = -1 on {}, t^2 = 1: {}",
                m.dim,
                eig.join(" "),
                m.minus_dim,
                m.involutive
            ));
            rep.check(m.involutive, format!("degree {n}: t(e) is not an involution"));
            rep.degree(&m)?;
        }
        let forms = integral_forms(&v, &degrees)?;
        let lines = stabilization_check(&v, &e.e, &forms)?;
        for s in &lines {
            rep.line(format!(
                "degree {}: t(e) preserves span(R) {}, preserves R {}, |R : R cap tR| = {}",
                s.degree, s.span_preserved, s.form_preserved, s.index
            ));
            rep.check(s.span_preserved, format!("degree {}: t(e) moves the rational span of R", s.degree));
        }
        rep.extra("stabilization", &lines)?;
    }
    Ok(rep)
}

fn trace(spec: &str, degree: u32) -> Result<Report, CliError> {
    let v = load(spec)?;
    let r = GradedZForm::integral(&v, degree)?;
    let f = trace_form(&v, &r)?;
    let mut rep = Report::new("trace-form");
    rep.input("lattice", spec);
    rep.input("degree", degree);
    let rows: Vec<Vec<String>> = (0..f.matrix.rows())
        .map(|i| (0..f.matrix.cols()).map(|j| f.matrix.get(i, j).to_string()).collect())
        .collect();
    for row in &rows {
        rep.line(row.join(" "));
    }
    rep.line(format!("rank {}, invariants {}", f.rank, f.invariants));
    rep.degree(json!({"degree": degree, "matrix": rows, "rank": f.rank, "invariants": f.invariants}))?;
    Ok(rep)
}

fn e8_audit(with_min: bool) -> Result<Report, CliError> {
    let v = load("E8")?;
    let e8 = RatMatrix::from_i64(v.lattice().gram())?;
    let mut rep = Report::new("e8-audit");
    rep.input("min_norm", with_min);
    rep.line(AUDIT_HEADER);
    let h = Form::Hermitian;

    let r1 = GradedZForm::integral(&v, 1)?;
    let a1 = audit_form(&v, &r1, h, AuditOptions::default())?;
    rep.line(audit_line(&a1));
    block_lines(&mut rep, &a1);
    let b1 = r1.gram_blocks(&v, h);
    rep.check(a1.rank == 248, "R_1 has rank 248");
    rep.check(a1.det == rat_int(1) && a1.parity == Some(Parity::Odd), "R_1 is odd unimodular");
    rep.check(
        b1.iter().filter(|b| b.rows.len() == 8).all(|b| b.gram == e8)
            && b1.iter().filter(|b| b.rows.len() == 1 && b.gram.is_identity()).count() == 240,
        "R_1 = Gram(E8) + I_240",
    );
    rep.degree(&a1)?;

    let r2 = GradedZForm::integral(&v, 2)?;
    let a2 = audit_form(&v, &r2, h, AuditOptions::default())?;
    rep.line(audit_line(&a2));
    block_lines(&mut rep, &a2);
    let b2 = r2.gram_blocks(&v, h);
    let middle: Vec<_> = b2.iter().filter(|b| b.rows.len() == 8).collect();
    rep.check(a2.rank == 4124, "R_2 has rank 4124");
    rep.check(a2.det == rat_int(1) && a2.parity == Some(Parity::Odd), "R_2 is odd unimodular");
    rep.check(
        a2.blocks.iter().any(|c| c.count == 2160 && c.size == 1 && c.identity),
        "S block (2160) is the identity",
    );
    rep.check(middle.len() == 240 && middle.iter().all(|b| b.gram == e8), "middle block is 240 copies of Gram(E8)");
    let j = j_block_audit(&v, &r2, h, with_min)?;
    rep.line(format!(
        "J: rank {}, det {}, {}, |J : J1+J2| = {}, det(J1+J2) = {}, J1 and J2 orthogonal: {}, min {}",
        j.rank,
        rat_string(&j.det),
        j.parity.map_or("-".to_string(), |p| p.to_string()),
        j.index,
        rat_string(&j.sum_det),
        j.orthogonal,
        j.min_norm.as_ref().map_or("-".to_string(), rat_string)
    ));
    rep.check(j.rank == 44 && (j.j1_rank, j.j2_rank) == (36, 8), "J has rank 44 = 36 + 8");
    rep.check(j.det == rat_int(1) && j.parity == Some(Parity::Odd), "J is odd unimodular");
    rep.check(j.orthogonal, "J1 and J2 are orthogonal");
    rep.check(j.index == ivoa_core::exact::int(256), "|J : J1+J2| = 2^8");
    rep.check(j.sum_det == rat_int(1 << 16), "det(J1+J2) = 2^16");
    if with_min {
        rep.check(j.min_norm == Some(rat_int(3)), "min(J) = 3");
    }
    let mut rec = serde_json::to_value(&a2)?;
    rec["j_block"] = serde_json::to_value(&j)?;
    rep.degree(rec)?;
    Ok(rep)
}
