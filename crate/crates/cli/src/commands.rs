//! One function per subcommand, each producing a [`Report`].

use lie_moduli::dgla::{Derivation, TruncatedModel};
use lie_moduli::homology::{Complex, Homology};
use lie_moduli::lie::{FreeLie, LieElement};
use lie_moduli::models::{check_zero_region, BigradedModel};
use lie_moduli::morphism::LieMorphism;
use lie_moduli::perturbation::{
    apply_automorphism, decide_equivalence, gauge_apply, mc_system, perturb_toward, theta_membership, DirectionKind,
    Verdict,
};
use lie_moduli::presentation::PElement;
use lie_moduli::Scalar;

use crate::document::{automorphism, derivation, Document, Kind};
use crate::error::{CliError, Result};
use crate::report::{Report, Row, Table};
use crate::syntax::{parse_assignments, Assignment};

type Q = Scalar;

/// How a perturbation was named on the command line.
pub enum TauArg<'a> {
    /// The first perturbation in the document, or zero if it has none.
    Default,
    Given(&'a str),
}

/// The entries of a perturbation and the origin to blame for errors in them.
fn entries_for(doc: &Document, flag: &str, arg: TauArg<'_>) -> Result<(Vec<Assignment>, String)> {
    let from_doc = |values: &[Assignment]| (values.to_vec(), doc.origin.clone());
    match arg {
        TauArg::Default => Ok(doc.perturbations.first().map(|p| from_doc(&p.values)).unwrap_or_else(|| from_doc(&[]))),
        TauArg::Given("zero") => Ok((Vec::new(), flag.to_string())),
        TauArg::Given(s) if s.contains("->") => Ok((parse_assignments(flag, s)?, flag.to_string())),
        TauArg::Given(s) => doc
            .perturbation(s)
            .map(|p| from_doc(&p.values))
            .ok_or_else(|| CliError::Usage(format!("{}: no perturbation named `{s}`", doc.origin))),
    }
}

fn perturbation_arg(doc: &Document, model: &TruncatedModel<Q>, flag: &str, arg: TauArg<'_>) -> Result<Derivation<Q>> {
    let (entries, origin) = entries_for(doc, flag, arg)?;
    derivation(&origin, model, &entries, -1, 2)
}

fn render_derivation(lie: &FreeLie<Q>, delta: &Derivation<Q>) -> Vec<String> {
    lie.generators()
        .iter()
        .filter_map(|i| {
            let v = delta.value(i.gen)?;
            (!v.is_zero()).then(|| format!("{} -> {}", i.name, lie.render(v)))
        })
        .collect()
}

fn render_morphism(source: &FreeLie<Q>, target: &FreeLie<Q>, f: &LieMorphism<Q>) -> Vec<String> {
    source
        .generators()
        .iter()
        .map(|i| {
            let v = f.image(i.gen).cloned().unwrap_or_default();
            format!("{} -> {}", i.name, target.render(&v))
        })
        .collect()
}

fn generator_lines(lie: &FreeLie<Q>) -> Vec<String> {
    lie.generators().iter().map(|i| format!("{} ({},{})", i.name, i.gen.top, i.gen.res)).collect()
}

fn differential_lines(m: &TruncatedModel<Q>) -> Vec<String> {
    m.lie
        .generators()
        .iter()
        .map(|i| format!("d{} = {}", i.name, m.lie.render(m.differential.value(i.gen).unwrap_or(&LieElement::zero()))))
        .collect()
}

/// Basis elements of the model per bidegree, highest resolution first.
fn model_table(title: &str, m: &TruncatedModel<Q>) -> Table {
    let degrees: Vec<u32> = (1..=m.cutoff).collect();
    let max_res = degrees.iter().flat_map(|&n| m.lie.res_degrees(n)).max().unwrap_or(0);
    let rows = (0..=max_res)
        .rev()
        .map(|r| Row {
            label: r.to_string(),
            cells: degrees
                .iter()
                .map(|&n| (0..m.lie.dim(n, r)).map(|i| m.lie.render_basis(n, r, i)).collect())
                .collect(),
        })
        .collect();
    Table { title: title.into(), degrees, rows }
}

fn homology_of(m: &TruncatedModel<Q>) -> Result<Homology<Q>> {
    Ok(Homology::compute(Complex { lie: &m.lie, diff: &m.differential, cutoff: m.cutoff })?)
}

fn homology_table(lie: &FreeLie<Q>, h: &Homology<Q>) -> Table {
    let degrees: Vec<u32> = h.degrees.keys().copied().collect();
    let cells = h.degrees.values().map(|d| d.reps.iter().map(|x| lie.render(x)).collect()).collect();
    Table { title: "homology classes".into(), degrees, rows: vec![Row { label: "H".into(), cells }] }
}

fn structural_checks(report: &mut Report, m: &TruncatedModel<Q>) {
    let sq = m.check_square_zero();
    let details = sq.failures.iter().map(|(g, v)| format!("d²{} = {}", m.name(*g), m.lie.render(v))).collect();
    report.check("square-zero", sq.passed(), details);
    report.check("minimal", m.check_minimal(), Vec::new());
}

pub fn cellular(doc: &Document, cutoff: Option<u32>) -> Result<Report> {
    if doc.kind != Kind::CwComplex {
        return Err(CliError::Usage(format!("{}: `cellular` needs a cw-complex document", doc.origin)));
    }
    let m = doc.truncated(cutoff)?;
    let mut r = Report::new("cellular", format!("cellular model of {} (cutoff {})", doc.origin, m.cutoff));
    r.tables.push(model_table("free Lie algebra on the cells", &m));
    r.section("generators", generator_lines(&m.lie));
    r.section("differential", differential_lines(&m));
    structural_checks(&mut r, &m);
    Ok(r)
}

fn certification(r: &mut Report, b: &BigradedModel<Q>) {
    r.check(
        "homology matches the presentation",
        true,
        vec![format!("certified through degree {}", b.certified_through())],
    );
}

pub fn bigraded(doc: &Document, cutoff: Option<u32>, reversed: bool) -> Result<Report> {
    let b = doc.bigraded(cutoff, reversed)?;
    let m = &b.model;
    let mut r = Report::new("bigraded", format!("bigraded model of {} (cutoff {})", doc.origin, m.cutoff));
    r.tables.push(model_table("bigraded model (rows: resolution degree)", m));
    r.section("generators", generator_lines(&m.lie));
    r.section("differential", differential_lines(m));
    structural_checks(&mut r, m);
    let z = check_zero_region(m);
    r.check("zero-region", z.passed(), zero_region_details(&z));
    certification(&mut r, &b);
    Ok(r)
}

fn zero_region_details(z: &lie_moduli::models::ZeroRegionReport) -> Vec<String> {
    let mut d: Vec<String> = z.generators.iter().map(|(n, t, s)| format!("generator {n} at ({t},{s})")).collect();
    d.extend(z.bidegrees.iter().map(|(n, s)| format!("nonzero bidegree ({n},{s})")));
    d
}

pub fn homology(doc: &Document, cutoff: Option<u32>) -> Result<Report> {
    let m = doc.truncated(cutoff)?;
    let h = homology_of(&m)?;
    let mut r = Report::new("homology", format!("homology of {} (degrees below {})", doc.origin, m.cutoff));
    r.tables.push(homology_table(&m.lie, &h));
    r.section("dimensions", h.degrees.iter().map(|(n, d)| format!("H_{n}: {}", d.dim())).collect());
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    Minimal,
    SquareZero,
    ZeroRegion,
    Theta,
    MaurerCartan,
}

pub fn check(doc: &Document, cutoff: Option<u32>, what: CheckKind, tau: TauArg<'_>, degree: i32) -> Result<Report> {
    let m = doc.truncated(cutoff)?;
    let mut r = Report::new("check", format!("checks on {} (cutoff {})", doc.origin, m.cutoff));
    match what {
        CheckKind::Minimal => r.check("minimal", m.check_minimal(), Vec::new()),
        CheckKind::SquareZero => {
            let sq = m.check_square_zero();
            let details = sq.failures.iter().map(|(g, v)| format!("d²{} = {}", m.name(*g), m.lie.render(v))).collect();
            r.check("square-zero", sq.passed(), details);
        }
        CheckKind::ZeroRegion => {
            let z = check_zero_region(&m);
            r.check("zero-region", z.passed(), zero_region_details(&z));
        }
        CheckKind::Theta => {
            let (entries, origin) = entries_for(doc, "--tau", tau)?;
            let name = format!("theta_{degree}");
            match derivation(&origin, &m, &entries, degree, 0) {
                Ok(delta) => {
                    r.section("derivation", render_derivation(&m.lie, &delta));
                    let drop = delta.actual_res_drop().map_or("none (zero)".to_string(), |d| d.to_string());
                    r.check(&name, theta_membership(&delta, degree), vec![format!("resolution drop: {drop}")]);
                }
                Err(CliError::Engine(lie_moduli::Error::ResolutionDrop(g))) => {
                    r.check(&name, false, vec![format!("raises resolution degree on {g}")]);
                }
                Err(e) => return Err(e),
            }
        }
        CheckKind::MaurerCartan => {
            let (entries, origin) = entries_for(doc, "--tau", tau)?;
            let t = derivation(&origin, &m, &entries, -1, 0)?;
            r.section("perturbation", render_derivation(&m.lie, &t));
            let mc = m.check_maurer_cartan(&t)?;
            let mut details: Vec<String> =
                mc.composed.iter().map(|(g, v)| format!("(d+τ)²{} = {}", m.name(*g), m.lie.render(v))).collect();
            if !mc.agree {
                details.push("the two formulations disagree".into());
            }
            r.check("maurer-cartan", mc.passed(), details);
        }
    }
    Ok(r)
}

fn perturbation_checks(r: &mut Report, m: &TruncatedModel<Q>, tau: &Derivation<Q>) -> Result<()> {
    r.check("theta_-1", theta_membership(tau, -1), Vec::new());
    let mc = m.check_maurer_cartan(tau)?;
    let details = mc.composed.iter().map(|(g, v)| format!("(d+τ)²{} = {}", m.name(*g), m.lie.render(v))).collect();
    r.check("maurer-cartan", mc.passed(), details);
    Ok(())
}

pub fn perturb_toward_cmd(source: &Document, target: &Document, cutoff: Option<u32>) -> Result<Report> {
    let b = source.bigraded(cutoff, false)?;
    let t = target.truncated(Some(target.model_cutoff(cutoff).max(b.cutoff())))?;
    let res = perturb_toward(&b, &t)?;
    let mut r = Report::new(
        "perturb-toward",
        format!("perturbation of {} toward {} (cutoff {})", source.origin, target.origin, b.cutoff()),
    );
    r.section("perturbation", render_derivation(b.lie(), &res.tau));
    r.section("quasi-isomorphism", render_morphism(b.lie(), &t.lie, &res.pi));
    perturbation_checks(&mut r, &b.model, &res.tau)?;
    let total = b.model.perturbed(&res.tau)?;
    let mut failures = Vec::new();
    for g in b.lie().gens() {
        let lhs = res.pi.apply(total.value(g).unwrap_or(&LieElement::zero()))?;
        let rhs = t.differential.apply(res.pi.image(g).unwrap_or(&LieElement::zero()))?;
        if lhs != rhs {
            failures.push(b.lie().name(g).to_string());
        }
    }
    r.check("chain map", failures.is_empty(), failures);
    r.check("homology of d+τ is P", res.triple.isomorphism, Vec::new());
    Ok(r)
}

pub fn gauge_apply_cmd(doc: &Document, cutoff: Option<u32>, theta: &str, tau: TauArg<'_>) -> Result<Report> {
    let b = doc.bigraded(cutoff, false)?;
    let th = derivation("--theta", &b.model, &parse_assignments("--theta", theta)?, 0, 1)?;
    let t = perturbation_arg(doc, &b.model, "--tau", tau)?;
    let out = gauge_apply(&b, &th, &t)?;
    let mut r = Report::new("gauge-apply", format!("gauge action on {} (cutoff {})", doc.origin, b.cutoff()));
    r.section("gauge element", render_derivation(b.lie(), &th));
    r.section("perturbation", render_derivation(b.lie(), &t));
    r.section("result", render_derivation(b.lie(), &out));
    perturbation_checks(&mut r, &b.model, &out)?;
    Ok(r)
}

fn class_text(c: &[Q]) -> String {
    let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

pub fn equivalent(doc: &Document, cutoff: Option<u32>, tau: TauArg<'_>, tau2: TauArg<'_>) -> Result<Report> {
    let b = doc.bigraded(cutoff, false)?;
    let t1 = perturbation_arg(doc, &b.model, "--tau", tau)?;
    let t2 = perturbation_arg(doc, &b.model, "--tau2", tau2)?;
    let lie = b.lie();
    let mut r = Report::new("equivalent", format!("gauge equivalence on {} (cutoff {})", doc.origin, b.cutoff()));
    r.section("first", render_derivation(lie, &t1));
    r.section("second", render_derivation(lie, &t2));
    let rep = decide_equivalence(&b, &t1, &t2)?;
    let bound = format!("certified through degree {}", rep.certified_through);
    match rep.verdict {
        Verdict::Equivalent { theta, log_check } => {
            r.section("gauge element", render_derivation(lie, &theta));
            r.check("equivalent", true, vec![bound, format!("log(exp θ) = θ: {log_check}")]);
        }
        Verdict::Inequivalent(obs) => {
            let mut details = vec![format!("inequivalent: obstruction at weight {}", obs.weight)];
            for e in &obs.entries {
                let class = e.class.as_deref().map(class_text).unwrap_or_else(|| "not a cycle".into());
                details.push(format!("{}: {} (class {class})", lie.name(e.generator), lie.render(&e.value)));
            }
            details.push(bound);
            r.check("equivalent", false, details);
        }
        Verdict::Undetermined(obs) => {
            let mut details = vec![format!("undetermined at weight {}", obs.weight)];
            details.extend(obs.entries.iter().map(|e| format!("{}: {}", lie.name(e.generator), lie.render(&e.value))));
            details.push(bound);
            r.check("equivalent", false, details);
        }
    }
    Ok(r)
}

fn monomial(m: &[usize]) -> String {
    m.iter().map(|i| format!("u{i}")).collect::<Vec<_>>().join("*")
}

pub fn mc_system_cmd(doc: &Document, cutoff: Option<u32>) -> Result<Report> {
    let b = doc.bigraded(cutoff, false)?;
    let lie = b.lie();
    let s = mc_system(&b)?;
    let mut r = Report::new("mc-system", format!("Maurer-Cartan system of {} (cutoff {})", doc.origin, s.cutoff));
    let kind = |k: DirectionKind| match k {
        DirectionKind::Trivial => "trivial",
        DirectionKind::Homology => "homology",
        DirectionKind::Complement => "complement",
    };
    r.section(
        "unknowns",
        s.unknowns
            .iter()
            .enumerate()
            .map(|(i, u)| format!("u{i}: {} -> {} ({})", lie.name(u.generator), lie.render(&u.target), kind(u.kind)))
            .collect(),
    );
    r.section(
        "equations",
        s.equations
            .iter()
            .map(|e| {
                let terms = lie_moduli::lie::render_terms(e.poly.iter().map(|(m, c)| (c.clone(), monomial(m))));
                format!("{} at ({},{}) #{}: {terms} = 0", lie.name(e.generator), e.bidegree.0, e.bidegree.1, e.index)
            })
            .collect(),
    );
    let singles: Vec<String> = s
        .single_target
        .iter()
        .map(|&i| format!("τ{} = {}", lie.name(s.unknowns[i].generator), lie.render(&s.unknowns[i].target)))
        .collect();
    let mut trivial: Vec<String> = Vec::new();
    for i in s.trivial_directions() {
        let t = lie.render(&s.unknowns[i].target);
        if !trivial.contains(&t) {
            trivial.push(t);
        }
    }
    r.section(
        "summary",
        vec![format!("{} single-target solutions, {} trivial directions", singles.len(), trivial.len())],
    );
    r.section("single-target solutions", singles);
    r.section("trivial directions (in the image of d)", trivial);
    let mut bad = Vec::new();
    for &i in &s.single_target {
        if !s.check_point(&b, &s.unit_point(i))? {
            bad.push(format!("u{i}"));
        }
    }
    r.check("listed solutions satisfy Maurer-Cartan", bad.is_empty(), bad);
    Ok(r)
}

pub fn apply_aut(doc: &Document, cutoff: Option<u32>, sigma: Option<&str>, tau: TauArg<'_>) -> Result<Report> {
    let b = doc.bigraded(cutoff, false)?;
    let entries = match sigma {
        Some(s) => parse_assignments("--sigma", s)?,
        None => doc.sigma.clone(),
    };
    let origin = if sigma.is_some() { "--sigma" } else { doc.origin.as_str() };
    let sig: Vec<PElement<Q>> = automorphism(origin, &b.presentation, &entries)?;
    let t = perturbation_arg(doc, &b.model, "--tau", tau)?;
    let out = apply_automorphism(&b, &sig, &t)?;
    let p = &b.presentation;
    let mut r = Report::new("apply-aut", format!("automorphism action on {} (cutoff {})", doc.origin, b.cutoff()));
    r.section(
        "automorphism of P",
        (0..p.len()).map(|i| format!("{} -> {}", p.basis()[i].name, p.render(&sig[i]))).collect(),
    );
    r.section("perturbation", render_derivation(b.lie(), &t));
    r.section("result", render_derivation(b.lie(), &out));
    perturbation_checks(&mut r, &b.model, &out)?;
    Ok(r)
}
