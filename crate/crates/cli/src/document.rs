//! Parsed input documents and their translation into engine values.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use lie_moduli::dgla::{Derivation, TruncatedModel};
use lie_moduli::lie::{Expr, FreeLie, LieElement, Term};
use lie_moduli::models::{build_bigraded, build_cellular, BigradedModel, BuildOptions, Cell, CwDescription};
use lie_moduli::presentation::{BasisElement, GlaPresentation, PElement};
use lie_moduli::{Field, Scalar};
use num_traits::Zero;

use crate::error::{CliError, ParseErrorKind, Result};
use crate::syntax::{emit_expr, parse_statements, Assignment, Name, Pos, SourceExpr, Statement};

pub const DEFAULT_CUTOFF: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Presentation,
    CwComplex,
    PerturbationSet,
    Automorphism,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Presentation => "presentation",
            Kind::CwComplex => "cw-complex",
            Kind::PerturbationSet => "perturbation-set",
            Kind::Automorphism => "automorphism",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [Kind::Presentation, Kind::CwComplex, Kind::PerturbationSet, Kind::Automorphism]
            .into_iter()
            .find(|k| k.as_str() == s)
    }

    fn allows(self, st: &Statement) -> bool {
        use Statement as S;
        match (self, st) {
            (_, S::Kind(_) | S::Cutoff(_)) => true,
            (Kind::CwComplex, S::Cell { .. }) => true,
            (Kind::CwComplex, _) | (_, S::Cell { .. }) => false,
            (Kind::Presentation, S::Gen { res: None, .. } | S::Bracket { .. } | S::Names(_)) => true,
            (Kind::Presentation, _) => false,
            (Kind::PerturbationSet, S::Sigma(_)) => false,
            _ => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenDecl {
    pub name: Name,
    pub deg: u32,
    pub res: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketDecl {
    pub left: Name,
    pub right: Name,
    pub value: SourceExpr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellDecl {
    pub name: Name,
    pub dim: u32,
    pub attach: SourceExpr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbationDecl {
    pub name: Name,
    pub values: Vec<Assignment>,
}

/// One input file. Generators without `res` belong to the presentation;
/// generators with `res` declare an explicit bigraded model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub origin: String,
    pub kind: Kind,
    pub cutoff: Option<u32>,
    pub gens: Vec<GenDecl>,
    pub brackets: Vec<BracketDecl>,
    pub cells: Vec<CellDecl>,
    pub diffs: Vec<Assignment>,
    pub names: Vec<Name>,
    pub perturbations: Vec<PerturbationDecl>,
    pub sigma: Vec<Assignment>,
}

fn located(origin: &str, pos: Pos, kind: ParseErrorKind) -> CliError {
    CliError::Parse { origin: origin.to_string(), pos, kind }
}

fn structure(origin: &str, pos: Pos, msg: impl Into<String>) -> CliError {
    located(origin, pos, ParseErrorKind::Structure(msg.into()))
}

fn first_leaf(e: &SourceExpr) -> Option<Pos> {
    e.leaves().first().map(|n| n.pos)
}

/// Topological degree of a homogeneous expression, `None` for zero.
fn expr_degree(origin: &str, e: &SourceExpr, deg: &impl Fn(&Name) -> Result<u32>) -> Result<Option<u32>> {
    Ok(match e {
        Expr::Leaf(n) => Some(deg(n)?),
        Expr::Bracket(a, b) => match (expr_degree(origin, a, deg)?, expr_degree(origin, b, deg)?) {
            (Some(x), Some(y)) => Some(x + y),
            _ => None,
        },
        Expr::Sum(ts) => {
            let mut found: Option<u32> = None;
            for t in ts {
                if let Some(d) = expr_degree(origin, &t.expr, deg)? {
                    match found {
                        Some(f) if f != d => {
                            return Err(located(
                                origin,
                                first_leaf(&t.expr).unwrap_or_default(),
                                ParseErrorKind::DegreeMismatch(format!("term of degree {d} in a sum of degree {f}")),
                            ))
                        }
                        _ => found = Some(d),
                    }
                }
            }
            found
        }
    })
}

fn check_degree(origin: &str, e: &SourceExpr, deg: &impl Fn(&Name) -> Result<u32>, expected: u32, what: &str) -> Result<()> {
    match expr_degree(origin, e, deg)? {
        Some(d) if d != expected => Err(located(
            origin,
            first_leaf(e).unwrap_or_default(),
            ParseErrorKind::DegreeMismatch(format!("{what} should have degree {expected}, found {d}")),
        )),
        _ => Ok(()),
    }
}

impl Document {
    pub fn parse(origin: &str, source: &str) -> Result<Self> {
        let statements = parse_statements(origin, source)?;
        let kind = match statements.iter().find(|(s, _)| matches!(s, Statement::Kind(_))) {
            Some((Statement::Kind(n), _)) => {
                Kind::parse(&n.text).ok_or_else(|| structure(origin, n.pos, format!("unknown document kind `{}`", n.text)))?
            }
            _ => return Err(structure(origin, Pos { line: 1, col: 1 }, "missing `kind` statement")),
        };
        let mut doc = Document {
            origin: origin.to_string(),
            kind,
            cutoff: None,
            gens: Vec::new(),
            brackets: Vec::new(),
            cells: Vec::new(),
            diffs: Vec::new(),
            names: Vec::new(),
            perturbations: Vec::new(),
            sigma: Vec::new(),
        };
        let mut seen_kind = false;
        for (st, pos) in statements {
            if !kind.allows(&st) {
                return Err(structure(origin, pos, format!("statement not allowed in a {} document", kind.as_str())));
            }
            match st {
                Statement::Kind(_) => {
                    if seen_kind {
                        return Err(structure(origin, pos, "`kind` given twice"));
                    }
                    seen_kind = true;
                }
                Statement::Cutoff(c) => {
                    if doc.cutoff.replace(c).is_some() {
                        return Err(structure(origin, pos, "`cutoff` given twice"));
                    }
                }
                Statement::Gen { name, deg, res } => {
                    if doc.gens.iter().any(|g| g.name == name && g.res.is_some() == res.is_some()) {
                        return Err(structure(origin, name.pos, format!("`{name}` declared twice")));
                    }
                    doc.gens.push(GenDecl { name, deg, res });
                }
                Statement::Bracket { left, right, value } => doc.brackets.push(BracketDecl { left, right, value }),
                Statement::Cell { name, dim, attach } => {
                    if doc.cells.iter().any(|c| c.name == name) {
                        return Err(structure(origin, name.pos, format!("`{name}` declared twice")));
                    }
                    doc.cells.push(CellDecl { name, dim, attach });
                }
                Statement::Diff(a) => doc.diffs.push(a),
                Statement::Names(ns) => doc.names.extend(ns),
                Statement::Perturbation(name) => {
                    if doc.perturbations.iter().any(|p| p.name == name) {
                        return Err(structure(origin, name.pos, format!("perturbation `{name}` declared twice")));
                    }
                    doc.perturbations.push(PerturbationDecl { name, values: Vec::new() });
                }
                Statement::Tau(a) => {
                    if doc.perturbations.is_empty() {
                        doc.perturbations.push(PerturbationDecl { name: Name::new("default"), values: Vec::new() });
                    }
                    doc.perturbations.last_mut().expect("nonempty").values.push(a);
                }
                Statement::Sigma(a) => doc.sigma.push(a),
            }
        }
        Ok(doc)
    }

    pub fn read(path: &str) -> Result<Self> {
        let source = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_string(), source })?;
        Self::parse(path, &source)
    }

    /// Writes the document back in the input grammar.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "kind {}", self.kind.as_str());
        if let Some(c) = self.cutoff {
            let _ = writeln!(out, "cutoff {c}");
        }
        for g in &self.gens {
            match g.res {
                Some(r) => writeln!(out, "gen {} deg {} res {r}", g.name, g.deg),
                None => writeln!(out, "gen {} deg {}", g.name, g.deg),
            }
            .expect("string write");
        }
        for b in &self.brackets {
            let _ = writeln!(out, "bracket [{},{}] = {}", b.left, b.right, emit_expr(&b.value));
        }
        for c in &self.cells {
            let _ = writeln!(out, "cell {} dim {} attach {}", c.name, c.dim, emit_expr(&c.attach));
        }
        for d in &self.diffs {
            let _ = writeln!(out, "diff {} = {}", d.target, emit_expr(&d.value));
        }
        if !self.names.is_empty() {
            let names: Vec<&str> = self.names.iter().map(|n| n.text.as_str()).collect();
            let _ = writeln!(out, "names {}", names.join(" "));
        }
        for p in &self.perturbations {
            let _ = writeln!(out, "perturbation {}", p.name);
            for a in &p.values {
                let _ = writeln!(out, "tau {} -> {}", a.target, emit_expr(&a.value));
            }
        }
        for a in &self.sigma {
            let _ = writeln!(out, "sigma {} -> {}", a.target, emit_expr(&a.value));
        }
        out
    }

    fn presentation_gens(&self) -> impl Iterator<Item = &GenDecl> {
        self.gens.iter().filter(|g| g.res.is_none())
    }

    fn model_gens(&self) -> impl Iterator<Item = &GenDecl> {
        self.gens.iter().filter(|g| g.res.is_some())
    }

    pub fn has_explicit_model(&self) -> bool {
        self.model_gens().next().is_some()
    }

    pub fn perturbation(&self, name: &str) -> Option<&PerturbationDecl> {
        self.perturbations.iter().find(|p| p.name.text == name)
    }

    fn need(&self, kinds: &[Kind], what: &str) -> Result<()> {
        if kinds.contains(&self.kind) {
            Ok(())
        } else {
            Err(CliError::Usage(format!("{}: {what} needs a {} document", self.origin, kinds_list(kinds))))
        }
    }

    pub fn presentation(&self) -> Result<GlaPresentation<Scalar>> {
        self.need(&[Kind::Presentation, Kind::PerturbationSet, Kind::Automorphism], "a presentation")?;
        let origin = &self.origin;
        let basis: Vec<BasisElement> =
            self.presentation_gens().map(|g| BasisElement { name: g.name.text.clone(), degree: g.deg }).collect();
        let index: BTreeMap<&str, usize> = basis.iter().enumerate().map(|(i, b)| (b.name.as_str(), i)).collect();
        let lookup = |n: &Name| -> Result<usize> {
            index
                .get(n.text.as_str())
                .copied()
                .ok_or_else(|| located(origin, n.pos, ParseErrorKind::UnknownName(n.text.clone())))
        };
        let deg = |n: &Name| -> Result<u32> { Ok(basis[lookup(n)?].degree) };
        let mut given = Vec::new();
        for b in &self.brackets {
            let (i, j) = (lookup(&b.left)?, lookup(&b.right)?);
            let target = basis[i].degree + basis[j].degree;
            check_degree(origin, &b.value, &deg, target, &format!("[{},{}]", b.left, b.right))?;
            given.push(((i, j), linear(origin, &b.value, &lookup)?));
        }
        let cutoff = self.cutoff.unwrap_or(DEFAULT_CUTOFF);
        GlaPresentation::new(basis.clone(), given, cutoff).map_err(|e| match e {
            lie_moduli::Error::PresentationInvalid(msg) => {
                let pos = self.blame(&msg);
                located(origin, pos, ParseErrorKind::InvalidStructureConstants(msg))
            }
            other => other.into(),
        })
    }

    /// The bracket statement to blame for an error message naming elements.
    fn blame(&self, msg: &str) -> Pos {
        let mentioned: BTreeSet<&str> = msg
            .split(|c: char| !(c.is_ascii_alphanumeric() || c == '_' || c == '\''))
            .filter(|w| !w.is_empty())
            .collect();
        let hit = |b: &&BracketDecl| mentioned.contains(b.left.text.as_str()) || mentioned.contains(b.right.text.as_str());
        let found = if msg.contains("twice") {
            self.brackets.iter().rev().find(hit)
        } else {
            self.brackets.iter().find(hit)
        };
        found
            .or(self.brackets.first())
            .map(|b| b.left.pos)
            .unwrap_or(Pos { line: 1, col: 1 })
    }

    pub fn cw(&self) -> Result<CwDescription<Scalar>> {
        self.need(&[Kind::CwComplex], "a CW description")?;
        let origin = &self.origin;
        let dims: BTreeMap<&str, u32> = self.cells.iter().map(|c| (c.name.text.as_str(), c.dim)).collect();
        let deg = |n: &Name| -> Result<u32> {
            dims.get(n.text.as_str())
                .map(|d| d.saturating_sub(1))
                .ok_or_else(|| located(origin, n.pos, ParseErrorKind::UnknownName(n.text.clone())))
        };
        let mut cells = Vec::new();
        for c in &self.cells {
            if c.dim < 2 {
                return Err(located(origin, c.name.pos, ParseErrorKind::DegreeMismatch(format!("cell `{}` has dimension {} < 2", c.name, c.dim))));
            }
            check_degree(origin, &c.attach, &deg, c.dim - 2, &format!("attaching map of `{}`", c.name))?;
            let attach = c.attach.try_map_leaves(&mut |n: &Name| Ok::<_, CliError>(n.text.clone()))?;
            cells.push(Cell { name: c.name.text.clone(), dim: c.dim, attach });
        }
        Ok(CwDescription { cells })
    }

    pub fn model_cutoff(&self, flag: Option<u32>) -> u32 {
        flag.or(self.cutoff).unwrap_or(DEFAULT_CUTOFF)
    }

    pub fn bigraded(&self, flag: Option<u32>, reversed: bool) -> Result<BigradedModel<Scalar>> {
        let p = self.presentation()?;
        if self.has_explicit_model() {
            return self.explicit_model(p, flag);
        }
        let opts = BuildOptions { names: self.names.iter().map(|n| n.text.clone()).collect(), reversed };
        Ok(build_bigraded(&p, self.model_cutoff(flag), &opts)?)
    }

    fn explicit_model(&self, p: GlaPresentation<Scalar>, flag: Option<u32>) -> Result<BigradedModel<Scalar>> {
        let origin = &self.origin;
        let cutoff = self.cutoff.unwrap_or(DEFAULT_CUTOFF);
        if flag.is_some_and(|f| f != cutoff) {
            return Err(CliError::Usage(format!("{origin}: an explicit model is fixed at cutoff {cutoff}")));
        }
        let mut lie = FreeLie::new();
        let mut rho = BTreeMap::new();
        for g in self.model_gens() {
            let res = g.res.expect("model generator");
            let h = lie.add_generator(&g.name.text, g.deg, res)?;
            if res == 0 {
                let i = p.index(&g.name.text).ok_or_else(|| {
                    structure(origin, g.name.pos, format!("resolution-0 generator `{}` names no presentation element", g.name))
                })?;
                rho.insert(h, p.unit(i));
            }
        }
        let mut values: BTreeMap<_, _> = lie.gens().map(|g| (g, LieElement::zero())).collect();
        for a in &self.diffs {
            let g = gen_of(origin, &lie, &a.target)?;
            if !values[&g].is_zero() {
                return Err(structure(origin, a.target.pos, format!("differential of `{}` given twice", a.target)));
            }
            values.insert(g, lie_value(origin, &lie, &a.value, g.top.checked_sub(1), "differential")?);
        }
        let d = Derivation::new(-1, values, 1)?;
        let model = TruncatedModel::new(lie, d, cutoff)?;
        Ok(BigradedModel::from_parts(model, p, rho, Vec::new())?)
    }

    /// The cellular model for CW documents, the bigraded one otherwise.
    pub fn truncated(&self, flag: Option<u32>) -> Result<TruncatedModel<Scalar>> {
        if self.kind == Kind::CwComplex {
            Ok(build_cellular(&self.cw()?, self.model_cutoff(flag))?)
        } else {
            Ok(self.bigraded(flag, false)?.model)
        }
    }
}

fn kinds_list(kinds: &[Kind]) -> String {
    kinds.iter().map(|k| k.as_str()).collect::<Vec<_>>().join(" or ")
}

fn linear(origin: &str, e: &SourceExpr, lookup: &impl Fn(&Name) -> Result<usize>) -> Result<PElement<Scalar>> {
    let mut out = PElement::new();
    add_linear(origin, e, &Scalar::from_i64(1), lookup, &mut out)?;
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

fn add_linear(
    origin: &str,
    e: &SourceExpr,
    scale: &Scalar,
    lookup: &impl Fn(&Name) -> Result<usize>,
    out: &mut PElement<Scalar>,
) -> Result<()> {
    match e {
        Expr::Leaf(n) => {
            let slot = out.entry(lookup(n)?).or_insert_with(|| Scalar::from_i64(0));
            *slot = slot.clone() + scale.clone();
        }
        Expr::Sum(ts) => {
            for Term { coeff, expr } in ts {
                add_linear(origin, expr, &(scale.clone() * coeff.clone()), lookup, out)?;
            }
        }
        Expr::Bracket(..) => {
            return Err(structure(
                origin,
                first_leaf(e).unwrap_or_default(),
                "bracket values must be linear combinations of basis elements",
            ))
        }
    }
    Ok(())
}

pub fn gen_of(origin: &str, lie: &FreeLie<Scalar>, n: &Name) -> Result<lie_moduli::lie::Gen> {
    lie.gen(&n.text).ok_or_else(|| located(origin, n.pos, ParseErrorKind::UnknownName(n.text.clone())))
}

/// Resolves an expression over the generators of `lie`, checking its
/// topological degree when one is expected.
pub fn lie_value(origin: &str, lie: &FreeLie<Scalar>, e: &SourceExpr, expected: Option<u32>, what: &str) -> Result<LieElement<Scalar>> {
    let deg = |n: &Name| -> Result<u32> { Ok(gen_of(origin, lie, n)?.top) };
    match expected {
        Some(t) => check_degree(origin, e, &deg, t, what)?,
        None => {
            if let Some(d) = expr_degree(origin, e, &deg)? {
                return Err(located(
                    origin,
                    first_leaf(e).unwrap_or_default(),
                    ParseErrorKind::DegreeMismatch(format!("{what} has no admissible degree, found {d}")),
                ));
            }
        }
    }
    let resolved = e.try_map_leaves(&mut |n: &Name| gen_of(origin, lie, n))?;
    Ok(resolved.to_lie())
}

/// A derivation of the given degree from `g -> value` entries; unlisted
/// generators go to zero.
pub fn derivation(
    origin: &str,
    model: &TruncatedModel<Scalar>,
    entries: &[Assignment],
    degree: i32,
    drop: u32,
) -> Result<Derivation<Scalar>> {
    let mut values = BTreeMap::new();
    for a in entries {
        let g = gen_of(origin, &model.lie, &a.target)?;
        if values.contains_key(&g) {
            return Err(structure(origin, a.target.pos, format!("value on `{}` given twice", a.target)));
        }
        let t = g.top as i64 + degree as i64;
        let expected = u32::try_from(t).ok().filter(|t| *t >= 1);
        values.insert(g, lie_value(origin, &model.lie, &a.value, expected, &format!("value on `{}`", a.target))?);
    }
    Ok(model.derivation(degree, drop, values)?)
}

/// Images of the presentation basis under `x -> value` entries, identity on
/// unlisted elements. Values may use brackets, evaluated in `P`.
pub fn automorphism(origin: &str, p: &GlaPresentation<Scalar>, entries: &[Assignment]) -> Result<Vec<PElement<Scalar>>> {
    let lookup = |n: &Name| -> Result<usize> {
        p.index(&n.text).ok_or_else(|| located(origin, n.pos, ParseErrorKind::UnknownName(n.text.clone())))
    };
    let deg = |n: &Name| -> Result<u32> { Ok(p.degree(lookup(n)?)) };
    let mut sigma: Vec<Option<PElement<Scalar>>> = vec![None; p.len()];
    for a in entries {
        let i = lookup(&a.target)?;
        if sigma[i].is_some() {
            return Err(structure(origin, a.target.pos, format!("image of `{}` given twice", a.target)));
        }
        check_degree(origin, &a.value, &deg, p.degree(i), &format!("image of `{}`", a.target))?;
        let e = a.value.try_map_leaves(&mut |n: &Name| lookup(n))?;
        sigma[i] = Some(p.eval(&e));
    }
    Ok(sigma.into_iter().enumerate().map(|(i, s)| s.unwrap_or_else(|| p.unit(i))).collect())
}
