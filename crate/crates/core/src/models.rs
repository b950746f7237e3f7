//! Constructors for free models: the cellular model of a CW complex and the
//! bigraded model of a finite graded Lie algebra, with structural checks.

use std::collections::BTreeMap;

use crate::dgla::{Derivation, TruncatedModel};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::homology::{Complex, Homology};
use crate::lie::{Expr, FreeLie, Gen, LieElement};
use crate::linalg::{axpy, kernel, Echelon, Insertion};
use crate::presentation::{GlaPresentation, PElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell<F> {
    pub name: String,
    pub dim: u32,
    /// Attaching map, written in the generators of earlier cells.
    pub attach: Expr<String, F>,
}

/// Cells above the implicit 0-cell, listed so that every attaching map only
/// mentions earlier cells.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CwDescription<F> {
    pub cells: Vec<Cell<F>>,
}

fn eval_names<F: Field>(lie: &FreeLie<F>, e: &Expr<String, F>) -> Result<LieElement<F>> {
    e.evaluate(
        &mut |name: &String| lie.element(name),
        &|x, y| x.bracket(y),
        &LieElement::zero,
        &|acc, c, v| acc.add_scaled(c, v),
    )
}

fn require_bidegree<F: Field>(what: &str, v: &LieElement<F>, expected: (u32, u32)) -> Result<()> {
    if v.is_zero() {
        return Ok(());
    }
    match v.bidegree() {
        Some(b) if b == expected => Ok(()),
        found => Err(Error::DegreeMismatch {
            what: what.to_string(),
            expected: format!("{expected:?}"),
            found: found.map_or_else(|| "mixed bidegrees".to_string(), |b| format!("{b:?}")),
        }),
    }
}

/// One generator per cell, in degree `dim − 1`, with `d` the attaching map.
/// Cells whose generator would sit above the cutoff are dropped.
pub fn build_cellular<F: Field>(cw: &CwDescription<F>, cutoff: u32) -> Result<TruncatedModel<F>> {
    let mut lie = FreeLie::new();
    let mut diff = BTreeMap::new();
    for cell in &cw.cells {
        if cell.dim < 2 {
            return Err(Error::DegreeMismatch {
                what: format!("cell {}", cell.name),
                expected: "dimension >= 2".into(),
                found: cell.dim.to_string(),
            });
        }
        if cell.dim - 1 > cutoff {
            continue;
        }
        let attach = eval_names(&lie, &cell.attach)?;
        require_bidegree(&format!("attaching map of {}", cell.name), &attach, (cell.dim - 2, 0))?;
        let g = lie.add_generator(&cell.name, cell.dim - 1, 0)?;
        diff.insert(g, attach);
    }
    let model = TruncatedModel::new(lie, Derivation::new(-1, diff, 0)?, cutoff)?;
    let report = model.check_square_zero();
    if !report.passed() {
        return Err(Error::SquareNonzero(report.failures.iter().map(|(g, _)| model.name(*g).to_string()).collect()));
    }
    Ok(model)
}

/// A generator added while building a bigraded model, with the cycle whose
/// class it kills.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KillStep<F> {
    pub generator: Gen,
    pub killed: LieElement<F>,
}

#[derive(Clone, Debug, Default)]
pub struct BuildOptions {
    /// Names for the added generators, in the order they are created.
    pub names: Vec<String>,
    /// Scan candidate cycles in reverse order, giving a different but equally
    /// valid choice of killed representatives.
    pub reversed: bool,
}

/// A minimal bigraded free model of a presented Lie algebra `P` together with
/// `ρ`, its quasi-isomorphism to `(P, 0)`.
#[derive(Clone, Debug)]
pub struct BigradedModel<F> {
    pub model: TruncatedModel<F>,
    pub presentation: GlaPresentation<F>,
    rho: BTreeMap<Gen, PElement<F>>,
    pub steps: Vec<KillStep<F>>,
    homology: Homology<F>,
}

impl<F: Field> BigradedModel<F> {
    /// Assembles a model from its parts and certifies it: square-zero
    /// differential of bidegree `(−1,−1)`, `ρ∘d = 0`, and `ρ` inducing an
    /// isomorphism onto `P` in every degree below the cutoff.
    pub fn from_parts(
        model: TruncatedModel<F>,
        presentation: GlaPresentation<F>,
        rho: BTreeMap<Gen, PElement<F>>,
        steps: Vec<KillStep<F>>,
    ) -> Result<Self> {
        if model.cutoff > presentation.cutoff() {
            return Err(Error::CutoffExceeded { degree: model.cutoff, cutoff: presentation.cutoff() });
        }
        for info in model.lie.generators() {
            let g = info.gen;
            let dg = model.differential.value(g).cloned().unwrap_or_default();
            if g.res == 0 {
                let img = rho.get(&g).ok_or_else(|| Error::MissingGeneratorValue(info.name.clone()))?;
                if img.keys().any(|k| presentation.degree(*k) != g.top) {
                    return Err(Error::DegreeMismatch {
                        what: format!("rho({})", info.name),
                        expected: g.top.to_string(),
                        found: "another degree".into(),
                    });
                }
                if !dg.is_zero() {
                    return Err(Error::ResolutionDrop(info.name.clone()));
                }
            } else if !dg.is_zero() && dg.bidegree() != Some((g.top - 1, g.res - 1)) {
                return Err(Error::ResolutionDrop(info.name.clone()));
            }
        }
        let report = model.check_square_zero();
        if !report.passed() {
            return Err(Error::SquareNonzero(report.failures.iter().map(|(g, _)| model.name(*g).to_string()).collect()));
        }
        let homology = Homology::compute(Complex { lie: &model.lie, diff: &model.differential, cutoff: model.cutoff })?;
        let bm = BigradedModel { model, presentation, rho, steps, homology };
        for info in bm.model.lie.generators() {
            if info.gen.res == 1 {
                let dg = bm.model.differential.value(info.gen).cloned().unwrap_or_default();
                if !bm.rho_apply(&dg)?.is_empty() {
                    return Err(Error::NotChainMap(info.name.clone()));
                }
            }
        }
        bm.certify()?;
        Ok(bm)
    }

    fn certify(&self) -> Result<()> {
        let p = &self.presentation;
        for (&n, dec) in &self.homology.degrees {
            let mut ech: Echelon<usize, F> = Echelon::new();
            for rep in &dec.reps {
                ech.insert(self.rho_apply(rep)?);
            }
            let want = p.in_degree(n).len();
            if ech.rank() != dec.dim() || dec.dim() != want {
                return Err(Error::HomologyMismatch(format!(
                    "degree {n}: homology has dimension {}, rho has rank {}, P has dimension {want}",
                    dec.dim(),
                    ech.rank()
                )));
            }
        }
        for (&n, dn) in &self.homology.degrees {
            for (&m, dm) in &self.homology.degrees {
                if n + m >= self.model.cutoff {
                    continue;
                }
                for x in &dn.reps {
                    for y in &dm.reps {
                        let lhs = self.rho_apply(&x.bracket(y))?;
                        let rhs = p.bracket(&self.rho_apply(x)?, &self.rho_apply(y)?);
                        if lhs != rhs {
                            return Err(Error::HomologyMismatch(format!("bracket of classes in degrees {n} and {m}")));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn cutoff(&self) -> u32 {
        self.model.cutoff
    }

    /// Degrees through which the model's homology is certified to be `P`.
    pub fn certified_through(&self) -> u32 {
        self.model.cutoff.saturating_sub(1)
    }

    pub fn lie(&self) -> &FreeLie<F> {
        &self.model.lie
    }

    pub fn d(&self) -> &Derivation<F> {
        &self.model.differential
    }

    pub fn complex(&self) -> Complex<'_, F> {
        Complex { lie: &self.model.lie, diff: &self.model.differential, cutoff: self.model.cutoff }
    }

    pub fn homology(&self) -> &Homology<F> {
        &self.homology
    }

    pub fn rho(&self) -> &BTreeMap<Gen, PElement<F>> {
        &self.rho
    }

    /// `ρ` on an arbitrary element: zero on positive resolution degree, and a
    /// Lie map on the resolution-0 part.
    pub fn rho_apply(&self, x: &LieElement<F>) -> Result<PElement<F>> {
        rho_eval(&self.model.lie, &self.rho, &self.presentation, x)
    }
}

fn auto_name<F: Field>(lie: &FreeLie<F>, top: u32, res: u32) -> String {
    let base = format!("g{top}_{res}");
    if lie.gen(&base).is_none() {
        return base;
    }
    (1..).map(|k| format!("{base}_{k}")).find(|s| lie.gen(s).is_none()).expect("unbounded search")
}

/// Builds the bigraded model degree by degree. Resolution 0 is seeded with
/// indecomposables of `P`; then in each degree `n`, for each resolution `r`
/// in ascending order, the classes of `ker ρ` (when `r = 0`) or of all cycles
/// (when `r > 0`) that are not boundaries are killed by new generators of
/// bidegree `(n+1, r+1)`.
pub fn build_bigraded<F: Field>(p: &GlaPresentation<F>, cutoff: u32, opts: &BuildOptions) -> Result<BigradedModel<F>> {
    if cutoff < 2 {
        return Err(Error::CutoffTooSmall(cutoff));
    }
    if cutoff > p.cutoff() {
        return Err(Error::CutoffExceeded { degree: cutoff, cutoff: p.cutoff() });
    }
    let mut lie = FreeLie::new();
    let mut rho = BTreeMap::new();
    let mut diff: BTreeMap<Gen, LieElement<F>> = BTreeMap::new();
    for k in p.indecomposables() {
        let b = &p.basis()[k];
        if b.degree > cutoff {
            continue;
        }
        let g = lie.add_generator(&b.name, b.degree, 0)?;
        rho.insert(g, p.unit(k));
        diff.insert(g, LieElement::zero());
    }
    let mut names = opts.names.iter();
    let mut steps = Vec::new();
    for n in 1..cutoff {
        for r in lie.res_degrees(n) {
            let d = Derivation::new(-1, diff.clone(), 1)?;
            let inputs = lie.basis(n, r).elements.clone();
            let rels = if r == 0 {
                let images: Vec<PElement<F>> =
                    inputs.iter().map(|e| rho_eval(&lie, &rho, p, e)).collect::<Result<_>>()?;
                kernel(images)
            } else {
                let images: Vec<_> = inputs.iter().map(|e| Ok(d.apply(e)?.into_coords())).collect::<Result<_>>()?;
                kernel(images)
            };
            let mut cycles: Vec<LieElement<F>> = rels
                .into_iter()
                .map(|rel| {
                    let mut z = LieElement::zero();
                    for (i, c) in rel {
                        z.add_scaled(&c, &inputs[i]);
                    }
                    z
                })
                .collect();
            if opts.reversed {
                cycles.reverse();
            }
            let mut ech = Echelon::new();
            for e in lie.basis(n + 1, r + 1).elements.iter() {
                ech.insert(d.apply(e)?.into_coords());
            }
            let mut killed = Vec::new();
            for z in cycles {
                if ech.insert(z.coords().clone()) == Insertion::Independent {
                    killed.push(z);
                }
            }
            for z in killed {
                let name = match names.next() {
                    Some(s) => s.clone(),
                    None => auto_name(&lie, n + 1, r + 1),
                };
                let g = lie.add_generator(&name, n + 1, r + 1)?;
                diff.insert(g, z.clone());
                steps.push(KillStep { generator: g, killed: z });
            }
        }
    }
    let model = TruncatedModel::new(lie, Derivation::new(-1, diff, 1)?, cutoff)?;
    BigradedModel::from_parts(model, p.clone(), rho, steps)
}

fn rho_eval<F: Field>(
    lie: &FreeLie<F>,
    rho: &BTreeMap<Gen, PElement<F>>,
    p: &GlaPresentation<F>,
    x: &LieElement<F>,
) -> Result<PElement<F>> {
    let mut out = PElement::new();
    for ((n, r), coeffs) in lie.express(&x.component_at_res(0))? {
        let basis = lie.basis(n, r);
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = basis.expr(i).evaluate(
                &mut |g: &Gen| rho.get(g).cloned().ok_or_else(|| Error::MissingGeneratorValue(lie.name(*g).into())),
                &|a, b| p.bracket(a, b),
                &PElement::new,
                &|acc, c, v| axpy(acc, c, v),
            )?;
            axpy(&mut out, c, &v);
        }
    }
    Ok(out)
}

/// Generators in bidegrees with `2·res ≥ top`, which a bigraded model of a
/// simply connected space cannot have.
pub fn zero_region_violations<F: Field>(model: &TruncatedModel<F>) -> Vec<Gen> {
    model.lie.gens().filter(|g| 2 * g.res >= g.top).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroRegionReport {
    /// Offending generators, by name and bidegree.
    pub generators: Vec<(String, u32, u32)>,
    /// Nonzero bidegrees `(n, r)` with `n ≤ cutoff` and `2r ≥ n`.
    pub bidegrees: Vec<(u32, u32)>,
}

impl ZeroRegionReport {
    pub fn passed(&self) -> bool {
        self.generators.is_empty() && self.bidegrees.is_empty()
    }
}

pub fn check_zero_region<F: Field>(model: &TruncatedModel<F>) -> ZeroRegionReport {
    let generators = zero_region_violations(model)
        .into_iter()
        .map(|g| (model.name(g).to_string(), g.top, g.res))
        .collect();
    let mut bidegrees = Vec::new();
    for n in 1..=model.cutoff {
        for r in model.lie.res_degrees(n) {
            if 2 * r >= n && model.lie.dim(n, r) > 0 {
                bidegrees.push((n, r));
            }
        }
    }
    ZeroRegionReport { generators, bidegrees }
}

pub fn check_minimal<F: Field>(model: &TruncatedModel<F>) -> bool {
    model.check_minimal()
}
