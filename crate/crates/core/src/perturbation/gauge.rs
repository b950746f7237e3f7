use crate::dgla::{der_bracket, Derivation};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::lie::{Gen, LieElement, Word};
use crate::linalg::{Echelon, Insertion, SparseVec};
use crate::models::BigradedModel;
use crate::morphism::exp_derivation;

use super::{check_perturbation, one_value};

/// True iff every homogeneous part of every value lowers resolution degree
/// by more than `−degree`.
pub fn theta_membership<F: Field>(der: &Derivation<F>, degree: i32) -> bool {
    der.values()
        .iter()
        .all(|(g, v)| v.coords().keys().all(|w| g.res as i64 - w.res() as i64 > -(degree as i64)))
}

/// `Σ ad_θ^i(x) / i!` for `θ` of degree 0 lowering resolution degree.
pub fn exp_ad<F: Field>(theta: &Derivation<F>, x: &Derivation<F>) -> Result<Derivation<F>> {
    let bound = theta.domain().map(|g| g.res).max().unwrap_or(0) as i64 + 2;
    let mut term = x.clone();
    let mut acc = x.clone();
    for i in 1..=bound {
        term = der_bracket(theta, &term)?.scale(&F::from_ratio(1, i));
        if term.is_zero() {
            return Ok(acc);
        }
        acc = acc.add(&term)?;
    }
    Err(Error::Invariant("ad of the gauge element is not nilpotent".into()))
}

fn gauge_checked<F: Field>(model: &BigradedModel<F>, theta: &Derivation<F>) -> Result<Derivation<F>> {
    if theta.degree() != 0 {
        return Err(Error::DegreeMismatch {
            what: "gauge element".into(),
            expected: "0".into(),
            found: theta.degree().to_string(),
        });
    }
    if !theta_membership(theta, 0) {
        return Err(Error::ResolutionDrop("gauge element must lower resolution degree".into()));
    }
    model.model.derivation(0, 1, theta.values().iter().map(|(g, v)| (*g, v.clone())))
}

/// `τ' = exp(ad_θ)(d+τ) − d`, checked to lie in `Θ₋₁` and to satisfy
/// Maurer-Cartan.
pub fn gauge_apply<F: Field>(model: &BigradedModel<F>, theta: &Derivation<F>, tau: &Derivation<F>) -> Result<Derivation<F>> {
    check_perturbation(model, tau)?;
    let theta = gauge_checked(model, theta)?;
    let total = exp_ad(&theta, &model.model.perturbed(tau)?)?;
    let out = total.sub(model.d())?;
    if !theta_membership(&out, -1) {
        return Err(Error::Invariant("gauge action left the perturbations".into()));
    }
    let out = out.with_declared_drop(2)?;
    if !model.model.check_maurer_cartan(&out)?.passed() {
        return Err(Error::Invariant("gauge action broke Maurer-Cartan".into()));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionEntry<F> {
    pub generator: Gen,
    /// The part of `τ₂ − exp(ad_θ)(d+τ₁)` on this generator that no gauge
    /// correction reaches.
    pub value: LieElement<F>,
    /// Its homology class in `(L, d)`, when it is a cycle below the cutoff.
    pub class: Option<Vec<F>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction<F> {
    /// Resolution drop at which the weight-by-weight solve failed.
    pub weight: u32,
    pub entries: Vec<ObstructionEntry<F>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<F> {
    /// `exp(ad_θ)(d+τ₁) = d+τ₂`; `log_check` records that `log(exp θ) = θ`.
    Equivalent { theta: Derivation<F>, log_check: bool },
    Inequivalent(Obstruction<F>),
    /// The solve failed after earlier choices that were not forced, so a
    /// different choice might still succeed.
    Undetermined(Obstruction<F>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport<F> {
    pub verdict: Verdict<F>,
    pub certified_through: u32,
}

impl<F> EquivalenceReport<F> {
    pub fn equivalent(&self) -> bool {
        matches!(self.verdict, Verdict::Equivalent { .. })
    }
}

fn derivation_coords<F: Field>(x: &Derivation<F>) -> SparseVec<(Gen, Word), F> {
    let mut out = SparseVec::new();
    for (g, v) in x.values() {
        for (w, c) in v.coords() {
            out.insert((*g, w.clone()), c.clone());
        }
    }
    out
}

/// Searches for `θ ∈ Θ₀` with `exp(ad_θ)(d+τ₁) = d+τ₂`, one resolution
/// weight at a time. At weight `k` the component `θ_{k−1}` must satisfy
/// `[θ_{k−1}, d] = (τ₂ − exp(ad_{θ<k−1})(d+τ₁))_k`, a linear system over the
/// elementary derivations sending one generator to one basis element.
pub fn decide_equivalence<F: Field>(
    model: &BigradedModel<F>,
    tau1: &Derivation<F>,
    tau2: &Derivation<F>,
) -> Result<EquivalenceReport<F>> {
    check_perturbation(model, tau1)?;
    check_perturbation(model, tau2)?;
    let lie = model.lie();
    let d = model.d();
    let start = model.model.perturbed(tau1)?;
    let goal = model.model.perturbed(tau2)?;
    let max_weight = lie.gens().map(|g| g.res).max().unwrap_or(0);
    let mut theta = model.model.zero_derivation(0, 1);
    let mut freedom = false;
    for k in 2..=max_weight {
        let current = exp_ad(&theta, &start)?;
        let residual = goal.sub(&current)?.weight_component(k);
        let earlier_freedom = freedom;
        let mut columns = Vec::new();
        let mut ech: Echelon<(Gen, Word), F> = Echelon::new();
        for g in lie.gens().filter(|g| g.res >= k - 1) {
            for beta in lie.basis(g.top, g.res - (k - 1)).elements.iter() {
                let eps = one_value(model, 0, k - 1, g, beta.clone());
                let col = der_bracket(&eps, d)?;
                if ech.insert(derivation_coords(&col)) != Insertion::Independent {
                    freedom = true;
                }
                columns.push(eps);
            }
        }
        let target = derivation_coords(&residual);
        match ech.solve(&target) {
            Some(c) => {
                let mut step = model.model.zero_derivation(0, 1);
                for (i, v) in c {
                    step = step.add(&columns[i].scale(&v))?;
                }
                theta = theta.add(&step)?.with_declared_drop(1)?;
            }
            None => {
                let mut rest = target.clone();
                ech.reduce(&mut rest);
                let mut failing: Vec<Gen> = rest.keys().map(|(g, _)| *g).collect();
                failing.dedup();
                let entries = failing
                    .into_iter()
                    .map(|g| {
                        let value = residual.value(g).cloned().unwrap_or_default();
                        let class = model.homology().class_of(&value).ok();
                        ObstructionEntry { generator: g, value, class }
                    })
                    .collect();
                let obstruction = Obstruction { weight: k, entries };
                let verdict = if !earlier_freedom {
                    Verdict::Inequivalent(obstruction)
                } else {
                    Verdict::Undetermined(obstruction)
                };
                return Ok(EquivalenceReport { verdict, certified_through: model.certified_through() });
            }
        }
    }
    if !exp_ad(&theta, &start)?.same_action(&goal) {
        return Err(Error::Invariant("gauge solution does not reproduce the target".into()));
    }
    let log_check = exp_derivation(&theta)?.log()?.same_action(&theta);
    Ok(EquivalenceReport {
        verdict: Verdict::Equivalent { theta, log_check },
        certified_through: model.certified_through(),
    })
}
