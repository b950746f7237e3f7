//! Perturbations of a bigraded model: membership in `Θ`, the gauge action,
//! equivalence decisions, the constructive perturbation toward another model,
//! the comparison map, Maurer-Cartan systems and automorphisms of `P`.

mod automorphism;
mod comparison;
mod gauge;
mod mc;
mod toward;

use std::collections::BTreeMap;

pub use automorphism::{apply_automorphism, lift_automorphism, LiftedAutomorphism};
pub use comparison::{comparison_map, reduce_to_res0, triple_identification, ComparisonMap, ComparisonReport, Triple};
pub use gauge::{
    decide_equivalence, exp_ad, gauge_apply, theta_membership, EquivalenceReport, Obstruction, ObstructionEntry,
    Verdict,
};
pub use mc::{mc_system, DirectionKind, Equation, McSystem, Polynomial, Unknown};
pub use toward::{perturb_toward, TowardResult};

use crate::dgla::Derivation;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::lie::{Gen, LieElement, Word};
use crate::linalg::{Echelon, SparseVec};
use crate::models::BigradedModel;

/// A degree −1 derivation on the model's generators from a partial list of
/// values, checked to drop resolution degree by at least two.
pub fn perturbation<F: Field>(
    model: &BigradedModel<F>,
    values: impl IntoIterator<Item = (Gen, LieElement<F>)>,
) -> Result<Derivation<F>> {
    model.model.derivation(-1, 2, values)
}

/// A degree 0 derivation from a partial list of values, checked to lower
/// resolution degree.
pub fn gauge_element<F: Field>(
    model: &BigradedModel<F>,
    values: impl IntoIterator<Item = (Gen, LieElement<F>)>,
) -> Result<Derivation<F>> {
    model.model.derivation(0, 1, values)
}

pub(crate) fn one_value<F: Field>(model: &BigradedModel<F>, degree: i32, drop: u32, g: Gen, v: LieElement<F>) -> Derivation<F> {
    let mut values: BTreeMap<Gen, LieElement<F>> = model.lie().gens().map(|h| (h, LieElement::zero())).collect();
    values.insert(g, v);
    Derivation::new(degree, values, drop).expect("elementary derivation has the declared bidegree")
}

/// Generators sorted by resolution degree, then topological degree.
pub(crate) fn by_resolution<F: Field>(model: &BigradedModel<F>) -> Vec<Gen> {
    let mut gens: Vec<Gen> = model.lie().gens().collect();
    gens.sort_by_key(|g| (g.res, g.top, g.id));
    gens
}

/// Finds `c` with `Σ c_i images[i] = target` and returns `Σ c_i sources[i]`.
pub(crate) fn solve_images<F: Field>(
    sources: &[LieElement<F>],
    images: &[LieElement<F>],
    target: &LieElement<F>,
) -> Option<LieElement<F>> {
    let mut ech: Echelon<Word, F> = Echelon::new();
    for im in images {
        ech.insert(im.coords().clone());
    }
    let c = ech.solve(target.coords())?;
    let mut out = LieElement::zero();
    for (i, v) in c {
        out.add_scaled(&v, &sources[i]);
    }
    Some(out)
}

pub(crate) fn to_sparse<F: Field>(v: &[F]) -> SparseVec<usize, F> {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

pub(crate) fn check_perturbation<F: Field>(model: &BigradedModel<F>, tau: &Derivation<F>) -> Result<()> {
    if tau.degree() != -1 {
        return Err(Error::DegreeMismatch {
            what: "perturbation".into(),
            expected: "-1".into(),
            found: tau.degree().to_string(),
        });
    }
    if !theta_membership(tau, -1) {
        return Err(Error::ResolutionDrop("perturbation must lower resolution degree by at least 2".into()));
    }
    for g in model.lie().gens() {
        if tau.value(g).is_none() {
            return Err(Error::MissingGeneratorValue(model.lie().name(g).into()));
        }
    }
    Ok(())
}
