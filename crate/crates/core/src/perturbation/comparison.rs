use std::collections::BTreeMap;

use crate::dgla::Derivation;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::homology::{induced_linear, Complex, Homology, InducedMap};
use crate::lie::LieElement;
use crate::linalg::{rank, Echelon};
use crate::models::BigradedModel;
use crate::presentation::PElement;

use super::check_perturbation;

/// `f(x) = x + τφ(x)` from `(L, d)` to `(L, d+τ)`, with inverse
/// `Σ (−τφ)^i`.
pub struct ComparisonMap<'a, F> {
    model: &'a BigradedModel<F>,
    tau: Derivation<F>,
    bound: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonReport<F> {
    /// Per topological degree, whether `f` has full rank on `L_n`.
    pub bijective: BTreeMap<u32, bool>,
    /// `f⁻¹∘f` and `f∘f⁻¹` are the identity on every basis element.
    pub inverse_ok: bool,
    pub induced: InducedMap<F>,
    /// `f([x,y]) − [f x, f y]` is a boundary for all representatives.
    pub brackets_ok: bool,
}

impl<F: Field> ComparisonReport<F> {
    pub fn passed(&self) -> bool {
        self.bijective.values().all(|b| *b) && self.inverse_ok && self.induced.bijective() && self.brackets_ok
    }
}

pub fn comparison_map<'a, F: Field>(model: &'a BigradedModel<F>, tau: &Derivation<F>) -> Result<ComparisonMap<'a, F>> {
    check_perturbation(model, tau)?;
    let bound = model.lie().gens().map(|g| g.res).max().unwrap_or(0) as usize + 2;
    Ok(ComparisonMap { model, tau: tau.clone(), bound })
}

impl<F: Field> ComparisonMap<'_, F> {
    fn tau_phi(&self, x: &LieElement<F>) -> Result<LieElement<F>> {
        self.tau.apply(&self.model.homology().phi(x)?)
    }

    pub fn apply(&self, x: &LieElement<F>) -> Result<LieElement<F>> {
        Ok(x.clone() + &self.tau_phi(x)?)
    }

    pub fn apply_inverse(&self, x: &LieElement<F>) -> Result<LieElement<F>> {
        let mut term = x.clone();
        let mut acc = x.clone();
        for _ in 0..self.bound {
            term = -self.tau_phi(&term)?;
            if term.is_zero() {
                return Ok(acc);
            }
            acc = acc + &term;
        }
        Err(Error::Invariant("inverse series of the comparison map does not terminate".into()))
    }

    pub fn verify(&self) -> Result<ComparisonReport<F>> {
        let model = self.model;
        let lie = model.lie();
        let cutoff = model.cutoff();
        let mut bijective = BTreeMap::new();
        let mut inverse_ok = true;
        for n in 1..cutoff {
            let basis = lie.top_elements(n);
            let mut images = Vec::with_capacity(basis.len());
            for e in &basis {
                let fe = self.apply(e)?;
                if self.apply_inverse(&fe)? != *e || self.apply(&self.apply_inverse(e)?)? != *e {
                    inverse_ok = false;
                }
                images.push(fe.into_coords());
            }
            bijective.insert(n, rank(images) == basis.len());
        }
        let total = model.model.perturbed(&self.tau)?;
        let perturbed_h = Homology::compute(Complex { lie, diff: &total, cutoff })?;
        let induced = induced_linear(model.homology(), &perturbed_h, &mut |x| self.apply(x))?;
        let mut brackets_ok = true;
        for (&n, dn) in &model.homology().degrees {
            for (&m, dm) in &model.homology().degrees {
                if n + m >= cutoff {
                    continue;
                }
                for x in &dn.reps {
                    for y in &dm.reps {
                        let diff = self.apply(&x.bracket(y))? - &self.apply(x)?.bracket(&self.apply(y)?);
                        if !diff.is_zero() && !perturbed_h.is_boundary(&diff).unwrap_or(false) {
                            brackets_ok = false;
                        }
                    }
                }
            }
        }
        Ok(ComparisonReport { bijective, inverse_ok, induced, brackets_ok })
    }
}

/// A perturbed model with its identification `i_τ: H(L, d+τ) → P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triple<F> {
    pub tau: Derivation<F>,
    /// Resolution-0 representatives of a basis of `H(L, d+τ)`, per degree.
    pub reps: BTreeMap<u32, Vec<LieElement<F>>>,
    /// `i_τ` of each representative.
    pub images: BTreeMap<u32, Vec<PElement<F>>>,
    /// `i_τ` is bijective in every certified degree.
    pub isomorphism: bool,
}

/// Moves a `(d+τ)`-cycle to a homologous one in resolution degree 0 by
/// repeatedly subtracting `(d+τ)φ` of its top resolution layer.
pub fn reduce_to_res0<F: Field>(model: &BigradedModel<F>, tau: &Derivation<F>, x: &LieElement<F>) -> Result<LieElement<F>> {
    let total = model.model.perturbed(tau)?;
    let mut z = x.clone();
    let bound = z.max_res_deg().unwrap_or(0) + 1;
    for _ in 0..=bound {
        let k = match z.max_res_deg() {
            Ok(0) | Err(_) => return Ok(z),
            Ok(k) => k,
        };
        let top = z.component_at_res(k);
        let n = top.top_deg().ok_or_else(|| Error::RepresentativeReductionFailed("inhomogeneous element".into()))?;
        let dec = model.homology().degree(n)?;
        let class = dec
            .class_of(&top)
            .map_err(|_| Error::RepresentativeReductionFailed(format!("top layer in resolution {k} is not a d-cycle")))?;
        if class.iter().any(|c| !c.is_zero()) {
            return Err(Error::RepresentativeReductionFailed(format!("top layer in resolution {k} is not a boundary")));
        }
        let v = dec.phi(&top)?;
        z = z - &total.apply(&v)?;
    }
    Err(Error::RepresentativeReductionFailed("reduction did not reach resolution 0".into()))
}

pub fn triple_identification<F: Field>(model: &BigradedModel<F>, tau: &Derivation<F>) -> Result<Triple<F>> {
    check_perturbation(model, tau)?;
    if !model.model.check_maurer_cartan(tau)?.passed() {
        return Err(Error::SquareNonzero(vec!["d+τ".into()]));
    }
    let total = model.model.perturbed(tau)?;
    let h = Homology::compute(Complex { lie: model.lie(), diff: &total, cutoff: model.cutoff() })?;
    let mut reps = BTreeMap::new();
    let mut images = BTreeMap::new();
    let mut isomorphism = true;
    for (&n, dec) in &h.degrees {
        let mut rs = Vec::new();
        let mut imgs = Vec::new();
        let mut ech: Echelon<usize, F> = Echelon::new();
        for r in &dec.reps {
            let z = reduce_to_res0(model, tau, r)?;
            if z.max_res_deg().is_ok_and(|k| k > 0) {
                return Err(Error::RepresentativeReductionFailed(format!("degree {n}")));
            }
            let p = model.rho_apply(&z)?;
            ech.insert(p.clone());
            rs.push(z);
            imgs.push(p);
        }
        if ech.rank() != dec.dim() || dec.dim() != model.presentation.in_degree(n).len() {
            isomorphism = false;
        }
        reps.insert(n, rs);
        images.insert(n, imgs);
    }
    Ok(Triple { tau: tau.clone(), reps, images, isomorphism })
}
