use std::collections::BTreeMap;

use crate::dgla::Derivation;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::lie::{Gen, LieElement};
use crate::linalg::Echelon;
use crate::models::BigradedModel;
use crate::morphism::LieMorphism;
use crate::presentation::PElement;

use super::{by_resolution, check_perturbation, solve_images};

/// A bigraded DGLA automorphism of the model lifting an automorphism of `P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedAutomorphism<F> {
    pub forward: LieMorphism<F>,
    pub inverse: LieMorphism<F>,
}

fn rho_section<F: Field>(model: &BigradedModel<F>, n: u32, p: &PElement<F>) -> Result<LieElement<F>> {
    let elements = model.lie().basis(n, 0).elements.clone();
    let mut ech: Echelon<usize, F> = Echelon::new();
    for e in &elements {
        ech.insert(model.rho_apply(e)?);
    }
    let c = ech.solve(p).ok_or_else(|| Error::Invariant(format!("rho is not onto in degree {n}")))?;
    let mut out = LieElement::zero();
    for (j, v) in c {
        out.add_scaled(&v, &elements[j]);
    }
    Ok(out)
}

/// Lifts `σ` (images of the presentation basis): on resolution 0 through a
/// section of `ρ`, above that by `σ̃(g) = φ(σ̃(dg))`. The inverse is solved
/// bidegree by bidegree.
pub fn lift_automorphism<F: Field>(model: &BigradedModel<F>, sigma: &[PElement<F>]) -> Result<LiftedAutomorphism<F>> {
    let p = &model.presentation;
    p.check_automorphism(sigma)?;
    let lie = model.lie();
    let d = model.d();
    let mut images: BTreeMap<Gen, LieElement<F>> = BTreeMap::new();
    for g in by_resolution(model) {
        let img = if g.res == 0 {
            let rho_g = model.rho().get(&g).cloned().unwrap_or_default();
            rho_section(model, g.top, &p.apply_linear(sigma, &rho_g))?
        } else {
            let s_dg = LieMorphism::new(images.clone()).apply(d.value(g).unwrap_or(&LieElement::zero()))?;
            if s_dg.is_zero() {
                LieElement::zero()
            } else {
                if !model.homology().is_boundary(&s_dg)? {
                    return Err(Error::Invariant(format!("lift of d({}) is not a boundary", lie.name(g))));
                }
                model.homology().phi(&s_dg)?
            }
        };
        images.insert(g, img);
    }
    let forward = LieMorphism::new(images);
    for g in lie.gens() {
        let lhs = d.apply(forward.image(g).unwrap_or(&LieElement::zero()))?;
        let rhs = forward.apply(d.value(g).unwrap_or(&LieElement::zero()))?;
        if lhs != rhs {
            return Err(Error::NotChainMap(lie.name(g).to_string()));
        }
    }
    let mut inv = BTreeMap::new();
    for g in lie.gens() {
        let basis = lie.basis(g.top, g.res);
        let imgs: Vec<LieElement<F>> = basis.elements.iter().map(|e| forward.apply(e)).collect::<Result<_>>()?;
        let target = LieElement::generator(g);
        let y = solve_images(&basis.elements, &imgs, &target)
            .ok_or_else(|| Error::NotAnAutomorphism(format!("lift is not onto at {}", lie.name(g))))?;
        inv.insert(g, y);
    }
    Ok(LiftedAutomorphism { forward, inverse: LieMorphism::new(inv) })
}

/// `σ̃ τ σ̃⁻¹` for the lift `σ̃` of `σ`.
pub fn apply_automorphism<F: Field>(
    model: &BigradedModel<F>,
    sigma: &[PElement<F>],
    tau: &Derivation<F>,
) -> Result<Derivation<F>> {
    check_perturbation(model, tau)?;
    let lift = lift_automorphism(model, sigma)?;
    let mut values = BTreeMap::new();
    for g in model.lie().gens() {
        let pre = lift.inverse.image(g).cloned().unwrap_or_default();
        values.insert(g, lift.forward.apply(&tau.apply(&pre)?)?);
    }
    let out = model.model.derivation(-1, 2, values)?;
    if !model.model.check_maurer_cartan(&out)?.passed() {
        return Err(Error::Invariant("conjugated perturbation fails Maurer-Cartan".into()));
    }
    Ok(out)
}
