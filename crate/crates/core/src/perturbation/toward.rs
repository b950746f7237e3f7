use std::collections::BTreeMap;

use crate::dgla::{Derivation, TruncatedModel};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::homology::{Complex, Homology};
use crate::lie::{Gen, LieElement};
use crate::linalg::{axpy, Echelon, Insertion, SparseVec};
use crate::models::BigradedModel;
use crate::morphism::LieMorphism;
use crate::presentation::PElement;

use super::{by_resolution, check_perturbation, solve_images, to_sparse, triple_identification, Triple};

#[derive(Clone, Debug)]
pub struct TowardResult<F> {
    pub tau: Derivation<F>,
    /// `π`, from the source generators into the target.
    pub pi: LieMorphism<F>,
    /// The identification of `H(L, d+τ)` with `P`.
    pub triple: Triple<F>,
}

/// The isomorphism `H(target)_m → P_m` read off from `π` on resolution 0,
/// and the section `η: P_m → L⁰_m` of `ρ`.
struct Identification<F> {
    classes: Echelon<usize, F>,
    rho_images: Vec<PElement<F>>,
    rho_echelon: Echelon<usize, F>,
    elements: Vec<LieElement<F>>,
}

impl<F: Field> Identification<F> {
    fn build(
        source: &BigradedModel<F>,
        target_h: &Homology<F>,
        pi: &LieMorphism<F>,
        m: u32,
    ) -> Result<Self> {
        let elements = source.lie().basis(m, 0).elements.clone();
        let th = target_h.degree(m)?;
        let mut classes = Echelon::new();
        let mut rho_images = Vec::new();
        let mut rho_echelon = Echelon::new();
        for e in &elements {
            let img = pi.apply(e)?;
            let class = if img.is_zero() { SparseVec::new() } else { to_sparse(&th.class_of(&img)?) };
            let r = source.rho_apply(e)?;
            if let Insertion::Dependent(rel) = classes.insert(class) {
                let mut combo = PElement::new();
                for (j, c) in &rel {
                    let prev: &PElement<F> = if *j == rho_images.len() { &r } else { &rho_images[*j] };
                    axpy(&mut combo, c, prev);
                }
                if !combo.is_empty() {
                    return Err(Error::HomologyMismatch(format!("degree {m}: target relation not satisfied in P")));
                }
            }
            rho_echelon.insert(r.clone());
            rho_images.push(r);
        }
        let pdim = source.presentation.in_degree(m).len();
        if classes.rank() != th.dim() || th.dim() != pdim || rho_echelon.rank() != pdim {
            return Err(Error::HomologyMismatch(format!(
                "degree {m}: target homology has dimension {}, P has dimension {pdim}",
                th.dim()
            )));
        }
        Ok(Identification { classes, rho_images, rho_echelon, elements })
    }

    fn to_p(&self, class: &[F]) -> Result<PElement<F>> {
        let c = self
            .classes
            .solve(&to_sparse(class))
            .ok_or_else(|| Error::HomologyMismatch("target class outside the image of pi".into()))?;
        let mut out = PElement::new();
        for (j, v) in c {
            axpy(&mut out, &v, &self.rho_images[j]);
        }
        Ok(out)
    }

    fn section(&self, p: &PElement<F>) -> Result<LieElement<F>> {
        let c = self
            .rho_echelon
            .solve(p)
            .ok_or_else(|| Error::HomologyMismatch("element of P outside the image of rho".into()))?;
        let mut out = LieElement::zero();
        for (j, v) in c {
            out.add_scaled(&v, &self.elements[j]);
        }
        Ok(out)
    }
}

fn target_preimage<F: Field>(target_h: &Homology<F>, x: &LieElement<F>, what: &str) -> Result<LieElement<F>> {
    if x.is_zero() {
        return Ok(LieElement::zero());
    }
    if !target_h.is_boundary(x)? {
        return Err(Error::HomologyMismatch(format!("image of d({what}) is not a boundary in the target")));
    }
    target_h.phi(x)
}

/// Builds `τ ∈ Θ₋₁` and a chain map `π: (L, d+τ) → target` generator by
/// generator in order of resolution degree. Resolution 0 goes to chosen
/// indecomposable homology representatives of the target, resolution 1 to
/// preimages of boundaries. From resolution 2 on, `τu = −w − ηα` where
/// `(d+τ)w = τ(du)` and `α` is the class of `π(du − w)` read in `P`.
pub fn perturb_toward<F: Field>(source: &BigradedModel<F>, target: &TruncatedModel<F>) -> Result<TowardResult<F>> {
    if target.cutoff < source.cutoff() {
        return Err(Error::CutoffExceeded { degree: source.cutoff(), cutoff: target.cutoff });
    }
    let cutoff = source.cutoff();
    let tcx = Complex { lie: &target.lie, diff: &target.differential, cutoff };
    let target_h = Homology::compute(tcx)?;
    let lie = source.lie();
    let mut images: BTreeMap<Gen, LieElement<F>> = BTreeMap::new();

    let mut res0: Vec<Gen> = lie.gens().filter(|g| g.res == 0).collect();
    res0.sort();
    let mut n = 0;
    let mut decomposables: Echelon<usize, F> = Echelon::new();
    for g in res0 {
        if g.top >= cutoff {
            // no certified homology here to choose from
            images.insert(g, LieElement::zero());
            continue;
        }
        let th = target_h.degree(g.top)?;
        if g.top != n {
            n = g.top;
            decomposables = Echelon::new();
            let pi = LieMorphism::new(images.clone());
            let basis = lie.basis(n, 0);
            for (seq, e) in basis.sequences.iter().zip(&basis.elements) {
                if seq.len() > 1 {
                    let img = pi.apply(e)?;
                    if !img.is_zero() {
                        decomposables.insert(to_sparse(&th.class_of(&img)?));
                    }
                }
            }
        }
        let pick = (0..th.dim()).find(|&i| {
            let unit: SparseVec<usize, F> = [(i, F::one())].into_iter().collect();
            !decomposables.contains(&unit)
        });
        let Some(i) = pick else {
            return Err(Error::HomologyMismatch(format!("target has too few indecomposable classes in degree {n}")));
        };
        decomposables.insert([(i, F::one())].into_iter().collect());
        images.insert(g, th.reps[i].clone());
    }

    let pi0 = LieMorphism::new(images.clone());
    let mut ident = BTreeMap::new();
    for m in 1..cutoff {
        ident.insert(m, Identification::build(source, &target_h, &pi0, m)?);
    }

    let d = source.d();
    let mut tau: BTreeMap<Gen, LieElement<F>> = lie.gens().filter(|g| g.res <= 1).map(|g| (g, LieElement::zero())).collect();
    for u in by_resolution(source) {
        if u.res == 0 {
            continue;
        }
        let name = lie.name(u).to_string();
        let du = d.value(u).cloned().unwrap_or_default();
        let pi = LieMorphism::new(images.clone());
        if u.res == 1 {
            let t = pi.apply(&du)?;
            images.insert(u, target_preimage(&target_h, &t, &name)?);
            continue;
        }
        let partial_tau = Derivation::new(-1, tau.clone(), 2)?;
        let y = partial_tau.apply(&du)?;
        let w = if y.is_zero() {
            LieElement::zero()
        } else {
            let mut sources = Vec::new();
            let mut imgs = Vec::new();
            for rr in 0..=u.res - 2 {
                for e in lie.basis(u.top - 1, rr).elements.iter() {
                    imgs.push(d.apply(e)? + partial_tau.apply(e)?);
                    sources.push(e.clone());
                }
            }
            solve_images(&sources, &imgs, &y)
                .ok_or_else(|| Error::Invariant(format!("cannot correct the square of d+τ on {name}")))?
        };
        let z = du - &w;
        let pz = pi.apply(&z)?;
        let id = &ident[&(u.top - 1)];
        let alpha = if pz.is_zero() {
            PElement::new()
        } else {
            id.to_p(&target_h.degree(u.top - 1)?.class_of(&pz)?)?
        };
        let eta = id.section(&alpha)?;
        tau.insert(u, -(w + &eta));
        let zp = z - &eta;
        images.insert(u, target_preimage(&target_h, &pi.apply(&zp)?, &name)?);
    }

    let tau = source.model.derivation(-1, 2, tau)?;
    check_perturbation(source, &tau)?;
    if !source.model.check_maurer_cartan(&tau)?.passed() {
        return Err(Error::Invariant("constructed perturbation fails Maurer-Cartan".into()));
    }
    let pi = LieMorphism::new(images);
    let total = source.model.perturbed(&tau)?;
    for g in lie.gens() {
        let lhs = pi.apply(total.value(g).unwrap_or(&LieElement::zero()))?;
        let rhs = target.differential.apply(pi.image(g).unwrap_or(&LieElement::zero()))?;
        if lhs != rhs {
            return Err(Error::NotChainMap(lie.name(g).to_string()));
        }
    }
    let triple = triple_identification(source, &tau)?;
    if !triple.isomorphism {
        return Err(Error::HomologyMismatch("perturbed homology differs from P".into()));
    }
    Ok(TowardResult { tau, pi, triple })
}
