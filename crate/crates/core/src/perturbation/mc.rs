use std::collections::BTreeMap;

use crate::dgla::{der_bracket, Derivation};
use crate::error::Result;
use crate::field::Field;
use crate::lie::{Gen, LieElement};
use crate::models::BigradedModel;

use super::one_value;

/// Where an admissible target sits in the splitting `B ⊕ V ⊕ W` of its
/// degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DirectionKind {
    /// In the image of `d`: removable by a gauge transformation.
    Trivial,
    /// A homology representative.
    Homology,
    /// In the chosen complement of the cycles.
    Complement,
}

/// The coefficient of `τ(generator)` on `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unknown<F> {
    pub generator: Gen,
    pub target: LieElement<F>,
    pub kind: DirectionKind,
}

/// Monomials are sorted lists of unknown indices.
pub type Polynomial<F> = BTreeMap<Vec<usize>, F>;

/// One coordinate of `(d+τ)²(generator)` against the basis of `bidegree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation<F> {
    pub generator: Gen,
    pub bidegree: (u32, u32),
    pub index: usize,
    pub poly: Polynomial<F>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McSystem<F> {
    pub unknowns: Vec<Unknown<F>>,
    pub equations: Vec<Equation<F>>,
    /// Unknowns whose elementary perturbation, alone, satisfies
    /// Maurer-Cartan and is not a trivial direction.
    pub single_target: Vec<usize>,
    pub cutoff: u32,
}

fn add_term<F: Field>(poly: &mut Polynomial<F>, mono: Vec<usize>, c: F) {
    if c.is_zero() {
        return;
    }
    let slot = poly.entry(mono.clone()).or_insert_with(F::zero);
    *slot = slot.clone() + c;
    if slot.is_zero() {
        poly.remove(&mono);
    }
}

impl<F: Field> McSystem<F> {
    pub fn trivial_directions(&self) -> Vec<usize> {
        (0..self.unknowns.len()).filter(|&i| self.unknowns[i].kind == DirectionKind::Trivial).collect()
    }

    /// Degree-one parts of the equations, dropping those that vanish.
    pub fn linear_part(&self) -> Vec<Equation<F>> {
        self.equations
            .iter()
            .filter_map(|e| {
                let poly: Polynomial<F> = e.poly.iter().filter(|(m, _)| m.len() == 1).map(|(m, c)| (m.clone(), c.clone())).collect();
                (!poly.is_empty()).then(|| Equation { poly, ..e.clone() })
            })
            .collect()
    }

    pub fn evaluate(&self, point: &[F]) -> Vec<F> {
        self.equations
            .iter()
            .map(|e| {
                e.poly.iter().fold(F::zero(), |acc, (m, c)| {
                    acc + m.iter().fold(c.clone(), |p, i| p * point[*i].clone())
                })
            })
            .collect()
    }

    pub fn perturbation(&self, model: &BigradedModel<F>, point: &[F]) -> Result<Derivation<F>> {
        let mut values: BTreeMap<Gen, LieElement<F>> = BTreeMap::new();
        for (u, c) in self.unknowns.iter().zip(point) {
            values.entry(u.generator).or_default().add_scaled(c, &u.target);
        }
        model.model.derivation(-1, 2, values)
    }

    /// A point is accepted when every equation vanishes and, independently,
    /// the resulting perturbation passes both Maurer-Cartan checks.
    pub fn check_point(&self, model: &BigradedModel<F>, point: &[F]) -> Result<bool> {
        let zeros = self.evaluate(point).iter().all(F::is_zero);
        let tau = self.perturbation(model, point)?;
        Ok(zeros && model.model.check_maurer_cartan(&tau)?.passed())
    }

    pub fn unit_point(&self, i: usize) -> Vec<F> {
        (0..self.unknowns.len()).map(|j| if j == i { F::one() } else { F::zero() }).collect()
    }
}

/// Unknowns are coefficients of `τ(g)` against the splitting basis of `L`
/// in bidegrees `(|g|−1, r)` with `r ≤ res g − 2`; equations are the
/// coordinates of `[d,τ] + τ∘τ` on every generator.
pub fn mc_system<F: Field>(model: &BigradedModel<F>) -> Result<McSystem<F>> {
    let lie = model.lie();
    let mut unknowns = Vec::new();
    for g in lie.gens() {
        if g.res < 2 || g.top < 2 {
            continue;
        }
        let dec = model.homology().degree(g.top - 1)?;
        let admissible = |x: &LieElement<F>| x.max_res_deg().is_ok_and(|r| r + 2 <= g.res);
        let groups = [
            (DirectionKind::Trivial, &dec.boundaries),
            (DirectionKind::Homology, &dec.reps),
            (DirectionKind::Complement, &dec.complement),
        ];
        for (kind, list) in groups {
            for x in list.iter().filter(|x| admissible(x)) {
                unknowns.push(Unknown { generator: g, target: x.clone(), kind });
            }
        }
    }
    let elementary: Vec<Derivation<F>> =
        unknowns.iter().map(|u| one_value(model, -1, 2, u.generator, u.target.clone())).collect();
    let mut polys: BTreeMap<(Gen, (u32, u32), usize), Polynomial<F>> = BTreeMap::new();
    let mut record = |values: &BTreeMap<Gen, LieElement<F>>, mono: Vec<usize>| -> Result<()> {
        for (h, v) in values {
            for (bid, coeffs) in lie.express(v)? {
                for (i, c) in coeffs.into_iter().enumerate() {
                    add_term(polys.entry((*h, bid, i)).or_default(), mono.clone(), c);
                }
            }
        }
        Ok(())
    };
    let d = model.d();
    for (i, eps) in elementary.iter().enumerate() {
        record(der_bracket(d, eps)?.values(), vec![i])?;
    }
    for i in 0..elementary.len() {
        for j in i..elementary.len() {
            let mut values = Derivation::compose_on_gens(&elementary[i], &elementary[j])?;
            if i != j {
                for (h, v) in Derivation::compose_on_gens(&elementary[j], &elementary[i])? {
                    let cur = values.remove(&h).unwrap_or_default();
                    values.insert(h, cur + &v);
                }
            }
            record(&values, vec![i, j])?;
        }
    }
    let equations = polys
        .into_iter()
        .filter(|(_, p)| !p.is_empty())
        .map(|((generator, bidegree, index), poly)| Equation { generator, bidegree, index, poly })
        .collect();
    let mut system = McSystem { unknowns, equations, single_target: Vec::new(), cutoff: model.cutoff() };
    for i in 0..system.unknowns.len() {
        if system.unknowns[i].kind != DirectionKind::Trivial && system.check_point(model, &system.unit_point(i))? {
            system.single_target.push(i);
        }
    }
    Ok(system)
}
