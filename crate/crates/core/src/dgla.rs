//! Derivations of free Lie algebras and truncated DGLA models.
//!
//! A derivation is stored by its values on generators and extended by the
//! Leibniz rule with Koszul sign `(−1)^{k·|prefix|}` for a derivation of
//! degree `k`. The derivation Lie algebra uses the graded commutator.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{sign, Field};
use crate::lie::{FreeLie, Gen, LieElement, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation<F> {
    degree: i32,
    values: BTreeMap<Gen, LieElement<F>>,
    declared_res_drop: u32,
}

fn expected_top(g: Gen, degree: i32) -> i64 {
    g.top as i64 + degree as i64
}

impl<F: Field> Derivation<F> {
    /// Validates degrees and the declared resolution drop.
    pub fn new(degree: i32, values: BTreeMap<Gen, LieElement<F>>, declared_res_drop: u32) -> Result<Self> {
        for (g, v) in &values {
            for t in v.top_degrees() {
                if t as i64 != expected_top(*g, degree) {
                    return Err(Error::DegreeMismatch {
                        what: format!("value on generator #{}", g.id),
                        expected: expected_top(*g, degree).to_string(),
                        found: t.to_string(),
                    });
                }
            }
            if let Ok(m) = v.max_res_deg() {
                if m as i64 > g.res as i64 - declared_res_drop as i64 {
                    return Err(Error::ResolutionDrop(format!("generator #{}", g.id)));
                }
            }
        }
        Ok(Derivation { degree, values, declared_res_drop })
    }

    pub fn zero(degree: i32, gens: impl IntoIterator<Item = Gen>, declared_res_drop: u32) -> Self {
        Derivation {
            degree,
            values: gens.into_iter().map(|g| (g, LieElement::zero())).collect(),
            declared_res_drop,
        }
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn declared_res_drop(&self) -> u32 {
        self.declared_res_drop
    }

    pub fn values(&self) -> &BTreeMap<Gen, LieElement<F>> {
        &self.values
    }

    pub fn domain(&self) -> impl Iterator<Item = Gen> + '_ {
        self.values.keys().copied()
    }

    pub fn value(&self, g: Gen) -> Option<&LieElement<F>> {
        self.values.get(&g)
    }

    /// Replaces one value, revalidating it.
    pub fn with_value(mut self, g: Gen, v: LieElement<F>) -> Result<Self> {
        let mut single = BTreeMap::new();
        single.insert(g, v);
        let checked = Derivation::new(self.degree, single, self.declared_res_drop)?;
        self.values.extend(checked.values);
        Ok(self)
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(LieElement::is_zero)
    }

    /// Smallest resolution drop actually realised by a nonzero value.
    pub fn actual_res_drop(&self) -> Option<i64> {
        self.values
            .iter()
            .filter_map(|(g, v)| v.max_res_deg().ok().map(|m| g.res as i64 - m as i64))
            .min()
    }

    /// Same values up to zero entries.
    pub fn same_action(&self, other: &Self) -> bool {
        let z = LieElement::zero();
        self.values.keys().chain(other.values.keys()).all(|g| {
            self.values.get(g).unwrap_or(&z) == other.values.get(g).unwrap_or(&z)
        })
    }

    pub fn apply(&self, x: &LieElement<F>) -> Result<LieElement<F>> {
        let odd = self.degree.rem_euclid(2) == 1;
        let mut out = LieElement::zero();
        for (w, c) in x.coords() {
            let mut prefix_top = 0u32;
            for (i, g) in w.0.iter().enumerate() {
                let dg = self.values.get(g).ok_or_else(|| Error::MissingGeneratorValue(format!("#{}", g.id)))?;
                if !dg.is_zero() {
                    let s: F = sign(odd && prefix_top % 2 == 1);
                    let coeff = s * c.clone();
                    for (v, cv) in dg.coords() {
                        let mut word = w.0[..i].iter().copied().collect::<smallvec::SmallVec<[Gen; 8]>>();
                        word.extend_from_slice(&v.0);
                        word.extend_from_slice(&w.0[i + 1..]);
                        out.add_word(Word(word), coeff.clone() * cv.clone());
                    }
                }
                prefix_top += g.top;
            }
        }
        Ok(out)
    }

    fn combine(&self, other: &Self, c: F) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                what: "derivation sum".into(),
                expected: self.degree.to_string(),
                found: other.degree.to_string(),
            });
        }
        let mut values = self.values.clone();
        for (g, v) in &other.values {
            values.entry(*g).or_insert_with(LieElement::zero).add_scaled(&c, v);
        }
        Ok(Derivation {
            degree: self.degree,
            values,
            declared_res_drop: self.declared_res_drop.min(other.declared_res_drop),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, F::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -F::one())
    }

    pub fn scale(&self, c: &F) -> Self {
        Derivation {
            degree: self.degree,
            values: self.values.iter().map(|(g, v)| (*g, v.scale(c))).collect(),
            declared_res_drop: self.declared_res_drop,
        }
    }

    /// Lowers the declared drop (always valid) or raises it after checking.
    pub fn with_declared_drop(self, drop: u32) -> Result<Self> {
        Derivation::new(self.degree, self.values, drop)
    }

    /// The part of each value sitting exactly `k` resolution degrees below
    /// its generator.
    pub fn weight_component(&self, k: u32) -> Self {
        Derivation {
            degree: self.degree,
            values: self
                .values
                .iter()
                .map(|(g, v)| {
                    let val = if g.res >= k { v.component_at_res(g.res - k) } else { LieElement::zero() };
                    (*g, val)
                })
                .collect(),
            declared_res_drop: k,
        }
    }

    /// Value of `u ∘ v` on each generator of `v`'s domain.
    pub fn compose_on_gens(u: &Self, v: &Self) -> Result<BTreeMap<Gen, LieElement<F>>> {
        v.values.iter().map(|(g, x)| Ok((*g, u.apply(x)?))).collect()
    }
}

/// Graded commutator `u∘v − (−1)^{|u||v|} v∘u`.
pub fn der_bracket<F: Field>(u: &Derivation<F>, v: &Derivation<F>) -> Result<Derivation<F>> {
    let s: F = sign(u.degree.rem_euclid(2) == 1 && v.degree.rem_euclid(2) == 1);
    let mut values = BTreeMap::new();
    for g in u.values.keys().chain(v.values.keys()) {
        if values.contains_key(g) {
            continue;
        }
        let ug = u.values.get(g).ok_or_else(|| Error::MissingGeneratorValue(format!("#{}", g.id)))?;
        let vg = v.values.get(g).ok_or_else(|| Error::MissingGeneratorValue(format!("#{}", g.id)))?;
        let mut val = u.apply(vg)?;
        val.add_scaled(&-s.clone(), &v.apply(ug)?);
        values.insert(*g, val);
    }
    Derivation::new(u.degree + v.degree, values, u.declared_res_drop + v.declared_res_drop)
}

/// A free DGLA whose data is trusted through topological degree `cutoff`.
#[derive(Clone, Debug)]
pub struct TruncatedModel<F> {
    pub lie: FreeLie<F>,
    pub differential: Derivation<F>,
    pub cutoff: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareZeroReport<F> {
    pub failures: Vec<(Gen, LieElement<F>)>,
}

impl<F> SquareZeroReport<F> {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaurerCartanReport<F> {
    /// Nonzero values of `(d+τ)²` on generators.
    pub composed: Vec<(Gen, LieElement<F>)>,
    /// Nonzero values of `Dτ + ½[τ,τ]`.
    pub formal: Vec<(Gen, LieElement<F>)>,
    /// Whether `(d+τ)² = d² + Dτ + ½[τ,τ]` held on every generator.
    pub agree: bool,
}

impl<F> MaurerCartanReport<F> {
    pub fn passed(&self) -> bool {
        self.composed.is_empty() && self.formal.is_empty() && self.agree
    }
}

impl<F: Field> TruncatedModel<F> {
    pub fn new(lie: FreeLie<F>, differential: Derivation<F>, cutoff: u32) -> Result<Self> {
        if differential.degree() != -1 {
            return Err(Error::DegreeMismatch {
                what: "differential".into(),
                expected: "-1".into(),
                found: differential.degree().to_string(),
            });
        }
        for info in lie.generators() {
            if info.gen.top > cutoff {
                return Err(Error::CutoffExceeded { degree: info.gen.top, cutoff });
            }
            let v = differential
                .value(info.gen)
                .ok_or_else(|| Error::MissingGeneratorValue(info.name.clone()))?;
            if !lie.contains(v) {
                return Err(Error::Invariant(format!("d({}) is not a Lie element", info.name)));
            }
        }
        Ok(TruncatedModel { lie, differential, cutoff })
    }

    pub fn gens(&self) -> Vec<Gen> {
        self.lie.gens().collect()
    }

    pub fn name(&self, g: Gen) -> &str {
        self.lie.name(g)
    }

    pub fn element(&self, name: &str) -> Result<LieElement<F>> {
        self.lie.element(name)
    }

    pub fn check_degree(&self, x: &LieElement<F>) -> Result<()> {
        match x.top_degrees().last() {
            Some(&t) if t > self.cutoff => Err(Error::CutoffExceeded { degree: t, cutoff: self.cutoff }),
            _ => Ok(()),
        }
    }

    pub fn d(&self, x: &LieElement<F>) -> Result<LieElement<F>> {
        self.check_degree(x)?;
        self.differential.apply(x)
    }

    pub fn zero_derivation(&self, degree: i32, declared_res_drop: u32) -> Derivation<F> {
        Derivation::zero(degree, self.lie.gens(), declared_res_drop)
    }

    /// Builds a derivation on this model's generators from named values; every
    /// other generator is sent to zero.
    pub fn derivation(
        &self,
        degree: i32,
        declared_res_drop: u32,
        values: impl IntoIterator<Item = (Gen, LieElement<F>)>,
    ) -> Result<Derivation<F>> {
        let mut all: BTreeMap<Gen, LieElement<F>> = self.lie.gens().map(|g| (g, LieElement::zero())).collect();
        for (g, v) in values {
            if !all.contains_key(&g) {
                return Err(Error::UnknownName(format!("#{}", g.id)));
            }
            all.insert(g, v);
        }
        Derivation::new(degree, all, declared_res_drop)
    }

    pub fn perturbed(&self, tau: &Derivation<F>) -> Result<Derivation<F>> {
        self.differential.add(tau)
    }

    /// `D θ = [d, θ]`.
    pub fn ad_d(&self, theta: &Derivation<F>) -> Result<Derivation<F>> {
        der_bracket(&self.differential, theta)
    }

    pub fn check_square_zero(&self) -> SquareZeroReport<F> {
        square_failures(&self.differential)
    }

    pub fn check_maurer_cartan(&self, tau: &Derivation<F>) -> Result<MaurerCartanReport<F>> {
        if tau.degree() != -1 {
            return Err(Error::DegreeMismatch {
                what: "perturbation".into(),
                expected: "-1".into(),
                found: tau.degree().to_string(),
            });
        }
        let total = self.perturbed(tau)?;
        let d = &self.differential;
        let mut composed = Vec::new();
        let mut formal = Vec::new();
        let mut agree = true;
        let d_tau = der_bracket(d, tau)?;
        let tau_tau = der_bracket(tau, tau)?;
        let half = F::from_ratio(1, 2);
        for g in self.gens() {
            let dg = total.value(g).ok_or_else(|| Error::MissingGeneratorValue(self.name(g).into()))?;
            let sq = total.apply(dg)?;
            let mut f = d_tau.value(g).cloned().unwrap_or_default();
            f.add_scaled(&half, tau_tau.value(g).unwrap_or(&LieElement::zero()));
            let d2 = d.apply(d.value(g).unwrap_or(&LieElement::zero()))?;
            if sq != f.clone() + &d2 {
                agree = false;
            }
            if !sq.is_zero() {
                composed.push((g, sq));
            }
            if !f.is_zero() {
                formal.push((g, f));
            }
        }
        Ok(MaurerCartanReport { composed, formal, agree })
    }

    /// True iff no generator's differential has a linear component.
    pub fn check_minimal(&self) -> bool {
        self.differential.values().values().all(|v| v.linear_part().is_zero())
    }
}

pub fn square_failures<F: Field>(delta: &Derivation<F>) -> SquareZeroReport<F> {
    let mut failures = Vec::new();
    for (g, v) in delta.values() {
        match delta.apply(v) {
            Ok(sq) if sq.is_zero() => {}
            Ok(sq) => failures.push((*g, sq)),
            Err(_) => failures.push((*g, LieElement::zero())),
        }
    }
    SquareZeroReport { failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn cp2_cellular() -> (TruncatedModel<Q>, LieElement<Q>, LieElement<Q>) {
        let mut lie = FreeLie::new();
        let ga = lie.add_generator("a", 1, 0).unwrap();
        let gb = lie.add_generator("b", 3, 0).unwrap();
        let a = LieElement::generator(ga);
        let b = LieElement::generator(gb);
        let mut values = BTreeMap::new();
        values.insert(ga, LieElement::zero());
        values.insert(gb, a.bracket(&a).scale(&Q::from_ratio(1, 2)));
        let d = Derivation::new(-1, values, 0).unwrap();
        (TruncatedModel::new(lie, d, 6).unwrap(), a, b)
    }

    #[test]
    fn cellular_cp2_differential() {
        let (m, a, b) = cp2_cellular();
        assert_eq!(m.d(&b).unwrap(), a.bracket(&a).scale(&Q::from_ratio(1, 2)));
        assert!(m.d(&b.bracket(&a)).unwrap().is_zero());
        assert!(m.d(&LieElement::zero()).unwrap().is_zero());
        assert!(m.check_square_zero().passed());
        assert!(m.check_minimal());
    }

    #[test]
    fn missing_value_is_reported() {
        let mut lie = FreeLie::<Q>::new();
        let ga = lie.add_generator("a", 1, 0).unwrap();
        let d = Derivation::<Q>::new(-1, BTreeMap::new(), 0).unwrap();
        assert!(matches!(d.apply(&LieElement::generator(ga)), Err(Error::MissingGeneratorValue(_))));
    }

    #[test]
    fn degree_and_drop_validation() {
        let mut lie = FreeLie::<Q>::new();
        let ga = lie.add_generator("a", 1, 0).unwrap();
        let gb = lie.add_generator("b", 3, 1).unwrap();
        let a = LieElement::<Q>::generator(ga);
        let mut v = BTreeMap::new();
        v.insert(gb, a.clone());
        assert!(matches!(Derivation::new(-1, v.clone(), 0), Err(Error::DegreeMismatch { .. })));
        let mut v = BTreeMap::new();
        v.insert(gb, a.bracket(&a));
        assert!(Derivation::new(-1, v.clone(), 1).is_ok());
        assert!(matches!(Derivation::new(-1, v, 2), Err(Error::ResolutionDrop(_))));
    }

    #[test]
    fn odd_self_bracket_is_twice_square() {
        let (m, _, _) = cp2_cellular();
        let d = &m.differential;
        let dd = der_bracket(d, d).unwrap();
        for (g, v) in dd.values() {
            let twice = d.apply(d.value(*g).unwrap()).unwrap().scale(&Q::from_i64(2));
            assert_eq!(v, &twice);
        }
    }

    #[test]
    fn zero_perturbation_is_maurer_cartan() {
        let (m, _, _) = cp2_cellular();
        let tau = m.zero_derivation(-1, 2);
        assert!(m.check_maurer_cartan(&tau).unwrap().passed());
    }
}
