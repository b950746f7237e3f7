//! Lie algebra maps between free Lie algebras, given on generators, plus the
//! exponential of a degree-0 derivation and the logarithm of a unipotent map.

use std::collections::BTreeMap;

use crate::dgla::Derivation;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::lie::{Gen, LieElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieMorphism<F> {
    images: BTreeMap<Gen, LieElement<F>>,
}

impl<F: Field> LieMorphism<F> {
    pub fn new(images: BTreeMap<Gen, LieElement<F>>) -> Self {
        LieMorphism { images }
    }

    pub fn identity(gens: impl IntoIterator<Item = Gen>) -> Self {
        LieMorphism { images: gens.into_iter().map(|g| (g, LieElement::generator(g))).collect() }
    }

    pub fn images(&self) -> &BTreeMap<Gen, LieElement<F>> {
        &self.images
    }

    pub fn image(&self, g: Gen) -> Option<&LieElement<F>> {
        self.images.get(&g)
    }

    pub fn apply(&self, x: &LieElement<F>) -> Result<LieElement<F>> {
        x.map_letters(&mut |g| {
            self.images.get(&g).cloned().ok_or_else(|| Error::MissingGeneratorValue(format!("#{}", g.id)))
        })
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(LieMorphism {
            images: other.images.iter().map(|(g, v)| Ok((*g, self.apply(v)?))).collect::<Result<_>>()?,
        })
    }

    /// Every generator goes to itself plus terms of strictly lower resolution
    /// degree and the same topological degree.
    pub fn is_unipotent(&self) -> bool {
        self.images.iter().all(|(g, v)| {
            let rest = v.clone() - LieElement::generator(*g);
            rest.is_zero() || (rest.top_deg() == Some(g.top) && rest.max_res_deg().is_ok_and(|m| m < g.res))
        })
    }

    /// Applies `(self − id)^k`.
    fn nilpotent_power(&self, x: &LieElement<F>, k: usize) -> Result<LieElement<F>> {
        let mut y = x.clone();
        for _ in 0..k {
            if y.is_zero() {
                break;
            }
            y = self.apply(&y)? - &y;
        }
        Ok(y)
    }

    /// Inverse of a unipotent map as the finite series `Σ (−N)^k`, `N = Φ − id`.
    pub fn unipotent_inverse(&self) -> Result<Self> {
        if !self.is_unipotent() {
            return Err(Error::NotAnAutomorphism("map is not unipotent".into()));
        }
        let mut images = BTreeMap::new();
        for g in self.images.keys() {
            let mut term = LieElement::generator(*g);
            let mut acc = term.clone();
            loop {
                term = -(self.apply(&term)? - &term);
                if term.is_zero() {
                    break;
                }
                acc = acc + &term;
            }
            images.insert(*g, acc);
        }
        Ok(LieMorphism { images })
    }

    /// `log Φ = Σ_{k≥1} (−1)^{k+1} (Φ − id)^k / k`, a degree-0 derivation.
    pub fn log(&self) -> Result<Derivation<F>> {
        if !self.is_unipotent() {
            return Err(Error::NotAnAutomorphism("logarithm needs a unipotent map".into()));
        }
        let mut values = BTreeMap::new();
        for g in self.images.keys() {
            let x = LieElement::generator(*g);
            let mut acc = LieElement::zero();
            let mut k = 1usize;
            loop {
                let t = self.nilpotent_power(&x, k)?;
                if t.is_zero() {
                    break;
                }
                let c = F::from_ratio(if k % 2 == 1 { 1 } else { -1 }, k as i64);
                acc.add_scaled(&c, &t);
                k += 1;
            }
            values.insert(*g, acc);
        }
        Derivation::new(0, values, 1)
    }
}

/// `exp θ = Σ θ^n / n!` for a degree-0 derivation lowering resolution degree.
pub fn exp_derivation<F: Field>(theta: &Derivation<F>) -> Result<LieMorphism<F>> {
    if theta.degree() != 0 {
        return Err(Error::DegreeMismatch {
            what: "gauge element".into(),
            expected: "0".into(),
            found: theta.degree().to_string(),
        });
    }
    let mut images = BTreeMap::new();
    for g in theta.domain() {
        images.insert(g, exp_apply(theta, &LieElement::generator(g))?);
    }
    Ok(LieMorphism::new(images))
}

/// `Σ θ^n(x) / n!`, terminating because `θ` lowers resolution degree.
pub fn exp_apply<F: Field>(theta: &Derivation<F>, x: &LieElement<F>) -> Result<LieElement<F>> {
    let mut term = x.clone();
    let mut acc = x.clone();
    let bound = x.max_res_deg().unwrap_or(0) as i64 + 1;
    for n in 1..=bound {
        term = theta.apply(&term)?.scale(&F::from_ratio(1, n));
        if term.is_zero() {
            return Ok(acc);
        }
        acc = acc + &term;
    }
    if !theta.apply(&term)?.is_zero() {
        return Err(Error::Invariant("exponential series does not terminate".into()));
    }
    Ok(acc)
}
