//! Free bigraded Lie algebras over an exact field.
//!
//! An element is stored only through its image in the tensor algebra, where
//! `[x, y]` becomes `x⊗y − (−1)^{|x||y|} y⊗x`. Two elements are equal exactly
//! when their tensor coordinates agree, so antisymmetry and Jacobi hold by
//! construction and no normal form for bracket trees is ever needed. Signs
//! come from topological degree only.

mod expr;
mod free;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::{sign, Field};
use crate::linalg::{add_entry, axpy};

pub use expr::{render_terms, Expr, Term};
pub use free::{DegreeBasis, FreeLie, GenInfo};

/// A free generator. Ordering is by topological degree, then resolution
/// degree, then registration index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen {
    pub top: u32,
    pub res: u32,
    pub id: u32,
}

impl Gen {
    pub fn bidegree(&self) -> (u32, u32) {
        (self.top, self.res)
    }

    pub fn is_odd(&self) -> bool {
        self.top % 2 == 1
    }
}

/// A tensor monomial `g1 ⊗ g2 ⊗ … ⊗ gk`. Ordered by length, then
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(pub SmallVec<[Gen; 8]>);

impl Word {
    pub fn single(g: Gen) -> Self {
        Word(smallvec::smallvec![g])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn top(&self) -> u32 {
        self.0.iter().map(|g| g.top).sum()
    }

    pub fn res(&self) -> u32 {
        self.0.iter().map(|g| g.res).sum()
    }

    pub fn bidegree(&self) -> (u32, u32) {
        self.0.iter().fold((0, 0), |(t, r), g| (t + g.top, r + g.res))
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An element of a free graded Lie algebra, held as tensor coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LieElement<F> {
    coords: BTreeMap<Word, F>,
}

impl<F: Field> LieElement<F> {
    pub fn zero() -> Self {
        LieElement { coords: BTreeMap::new() }
    }

    pub fn generator(g: Gen) -> Self {
        let mut coords = BTreeMap::new();
        coords.insert(Word::single(g), F::one());
        LieElement { coords }
    }

    /// Wraps raw tensor coordinates. The caller is responsible for the
    /// coordinates actually lying in the free Lie algebra.
    pub fn from_coords(mut coords: BTreeMap<Word, F>) -> Self {
        coords.retain(|_, c| !c.is_zero());
        LieElement { coords }
    }

    pub fn coords(&self) -> &BTreeMap<Word, F> {
        &self.coords
    }

    pub fn into_coords(self) -> BTreeMap<Word, F> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LieElement { coords: self.coords.iter().map(|(w, v)| (w.clone(), v.clone() * c.clone())).collect() }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: &F, other: &Self) {
        axpy(&mut self.coords, c, &other.coords);
    }

    pub fn add_word(&mut self, w: Word, c: F) {
        add_entry(&mut self.coords, w, c);
    }

    /// Graded commutator in the tensor algebra.
    pub fn bracket(&self, other: &Self) -> Self {
        let mut out = BTreeMap::new();
        for (u, cu) in &self.coords {
            let tu = u.top();
            for (v, cv) in &other.coords {
                let c = cu.clone() * cv.clone();
                let s: F = sign(tu % 2 == 1 && v.top() % 2 == 1);
                add_entry(&mut out, u.concat(v), c.clone());
                add_entry(&mut out, v.concat(u), -(s * c));
            }
        }
        LieElement { coords: out }
    }

    /// Concatenation product in the tensor algebra. Not a Lie operation; used
    /// to push algebra maps through words.
    pub fn tensor_mul(&self, other: &Self) -> Self {
        let mut out = BTreeMap::new();
        for (u, cu) in &self.coords {
            for (v, cv) in &other.coords {
                add_entry(&mut out, u.concat(v), cu.clone() * cv.clone());
            }
        }
        LieElement { coords: out }
    }

    /// Homogeneous components keyed by bidegree.
    pub fn components(&self) -> BTreeMap<(u32, u32), LieElement<F>> {
        let mut out: BTreeMap<(u32, u32), LieElement<F>> = BTreeMap::new();
        for (w, c) in &self.coords {
            out.entry(w.bidegree()).or_insert_with(Self::zero).coords.insert(w.clone(), c.clone());
        }
        out
    }

    pub fn component_at_res(&self, r: u32) -> Self {
        LieElement {
            coords: self.coords.iter().filter(|(w, _)| w.res() == r).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }

    /// Part of resolution degree at most `r`.
    pub fn truncate_res(&self, r: u32) -> Self {
        LieElement {
            coords: self.coords.iter().filter(|(w, _)| w.res() <= r).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }

    pub fn max_res_deg(&self) -> Result<u32> {
        self.coords.keys().map(Word::res).max().ok_or(Error::ZeroElement)
    }

    pub fn min_res_deg(&self) -> Option<u32> {
        self.coords.keys().map(Word::res).min()
    }

    /// The topological degree, when the element is nonzero and homogeneous in it.
    pub fn top_deg(&self) -> Option<u32> {
        let mut it = self.coords.keys().map(Word::top);
        let first = it.next()?;
        it.all(|t| t == first).then_some(first)
    }

    pub fn top_degrees(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.coords.keys().map(Word::top).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn bidegree(&self) -> Option<(u32, u32)> {
        let mut it = self.coords.keys().map(Word::bidegree);
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    /// Length-one part, i.e. the component lying in the generating space.
    pub fn linear_part(&self) -> Self {
        LieElement {
            coords: self.coords.iter().filter(|(w, _)| w.len() == 1).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }

    /// Generators occurring in some word of the element.
    pub fn letters(&self) -> Vec<Gen> {
        let mut v: Vec<Gen> = self.coords.keys().flat_map(|w| w.0.iter().copied()).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Exact Lie algebra hom induced by generator images, via the algebra hom
    /// of tensor algebras.
    pub fn map_letters(&self, image: &mut dyn FnMut(Gen) -> Result<LieElement<F>>) -> Result<Self> {
        let mut cache: BTreeMap<Gen, LieElement<F>> = BTreeMap::new();
        let mut out = Self::zero();
        for (w, c) in &self.coords {
            let mut acc: Option<LieElement<F>> = None;
            for g in &w.0 {
                if !cache.contains_key(g) {
                    cache.insert(*g, image(*g)?);
                }
                let img = &cache[g];
                acc = Some(match acc {
                    None => img.clone(),
                    Some(a) => a.tensor_mul(img),
                });
                if acc.as_ref().is_some_and(LieElement::is_zero) {
                    break;
                }
            }
            if let Some(a) = acc {
                out.add_scaled(c, &a);
            }
        }
        Ok(out)
    }
}

impl<F: Field> Default for LieElement<F> {
    fn default() -> Self {
        LieElement::zero()
    }
}

impl<F: Field> Add for LieElement<F> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self.add_scaled(&F::one(), &rhs);
        self
    }
}

impl<'a, F: Field> Add<&'a LieElement<F>> for LieElement<F> {
    type Output = Self;
    fn add(mut self, rhs: &'a Self) -> Self {
        self.add_scaled(&F::one(), rhs);
        self
    }
}

impl<F: Field> Sub for LieElement<F> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self.add_scaled(&-F::one(), &rhs);
        self
    }
}

impl<'a, F: Field> Sub<&'a LieElement<F>> for LieElement<F> {
    type Output = Self;
    fn sub(mut self, rhs: &'a Self) -> Self {
        self.add_scaled(&-F::one(), rhs);
        self
    }
}

impl<F: Field> Neg for LieElement<F> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(&-F::one())
    }
}

impl<F: fmt::Debug> fmt::Debug for LieElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.coords {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c:?})")?;
            for g in &w.0 {
                write!(f, "·g{}", g.id)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn g(top: u32, id: u32) -> LieElement<Q> {
        LieElement::generator(Gen { top, res: 0, id })
    }

    #[test]
    fn odd_square_is_nonzero_and_cube_vanishes() {
        let a = g(1, 0);
        let aa = a.bracket(&a);
        assert!(!aa.is_zero());
        assert_eq!(aa.top_deg(), Some(2));
        assert!(aa.bracket(&a).is_zero());
    }

    #[test]
    fn even_antisymmetry() {
        let x = g(2, 0);
        let y = g(2, 1);
        assert!((x.bracket(&y) + y.bracket(&x)).is_zero());
        assert!(x.bracket(&x).is_zero());
    }

    #[test]
    fn max_res_deg_of_mixed_element() {
        let a = g(1, 0);
        let b = LieElement::<Q>::generator(Gen { top: 3, res: 1, id: 1 });
        assert_eq!(a.max_res_deg(), Ok(0));
        assert_eq!(b.max_res_deg(), Ok(1));
        assert_eq!((b + a.bracket(&a)).max_res_deg(), Ok(1));
        assert_eq!(LieElement::<Q>::zero().max_res_deg(), Err(Error::ZeroElement));
    }

    #[test]
    fn word_order_is_length_first() {
        let a = Gen { top: 5, res: 0, id: 9 };
        let b = Gen { top: 1, res: 0, id: 0 };
        let long = Word(smallvec::smallvec![b, b]);
        assert!(Word::single(a) < long);
    }
}
