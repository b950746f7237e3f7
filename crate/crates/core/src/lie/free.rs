use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use super::expr::{render_terms, Expr};
use super::{Gen, LieElement, Word};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Echelon, Insertion};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenInfo {
    pub name: String,
    pub gen: Gen,
}

/// A basis of one bidegree component, made of right-nested brackets
/// `[g1,[g2,[…,gk]]]` chosen greedily in lexicographic order of their leaf
/// sequences, letters taken from the largest generator down.
pub struct DegreeBasis<F> {
    pub bidegree: (u32, u32),
    pub sequences: Vec<Vec<Gen>>,
    pub elements: Vec<LieElement<F>>,
    echelon: Echelon<Word, F>,
    index_of_tag: HashMap<usize, usize>,
}

impl<F: Field> std::fmt::Debug for DegreeBasis<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DegreeBasis")
            .field("bidegree", &self.bidegree)
            .field("sequences", &self.sequences)
            .finish()
    }
}

impl<F: Field> DegreeBasis<F> {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn expr(&self, i: usize) -> Expr<Gen, F> {
        Expr::right_nested(self.sequences[i].iter().copied())
    }

    /// Coordinates of a homogeneous element of this bidegree, or `None` when
    /// it is not in the span.
    pub fn express(&self, x: &LieElement<F>) -> Option<Vec<F>> {
        let c = self.echelon.solve(x.coords())?;
        let mut out = vec![F::zero(); self.dim()];
        for (tag, v) in c {
            out[self.index_of_tag[&tag]] = v;
        }
        Some(out)
    }

    pub fn combine(&self, coeffs: &[F]) -> LieElement<F> {
        let mut out = LieElement::zero();
        for (c, e) in coeffs.iter().zip(&self.elements) {
            out.add_scaled(c, e);
        }
        out
    }
}

/// `(top, res)`.
pub type Bidegree = (u32, u32);

type BasisCache<F> = HashMap<(u32, u32), Arc<DegreeBasis<F>>>;

/// The free graded Lie algebra on a growing list of generators. Degree bases
/// are computed lazily and memoized; adding a generator discards the cached
/// bases it could affect.
pub struct FreeLie<F> {
    gens: Vec<GenInfo>,
    cache: RwLock<BasisCache<F>>,
}

impl<F> Clone for FreeLie<F> {
    fn clone(&self) -> Self {
        let cache = self.cache.read().expect("basis cache poisoned").clone();
        FreeLie { gens: self.gens.clone(), cache: RwLock::new(cache) }
    }
}

impl<F> std::fmt::Debug for FreeLie<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FreeLie").field("gens", &self.gens).finish()
    }
}

impl<F: Field> Default for FreeLie<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Field> FreeLie<F> {
    pub fn new() -> Self {
        FreeLie { gens: Vec::new(), cache: RwLock::new(HashMap::new()) }
    }

    pub fn add_generator(&mut self, name: &str, top: u32, res: u32) -> Result<Gen> {
        if top == 0 {
            return Err(Error::DegreeMismatch {
                what: name.to_string(),
                expected: "topological degree >= 1".into(),
                found: "0".into(),
            });
        }
        if self.gen(name).is_some() {
            return Err(Error::PresentationInvalid(format!("generator name `{name}` used twice")));
        }
        let gen = Gen { top, res, id: self.gens.len() as u32 };
        self.gens.push(GenInfo { name: name.to_string(), gen });
        self.cache.get_mut().expect("basis cache poisoned").retain(|&(n, _), _| n < top);
        Ok(gen)
    }

    pub fn generators(&self) -> &[GenInfo] {
        &self.gens
    }

    pub fn gens(&self) -> impl Iterator<Item = Gen> + '_ {
        self.gens.iter().map(|i| i.gen)
    }

    pub fn gen(&self, name: &str) -> Option<Gen> {
        self.gens.iter().find(|i| i.name == name).map(|i| i.gen)
    }

    pub fn element(&self, name: &str) -> Result<LieElement<F>> {
        self.gen(name).map(LieElement::generator).ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn name(&self, g: Gen) -> &str {
        &self.gens[g.id as usize].name
    }

    pub fn max_top(&self) -> u32 {
        self.gens.iter().map(|i| i.gen.top).max().unwrap_or(0)
    }

    /// Resolution degrees that can occur in topological degree `n`.
    pub fn res_degrees(&self, n: u32) -> Vec<u32> {
        let n = n as usize;
        let mut reach: Vec<Vec<bool>> = vec![Vec::new(); n + 1];
        if n == 0 {
            return Vec::new();
        }
        reach[0] = vec![true];
        for t in 1..=n {
            let mut row: Vec<bool> = Vec::new();
            for g in self.gens() {
                let gt = g.top as usize;
                if gt > t {
                    continue;
                }
                for (r, &ok) in reach[t - gt].iter().enumerate() {
                    if ok {
                        let rr = r + g.res as usize;
                        if row.len() <= rr {
                            row.resize(rr + 1, false);
                        }
                        row[rr] = true;
                    }
                }
            }
            reach[t] = row;
        }
        reach[n].iter().enumerate().filter(|(_, &ok)| ok).map(|(r, _)| r as u32).collect()
    }

    pub fn basis(&self, n: u32, r: u32) -> Arc<DegreeBasis<F>> {
        if let Some(b) = self.cache.read().expect("basis cache poisoned").get(&(n, r)) {
            return b.clone();
        }
        let b = Arc::new(self.compute_basis(n, r));
        self.cache.write().expect("basis cache poisoned").entry((n, r)).or_insert(b).clone()
    }

    fn compute_basis(&self, n: u32, r: u32) -> DegreeBasis<F> {
        let mut letters: Vec<Gen> = self.gens().collect();
        letters.sort_by(|a, b| b.cmp(a));
        let mut chooser = Echelon::new();
        let mut sequences = Vec::new();
        let mut elements = Vec::new();
        let mut index_of_tag = HashMap::new();
        let mut offer = |seq: Vec<Gen>, el: LieElement<F>| {
            let tag = chooser.inputs();
            if chooser.insert(el.coords().clone()) == Insertion::Independent {
                index_of_tag.insert(tag, elements.len());
                sequences.push(seq);
                elements.push(el);
            }
        };
        for &g in &letters {
            if g.bidegree() == (n, r) {
                offer(vec![g], LieElement::generator(g));
            } else if g.top < n && g.res <= r {
                let inner = self.basis(n - g.top, r - g.res);
                let gel = LieElement::generator(g);
                for (seq, el) in inner.sequences.iter().zip(&inner.elements) {
                    let mut s = Vec::with_capacity(seq.len() + 1);
                    s.push(g);
                    s.extend_from_slice(seq);
                    offer(s, gel.bracket(el));
                }
            }
        }
        DegreeBasis { bidegree: (n, r), sequences, elements, echelon: chooser, index_of_tag }
    }

    pub fn dim(&self, n: u32, r: u32) -> usize {
        self.basis(n, r).dim()
    }

    pub fn dim_top(&self, n: u32) -> usize {
        self.res_degrees(n).into_iter().map(|r| self.dim(n, r)).sum()
    }

    /// Bases of every resolution degree in topological degree `n`, ascending.
    pub fn top_basis(&self, n: u32) -> Vec<Arc<DegreeBasis<F>>> {
        self.res_degrees(n).into_iter().map(|r| self.basis(n, r)).filter(|b| b.dim() > 0).collect()
    }

    /// All basis elements of topological degree `n`, ordered by resolution.
    pub fn top_elements(&self, n: u32) -> Vec<LieElement<F>> {
        self.top_basis(n).iter().flat_map(|b| b.elements.iter().cloned()).collect()
    }

    /// Coordinates against the degree bases, one entry per nonzero bidegree.
    pub fn express(&self, x: &LieElement<F>) -> Result<Vec<(Bidegree, Vec<F>)>> {
        x.components()
            .into_iter()
            .map(|((n, r), c)| {
                self.basis(n, r)
                    .express(&c)
                    .map(|v| ((n, r), v))
                    .ok_or_else(|| Error::Invariant("element is not in the free Lie algebra".into()))
            })
            .collect()
    }

    pub fn contains(&self, x: &LieElement<F>) -> bool {
        self.express(x).is_ok()
    }

    /// Rewrites an element as a combination of basis brackets.
    pub fn to_expr(&self, x: &LieElement<F>) -> Result<Expr<Gen, F>> {
        let mut terms = Vec::new();
        for ((n, r), coeffs) in self.express(x)? {
            let b = self.basis(n, r);
            for (i, c) in coeffs.into_iter().enumerate() {
                if !c.is_zero() {
                    terms.push(super::Term { coeff: c, expr: b.expr(i) });
                }
            }
        }
        Ok(Expr::Sum(terms))
    }

    pub fn render_expr(&self, e: &Expr<Gen, F>) -> String {
        e.render(&|g: &Gen| self.name(*g).to_string())
    }

    pub fn render_basis(&self, n: u32, r: u32, i: usize) -> String {
        self.render_expr(&self.basis(n, r).expr(i))
    }

    /// Human-readable form in terms of the degree bases.
    pub fn render(&self, x: &LieElement<F>) -> String {
        match self.express(x) {
            Ok(parts) => {
                let mut terms = Vec::new();
                for ((n, r), coeffs) in parts {
                    for (i, c) in coeffs.into_iter().enumerate() {
                        terms.push((c, self.render_basis(n, r, i)));
                    }
                }
                render_terms(terms)
            }
            Err(_) => format!("{x:?}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn one_odd_generator() {
        let mut l = FreeLie::<Q>::new();
        l.add_generator("a", 1, 0).unwrap();
        let dims: Vec<usize> = (1..=4).map(|n| l.dim_top(n)).collect();
        assert_eq!(dims, vec![1, 1, 0, 0]);
        assert_eq!(l.dim_top(0), 0);
    }

    #[test]
    fn degree_five_with_a_and_x() {
        let mut l = FreeLie::<Q>::new();
        l.add_generator("a", 1, 0).unwrap();
        l.add_generator("x", 4, 0).unwrap();
        assert_eq!(l.dim_top(5), 1);
        assert_eq!(l.render_basis(5, 0, 0), "[x,a]");
    }

    #[test]
    fn normalize_cube_and_double() {
        let mut l = FreeLie::<Q>::new();
        let a = LieElement::generator(l.add_generator("a", 1, 0).unwrap());
        let aa = a.bracket(&a);
        assert_eq!(l.render(&(aa.clone() + &aa)), "2[a,a]");
        assert_eq!(l.render(&aa.bracket(&a)), "0");
    }

    #[test]
    fn adding_a_generator_refreshes_bases() {
        let mut l = FreeLie::<Q>::new();
        l.add_generator("a", 1, 0).unwrap();
        assert_eq!(l.dim(3, 0), 0);
        l.add_generator("c", 3, 0).unwrap();
        assert_eq!(l.dim(3, 0), 1);
        assert_eq!(l.dim(2, 0), 1);
    }

    #[test]
    fn even_pair_antisymmetric_normal_form() {
        let mut l = FreeLie::<Q>::new();
        let x = LieElement::generator(l.add_generator("x", 2, 0).unwrap());
        let y = LieElement::generator(l.add_generator("y", 2, 0).unwrap());
        assert_eq!(l.render(&y.bracket(&x)), "[y,x]");
        assert_eq!(l.render(&x.bracket(&y)), "-[y,x]");
    }
}
