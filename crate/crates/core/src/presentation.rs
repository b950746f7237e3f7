//! Finite graded Lie algebras given by a homogeneous basis and structure
//! constants, valid through a degree cutoff.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{sign, Field};
use crate::lie::{render_terms, Expr};
use crate::linalg::{axpy, Echelon, Insertion, SparseVec};

/// An element of a presented Lie algebra, as coordinates on its basis.
pub type PElement<F> = SparseVec<usize, F>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub name: String,
    pub degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlaPresentation<F> {
    basis: Vec<BasisElement>,
    brackets: BTreeMap<(usize, usize), PElement<F>>,
    cutoff: u32,
}

impl<F: Field> GlaPresentation<F> {
    /// Validates degrees, completes the table by antisymmetry and checks
    /// antisymmetry and the graded Jacobi identity through the cutoff.
    pub fn new(basis: Vec<BasisElement>, given: Vec<((usize, usize), PElement<F>)>, cutoff: u32) -> Result<Self> {
        for (i, b) in basis.iter().enumerate() {
            if b.degree == 0 || b.degree > cutoff {
                return Err(Error::PresentationInvalid(format!(
                    "basis element `{}` has degree {} outside 1..={cutoff}",
                    b.name, b.degree
                )));
            }
            if basis[..i].iter().any(|o| o.name == b.name) {
                return Err(Error::PresentationInvalid(format!("basis name `{}` used twice", b.name)));
            }
        }
        let deg = |i: usize| basis[i].degree;
        let mut explicit: BTreeMap<(usize, usize), PElement<F>> = BTreeMap::new();
        for ((i, j), v) in given {
            if i >= basis.len() || j >= basis.len() {
                return Err(Error::PresentationInvalid("bracket refers to an unknown basis element".into()));
            }
            for k in v.keys() {
                if *k >= basis.len() || deg(*k) != deg(i) + deg(j) {
                    return Err(Error::PresentationInvalid(format!(
                        "[{},{}] has a term of the wrong degree",
                        basis[i].name, basis[j].name
                    )));
                }
            }
            if explicit.insert((i, j), v).is_some() {
                return Err(Error::PresentationInvalid(format!(
                    "[{},{}] is given twice",
                    basis[i].name, basis[j].name
                )));
            }
        }
        let mut brackets = BTreeMap::new();
        for (&(i, j), v) in &explicit {
            let s: F = sign(deg(i) % 2 == 1 && deg(j) % 2 == 1);
            let mirrored: PElement<F> = v.iter().map(|(k, c)| (*k, -(s.clone() * c.clone()))).collect();
            match explicit.get(&(j, i)) {
                Some(w) if *w != mirrored => {
                    return Err(Error::PresentationInvalid(format!(
                        "antisymmetry fails for the pair ({}, {})",
                        basis[i].name, basis[j].name
                    )));
                }
                _ => {}
            }
            if i == j && *v != mirrored {
                return Err(Error::PresentationInvalid(format!(
                    "antisymmetry fails for the pair ({}, {})",
                    basis[i].name, basis[j].name
                )));
            }
            if !v.is_empty() {
                brackets.insert((i, j), v.clone());
                brackets.insert((j, i), mirrored);
            }
        }
        let p = GlaPresentation { basis, brackets, cutoff };
        p.check_jacobi()?;
        Ok(p)
    }

    fn check_jacobi(&self) -> Result<()> {
        let n = self.basis.len();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (dx, dy, dz) = (self.degree(x), self.degree(y), self.degree(z));
                    if dx + dy + dz > self.cutoff {
                        continue;
                    }
                    let e = |i: usize| -> PElement<F> { [(i, F::one())].into_iter().collect() };
                    let mut total = PElement::new();
                    let t1 = self.bracket(&e(x), &self.bracket(&e(y), &e(z)));
                    let t2 = self.bracket(&e(y), &self.bracket(&e(z), &e(x)));
                    let t3 = self.bracket(&e(z), &self.bracket(&e(x), &e(y)));
                    axpy(&mut total, &sign(dx % 2 == 1 && dz % 2 == 1), &t1);
                    axpy(&mut total, &sign(dy % 2 == 1 && dx % 2 == 1), &t2);
                    axpy(&mut total, &sign(dz % 2 == 1 && dy % 2 == 1), &t3);
                    if !total.is_empty() {
                        return Err(Error::PresentationInvalid(format!(
                            "Jacobi identity fails for the triple ({}, {}, {})",
                            self.basis[x].name, self.basis[y].name, self.basis[z].name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.basis[i].degree
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    pub fn unit(&self, i: usize) -> PElement<F> {
        [(i, F::one())].into_iter().collect()
    }

    /// The nonzero structure constants, each unordered pair once.
    pub fn brackets(&self) -> impl Iterator<Item = (&(usize, usize), &PElement<F>)> {
        self.brackets.iter().filter(|((i, j), _)| i <= j)
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> PElement<F> {
        self.brackets.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn bracket(&self, x: &PElement<F>, y: &PElement<F>) -> PElement<F> {
        let mut out = PElement::new();
        for (i, a) in x {
            for (j, b) in y {
                if let Some(v) = self.brackets.get(&(*i, *j)) {
                    axpy(&mut out, &(a.clone() * b.clone()), v);
                }
            }
        }
        out
    }

    pub fn in_degree(&self, n: u32) -> Vec<usize> {
        (0..self.basis.len()).filter(|&i| self.basis[i].degree == n).collect()
    }

    pub fn dims(&self) -> BTreeMap<u32, usize> {
        (1..=self.cutoff).map(|n| (n, self.in_degree(n).len())).collect()
    }

    pub fn eval(&self, e: &Expr<usize, F>) -> PElement<F> {
        e.evaluate::<_, std::convert::Infallible>(
            &mut |i| Ok(self.unit(*i)),
            &|x, y| self.bracket(x, y),
            &PElement::new,
            &|acc, c, v| axpy(acc, c, v),
        )
        .unwrap_or_else(|e| match e {})
    }

    /// Basis elements not in the span of brackets, chosen greedily degree by
    /// degree: they map isomorphically onto `P/[P,P]`.
    pub fn indecomposables(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for n in 1..=self.cutoff {
            let mut ech: Echelon<usize, F> = Echelon::new();
            for i in 0..self.len() {
                for j in 0..self.len() {
                    if self.degree(i) + self.degree(j) == n {
                        let b = self.basis_bracket(i, j);
                        if !b.is_empty() {
                            ech.insert(b);
                        }
                    }
                }
            }
            for k in self.in_degree(n) {
                if ech.insert(self.unit(k)) == Insertion::Independent {
                    out.push(k);
                }
            }
        }
        out
    }

    pub fn render(&self, x: &PElement<F>) -> String {
        render_terms(x.iter().map(|(i, c)| (c.clone(), self.basis[*i].name.clone())))
    }

    /// Checks that `sigma` (images of basis elements) preserves degrees and
    /// brackets and is bijective in every degree.
    pub fn check_automorphism(&self, sigma: &[PElement<F>]) -> Result<()> {
        if sigma.len() != self.len() {
            return Err(Error::NotAnAutomorphism("map must be given on every basis element".into()));
        }
        for (i, v) in sigma.iter().enumerate() {
            if v.keys().any(|k| self.degree(*k) != self.degree(i)) {
                return Err(Error::NotAnAutomorphism(format!("`{}` changes degree", self.basis[i].name)));
            }
        }
        for i in 0..self.len() {
            for j in 0..self.len() {
                if self.degree(i) + self.degree(j) > self.cutoff {
                    continue;
                }
                let lhs = self.apply_linear(sigma, &self.basis_bracket(i, j));
                let rhs = self.bracket(&sigma[i], &sigma[j]);
                if lhs != rhs {
                    return Err(Error::NotAnAutomorphism(format!(
                        "bracket of ({}, {}) is not preserved",
                        self.basis[i].name, self.basis[j].name
                    )));
                }
            }
        }
        for n in 1..=self.cutoff {
            let idx = self.in_degree(n);
            let rank = crate::linalg::rank(idx.iter().map(|&i| sigma[i].clone()));
            if rank != idx.len() {
                return Err(Error::NotAnAutomorphism(format!("not bijective in degree {n}")));
            }
        }
        Ok(())
    }

    pub fn apply_linear(&self, sigma: &[PElement<F>], x: &PElement<F>) -> PElement<F> {
        let mut out = PElement::new();
        for (i, c) in x {
            axpy(&mut out, c, &sigma[*i]);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn b(name: &str, degree: u32) -> BasisElement {
        BasisElement { name: name.into(), degree }
    }

    fn unit(i: usize) -> PElement<Q> {
        [(i, Q::from_i64(1))].into_iter().collect()
    }

    #[test]
    fn sphere_completion() {
        let p = GlaPresentation::new(vec![b("a", 1), b("aa", 2)], vec![((0, 0), unit(1))], 6).unwrap();
        assert_eq!(p.indecomposables(), vec![0]);
        assert_eq!(p.bracket(&unit(0), &unit(0)), unit(1));
    }

    #[test]
    fn antisymmetry_completion_for_odd_pair() {
        let p = GlaPresentation::new(vec![b("a", 1), b("c", 3), b("ca", 4)], vec![((1, 0), unit(2))], 6).unwrap();
        // [a,c] = -(-1)^{3} [c,a] = [c,a]
        assert_eq!(p.basis_bracket(0, 1), unit(2));
    }

    #[test]
    fn rejects_even_self_bracket() {
        let err = GlaPresentation::new(vec![b("x", 2), b("y", 4)], vec![((0, 0), unit(1))], 6).unwrap_err();
        assert!(err.to_string().contains("(x, x)"));
    }

    #[test]
    fn rejects_jacobi_failure() {
        // [a,a] = u, [a,u] = v: Jacobi on (a,a,a) forces [a,[a,a]] = 0.
        let basis = vec![b("a", 1), b("u", 2), b("v", 3)];
        let err = GlaPresentation::new(basis, vec![((0, 0), unit(1)), ((0, 1), unit(2))], 6).unwrap_err();
        assert!(err.to_string().contains("Jacobi"), "{err}");
    }
}
