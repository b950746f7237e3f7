//! Cycles, boundaries and homology of a free DGLA, degree by degree.
//!
//! In each topological degree `n` the component `L_n` is split as
//! `B_n ⊕ V_n ⊕ W_n`: boundaries, chosen homology representatives, and a
//! complement of the cycles on which the differential is injective. The same
//! data gives the splitting `φ` (inverse of `d: W_{n+1} → B_n`, zero on the
//! other summands) and coordinates of homology classes.

use std::collections::BTreeMap;

use crate::dgla::Derivation;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::lie::{FreeLie, LieElement, Word};
use crate::linalg::{Echelon, Insertion, SparseVec};
use crate::morphism::LieMorphism;

/// Class coordinates of `[x_i, y_j]`, keyed by `((deg x, i), (deg y, j))`.
pub type StructureConstants<F> = BTreeMap<((u32, usize), (u32, usize)), Vec<F>>;

/// A differential on a free Lie algebra, trusted through `cutoff`.
pub struct Complex<'a, F> {
    pub lie: &'a FreeLie<F>,
    pub diff: &'a Derivation<F>,
    pub cutoff: u32,
}

impl<F> Clone for Complex<'_, F> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<F> Copy for Complex<'_, F> {}

/// The map `δ: L_n → L_{n−1}` in row-reduced form.
#[derive(Clone, Debug)]
pub struct ImageData<F> {
    pub n: u32,
    /// Basis of `L_n`, ascending in resolution degree.
    pub inputs: Vec<LieElement<F>>,
    pub images: Vec<LieElement<F>>,
    /// Inputs whose images are independent of the earlier ones: a basis of a
    /// complement `W_n` of the cycles.
    pub independent: Vec<usize>,
    /// Basis of the cycles; each vector's largest input index is the input
    /// that produced it, so the basis is adapted to the resolution filtration.
    pub cycles: Vec<LieElement<F>>,
    echelon: Echelon<Word, F>,
}

impl<F: Field> ImageData<F> {
    pub fn compute(cx: Complex<'_, F>, n: u32) -> Result<Self> {
        Self::compute_ordered(cx, n, false)
    }

    /// With `reversed`, the basis is scanned from the top resolution degree
    /// down, which picks a different complement and different cycles.
    pub fn compute_ordered(cx: Complex<'_, F>, n: u32, reversed: bool) -> Result<Self> {
        if n > cx.cutoff {
            return Err(Error::CutoffExceeded { degree: n, cutoff: cx.cutoff });
        }
        let mut inputs = cx.lie.top_elements(n);
        if reversed {
            inputs.reverse();
        }
        let mut echelon = Echelon::new();
        let mut images = Vec::with_capacity(inputs.len());
        let mut independent = Vec::new();
        let mut cycles = Vec::new();
        for (j, e) in inputs.iter().enumerate() {
            let de = cx.diff.apply(e)?;
            match echelon.insert(de.coords().clone()) {
                Insertion::Independent => independent.push(j),
                Insertion::Dependent(rel) => cycles.push(combine(&inputs, &rel)),
            }
            images.push(de);
        }
        Ok(ImageData { n, inputs, images, independent, cycles, echelon })
    }

    /// Some `w` in the span of the independent inputs with `δw = b`.
    pub fn preimage(&self, b: &LieElement<F>) -> Option<LieElement<F>> {
        self.echelon.solve(b.coords()).map(|c| combine(&self.inputs, &c))
    }

    pub fn rank(&self) -> usize {
        self.independent.len()
    }
}

fn combine<F: Field>(basis: &[LieElement<F>], coeffs: &SparseVec<usize, F>) -> LieElement<F> {
    let mut out = LieElement::zero();
    for (i, c) in coeffs {
        out.add_scaled(c, &basis[*i]);
    }
    out
}

/// Coordinates of an element of `L_n` against `B_n ⊕ V_n ⊕ W_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split<F> {
    pub boundary: Vec<F>,
    pub class: Vec<F>,
    pub complement: Vec<F>,
}

/// One topological degree of a homology computation.
#[derive(Clone, Debug)]
pub struct Decomposition<F> {
    pub n: u32,
    pub boundaries: Vec<LieElement<F>>,
    /// `δ(boundary_preimages[i]) = boundaries[i]`, each in `W_{n+1}`.
    pub boundary_preimages: Vec<LieElement<F>>,
    pub reps: Vec<LieElement<F>>,
    pub complement: Vec<LieElement<F>>,
    pub cycles: Vec<LieElement<F>>,
    echelon: Echelon<Word, F>,
}

impl<F: Field> Decomposition<F> {
    fn build(below: &ImageData<F>, above: &ImageData<F>) -> Result<Self> {
        let mut echelon = Echelon::new();
        let mut boundaries = Vec::new();
        let mut boundary_preimages = Vec::new();
        for &j in &above.independent {
            let b = above.images[j].clone();
            if echelon.insert(b.coords().clone()) != Insertion::Independent {
                return Err(Error::Invariant("boundary basis is dependent".into()));
            }
            boundaries.push(b);
            boundary_preimages.push(above.inputs[j].clone());
        }
        let mut reps = Vec::new();
        for z in &below.cycles {
            if !echelon.contains(z.coords()) {
                echelon.insert(z.coords().clone());
                reps.push(z.clone());
            }
        }
        let mut complement = Vec::new();
        for &j in &below.independent {
            if echelon.insert(below.inputs[j].coords().clone()) != Insertion::Independent {
                return Err(Error::Invariant("cycle complement is dependent".into()));
            }
            complement.push(below.inputs[j].clone());
        }
        if echelon.rank() != below.inputs.len() {
            return Err(Error::Invariant(format!("decomposition of degree {} does not span", below.n)));
        }
        Ok(Decomposition {
            n: below.n,
            boundaries,
            boundary_preimages,
            reps,
            complement,
            cycles: below.cycles.clone(),
            echelon,
        })
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn split(&self, x: &LieElement<F>) -> Result<Split<F>> {
        if let Some(t) = x.top_deg() {
            if t != self.n {
                return Err(Error::DegreeMismatch {
                    what: "element".into(),
                    expected: self.n.to_string(),
                    found: t.to_string(),
                });
            }
        }
        let c = self
            .echelon
            .solve(x.coords())
            .ok_or_else(|| Error::Invariant("element outside the free Lie algebra".into()))?;
        let nb = self.boundaries.len();
        let nv = self.reps.len();
        let mut s = Split {
            boundary: vec![F::zero(); nb],
            class: vec![F::zero(); nv],
            complement: vec![F::zero(); self.complement.len()],
        };
        for (i, v) in c {
            if i < nb {
                s.boundary[i] = v;
            } else if i < nb + nv {
                s.class[i - nb] = v;
            } else {
                s.complement[i - nb - nv] = v;
            }
        }
        Ok(s)
    }

    pub fn is_cycle(&self, x: &LieElement<F>) -> Result<bool> {
        Ok(self.split(x)?.complement.iter().all(F::is_zero))
    }

    /// Coordinates of the class of a cycle, all zero for a boundary.
    pub fn class_of(&self, x: &LieElement<F>) -> Result<Vec<F>> {
        let s = self.split(x)?;
        if s.complement.iter().any(|c| !c.is_zero()) {
            return Err(Error::NotACycle(format!("{x:?}")));
        }
        Ok(s.class)
    }

    /// The splitting `φ`: the boundary part is sent to its preimage, the rest
    /// to zero.
    pub fn phi(&self, x: &LieElement<F>) -> Result<LieElement<F>> {
        let s = self.split(x)?;
        Ok(combine(&self.boundary_preimages, &s.boundary.into_iter().enumerate().collect()))
    }

    pub fn boundary_part(&self, x: &LieElement<F>) -> Result<LieElement<F>> {
        let s = self.split(x)?;
        Ok(combine(&self.boundaries, &s.boundary.into_iter().enumerate().collect()))
    }
}

/// Homology in degrees `1..cutoff`; the cutoff degree itself is excluded
/// because its boundaries would come from above the cutoff.
#[derive(Clone, Debug)]
pub struct Homology<F> {
    pub cutoff: u32,
    pub degrees: BTreeMap<u32, Decomposition<F>>,
}

impl<F: Field> Homology<F> {
    pub fn compute(cx: Complex<'_, F>) -> Result<Self> {
        Self::compute_ordered(cx, false)
    }

    pub fn compute_ordered(cx: Complex<'_, F>, reversed: bool) -> Result<Self> {
        let mut degrees = BTreeMap::new();
        if cx.cutoff >= 2 {
            let mut below = ImageData::compute_ordered(cx, 1, reversed)?;
            for n in 1..cx.cutoff {
                let above = ImageData::compute_ordered(cx, n + 1, reversed)?;
                degrees.insert(n, Decomposition::build(&below, &above)?);
                below = above;
            }
        }
        Ok(Homology { cutoff: cx.cutoff, degrees })
    }

    pub fn degree(&self, n: u32) -> Result<&Decomposition<F>> {
        self.degrees.get(&n).ok_or(Error::CutoffExceeded { degree: n, cutoff: self.cutoff })
    }

    pub fn dims(&self) -> BTreeMap<u32, usize> {
        self.degrees.iter().map(|(n, d)| (*n, d.dim())).collect()
    }

    pub fn class_of(&self, x: &LieElement<F>) -> Result<Vec<F>> {
        let n = x.top_deg().ok_or_else(|| Error::Invariant("class of zero or inhomogeneous element".into()))?;
        self.degree(n)?.class_of(x)
    }

    pub fn is_boundary(&self, x: &LieElement<F>) -> Result<bool> {
        if x.is_zero() {
            return Ok(true);
        }
        Ok(self.class_of(x)?.iter().all(F::is_zero))
    }

    /// `φ` on an arbitrary element, degree by degree.
    pub fn phi(&self, x: &LieElement<F>) -> Result<LieElement<F>> {
        let mut out = LieElement::zero();
        for n in x.top_degrees() {
            let part = LieElement::from_coords(
                x.coords().iter().filter(|(w, _)| w.top() == n).map(|(w, c)| (w.clone(), c.clone())).collect(),
            );
            out = out + self.degree(n)?.phi(&part)?;
        }
        Ok(out)
    }

    pub fn table(&self) -> HomologyTable<F> {
        HomologyTable {
            cutoff: self.cutoff,
            degrees: self.degrees.iter().map(|(n, d)| (*n, d.reps.clone())).collect(),
        }
    }

    /// Structure constants of the homology Lie algebra on the chosen
    /// representatives, for every pair whose degrees add up to at most
    /// `cutoff − 1`.
    pub fn structure_constants(&self) -> Result<StructureConstants<F>> {
        let mut out = BTreeMap::new();
        for (&n, dn) in &self.degrees {
            for (&m, dm) in &self.degrees {
                if n + m >= self.cutoff {
                    continue;
                }
                for (i, x) in dn.reps.iter().enumerate() {
                    for (j, y) in dm.reps.iter().enumerate() {
                        let b = x.bracket(y);
                        let c = if b.is_zero() { vec![F::zero(); self.degree(n + m)?.dim()] } else { self.class_of(&b)? };
                        out.insert(((n, i), (m, j)), c);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Dimensions and representative cycles per degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyTable<F> {
    pub cutoff: u32,
    pub degrees: BTreeMap<u32, Vec<LieElement<F>>>,
}

impl<F: Field> HomologyTable<F> {
    pub fn dims(&self) -> BTreeMap<u32, usize> {
        self.degrees.iter().map(|(n, r)| (*n, r.len())).collect()
    }
}

/// Matrices of a map on homology, with per-degree bijectivity flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedMap<F> {
    /// `columns[n][i]` is the image of the `i`-th source class.
    pub columns: BTreeMap<u32, Vec<Vec<F>>>,
    pub injective: BTreeMap<u32, bool>,
    pub surjective: BTreeMap<u32, bool>,
}

impl<F: Field> InducedMap<F> {
    pub fn bijective(&self) -> bool {
        self.injective.values().all(|b| *b) && self.surjective.values().all(|b| *b)
    }

    pub fn is_identity(&self) -> bool {
        self.columns.values().all(|cols| {
            cols.iter().enumerate().all(|(i, col)| {
                col.iter().enumerate().all(|(k, c)| if k == i { c.is_one() } else { c.is_zero() })
            })
        })
    }
}

fn rank_of_columns<F: Field>(cols: &[Vec<F>]) -> usize {
    crate::linalg::rank(
        cols.iter().map(|c| c.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone())).collect()),
    )
}

/// Matrices of linear images of source representatives in target homology.
pub fn induced_linear<F: Field>(
    source: &Homology<F>,
    target: &Homology<F>,
    map: &mut dyn FnMut(&LieElement<F>) -> Result<LieElement<F>>,
) -> Result<InducedMap<F>> {
    let mut columns = BTreeMap::new();
    let mut injective = BTreeMap::new();
    let mut surjective = BTreeMap::new();
    for (&n, dn) in &source.degrees {
        let Ok(tn) = target.degree(n) else { continue };
        let mut cols = Vec::new();
        for rep in &dn.reps {
            let img = map(rep)?;
            cols.push(if img.is_zero() { vec![F::zero(); tn.dim()] } else { tn.class_of(&img)? });
        }
        let rank = rank_of_columns(&cols);
        injective.insert(n, rank == dn.dim());
        surjective.insert(n, rank == tn.dim());
        columns.insert(n, cols);
    }
    Ok(InducedMap { columns, injective, surjective })
}

/// The map on homology of a generator-wise DGLA morphism, after checking it
/// commutes with the differentials on every generator.
pub fn induced_map<F: Field>(
    f: &LieMorphism<F>,
    source: Complex<'_, F>,
    target: Complex<'_, F>,
    source_h: &Homology<F>,
    target_h: &Homology<F>,
) -> Result<InducedMap<F>> {
    for info in source.lie.generators() {
        let g = info.gen;
        let lhs = f.apply(source.diff.value(g).ok_or_else(|| Error::MissingGeneratorValue(info.name.clone()))?)?;
        let rhs = target.diff.apply(&f.apply(&LieElement::generator(g))?)?;
        if lhs != rhs {
            return Err(Error::NotChainMap(info.name.clone()));
        }
    }
    induced_linear(source_h, target_h, &mut |x| f.apply(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn cellular(cells: &[(&str, u32)], attach: impl Fn(&FreeLie<Q>) -> Vec<LieElement<Q>>) -> (FreeLie<Q>, Derivation<Q>) {
        let mut lie = FreeLie::new();
        for (name, top) in cells {
            lie.add_generator(name, *top, 0).unwrap();
        }
        let vals = attach(&lie);
        let d = Derivation::new(-1, lie.gens().zip(vals).collect(), 0).unwrap();
        (lie, d)
    }

    #[test]
    fn sphere_and_projective_plane() {
        let (lie, d) = cellular(&[("a", 1)], |_| vec![LieElement::zero()]);
        let h = Homology::compute(Complex { lie: &lie, diff: &d, cutoff: 5 }).unwrap();
        assert_eq!(h.dims().into_values().collect::<Vec<_>>(), vec![1, 1, 0, 0]);

        let (lie, d) = cellular(&[("a", 1), ("b", 3)], |l| {
            let a = l.element("a").unwrap();
            vec![LieElement::zero(), a.bracket(&a).scale(&Q::from_ratio(1, 2))]
        });
        let h = Homology::compute(Complex { lie: &lie, diff: &d, cutoff: 6 }).unwrap();
        assert_eq!(h.dims().into_values().collect::<Vec<_>>(), vec![1, 0, 0, 1, 0]);
        let a = lie.element("a").unwrap();
        let b = lie.element("b").unwrap();
        let two_b = b.scale(&Q::from_i64(2));
        assert_eq!(h.phi(&a.bracket(&a)).unwrap(), two_b);
        assert!(!h.is_boundary(&b.bracket(&a)).unwrap());
        assert!(matches!(h.class_of(&b), Err(Error::NotACycle(_))));
        assert!(matches!(h.degree(6), Err(Error::CutoffExceeded { .. })));
    }

    #[test]
    fn zero_differential_gives_everything() {
        let (lie, d) = cellular(&[("a", 1), ("b", 2)], |_| vec![LieElement::zero(), LieElement::zero()]);
        let h = Homology::compute(Complex { lie: &lie, diff: &d, cutoff: 6 }).unwrap();
        for n in 1..6 {
            assert_eq!(h.degree(n).unwrap().dim(), lie.dim_top(n));
        }
    }
}
