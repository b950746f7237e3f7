//! Sparse exact linear algebra: vectors keyed by an ordered index and an
//! incremental row-echelon basis that remembers how every stored row was
//! built from the inputs.

use std::collections::BTreeMap;
use std::ops::Bound;

use crate::field::Field;

pub type SparseVec<K, F> = BTreeMap<K, F>;

/// `y += a * x`, dropping entries that cancel.
pub fn axpy<K: Ord + Clone, F: Field>(y: &mut SparseVec<K, F>, a: &F, x: &SparseVec<K, F>) {
    if a.is_zero() {
        return;
    }
    for (k, v) in x {
        let term = a.clone() * v.clone();
        match y.get_mut(k) {
            Some(slot) => {
                *slot = slot.clone() + term;
                if slot.is_zero() {
                    y.remove(k);
                }
            }
            None => {
                y.insert(k.clone(), term);
            }
        }
    }
}

pub fn scaled<K: Ord + Clone, F: Field>(x: &SparseVec<K, F>, a: &F) -> SparseVec<K, F> {
    if a.is_zero() {
        return SparseVec::new();
    }
    x.iter().map(|(k, v)| (k.clone(), v.clone() * a.clone())).collect()
}

pub fn add_entry<K: Ord, F: Field>(y: &mut SparseVec<K, F>, k: K, a: F) {
    if a.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match y.entry(k) {
        Entry::Occupied(mut e) => {
            let v = e.get().clone() + a;
            if v.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = v;
            }
        }
        Entry::Vacant(e) => {
            e.insert(a);
        }
    }
}

#[derive(Clone, Debug)]
struct Row<K, F> {
    vec: SparseVec<K, F>,
    combo: SparseVec<usize, F>,
}

/// Result of inserting a vector into an [`Echelon`].
#[derive(Clone, Debug, PartialEq)]
pub enum Insertion<F> {
    /// The vector was independent of everything inserted before it.
    Independent,
    /// The vector was dependent; the relation `sum c_i * input_i = 0` holds,
    /// with the new input's own coefficient equal to one.
    Dependent(SparseVec<usize, F>),
}

/// Incremental echelon form over an ordered key space.
///
/// Each row has its smallest key as pivot (coefficient one) and no other key
/// smaller than its pivot. Inputs are numbered in insertion order; every row
/// records its expression as a combination of those inputs.
#[derive(Clone, Debug)]
pub struct Echelon<K, F> {
    rows: Vec<Row<K, F>>,
    pivots: BTreeMap<K, usize>,
    inputs: usize,
}

impl<K: Ord + Clone, F: Field> Default for Echelon<K, F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord + Clone, F: Field> Echelon<K, F> {
    pub fn new() -> Self {
        Echelon { rows: Vec::new(), pivots: BTreeMap::new(), inputs: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    /// Eliminates every pivot key from `v`. Returns the coefficients `c` with
    /// `v_original - v_reduced = sum c_i * input_i`.
    pub fn reduce(&self, v: &mut SparseVec<K, F>) -> SparseVec<usize, F> {
        let mut coeffs = SparseVec::new();
        let mut from: Option<K> = None;
        loop {
            let next = {
                let mut iter: Box<dyn Iterator<Item = (&K, &F)>> = match &from {
                    None => Box::new(v.iter()),
                    Some(f) => Box::new(v.range((Bound::Excluded(f), Bound::Unbounded))),
                };
                iter.find(|(k, _)| self.pivots.contains_key(*k))
                    .map(|(k, c)| (k.clone(), c.clone()))
            };
            let Some((key, c)) = next else { break };
            let row = &self.rows[self.pivots[&key]];
            axpy(v, &(-c.clone()), &row.vec);
            axpy(&mut coeffs, &c, &row.combo);
            from = Some(key);
        }
        coeffs
    }

    pub fn contains(&self, v: &SparseVec<K, F>) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_empty()
    }

    /// Writes `v` as a combination of the inputs, if it lies in their span.
    pub fn solve(&self, v: &SparseVec<K, F>) -> Option<SparseVec<usize, F>> {
        let mut w = v.clone();
        let coeffs = self.reduce(&mut w);
        w.is_empty().then_some(coeffs)
    }

    pub fn insert(&mut self, v: SparseVec<K, F>) -> Insertion<F> {
        let tag = self.inputs;
        self.inputs += 1;
        let mut w = v;
        let coeffs = self.reduce(&mut w);
        let mut combo = SparseVec::new();
        combo.insert(tag, F::one());
        axpy(&mut combo, &(-F::one()), &coeffs);
        match w.iter().next() {
            None => Insertion::Dependent(combo),
            Some((pivot, lead)) => {
                let pivot = pivot.clone();
                let inv = F::one() / lead.clone();
                let row = Row { vec: scaled(&w, &inv), combo: scaled(&combo, &inv) };
                self.pivots.insert(pivot, self.rows.len());
                self.rows.push(row);
                Insertion::Independent
            }
        }
    }
}

/// Rank of a list of vectors.
pub fn rank<K: Ord + Clone, F: Field>(vectors: impl IntoIterator<Item = SparseVec<K, F>>) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// Basis of the kernel of the linear map sending input `j` to `images[j]`.
/// Kernel vectors are returned in order of their largest input index, so that
/// the span of the first few is spanned by inputs with small indices.
pub fn kernel<K: Ord + Clone, F: Field>(
    images: impl IntoIterator<Item = SparseVec<K, F>>,
) -> Vec<SparseVec<usize, F>> {
    let mut e = Echelon::new();
    let mut out = Vec::new();
    for v in images {
        if let Insertion::Dependent(rel) = e.insert(v) {
            out.push(rel);
        }
    }
    out
}
