#![allow(dead_code)]

use lie_moduli::models::{build_bigraded, BigradedModel, BuildOptions};
use lie_moduli::presentation::{BasisElement, GlaPresentation, PElement};
use lie_moduli::{Field, Scalar};

pub type Q = Scalar;

pub fn q(n: i64, d: i64) -> Q {
    Q::from_ratio(n, d)
}

pub type BracketSpec<'a> = (&'a str, &'a str, &'a [(i64, &'a str)]);

pub fn presentation(basis: &[(&str, u32)], brackets: &[BracketSpec<'_>], cutoff: u32) -> GlaPresentation<Q> {
    let b: Vec<BasisElement> = basis.iter().map(|(n, d)| BasisElement { name: n.to_string(), degree: *d }).collect();
    let idx = |s: &str| b.iter().position(|e| e.name == s).unwrap();
    let given = brackets
        .iter()
        .map(|(x, y, terms)| {
            let v: PElement<Q> = terms.iter().map(|(c, n)| (idx(n), q(*c, 1))).collect();
            ((idx(x), idx(y)), v)
        })
        .collect();
    GlaPresentation::new(b, given, cutoff).unwrap()
}

pub fn sphere(cutoff: u32) -> GlaPresentation<Q> {
    presentation(&[("a", 1), ("aa", 2)], &[("a", "a", &[(1, "aa")])], cutoff)
}

/// Rational homotopy Lie algebra of CP²: abelian on a in degree 1 and x in
/// degree 4.
pub fn cp2(cutoff: u32) -> GlaPresentation<Q> {
    presentation(&[("a", 1), ("x", 4)], &[], cutoff)
}

pub fn family(cutoff: u32) -> GlaPresentation<Q> {
    presentation(
        &[("a", 1), ("b", 1), ("aa", 2), ("c", 3), ("ca", 4), ("cb", 4), ("e", 4)],
        &[("a", "a", &[(1, "aa")]), ("c", "a", &[(1, "ca")]), ("c", "b", &[(1, "cb")])],
        cutoff,
    )
}

pub fn names(list: &[&str]) -> BuildOptions {
    BuildOptions { names: list.iter().map(|s| s.to_string()).collect(), reversed: false }
}

pub fn cp2_model() -> BigradedModel<Q> {
    build_bigraded(&cp2(6), 6, &names(&["b", "c", "y"])).unwrap()
}

pub fn family_model(cutoff: u32) -> BigradedModel<Q> {
    build_bigraded(&family(cutoff), cutoff, &names(&["x", "y", "w", "z"])).unwrap()
}
