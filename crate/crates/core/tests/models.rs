mod common;

use std::collections::BTreeMap;

use common::*;
use lie_moduli::dgla::{Derivation, TruncatedModel};
use lie_moduli::lie::{Expr, FreeLie, LieElement, Term};
use lie_moduli::models::{build_bigraded, build_cellular, check_zero_region, BuildOptions, Cell, CwDescription};
use lie_moduli::presentation::GlaPresentation;
use lie_moduli::Error;

fn leaf(s: &str) -> Expr<String, Q> {
    Expr::Leaf(s.to_string())
}

fn cell(name: &str, dim: u32, attach: Expr<String, Q>) -> Cell<Q> {
    Cell { name: name.into(), dim, attach }
}

fn gen_counts(m: &TruncatedModel<Q>) -> BTreeMap<(u32, u32), usize> {
    let mut out = BTreeMap::new();
    for g in m.lie.gens() {
        *out.entry(g.bidegree()).or_insert(0) += 1;
    }
    out
}

#[test]
fn cellular_sphere() {
    let cw = CwDescription { cells: vec![cell("a", 2, Expr::zero())] };
    let m = build_cellular(&cw, 8).unwrap();
    assert_eq!(m.lie.generators().len(), 1);
    assert_eq!(m.lie.gens().next().unwrap().bidegree(), (1, 0));
    assert!(m.d(&m.element("a").unwrap()).unwrap().is_zero());
}

#[test]
fn cellular_cp2_uses_attaching_coefficient() {
    let half = Expr::Sum(vec![Term { coeff: q(1, 2), expr: Expr::bracket(leaf("a"), leaf("a")) }]);
    let cw = CwDescription { cells: vec![cell("a", 2, Expr::zero()), cell("b", 4, half)] };
    let m = build_cellular(&cw, 8).unwrap();
    let a = m.element("a").unwrap();
    assert_eq!(m.d(&m.element("b").unwrap()).unwrap(), a.bracket(&a).scale(&q(1, 2)));
    assert!(m.check_minimal());
}

#[test]
fn cellular_empty_and_truncated() {
    let m = build_cellular(&CwDescription::<Q>::default(), 8).unwrap();
    assert!(m.lie.generators().is_empty());
    let cw = CwDescription { cells: vec![cell("a", 2, Expr::zero()), cell("t", 12, Expr::zero())] };
    assert_eq!(build_cellular(&cw, 8).unwrap().lie.generators().len(), 1);
}

#[test]
fn cellular_rejects_bad_attachments() {
    let cw = CwDescription { cells: vec![cell("a", 2, Expr::zero()), cell("b", 5, Expr::bracket(leaf("a"), leaf("a")))] };
    assert!(matches!(build_cellular(&cw, 8), Err(Error::DegreeMismatch { .. })));
    let cw = CwDescription { cells: vec![cell("b", 4, leaf("zz"))] };
    assert!(matches!(build_cellular(&cw, 8), Err(Error::UnknownName(_))));
    let cw = CwDescription { cells: vec![cell("a", 2, Expr::zero()), cell("b", 3, leaf("a")), cell("c", 4, leaf("b"))] };
    match build_cellular(&cw, 8) {
        Err(Error::SquareNonzero(names)) => assert_eq!(names, vec!["c".to_string()]),
        other => panic!("{other:?}"),
    }
}

#[test]
fn bigraded_cp2_generators_and_differentials() {
    let m = cp2_model();
    let got: Vec<(String, (u32, u32))> =
        m.lie().generators().iter().map(|i| (i.name.clone(), i.gen.bidegree())).collect();
    let want = [("a", (1, 0)), ("x", (4, 0)), ("b", (3, 1)), ("c", (5, 2)), ("y", (6, 1))];
    assert_eq!(got, want.iter().map(|(n, b)| (n.to_string(), *b)).collect::<Vec<_>>());
    let e = |s: &str| m.model.element(s).unwrap();
    assert_eq!(m.model.d(&e("b")).unwrap(), e("a").bracket(&e("a")));
    assert_eq!(m.model.d(&e("c")).unwrap(), e("b").bracket(&e("a")));
    assert_eq!(m.model.d(&e("y")).unwrap(), e("x").bracket(&e("a")));
    assert_eq!(m.certified_through(), 5);
}

#[test]
fn bigraded_family_resolution_one_and_two() {
    let m = family_model(6);
    let e = |s: &str| m.model.element(s).unwrap();
    let bideg = |s: &str| m.lie().gen(s).unwrap().bidegree();
    assert_eq!((bideg("x"), bideg("y"), bideg("w"), bideg("z")), ((3, 1), (3, 1), (5, 2), (5, 2)));
    assert_eq!(m.model.d(&e("x")).unwrap(), e("b").bracket(&e("b")));
    assert_eq!(m.model.d(&e("y")).unwrap(), e("a").bracket(&e("b")));
    assert_eq!(m.model.d(&e("w")).unwrap(), e("b").bracket(&e("x")));
    let dz = e("a").bracket(&e("x")) + e("b").bracket(&e("y")).scale(&q(2, 1));
    assert_eq!(m.model.d(&e("z")).unwrap(), dz);
}

#[test]
fn sphere_has_nothing_in_positive_resolution() {
    let m = build_bigraded(&sphere(8), 8, &BuildOptions::default()).unwrap();
    assert!(m.lie().gens().all(|g| g.res == 0));
    assert_eq!(m.lie().generators().len(), 1);
}

#[test]
fn homology_matches_presentation_dimensions() {
    for (p, cutoff) in [(sphere(8), 8), (cp2(7), 7), (family(6), 6)] {
        let m = build_bigraded(&p, cutoff, &BuildOptions::default()).unwrap();
        let dims = m.homology().dims();
        for n in 1..cutoff {
            assert_eq!(dims[&n], p.in_degree(n).len(), "degree {n}");
        }
        assert!(m.model.check_minimal());
        assert!(m.model.check_square_zero().passed());
        assert!(check_zero_region(&m.model).passed());
    }
}

#[test]
fn other_representative_choice_gives_same_counts() {
    for (p, cutoff) in [(sphere(8), 8), (cp2(8), 8), (family(6), 6)] {
        let a = build_bigraded(&p, cutoff, &BuildOptions::default()).unwrap();
        let b = build_bigraded(&p, cutoff, &BuildOptions { reversed: true, ..Default::default() }).unwrap();
        assert_eq!(gen_counts(&a.model), gen_counts(&b.model));
    }
}

#[test]
fn zero_region_flags_generator_on_the_line() {
    let mut lie = FreeLie::<Q>::new();
    let a = lie.add_generator("a", 1, 0).unwrap();
    let g = lie.add_generator("g", 2, 1).unwrap();
    let values = BTreeMap::from([(a, LieElement::zero()), (g, LieElement::zero())]);
    let m = TruncatedModel::new(lie, Derivation::new(-1, values, 1).unwrap(), 4).unwrap();
    let report = check_zero_region(&m);
    assert_eq!(report.generators, vec![("g".to_string(), 2, 1)]);
    assert!(!report.passed());
}

#[test]
fn linear_differential_is_not_minimal() {
    let mut lie = FreeLie::<Q>::new();
    let h = lie.add_generator("h", 2, 0).unwrap();
    let g = lie.add_generator("g", 3, 1).unwrap();
    let values = BTreeMap::from([(h, LieElement::zero()), (g, LieElement::generator(h))]);
    let m = TruncatedModel::new(lie, Derivation::new(-1, values, 1).unwrap(), 4).unwrap();
    assert!(!m.check_minimal());
}

#[test]
fn cutoff_too_small() {
    assert!(matches!(build_bigraded(&cp2(6), 1, &BuildOptions::default()), Err(Error::CutoffTooSmall(1))));
}

#[test]
fn invalid_presentations_are_rejected() {
    use lie_moduli::presentation::BasisElement;
    let basis = vec![BasisElement { name: "a".into(), degree: 1 }, BasisElement { name: "u".into(), degree: 3 }];
    // [a,a] would need a degree-2 target
    let bad = vec![((0, 0), BTreeMap::from([(1, q(1, 1))]))];
    assert!(matches!(GlaPresentation::new(basis, bad, 6), Err(Error::PresentationInvalid(_))));
}

#[test]
fn representatives_have_unit_classes() {
    for (p, cutoff) in [(sphere(8), 8), (cp2(8), 8), (family(6), 6)] {
        for reversed in [false, true] {
            let m = build_bigraded(&p, cutoff, &BuildOptions { reversed, ..Default::default() }).unwrap();
            for (n, dec) in &m.homology().degrees {
                for (i, rep) in dec.reps.iter().enumerate() {
                    assert!(dec.is_cycle(rep).unwrap(), "degree {n}");
                    let class = dec.class_of(rep).unwrap();
                    let unit: Vec<Q> = (0..dec.dim()).map(|k| q((k == i) as i64, 1)).collect();
                    assert_eq!(class, unit, "degree {n}, class {i}");
                }
            }
        }
    }
}
