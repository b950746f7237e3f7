use std::path::PathBuf;
use std::process::{Command, Output};

use lie_moduli_cli::document::Document;
use lie_moduli_cli::report::{Format, Report};
use lie_moduli_cli::syntax::{emit_expr, parse_expr};
use proptest::prelude::*;

fn data(file: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("../../data");
    p.push(file);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lie-moduli")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> (Report, i32) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = run(&full);
    (Report::from_json(&stdout(&o)).expect("valid report"), o.status.code().unwrap())
}

fn row<'a>(r: &'a Report, table: usize, label: &str) -> &'a Vec<Vec<String>> {
    &r.tables[table].rows.iter().find(|row| row.label == label).expect("row present").cells
}

#[test]
fn sphere_homology() {
    let (r, code) = json(&["homology", &data("s2.cw")]);
    assert_eq!(code, 0);
    let t = &r.tables[0];
    assert_eq!(t.degrees, (1..=7).collect::<Vec<u32>>());
    let cells = &t.rows[0].cells;
    assert_eq!(cells[0], vec!["a"]);
    assert_eq!(cells[1], vec!["[a,a]"]);
    assert!(cells[2..].iter().all(Vec::is_empty));
}

#[test]
fn empty_complex_has_no_homology() {
    let (r, code) = json(&["homology", &data("empty.cw")]);
    assert_eq!(code, 0);
    assert!(r.tables.iter().all(|t| t.rows.iter().all(|row| row.cells.iter().all(|c| c.is_empty()))));
}

#[test]
fn cp2_cellular_homology() {
    let (r, code) = json(&["--cutoff", "6", "homology", &data("cp2.cw")]);
    assert_eq!(code, 0);
    let cells = &r.tables[0].rows[0].cells;
    assert_eq!(cells[0], vec!["a"]);
    assert!(cells[1].is_empty() && cells[2].is_empty());
    assert_eq!(cells[3], vec!["[b,a]"]);
}

#[test]
fn cp2_bigraded_table() {
    let (r, code) = json(&["--cutoff", "6", "bigraded", &data("cp2.gla")]);
    assert_eq!(code, 0, "{:?}", r.checks);
    assert_eq!(r.tables[0].degrees, vec![1, 2, 3, 4, 5, 6]);
    assert_eq!(row(&r, 0, "0")[3], vec!["x"]);
    assert_eq!(row(&r, 0, "1")[2], vec!["b"]);
    assert_eq!(row(&r, 0, "2")[4], vec!["c"]);
    let gens = r.sections.iter().find(|s| s.title == "generators").expect("generator section");
    assert_eq!(gens.lines, vec!["a (1,0)", "x (4,0)", "b (3,1)", "c (5,2)", "y (6,1)"]);
    let diffs = r.sections.iter().find(|s| s.title.contains("ifferential")).expect("differential section");
    for want in ["db = [a,a]", "dy = [x,a]", "dc = [b,a]"] {
        assert!(diffs.lines.iter().any(|l| l.contains(want)), "missing {want} in {:?}", diffs.lines);
    }
}

#[test]
fn bigraded_text_puts_degrees_last() {
    let o = run(&["--cutoff", "6", "bigraded", &data("cp2.gla")]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    let rule = lines.iter().position(|l| l.contains("-+-")).expect("rule line");
    assert!(lines[rule + 1].split_whitespace().collect::<Vec<_>>().ends_with(&["1", "2", "3", "4", "5", "6"]));
    let above: Vec<&str> = lines[..rule].iter().rev().take(3).map(|l| l.split('|').next().unwrap().trim()).collect();
    assert_eq!(above, vec!["0", "1", "2"]);
}

#[test]
fn two_cp2_points_are_separated() {
    let o = run(&["equivalent", &data("cp2.bgm"), "--tau", "zero", "--tau2", "c -> -x"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("FAIL"));
    assert!(text.contains("c: -x"), "{text}");
}

#[test]
fn named_perturbations_are_equivalent_to_themselves() {
    let o = run(&["equivalent", &data("family.bgm"), "--tau", "w_ca", "--tau2", "w_ca"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn perturb_toward_cellular() {
    let (r, code) = json(&["--cutoff", "6", "perturb-toward", &data("cp2.gla"), &data("cp2.cw")]);
    assert_eq!(code, 0, "{:?}", r.checks);
    let lines: Vec<&String> = r.sections.iter().flat_map(|s| s.lines.iter()).collect();
    assert!(lines.iter().any(|l| l.as_str() == "c -> -2x"), "{lines:?}");
}

#[test]
fn flip_automorphism() {
    let (r, code) = json(&["apply-aut", &data("cp2_flip.aut")]);
    assert_eq!(code, 0);
    let lines: Vec<&String> = r.sections.iter().flat_map(|s| s.lines.iter()).collect();
    assert!(lines.iter().any(|l| l.as_str() == "c -> -x"), "{lines:?}");
}

#[test]
fn family_mc_system_summary() {
    let o = run(&["mc-system", &data("family.gla")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("6 single-target solutions, 3 trivial directions"), "{}", stdout(&o));
}

#[test]
fn listed_perturbations_pass_maurer_cartan() {
    for name in ["w_e", "w_ca", "w_cb", "z_e", "z_ca", "z_cb"] {
        let o = run(&["check", "maurer-cartan", &data("family.bgm"), "--tau", name]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
    }
}

#[test]
fn gauge_apply_keeps_maurer_cartan() {
    let (r, code) = json(&["gauge-apply", &data("cp2.bgm"), "--theta", "c -> [b,[a,a]]", "--tau", "plus_x"]);
    assert_eq!(code, 0, "{:?}", r.checks);
}

#[test]
fn wrong_degree_theta_fails_the_check() {
    let o = run(&["check", "theta", &data("cp2.bgm"), "--tau", "c -> [a,[a,a]]"]);
    assert_ne!(o.status.code(), Some(0));
}

fn temp_file(name: &str, body: &str) -> String {
    let dir = std::env::temp_dir().join(format!("lie-moduli-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn unclosed_bracket_is_located() {
    let f = temp_file("unclosed.gla", "kind presentation\ngen a deg 1\n\nbracket [a,a] = [a,a\n");
    let o = run(&["bigraded", &f]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 4, column 17"), "{}", stderr(&o));
}

#[test]
fn unknown_name_is_located() {
    let f = temp_file("unknown.cw", "kind cw-complex\ncell a dim 2 attach 0\ncell b dim 4 attach [q,a]\n");
    let o = run(&["cellular", &f]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("line 3") && e.contains("unknown name `q`"), "{e}");
}

#[test]
fn jacobi_failure_names_the_triple() {
    let f = temp_file("jacobi.gla", "kind presentation\ngen a deg 1\ngen b deg 2\ngen c deg 3\nbracket [a,a] = b\nbracket [a,b] = c\n");
    let o = run(&["bigraded", &f]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("invalid structure constants") && e.contains("(a, a, a)"), "{e}");
}

#[test]
fn decimals_are_rejected() {
    let f = temp_file("decimal.cw", "kind cw-complex\ncell a dim 2 attach 0\ncell b dim 4 attach 0.5*[a,a]\n");
    let o = run(&["cellular", &f]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["homology", "/nonexistent/file.cw"]).status.code(), Some(2));
    assert_eq!(run(&["--cutoff", "9", "bigraded", &data("family.bgm")]).status.code(), Some(2));
}

#[test]
fn reports_survive_json_round_trip() {
    let cases: Vec<Vec<String>> = vec![
        vec!["homology".into(), data("s2.cw")],
        vec!["--cutoff".into(), "6".into(), "bigraded".into(), data("cp2.gla")],
        vec!["mc-system".into(), data("family.gla")],
        vec!["equivalent".into(), data("cp2.bgm"), "--tau".into(), "zero".into(), "--tau2".into(), "minus_x".into()],
    ];
    for args in cases {
        let mut full = vec!["--format", "json"];
        full.extend(args.iter().map(String::as_str));
        let first = stdout(&run(&full));
        let parsed = Report::from_json(&first).unwrap();
        assert_eq!(parsed.emit(Format::Json), first);
        let second = stdout(&run(&full));
        assert_eq!(first, second, "output is not deterministic for {args:?}");
    }
}

#[test]
fn shipped_documents_round_trip() {
    for f in ["s2.cw", "cp2.cw", "empty.cw", "s2.gla", "cp2.gla", "family.gla", "cp2.bgm", "family.bgm", "cp2_flip.aut"] {
        let doc = Document::read(&data(f)).unwrap();
        let again = Document::parse(&doc.origin, &doc.emit()).unwrap();
        assert_eq!(again, doc, "{f}");
    }
}

fn expr_text() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![Just("a".to_string()), Just("b".to_string()), Just("x".to_string())];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| format!("[{l},{r}]")),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| format!("{l} + ({r})")),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| format!("{l} - ({r})")),
            (-5i32..=5, 1u32..=4, inner.clone()).prop_map(|(p, q, e)| format!("({p}/{q})*[{e},a]")),
            inner.prop_map(|e| format!("-({e})")),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn expressions_round_trip(text in expr_text()) {
        let e = parse_expr("gen", &text).unwrap();
        let again = parse_expr("gen", &emit_expr(&e)).unwrap();
        prop_assert_eq!(again, e);
    }

    #[test]
    fn documents_round_trip(values in proptest::collection::vec(expr_text(), 1..5), cutoff in proptest::option::of(2u32..10)) {
        let mut src = String::from("kind perturbation-set\n");
        if let Some(c) = cutoff {
            src.push_str(&format!("cutoff {c}\n"));
        }
        src.push_str("gen a deg 1\ngen b deg 3\ngen x deg 4\n");
        for (i, v) in values.iter().enumerate() {
            src.push_str(&format!("bracket [a,{}] = {v}\n", ["a", "b", "x"][i % 3]));
            src.push_str(&format!("perturbation p{i}\ntau b -> {v}\n"));
        }
        let doc = Document::parse("gen", &src).unwrap();
        let again = Document::parse("gen", &doc.emit()).unwrap();
        prop_assert_eq!(again, doc);
    }
}
