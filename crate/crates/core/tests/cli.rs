use std::io::Write;
use std::process::Command;

use ballean::cli::{exit_code, main_with, parse, Outcome};
use proptest::prelude::*;

fn run(args: &[&str]) -> (String, String, i32) {
    main_with(std::iter::once("ballean").chain(args.iter().copied()))
}

fn instance(text: &str) -> tempfile_path::TempFile {
    tempfile_path::TempFile::new(text)
}

/// A scratch file removed on drop.
mod tempfile_path {
    use std::path::PathBuf;
    use std::sync::atomic::{AtomicUsize, Ordering};

    static NEXT: AtomicUsize = AtomicUsize::new(0);

    pub struct TempFile(pub PathBuf);

    impl TempFile {
        pub fn new(text: &str) -> Self {
            let n = NEXT.fetch_add(1, Ordering::Relaxed);
            let p = std::env::temp_dir().join(format!("ballean-cli-{}-{n}.inst", std::process::id()));
            std::fs::write(&p, text).unwrap();
            TempFile(p)
        }

        pub fn path(&self) -> &str {
            self.0.to_str().unwrap()
        }
    }

    impl Drop for TempFile {
        fn drop(&mut self) {
            let _ = std::fs::remove_file(&self.0);
        }
    }
}

#[test]
fn disjoint_sparse_sets_exit_zero() {
    let doc = instance("(def Y (gen pow4)) (def Z (gen two-pow4))");
    let (out, _, code) = run(&["--doc", doc.path(), "check", "asymptotically-disjoint", "Y", "Z", "--space", "(metric-nat)"]);
    assert_eq!(out.trim(), "asymptotically-disjoint Y Z: TRUE");
    assert_eq!(code, 0);
}

#[test]
fn enumerate_two_points() {
    let (out, _, code) = run(&["enumerate-finite", "2"]);
    assert_eq!(out.lines().next(), Some("2 coarse structures"));
    assert_eq!(code, 0);
}

#[test]
fn enumeration_beyond_four_points_is_an_error() {
    let (out, _, code) = run(&["enumerate-finite", "5"]);
    assert!(out.contains("ERROR"), "{out}");
    assert_eq!(code, 3);
}

#[test]
fn infer_cites_the_b_product_rule() {
    let (out, _, code) = run(&["infer", "(b-product (finite-subsets omega) (rays))"]);
    assert!(out.lines().any(|l| l == "metrizable: TRUE [Thm 5]"), "{out}");
    // bounded is FALSE, which decides the status
    assert_eq!(code, 1);
}

#[test]
fn lines_format_has_three_tab_separated_fields() {
    let (out, _, _) = run(&["--format", "lines", "infer", "(metric-nat)"]);
    assert!(!out.is_empty());
    for l in out.lines() {
        let f: Vec<&str> = l.split('\t').collect();
        assert_eq!(f.len(), 3, "{l}");
        assert_eq!(f[0], "(metric-nat)");
        assert!(["TRUE", "FALSE", "UNKNOWN"].contains(&f[2]), "{l}");
    }
}

#[test]
fn evens_and_odds_exit_one() {
    let (out, _, code) = run(&["check", "asymptotically-disjoint", "(ap period 2 residue 0)", "(ap period 2 residue 1)"]);
    assert!(out.contains("FALSE"), "{out}");
    assert_eq!(code, 1);
}

#[test]
fn undecided_membership_exits_two() {
    let (out, _, code) = run(&["check", "bounded", "(gen pow4)", "--space", "(down (chain evens-plus))"]);
    assert!(out.contains("UNKNOWN"), "{out}");
    assert_eq!(code, 2);
}

#[test]
fn unresolved_names_are_errors_with_positions() {
    let (_, err, code) = run(&["infer", "X"]);
    assert!(err.contains("unresolved name X"), "{err}");
    assert!(err.contains(":"), "{err}");
    assert_eq!(code, 3);
}

#[test]
fn bounded_bornology_domain_errors_surface() {
    let (out, _, code) = run(&["check", "discrete", "(down (powerset (points 3)))"]);
    assert!(out.contains("domain error"), "{out}");
    assert_eq!(code, 3);
}

#[test]
fn separator_table_follows_the_summary() {
    let (out, _, code) = run(&["--horizon", "1024", "separate", "(gen pow4)", "(gen two-pow4)"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "separates (gen pow4) (gen two-pow4): TRUE");
    assert!(lines[1..4].iter().all(|l| l.starts_with("slowly-oscillating") && l.ends_with("TRUE")), "{out}");
    assert!(lines.contains(&"  4\t0") && lines.contains(&"  8\t1"));
    assert_eq!(code, 0);
}

#[test]
fn eps_flag_restricts_the_grid() {
    let (out, _, code) = run(&["--eps", "1/4", "check", "slowly-oscillating", "(log-wave)"]);
    assert_eq!(out.lines().next(), Some("slowly-oscillating eps=1/4 (log-wave): TRUE"));
    assert_eq!(code, 0);
    let (_, err, code) = run(&["--eps", "3/2", "check", "slowly-oscillating", "(parity)"]);
    assert!(err.contains("(0, 1]"));
    assert_eq!(code, 3);
}

#[test]
fn witnesses_file_refutes_antidiscreteness() {
    let w = instance("(def D (ballmap doubling))");
    let (out, _, code) = run(&["--witnesses", w.path(), "check", "antidiscrete", "(metric-nat)"]);
    assert!(out.starts_with("antidiscrete (metric-nat): FALSE"), "{out}");
    assert_eq!(code, 1);
}

#[test]
fn run_executes_directives_in_order() {
    let doc = instance(
        "(def B (finite-subsets))\n(def X (down B))\n(check discrete X)\n(invariants B)\n(check asymptotically-disjoint (gen pow4) (gen two-pow4))\n",
    );
    let (out, _, code) = run(&["run", doc.path()]);
    let headers: Vec<&str> = out.lines().filter(|l| l.starts_with("== ")).collect();
    assert_eq!(
        headers,
        ["== (check discrete X)", "== (invariants B)", "== (check asymptotically-disjoint (gen pow4) (gen two-pow4))"]
    );
    assert!(out.contains("cof: ℵ0"));
    assert_eq!(code, 0);
}

#[test]
fn binary_reports_exit_status_and_reads_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ballean"))
        .args(["run", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"(check asymptotically-disjoint (ap period 2 residue 0) (ap period 2 residue 1))")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FALSE"));

    let bad = Command::new(env!("CARGO_BIN_EXE_ballean")).args(["frobnicate"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(3));
}

fn outcome() -> impl Strategy<Value = Outcome> {
    prop_oneof![
        Just(Outcome::True),
        Just(Outcome::False),
        Just(Outcome::Unknown),
        Just(Outcome::Error),
        Just(Outcome::Info),
    ]
}

proptest! {
    /// The status depends only on which outcomes occur.
    #[test]
    fn exit_code_is_a_function_of_the_multiset(mut v in proptest::collection::vec(outcome(), 0..12), seed in any::<u64>()) {
        let before = exit_code(v.clone());
        let n = v.len();
        if n > 1 {
            v.rotate_left((seed as usize) % n);
            v.swap(0, (seed as usize / 7) % n);
        }
        prop_assert_eq!(exit_code(v.clone()), before);
        let expected = if v.contains(&Outcome::Error) { 3 }
            else if v.contains(&Outcome::False) { 1 }
            else if v.contains(&Outcome::Unknown) { 2 }
            else { 0 };
        prop_assert_eq!(before, expected);
    }
}

fn set_expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("(gen pow4)".to_string()),
        Just("(gen two-pow4)".to_string()),
        Just("(gen geometric 3 5 1)".to_string()),
        Just("(gen poly 2 3 0)".to_string()),
        (1u64..6, 0u64..6).prop_map(|(p, r)| format!("(ap period {p} residue {})", r % p)),
        proptest::collection::vec(0u64..50, 0..4).prop_map(|xs| {
            let body: Vec<String> = xs.iter().map(u64::to_string).collect();
            format!("(set {})", body.join(" "))
        }),
        (0u64..20, 0u64..20).prop_map(|(a, b)| format!("(interval {} {})", a.min(b), a.max(b))),
        Just("(all)".to_string()),
    ];
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            proptest::collection::vec(inner.clone(), 1..3).prop_map(|xs| format!("(union {})", xs.join(" "))),
            proptest::collection::vec(inner.clone(), 1..3).prop_map(|xs| format!("(inter {})", xs.join(" "))),
            inner.prop_map(|x| format!("(complement {x})")),
        ]
    })
}

fn bornology() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("(finite-subsets)".to_string()),
        Just("(finite-subsets omega)".to_string()),
        Just("(chain intervals)".to_string()),
        Just("(chain evens-plus)".to_string()),
        Just("(abstract :add aleph0 :cov aleph0 :cof k+)".to_string()),
        Just("(abstract :add 1 :cov 1 :cof 1 :bounded)".to_string()),
    ]
}

fn ballean_over(b: String) -> impl Strategy<Value = String> {
    prop_oneof![
        Just("(metric-nat)".to_string()),
        Just(format!("(down {b})")),
        Just(format!("(up {b})")),
        Just(format!("(b-product {b} (rays))")),
        Just(format!("(bouquet {b} (doubletons))")),
        Just("(macrocube (finite-subsets))".to_string()),
        Just("(comb (metric-nat) (gen pow4) (rays))".to_string()),
        Just("(product (metric-nat) (points 3))".to_string()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Rendering a parsed document and parsing it again changes nothing.
    #[test]
    fn parse_render_round_trip(y in set_expr(), z in set_expr(), b in bornology(), x in bornology().prop_flat_map(ballean_over)) {
        let text = format!(
            "(def Y {y})\n(def Z {z})\n(def B {b})\n(def X {x})\n(def F (piecewise (Y 1/3) (else 1)))\n\
             (check asymptotically-disjoint Y Z :space X)\n(infer X)\n(invariants B)\n"
        );
        let doc = parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        let once = doc.render();
        let again = parse(&once).map_err(|e| TestCaseError::fail(format!("{e}\n{once}")))?.render();
        prop_assert_eq!(once, again);
    }
}
