//! Exit-code and stream contracts of the `fsm` binary.

use std::io::Write;
use std::process::{Command, Output};

const FIXTURE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/ab.fsm");

fn fsm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fsm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn fix(name: &str) -> String {
    format!("{FIXTURE}#{name}")
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&fsm(&["--help"])), 0);
    assert_eq!(code(&fsm(&["--version"])), 0);
    assert!(stdout(&fsm(&["--version"])).contains("fsm"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&fsm(&[])), 2);
    assert_eq!(code(&fsm(&["no-such-command"])), 2);
    assert_eq!(code(&fsm(&["equiv", "--kind", "nonsense", &fix("A"), &fix("B")])), 2);
}

#[test]
fn show_prints_canonical_form() {
    let out = fsm(&["show", &fix("A")]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("machine A {"));
    assert!(stdout(&out).contains("alphabet: a, b, c;"));
    assert!(stderr(&out).is_empty());
}

#[test]
fn missing_file_and_missing_machine_exit_two() {
    let out = fsm(&["show", "/no/such/file.fsm"]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).is_empty());
    assert!(stderr(&out).starts_with("fsm: "));

    let out = fsm(&["show", &fix("C")]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("no machine named `C`"));

    // Two machines, no selector.
    let out = fsm(&["show", FIXTURE]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("select one"));
}

#[test]
fn single_machine_files_need_no_selector() {
    let mut file = tempfile::NamedTempFile::with_suffix(".fsm").unwrap();
    write!(
        file,
        "machine Only {{ alphabet: a; states: s; initial: s; accepting: s; s - a -> s; }}"
    )
    .unwrap();
    let path = file.path().to_str().unwrap();
    let out = fsm(&["show", path]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("machine Only {"));
}

#[test]
fn accepts_signals_through_the_exit_code() {
    assert_eq!(code(&fsm(&["accepts", &fix("A"), "ab"])), 0);
    assert_eq!(code(&fsm(&["accepts", &fix("B"), "ab"])), 0);
    assert_eq!(code(&fsm(&["accepts", &fix("A"), "ac"])), 1);
    assert_eq!(code(&fsm(&["accepts", &fix("A"), ""])), 1);
    // Foreign symbol: an input error, not a rejection.
    let out = fsm(&["accepts", &fix("A"), "az"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("alphabet"));
}

#[test]
fn comma_form_words_are_split_on_commas() {
    let mut file = tempfile::NamedTempFile::with_suffix(".fsm").unwrap();
    write!(
        file,
        "machine W {{ alphabet: go, stop; states: s, t; initial: s; accepting: t; s - go -> t; t - stop -> s; }}"
    )
    .unwrap();
    let path = file.path().to_str().unwrap();
    assert_eq!(code(&fsm(&["accepts", path, "go,"])), 0);
    assert_eq!(code(&fsm(&["accepts", path, "go,stop"])), 1);
    assert_eq!(code(&fsm(&["accepts", path, "go,stop,go"])), 0);
}

#[test]
fn conversion_output_reparses_isomorphically() {
    for command in ["determinize", "minimize", "complete"] {
        let source = if command == "complete" { fix("A") } else { fix("B") };
        let source = if command == "minimize" { fix("A") } else { source };
        let out = fsm(&[command, &source]);
        assert_eq!(code(&out), 0, "{command} failed: {}", stderr(&out));
        let doc = fsmkit::format::parse(&stdout(&out))
            .unwrap_or_else(|e| panic!("{command} output does not reparse: {e}"));
        assert_eq!(doc.len(), 1);
    }

    // Round-trip check against the library result for determinize.
    let out = fsm(&["determinize", &fix("B")]);
    let doc = fsmkit::format::parse(&stdout(&out)).unwrap();
    let (_, def) = doc.single().unwrap();
    let fixture = fsmkit::format::parse(&std::fs::read_to_string(FIXTURE).unwrap()).unwrap();
    let b = fixture.get("B").unwrap().as_recognizer().unwrap();
    let expected = fsmkit::lang::determinize(b);
    assert!(fsmkit::iso::isomorphism_recognizer(def.as_recognizer().unwrap(), &expected).is_some());
}

#[test]
fn minimize_rejects_nondeterministic_input() {
    let out = fsm(&["minimize", &fix("B")]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("determinism required"));
}

#[test]
fn encode_moore_variants() {
    let out = fsm(&["encode-moore", &fix("B"), "--output", "enabled"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("output B1 = {b};"));

    let out = fsm(&["encode-moore", &fix("A"), "--output", "accept"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("output A2 = true;"));
}

#[test]
fn equiv_language_contract() {
    let out = fsm(&["equiv", "--kind", "language", &fix("A"), &fix("B")]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "equivalent\n");

    // Dropping B's accepting state breaks the equivalence on `ab`.
    let mut file = tempfile::NamedTempFile::with_suffix(".fsm").unwrap();
    write!(
        file,
        "machine E {{ alphabet: a, b, c; states: B0, B1, B1x, B2, B3; initial: B0; accepting:;
          B0 - a -> B1; B0 - a -> B1x; B1 - b -> B2; B1x - c -> B3; }}"
    )
    .unwrap();
    let path = file.path().to_str().unwrap();
    let out = fsm(&["equiv", "--kind", "language", &fix("A"), path]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("counterexample ab"));
    assert!(stderr(&out).is_empty());
}

#[test]
fn equiv_alphabet_mismatch_exits_two() {
    let mut file = tempfile::NamedTempFile::with_suffix(".fsm").unwrap();
    write!(file, "machine Z {{ alphabet: z; states: s; initial: s; accepting:; }}").unwrap();
    let path = file.path().to_str().unwrap();
    let out = fsm(&["equiv", "--kind", "language", &fix("A"), path]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("alphabet"));
}

#[test]
fn equiv_covering_reports_the_failing_direction() {
    let out = fsm(&["equiv", "--kind", "covering", &fix("A"), &fix("B")]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("not covering-equivalent"));
    assert!(text.contains("B does not cover A"), "got: {text}");
    assert!(text.contains("stuck state"));
    assert!(!text.contains("A does not cover B"));
}

#[test]
fn equiv_bisim_reports_initial_blocks() {
    let out = fsm(&["equiv", "--kind", "bisim", &fix("A"), &fix("B")]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("not bisimilar"));
    assert!(stdout(&out).contains("initial blocks"));

    let out = fsm(&["equiv", "--kind", "bisim", &fix("A"), &fix("A")]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("bisimilar"));
}

#[test]
fn equiv_output_kind_mismatch_exits_two() {
    // Accept-bit recognizer vs enabled-set Moore machine.
    let mut file = tempfile::NamedTempFile::with_suffix(".fsm").unwrap();
    write!(
        file,
        "machine M {{ alphabet: a, b, c; states: s; initial: s; output s = {{a}}; s - a -> s; }}"
    )
    .unwrap();
    let path = file.path().to_str().unwrap();
    let out = fsm(&["equiv", "--kind", "bisim", &fix("A"), path]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("output kind"));
}

#[test]
fn covers_contract() {
    let out = fsm(&["covers", &fix("A"), &fix("B")]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "covers\n");

    let out = fsm(&["covers", &fix("B"), &fix("A")]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("stuck state"));
}

#[test]
fn experiment_exit_codes() {
    assert_eq!(code(&fsm(&["experiment", &fix("A"), "ab"])), 0);
    assert_eq!(code(&fsm(&["experiment", &fix("B"), "ab"])), 3);
    // Pressing b first blocks every run of B.
    let out = fsm(&["experiment", &fix("B"), "b"]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), "Blocked(0)\n");
}

#[test]
fn product_wirings() {
    use fsmkit::compose::{general_product, ProductSpec};
    use fsmkit::encode::lts_to_moore;

    let fixture = fsmkit::format::parse(&std::fs::read_to_string(FIXTURE).unwrap()).unwrap();
    let a = fixture.get("A").unwrap().as_recognizer().unwrap().clone();
    let b = fixture.get("B").unwrap().as_recognizer().unwrap().clone();

    // Printed machines re-parse to something isomorphic to the in-memory
    // product.
    let out = fsm(&["product", FIXTURE, "--wiring", "sync"]);
    assert_eq!(code(&out), 0);
    let doc = fsmkit::format::parse(&stdout(&out)).expect("product output reparses");
    let printed = doc.single().unwrap().1.as_moore().unwrap();
    let expected = general_product(
        &ProductSpec::synchronized(vec![lts_to_moore(a.ts()), lts_to_moore(b.ts())]).unwrap(),
    )
    .unwrap();
    assert!(fsmkit::iso::isomorphism_moore(printed, &expected).is_some());

    let out = fsm(&["product", FIXTURE, "--wiring", "experimenter:ab"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("press"));
    let doc = fsmkit::format::parse(&stdout(&out)).unwrap();
    let printed = doc.single().unwrap().1.as_moore().unwrap();
    let presses = fsmkit::Word::new([
        fsmkit::Symbol::new("a").unwrap(),
        fsmkit::Symbol::new("b").unwrap(),
    ]);
    let expected =
        general_product(&ProductSpec::experimenter(lts_to_moore(a.ts()), &presses).unwrap())
            .unwrap();
    assert!(fsmkit::iso::isomorphism_moore(printed, &expected).is_some());

    let out = fsm(&["product", FIXTURE, "--wiring", "bogus"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("unknown wiring"));
}

#[test]
fn regex_commands() {
    let out = fsm(&["regex2nfa", "a(b|c)", "--alphabet", "a,b,c"]);
    assert_eq!(code(&out), 0);
    let doc = fsmkit::format::parse(&stdout(&out)).unwrap();
    let (_, def) = doc.single().unwrap();
    let nfa = def.as_recognizer().unwrap();
    let ab = fsmkit::Word::new([
        fsmkit::Symbol::new("a").unwrap(),
        fsmkit::Symbol::new("b").unwrap(),
    ]);
    assert!(nfa.accepts(&ab).unwrap());

    // Literal outside the alphabet.
    let out = fsm(&["regex2nfa", "d", "--alphabet", "a,b,c"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("alphabet"));

    // Syntax error.
    let out = fsm(&["regex2nfa", "a(", "--alphabet", "a"]);
    assert_eq!(code(&out), 2);

    // nfa2regex output parses and denotes the same language.
    let out = fsm(&["nfa2regex", &fix("A")]);
    assert_eq!(code(&out), 0);
    let expr = fsmkit::regex::Regex::parse(stdout(&out).trim()).unwrap();
    let fixture = fsmkit::format::parse(&std::fs::read_to_string(FIXTURE).unwrap()).unwrap();
    let a = fixture.get("A").unwrap().as_recognizer().unwrap();
    let back = fsmkit::regex::regex_to_nfa(&expr, a.ts().alphabet()).unwrap();
    assert!(fsmkit::lang::language_equivalent(&back, a).unwrap().is_equivalent());
}

#[test]
fn parse_errors_carry_positions() {
    let mut file = tempfile::NamedTempFile::with_suffix(".fsm").unwrap();
    write!(file, "machine M {{\n  alphabet: a;\n  states: s;\n  initial: s;\n  accepting:;\n  s - d -> s;\n}}").unwrap();
    let path = file.path().to_str().unwrap();
    let out = fsm(&["show", path]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("6:7"), "got: {}", stderr(&out));
    assert!(stderr(&out).contains("unknown symbol `d`"));
}

#[test]
fn dot_output_shape() {
    let out = fsm(&["dot", &fix("A")]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("digraph \"A\" {"));
    assert!(text.trim_end().ends_with('}'));
    assert!(text.contains("doublecircle"));
}
