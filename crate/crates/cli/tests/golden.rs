//! Golden runs of the `ielc` binary over the fixture corpus.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use iel_core::kripke::{forces, parse_frame_file, Model};
use iel_core::parser::parse_formula;
use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn ielc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ielc"))
        .args(args)
        .current_dir(fixtures())
        .env_remove("IELC_FUEL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("UTF-8 output")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

/// Runs `args` and checks the exit code and that stdout contains `needle`.
fn expect(args: &[&str], exit: i32, needle: &str) -> String {
    let o = ielc(args);
    let out = stdout(&o);
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(code(&o), exit, "{args:?}\nstdout:\n{out}\nstderr:\n{err}");
    assert!(out.contains(needle), "{args:?}: `{needle}` not in\n{out}");
    out
}

/// Every fixture run with its expected exit code.
const CORPUS: &[(&[&str], i32)] = &[
    (&["check", "axiom8.iel"], 0),
    (&["check", "unit.iel"], 0),
    (&["check", "illtyped.iel"], 1),
    (&["check", "unbound.iel"], 1),
    (&["check", "unannotated.iel"], 1),
    (&["check", "omega.iel"], 1),
    (&["check", "unclosed.iel"], 2),
    (&["check", "let.iel", "--context", "let.ctx"], 0),
    (&["check", "app.iel", "--context", "app.ctx"], 0),
    (&["check", "app.iel", "--context", "badctx.ctx"], 2),
    (&["check", "missing.iel"], 2),
    (&["norm", "letpure.iel"], 0),
    (&["norm", "--trace", "pair.iel"], 0),
    (&["norm", "--trace", "app.iel", "--context", "app.ctx"], 0),
    (&["norm", "--fuel", "0", "pair.iel"], 2),
    (&["norm", "--fuel", "50", "omega.iel"], 2),
    (&["translate", "pure.iel"], 0),
    (&["translate", "let.iel"], 0),
    (&["translate", "--check", "axiom8.iel"], 0),
    (
        &["translate", "--check", "let.iel", "--context", "let.ctx"],
        0,
    ),
    (&["translate", "--check", "illtyped.iel"], 1),
    (
        &[
            "kripke",
            "counter",
            "O false -> false",
            "--logic",
            "iel-",
            "--max-worlds",
            "2",
        ],
        0,
    ),
    (
        &[
            "kripke",
            "valid",
            "p -> O p",
            "--logic",
            "iel-",
            "--max-worlds",
            "4",
        ],
        0,
    ),
    (
        &[
            "kripke",
            "valid",
            "O p -> p",
            "--logic",
            "iel-",
            "--max-worlds",
            "4",
        ],
        1,
    ),
    (&["kripke", "counter", "p -> O p", "--max-worlds", "3"], 1),
    (&["kripke", "valid", "p ->"], 2),
    (&["kripke", "valid", "p", "--max-worlds", "9"], 2),
    (&["kripke", "valid", "p", "--logic", "s4"], 2),
    (&["kripke", "eval", "twochain.model", "O p"], 0),
    (&["kripke", "eval", "twochain.model", "O p -> p"], 1),
    (&["kripke", "eval", "blind.model", "O false"], 0),
    (
        &["kripke", "eval", "blind.model", "O false", "--logic", "iel"],
        2,
    ),
    (&["kripke", "eval", "badframe.model", "p"], 2),
    (&["kripke", "eval", "notup.model", "p"], 2),
    (&["cover", "represent", "diamond.json"], 0),
    (&["cover", "represent", "diamond_join.json"], 0),
    (&["cover", "represent", "nonserial.json"], 2),
    (&["cover", "classify", "nonserial.json"], 0),
    (&["cover", "classify", "diamond.json"], 0),
    (&["cover", "verify", "sl3.json"], 0),
    (&["cover", "verify", "chain3.json"], 0),
    (&["cover", "verify", "nonserial.json"], 0),
    (&["cover", "verify", "nocover.json"], 1),
    (&["cover", "verify", "notlattice.json"], 2),
    (&["cover", "verify", "malformed.json"], 2),
    (&["cover", "verify", "antitone.json"], 2),
    (&["cover", "build", "boolean2.json"], 0),
    (
        &["cover", "truth", "diamond.json", "O (p -> q) -> O p -> O q"],
        0,
    ),
    (&["cover", "truth", "diamond_join.json", "O p -> p"], 1),
    (&["cover", "truth", "chain3.json", "~ O false"], 1),
    (&["cover", "truth", "witness.json", "exists v. P(v)"], 0),
    (&["cover", "truth", "witness.json", "forall v. P(v)"], 1),
    (&["cover", "truth", "witness.json", "exists v. Q(v)"], 2),
    (&["bogus"], 2),
];

#[test]
fn corpus_exit_codes() {
    let files = std::fs::read_dir(fixtures()).unwrap().count();
    assert!(files >= 20, "{files} fixtures");
    for (args, exit) in CORPUS {
        let o = ielc(args);
        assert_eq!(
            code(&o),
            *exit,
            "{args:?}\n{}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for (args, _) in CORPUS {
        for json in [false, true] {
            let mut a: Vec<&str> = args.to_vec();
            if json {
                a.insert(0, "--json");
            }
            let first = ielc(&a);
            let second = ielc(&a);
            assert_eq!(first.stdout, second.stdout, "{a:?}");
            assert_eq!(first.stderr, second.stderr, "{a:?}");
        }
    }
}

/// JSON mode changes the format, never the exit code, and its status
/// field names the same outcome.
#[test]
fn json_reports_agree_with_exit_codes() {
    for (args, exit) in CORPUS {
        if args[0] == "bogus" {
            continue;
        }
        let mut a: Vec<&str> = args.to_vec();
        a.insert(0, "--json");
        let o = ielc(&a);
        assert_eq!(code(&o), *exit, "{a:?}");
        let v: Value = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{a:?}: {e}"));
        let status = v["status"].as_str().unwrap();
        let want: &[&str] = match exit {
            0 => &["ok"],
            1 => &["refuted"],
            _ => &["error", "exhausted"],
        };
        assert!(want.contains(&status), "{a:?}: status {status}");
    }
}

#[test]
fn check_prints_types_and_located_diagnostics() {
    let out = expect(&["check", "axiom8.iel"], 0, "");
    assert_eq!(out, "O (a -> b) -> O a -> O b\n");
    assert_eq!(expect(&["check", "unit.iel"], 0, ""), "a -> O a\n");
    // the operator of `x x` sits on line 2, column 3
    expect(&["check", "illtyped.iel"], 1, "illtyped.iel:2:3: error:");
    expect(&["check", "unbound.iel"], 1, "unbound variable `y`");
    let o = ielc(&["check", "unclosed.iel"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unclosed.iel:2:1"));
    let o = ielc(&["check", "missing.iel"]);
    assert!(o.stdout.is_empty());
}

#[test]
fn norm_examples() {
    assert_eq!(expect(&["norm", "letpure.iel"], 0, ""), "pure m\n");
    let out = expect(&["norm", "--trace", "pair.iel"], 0, "Proj1 @ []");
    assert_eq!(out.lines().last(), Some("m"));
    let o = ielc(&["norm", "letpure.iel"]);
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("warning: term is not typable"));
    let typed = ielc(&["norm", "app.iel", "--context", "app.ctx"]);
    assert!(typed.stderr.is_empty());
    assert_eq!(stdout(&typed), "pure <f x, f x>\n");
}

#[test]
fn fuel_limits_and_the_environment() {
    expect(
        &["norm", "--fuel", "0", "pair.iel"],
        2,
        "no normal form within 0 steps",
    );
    let out = expect(&["norm", "--fuel", "3", "omega.iel"], 2, "within 3 steps");
    assert_eq!(out.matches("Beta @ []").count(), 3);

    let run = |fuel: &str| {
        Command::new(env!("CARGO_BIN_EXE_ielc"))
            .args(["norm", "omega.iel"])
            .current_dir(fixtures())
            .env("IELC_FUEL", fuel)
            .output()
            .unwrap()
    };
    let o = run("7");
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("within 7 steps"));
    assert_eq!(code(&run("seven")), 2);
    // the flag wins over the environment
    let o = Command::new(env!("CARGO_BIN_EXE_ielc"))
        .args(["norm", "--fuel", "2", "omega.iel"])
        .current_dir(fixtures())
        .env("IELC_FUEL", "7")
        .output()
        .unwrap();
    assert!(stdout(&o).contains("within 2 steps"));
}

#[test]
fn translate_examples() {
    assert_eq!(expect(&["translate", "pure.iel"], 0, ""), "val x\n");
    let out = expect(&["translate", "let.iel"], 0, "");
    assert_eq!(out, "let val x = f in let val y = z in val <x, y>\n");
    // the translated type of `O (a -> b) -> O a -> O b`, computed by hand
    let out = expect(&["translate", "--check", "axiom8.iel"], 0, "check: ok");
    assert!(out.contains("type: V (a -> b) -> V a -> V b\n"));
    let out = expect(
        &["translate", "--check", "let.iel", "--context", "let.ctx"],
        0,
        "",
    );
    assert!(out.ends_with("type: V (a * b)\ncheck: ok\n"));
}

/// The printed countermodel is re-read and checked by forcing, and the
/// search is confirmed minimal: no frame with zero worlds exists.
#[test]
fn counter_prints_a_refuting_model() {
    let out = expect(
        &[
            "kripke",
            "counter",
            "O false -> false",
            "--logic",
            "iel-",
            "--max-worlds",
            "2",
        ],
        0,
        "",
    );
    assert_eq!(out, "worlds 1\nat: 0\n");
    let ff = parse_frame_file(&out).unwrap();
    let m = Model::new(ff.frame, ff.valuation).unwrap();
    let phi = parse_formula("O false -> false").unwrap();
    assert_eq!(forces(&m, ff.at.unwrap(), &phi), Ok(false));

    let model = std::fs::read_to_string(fixtures().join("twochain.model")).unwrap();
    let regenerated = expect(&["kripke", "counter", "O p -> p", "--logic", "iel"], 0, "");
    assert_eq!(regenerated, model);
    let ff = parse_frame_file(&model).unwrap();
    let m = Model::new(ff.frame, ff.valuation).unwrap();
    assert_eq!(
        forces(&m, 0, &parse_formula("O p -> p").unwrap()),
        Ok(false)
    );
}

#[test]
fn valid_examples() {
    expect(
        &[
            "kripke",
            "valid",
            "p -> O p",
            "--logic",
            "iel-",
            "--max-worlds",
            "4",
        ],
        0,
        "valid up to 4 worlds",
    );
    expect(
        &[
            "kripke",
            "valid",
            "O p -> p",
            "--logic",
            "iel-",
            "--max-worlds",
            "4",
        ],
        1,
        "countermodel",
    );
    expect(
        &[
            "kripke",
            "valid",
            "O p -> ~~p",
            "--logic",
            "iel",
            "--max-worlds",
            "3",
        ],
        0,
        "valid up to 3",
    );
    expect(
        &[
            "kripke",
            "valid",
            "O p -> ~~p",
            "--logic",
            "iel-",
            "--max-worlds",
            "3",
        ],
        1,
        "",
    );
}

#[test]
fn cover_examples() {
    let out = expect(&["cover", "represent", "diamond.json"], 0, "iso confirmed");
    assert!(out.starts_with("0 -> {0}\na -> {0, a}\nb -> {0, b}\n1 -> {0, a, b, 1}\n"));
    let out = expect(
        &["cover", "classify", "nonserial.json"],
        0,
        "mult_prenuclear=false\n",
    );
    assert!(out.contains("witness serial: v has no R-successor"));
    let out = expect(
        &["cover", "classify", "diamond.json"],
        0,
        "iel_intended=true",
    );
    assert!(!out.contains("witness"));
    expect(
        &["cover", "verify", "nocover.json"],
        1,
        "existence: fails at v",
    );
}

/// `verify` on a locale builds its system; building explicitly and
/// verifying the written system gives the same checks.
#[test]
fn verify_after_build() {
    let out = expect(&["cover", "verify", "sl3.json"], 0, "strict localic: ok");
    let built = expect(&["cover", "build", "sl3.json"], 0, "");
    let dir = std::env::temp_dir().join(format!("ielc-golden-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("sl3-system.json");
    std::fs::write(&file, &built).unwrap();
    let again = expect(&["cover", "verify", file.to_str().unwrap()], 0, "");
    assert_eq!(again, out);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn truth_over_assignments_and_models() {
    expect(
        &["cover", "truth", "diamond.json", "O (p -> q) -> O p -> O q"],
        0,
        "16 tried",
    );
    let out = expect(
        &["cover", "truth", "diamond_join.json", "O p -> p"],
        1,
        "fails under",
    );
    assert!(out.contains("p = {0, a}"));
    expect(
        &["cover", "truth", "witness.json", "exists v. P(v)"],
        0,
        "{0, a, b, 1}",
    );
    expect(
        &["cover", "truth", "witness.json", "forall v. P(v)"],
        1,
        "{0}",
    );
}

#[test]
fn json_schema_fields() {
    let v: Value =
        serde_json::from_str(&expect(&["--json", "check", "illtyped.iel"], 1, "")).unwrap();
    assert_eq!(v["command"], "check");
    assert_eq!(v["span"]["line"], 2);
    assert_eq!(v["span"]["column"], 3);
    assert_eq!(v["path"], serde_json::json!([0, 0]));

    let v: Value =
        serde_json::from_str(&expect(&["--json", "norm", "--trace", "pair.iel"], 0, "")).unwrap();
    assert_eq!(v["normal_form"], "m");
    assert_eq!(v["trace"][0]["rule"], "Proj1");

    let v: Value = serde_json::from_str(&expect(
        &["--json", "cover", "classify", "nonserial.json"],
        0,
        "",
    ))
    .unwrap();
    assert_eq!(v["mult_prenuclear"], false);
    let conditions: BTreeMap<String, String> = v["failures"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| {
            (
                f["condition"].as_str().unwrap().to_string(),
                f["witness"].as_str().unwrap().to_string(),
            )
        })
        .collect();
    assert!(conditions.contains_key("serial"), "{conditions:?}");

    let v: Value =
        serde_json::from_str(&expect(&["--json", "check", "missing.iel"], 2, "")).unwrap();
    assert_eq!(v["status"], "error");
    assert_eq!(v["kind"], "io");
}
