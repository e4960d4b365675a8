use std::fs;

use leapfrog_cli::{run, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION};
use leapfrog_core::io::{load_instance, parse_campaign_witnesses, parse_instance, PAPER_EXAMPLE};
use leapfrog_core::search::{replay, Conjecture};

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn leapfrog(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("leapfrog").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

const TABLE_ROWS: [&str; 2] = [
    "g(.,x2) |  T  T  B  B  B  T  T",
    "g(x6,.) |  T  T  A  A  A  T  T",
];

#[test]
fn equilibria_of_the_builtin_example() {
    let r = leapfrog(&["equilibria", "--builtin", "paper-example"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let line = r
        .out
        .lines()
        .find(|l| l.starts_with("(x6,x2)"))
        .expect("equilibrium listed");
    assert!(
        line.contains("MUTUAL-LEAPFROG") && line.contains("TIED"),
        "{line}"
    );
    for row in TABLE_ROWS {
        assert!(r.out.contains(row), "{}", r.out);
    }
}

#[test]
fn table_rows() {
    let r = leapfrog(&["table", "--builtin", "paper-example", "--profile", "6,2"]);
    assert_eq!(r.code, EXIT_OK);
    for row in TABLE_ROWS {
        assert!(r.out.contains(row), "{}", r.out);
    }
    let m = leapfrog(&[
        "--format",
        "machine",
        "table",
        "--builtin",
        "paper-example",
        "--profile",
        "6,2",
    ]);
    let v: serde_json::Value = serde_json::from_str(&m.out).unwrap();
    assert_eq!(v["against_t"], "TTBBBTT");
    assert_eq!(v["against_s"], "TTAAATT");
}

#[test]
fn axioms_report() {
    let r = leapfrog(&["axioms", "--builtin", "paper-example"]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(r.out.matches(": pass").count(), 6, "{}", r.out);
    assert!(
        r.out.contains("cross-side agreement: FAIL (a,b)=(1,1)"),
        "{}",
        r.out
    );
    assert!(r.out.contains("fixed participation: false"));

    let m = leapfrog(&[
        "axioms",
        "--builtin",
        "paper-example",
        "--format",
        "machine",
    ]);
    let v: serde_json::Value = serde_json::from_str(&m.out).unwrap();
    assert_eq!(v["cross_side_agreement"]["witness"]["a"], 1);
    assert_eq!(v["cross_side_agreement"]["witness"]["b"], 1);
    assert_eq!(v["fixed_participation"], false);
}

#[test]
fn classify_reports_a_deviation() {
    let r = leapfrog(&["classify", "--builtin", "paper-example", "--profile", "3,2"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains("outcome B"));
    assert!(r.out.contains("party A gains by moving to x1"), "{}", r.out);
    let r = leapfrog(&["classify", "--builtin", "paper-example", "--profile", "6,2"]);
    assert!(r.out.contains("Nash equilibrium: yes"));
}

#[test]
fn validate_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    fs::write(&good, PAPER_EXAMPLE).unwrap();
    let r = leapfrog(&["validate", good.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.out.starts_with("valid: 7 policies, 4 voters"));

    let reversed = dir.path().join("reversed.json");
    fs::write(
        &reversed,
        PAPER_EXAMPLE.replacen("\"attraction\": [1, 2]", "\"attraction\": [2, 1]", 1),
    )
    .unwrap();
    let r = leapfrog(&["validate", reversed.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.err.contains("attraction-reversed"), "{}", r.err);

    let unknown = dir.path().join("unknown.json");
    fs::write(
        &unknown,
        PAPER_EXAMPLE.replacen("\"policies\"", "\"colour\": 1, \"policies\"", 1),
    )
    .unwrap();
    let r = leapfrog(&["validate", unknown.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.err.contains("colour"), "{}", r.err);

    let binary = dir.path().join("binary.json");
    fs::write(&binary, [0xff, 0xfe, 0x00, 0x7b]).unwrap();
    assert_eq!(
        leapfrog(&["validate", binary.to_str().unwrap()]).code,
        EXIT_USAGE
    );
    assert_eq!(
        leapfrog(&["validate", "/no/such/file.json"]).code,
        EXIT_USAGE
    );
}

#[test]
fn usage_errors() {
    for args in [
        &["validate"][..],
        &["validate", "--builtin", "nope"],
        &["table", "--builtin", "paper-example"],
        &["table", "--builtin", "paper-example", "--profile", "9,2"],
        &[
            "table",
            "--builtin",
            "paper-example",
            "--profile",
            "six,two",
        ],
        &["equilibria", "--builtin", "paper-example", "--bogus"],
        &["falsify", "prop9"],
        &["falsify", "thm1", "--m", "1..3"],
        &["falsify", "thm1", "--n", "5..2"],
        &["falsify", "thm1", "--party-mode", "weird"],
        &["falsify", "thm1", "--threads", "0"],
        &["frobnicate"],
        &[],
    ] {
        let r = leapfrog(args);
        assert_eq!(r.code, EXIT_USAGE, "{args:?}");
        assert!(!r.err.is_empty(), "{args:?}");
    }
    assert_eq!(leapfrog(&["--help"]).code, EXIT_OK);
}

#[test]
fn falsify_exit_codes_and_witnesses() {
    let clean = leapfrog(&["falsify", "prop1", "--trials", "500", "--seed", "3"]);
    assert_eq!(clean.code, EXIT_OK);
    assert!(clean.out.contains("violations:            0"));

    let args = [
        "falsify",
        "thm1",
        "--trials",
        "500",
        "--seed",
        "3",
        "--inject-paper-example",
        "--no-precondition",
        "--format",
        "machine",
    ];
    let dirty = leapfrog(&args);
    assert_eq!(dirty.code, EXIT_VIOLATION);
    let witnesses = parse_campaign_witnesses(&dirty.out).unwrap();
    assert_eq!(witnesses[0].trial, 0);
    assert_eq!(witnesses[0].profile, Some([6, 2]));
    for w in &witnesses {
        assert!(replay(Conjecture::Thm1, &w.to_violation().unwrap()));
    }

    // machine output is independent of the worker count
    let mut threaded = args.to_vec();
    threaded.extend(["--threads", "2"]);
    assert_eq!(leapfrog(&threaded).out, dirty.out);

    // prop2 draws fully attracted electorates unless told otherwise
    let prop2 = leapfrog(&["falsify", "prop2", "--trials", "200", "--format", "machine"]);
    let v: serde_json::Value = serde_json::from_str(&prop2.out).unwrap();
    assert_eq!(v["config"]["attraction_mode"], "full");
    assert_eq!(v["qualifying"], 200);
    let prop2 = leapfrog(&[
        "falsify",
        "prop2",
        "--trials",
        "200",
        "--attraction-mode",
        "random",
        "--format",
        "machine",
    ]);
    let v: serde_json::Value = serde_json::from_str(&prop2.out).unwrap();
    assert_eq!(v["config"]["attraction_mode"], "random");

    let vacuous = leapfrog(&["falsify", "prop4", "--trials", "20", "--format", "machine"]);
    assert_eq!(vacuous.code, EXIT_OK);
    assert!(vacuous.err.contains("warning"));
}

#[test]
fn gen_writes_a_loadable_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inst.json");
    let p = path.to_str().unwrap();
    let r = leapfrog(&[
        "gen",
        "--seed",
        "5",
        "--trial",
        "3",
        "--m",
        "6..6",
        "--party-mode",
        "symmetric",
        "--out",
        p,
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let text = fs::read_to_string(&path).unwrap();
    let inst = load_instance(&text).unwrap();
    assert_eq!(inst.size(), 6);
    assert_eq!(parse_instance(&text).unwrap().to_canonical(), text);
    assert_eq!(leapfrog(&["validate", p]).code, EXIT_OK);
    assert_eq!(leapfrog(&["gen"]).code, EXIT_USAGE);
}

#[test]
fn instance_without_equilibria() {
    // no pure-strategy equilibrium: found by enumeration over random draws
    let doc = r#"{
  "parties": {"A": {"ideal": 2, "ranking": [[2], [1], [3], [4]]}, "B": {"ideal": 4, "ranking": [[4], [3], [2], [1]]}},
  "policies": 4,
  "voters": [
    {"attraction": [3, 4], "ideal": 4, "ranking": [[4], [3], [2], [1]]},
    {"attraction": [2, 4], "ideal": 3, "ranking": [[3], [2], [4], [1]]}
  ]
}"#;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("none.json");
    fs::write(&path, doc).unwrap();
    let p = path.to_str().unwrap();
    let r = leapfrog(&["equilibria", p]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.out.contains("no equilibria"), "{}", r.out);
    let r = leapfrog(&["--format", "machine", "equilibria", p]);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["equilibria"], serde_json::json!([]));
}
