use std::path::PathBuf;
use std::process::{Command, Output};

use wgwa_core::descriptor::{
    from_json, BandDescriptor, CatalogueDescriptor, CatalogueEntry, ClassificationDescriptor,
    ErrorDescriptor, MatrixDump, OrbitDescriptor, RelationDescriptor, StringDescriptor,
};

const F7: [&str; 6] = ["--fp", "7", "--f", "0,0,1", "--t", "-2,1"];

fn wgwa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wgwa"))
        .args(args)
        .env_remove("WGWA_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = wgwa(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out)
}

fn with_universe<'a>(cmd: &'a str, rest: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![cmd];
    v.extend_from_slice(&F7);
    v.extend_from_slice(rest);
    v
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wgwa-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn orbit_json_reports_the_two_cycle() {
    let text = ok(&with_universe(
        "orbit",
        &["--start", "(h-4)", "--output", "json"],
    ));
    let d: OrbitDescriptor = from_json(&text).unwrap();
    assert!(d.tail.is_empty());
    // listed from the seed, which lies on the cycle
    assert_eq!(d.cycle, vec!["(h-4)", "(h-2)"]);
    let report = d.to_report().unwrap();
    assert_eq!(report.cycle.len(), 2);
}

#[test]
fn orbit_with_tail() {
    let text = ok(&with_universe(
        "orbit",
        &["--start", "(h-3)", "--output", "json"],
    ));
    let d: OrbitDescriptor = from_json(&text).unwrap();
    assert_eq!(d.tail, vec!["(h-3)"]);
    assert_eq!(d.cycle, vec!["(h-2)", "(h-4)"]);
}

#[test]
fn string_descriptor_checks_ok() {
    let desc = ok(&with_universe(
        "string",
        &[
            "--kind",
            "bounded",
            "--window",
            "(h-4),(h-2)",
            "--output",
            "json",
        ],
    ));
    let parsed: StringDescriptor = from_json(&desc).unwrap();
    parsed.to_module().unwrap();
    let path = scratch("bounded.json", &desc);
    let report = ok(&[
        "check",
        "--module",
        path.to_str().unwrap(),
        "--output",
        "json",
    ]);
    let r: RelationDescriptor = from_json(&report).unwrap();
    assert!(r.ok);
    assert!(r.violations.is_empty());
    assert_eq!(r.simple.as_deref(), Some("simple"));
    let text = ok(&["check", "--module", path.to_str().unwrap()]);
    assert!(text.contains("relations: ok"));
}

#[test]
fn matrix_dump_matches_hand_computation() {
    let dump = ok(&with_universe(
        "string",
        &["--kind", "bounded", "--window", "(h-4),(h-2)", "--matrices"],
    ));
    let d: MatrixDump = from_json(&dump).unwrap();
    let v: serde_json::Value = serde_json::from_str(&dump).unwrap();
    assert_eq!(v["p"], 7);
    assert_eq!(v["H"], serde_json::json!([[4, 0], [0, 2]]));
    assert_eq!(v["X"], serde_json::json!([[0, 0], [2, 0]]));
    assert_eq!(v["Y"], serde_json::json!([[0, 1], [0, 0]]));
    d.to_realization().unwrap();
    let path = scratch("dump.json", &dump);
    assert!(ok(&["check", "--module", path.to_str().unwrap()]).contains("relations: ok"));
}

#[test]
fn corrupted_dump_reports_violation() {
    let dump = r#"{"schema":"wgwa/1","p":7,"dim":2,"H":[[4,0],[0,2]],"X":[[0,0],[3,0]],"Y":[[0,1],[0,0]],"f":[0,0,1],"t":[5,1]}"#;
    let path = scratch("bad.json", dump);
    let out = ok(&[
        "check",
        "--module",
        path.to_str().unwrap(),
        "--output",
        "json",
    ]);
    let r: RelationDescriptor = from_json(&out).unwrap();
    assert!(!r.ok);
    assert!(!r.violations.is_empty());
}

#[test]
fn band_round_trip_and_compare() {
    let args = [
        "band",
        "--fp",
        "7",
        "--f",
        "0,0,1",
        "--t",
        "0,1",
        "--cycle-from",
        "(h-2)",
        "--alpha",
        "3",
        "--output",
        "json",
    ];
    let desc = ok(&args);
    let d: BandDescriptor = from_json(&desc).unwrap();
    assert_eq!(d.k, 2);
    assert_eq!(d.dim, 1);
    d.to_module().unwrap();
    let path = scratch("band.json", &desc);
    let report = ok(&[
        "check",
        "--module",
        path.to_str().unwrap(),
        "--output",
        "json",
    ]);
    assert!(from_json::<RelationDescriptor>(&report).unwrap().ok);
    let same = ok(&[
        "band",
        "--fp",
        "7",
        "--f",
        "0,0,1",
        "--t",
        "0,1",
        "--cycle",
        "(h-4),(h-2)",
        "--alpha",
        "3",
        "--compare",
        path.to_str().unwrap(),
    ]);
    assert!(
        same.contains("isomorphic to comparison module: true"),
        "{same}"
    );
    let other = ok(&[
        "band",
        "--fp",
        "7",
        "--f",
        "0,0,1",
        "--t",
        "0,1",
        "--cycle-from",
        "(h-2)",
        "--alpha",
        "5",
        "--compare",
        path.to_str().unwrap(),
    ]);
    assert!(
        other.contains("isomorphic to comparison module: false"),
        "{other}"
    );
}

#[test]
fn heisenberg_constant_text_and_json() {
    let text = ok(&["heisenberg", "--f", "const:2", "--zdot", "1"]);
    assert!(text.contains("Y = 3/c"), "{text}");
    assert!(text.contains("X = c"));
    let json = ok(&[
        "heisenberg",
        "--f",
        "const:2",
        "--zdot",
        "1",
        "--output",
        "json",
    ]);
    let d: CatalogueDescriptor = from_json(&json).unwrap();
    let strings = d
        .items
        .iter()
        .filter(|i| matches!(i, CatalogueEntry::String { .. }))
        .count();
    let bands = d
        .items
        .iter()
        .filter(|i| matches!(i, CatalogueEntry::Band { .. }))
        .count();
    assert_eq!((strings, bands), (1, 1));

    let json = ok(&[
        "heisenberg",
        "--f",
        "const:2",
        "--zdot",
        "-2",
        "--output",
        "json",
    ]);
    let d: CatalogueDescriptor = from_json(&json).unwrap();
    let strings = d
        .items
        .iter()
        .filter(|i| matches!(i, CatalogueEntry::String { .. }))
        .count();
    let bands = d
        .items
        .iter()
        .filter(|i| matches!(i, CatalogueEntry::Band { .. }))
        .count();
    assert_eq!((strings, bands), (1, 2));
}

#[test]
fn heisenberg_other_shapes() {
    let affine = ok(&[
        "heisenberg",
        "--f",
        "affine:2,1",
        "--zdot",
        "3",
        "--output",
        "json",
    ]);
    from_json::<CatalogueDescriptor>(&affine).unwrap();
    let power = ok(&["heisenberg", "--f", "power:2", "--zdot", "outside"]);
    assert!(power.contains("double-infinite"));
    let power_at = ok(&[
        "heisenberg",
        "--f",
        "power:2",
        "--zdot",
        "angle:1/2",
        "--output",
        "json",
    ]);
    from_json::<CatalogueDescriptor>(&power_at).unwrap();
}

#[test]
fn classify_json_round_trips() {
    let json = ok(&with_universe(
        "classify",
        &["--start", "(h-4)", "--output", "json"],
    ));
    let d: ClassificationDescriptor = from_json(&json).unwrap();
    assert!(d
        .string_families
        .iter()
        .any(|s| s.window == vec!["(h-4)", "(h-2)"]));
    let u = d.universe.universe().unwrap();
    for s in &d.string_families {
        s.to_module(&u).unwrap();
    }
    assert!(!d.band_families.is_empty());
    let again: ClassificationDescriptor = from_json(&serde_json::to_string(&d).unwrap()).unwrap();
    assert_eq!(again, d);
}

#[test]
fn dot_output() {
    let dot = ok(&[
        "export-dot",
        "--fp",
        "5",
        "--f",
        "0,0,1",
        "--start",
        "(h-4)",
        "--depth",
        "1",
    ]);
    assert!(dot.starts_with("digraph"));
    for node in ["(h-4)", "(h-3)", "(h-2)", "(h-1)"] {
        assert!(dot.contains(&format!("\"{node}\" [")), "{node} missing");
    }
    assert_eq!(dot.matches("->").count(), 3);
    let zero = ok(&[
        "export-dot",
        "--fp",
        "5",
        "--f",
        "0,0,1",
        "--start",
        "(h-4)",
        "--depth",
        "0",
    ]);
    assert_eq!(zero.matches("[label").count(), 1);
    let classify = ok(&with_universe(
        "classify",
        &["--start", "(h-4)", "--output", "dot"],
    ));
    assert!(classify.starts_with("digraph"));
}

#[test]
fn output_is_deterministic() {
    let args = with_universe("classify", &["--start", "(h-4)", "--output", "json"]);
    assert_eq!(wgwa(&args).stdout, wgwa(&args).stdout);
    let args = ["heisenberg", "--f", "power:2", "--zdot", "outside"];
    assert_eq!(wgwa(&args).stdout, wgwa(&args).stdout);
}

#[test]
fn domain_errors_exit_one_with_json() {
    let out = wgwa(&with_universe(
        "string",
        &[
            "--kind",
            "bounded",
            "--window",
            "(h-2),(h-4)",
            "--output",
            "json",
        ],
    ));
    assert_eq!(out.status.code(), Some(1));
    let e: ErrorDescriptor = from_json(&stdout(&out)).unwrap();
    assert_eq!(e.error, "string");
    let out = wgwa(&with_universe("orbit", &["--start", "(h^2+1)"]));
    // h^2+1 is reducible over F_5 but irreducible over F_7, so it is a valid point
    assert_eq!(out.status.code(), Some(0));
    let out = wgwa(&with_universe(
        "orbit",
        &["--start", "(h^2-1)", "--output", "json"],
    ));
    assert_eq!(out.status.code(), Some(1));
    assert!(from_json::<ErrorDescriptor>(&stdout(&out)).is_ok());
    let missing = wgwa(&["check", "--module", "/nonexistent/module.json"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(wgwa(&[]).status.code(), Some(2));
    assert_eq!(wgwa(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        wgwa(&["orbit", "--fp", "7", "--power", "2", "--start", "zero"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        wgwa(&with_universe(
            "orbit",
            &["--start", "(h-1)", "--orbit-steps", "0"]
        ))
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        wgwa(&[
            "heisenberg",
            "--f",
            "const:2",
            "--zdot",
            "1",
            "--output",
            "dot"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn budget_from_environment() {
    let path = scratch(
        "env.json",
        &ok(&with_universe(
            "string",
            &[
                "--kind",
                "bounded",
                "--window",
                "(h-4),(h-2)",
                "--output",
                "json",
            ],
        )),
    );
    let run = |budget: &str| {
        Command::new(env!("CARGO_BIN_EXE_wgwa"))
            .args(["check", "--module", path.to_str().unwrap()])
            .env("WGWA_BUDGET", budget)
            .output()
            .unwrap()
    };
    assert_eq!(run("1000").status.code(), Some(0));
    assert_eq!(run("0").status.code(), Some(2));
    assert_eq!(run("lots").status.code(), Some(2));
}
