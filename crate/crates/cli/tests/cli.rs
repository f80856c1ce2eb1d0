//! Black-box tests of the binary: exit codes, output shapes, and
//! determinism of the JSON mode.

use std::fs;
use std::process::{Command, Output};

fn isc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isc"))
        .args(args)
        .output()
        .unwrap()
}

fn emit_fixture(dir: &std::path::Path, id: &str) -> String {
    let out = isc(&["fixtures", "emit", id]);
    assert!(out.status.success());
    let path = dir.join(format!("{id}.json"));
    fs::write(&path, &out.stdout).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn check_prints_truth_values() {
    let dir = tempfile::tempdir().unwrap();
    let model = emit_fixture(dir.path(), "fig1.C");
    let out = isc(&["check", "--model", &model, "--point", "Y", "--formula", "<a> !alive(c)"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "True");

    let out = isc(&["check", "--model", &model, "--point", "X", "--formula", "p@c"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "Undef");

    // Points can also be spelled as vertex lists.
    let out = isc(&["check", "--model", &model, "--point", "a1,b0p,c1", "--formula", "alive(c)"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "True");

    // The constants expand over the model's least agent.
    let out = isc(&["check", "--model", &model, "--point", "X", "--formula", "true"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "True");
    let out = isc(&["check", "--model", &model, "--point", "X", "--formula", "false"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "False");
}

#[test]
fn json_mode_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let model = emit_fixture(dir.path(), "fig1.C");
    let args = [
        "check", "--model", &model, "--point", "X", "--formula", "[a] p@c", "--json",
    ];
    let first = isc(&args);
    let second = isc(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let parsed: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(parsed["schema"], "isc/1");
    assert_eq!(parsed["result"], "True");
}

#[test]
fn exit_codes() {
    // Usage error: unknown flag.
    let out = isc(&["check", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));

    // Usage error: refused bisimulation kind.
    let out = isc(&[
        "bisim", "--kind", "lminus", "--left", "x.json", "--left-point", "X", "--right",
        "y.json", "--right-point", "X",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let model = emit_fixture(dir.path(), "fig1.C");

    // Semantic error: missing model file.
    let out = isc(&["check", "--model", "missing.json", "--point", "X", "--formula", "p@a"]);
    assert_eq!(out.status.code(), Some(1));

    // Semantic error: transform of an already defined formula.
    let out = isc(&["transform", "--model", &model, "--point", "Y", "--formula", "p@c"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("already defined"));

    // Semantic error: distinguishing bisimilar points.
    let out = isc(&[
        "distinguish", "--left", &model, "--left-point", "X", "--right", &model,
        "--right-point", "X",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bisimilar"));
}

#[test]
fn bisim_kinds() {
    let dir = tempfile::tempdir().unwrap();
    let left = emit_fixture(dir.path(), "ex.bisim.left");
    let mid = emit_fixture(dir.path(), "ex.bisim.mid");
    let out = isc(&[
        "bisim", "--left", &left, "--left-point", "X", "--right", &mid, "--right-point", "Zp",
    ]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "bisimilar");

    let m = emit_fixture(dir.path(), "ex.bisim2.M");
    let mp = emit_fixture(dir.path(), "ex.bisim2.Mp");
    let life = isc(&[
        "bisim", "--kind", "life", "--left", &m, "--left-point", "X", "--right", &mp,
        "--right-point", "Zp",
    ]);
    assert_eq!(String::from_utf8_lossy(&life.stdout).trim(), "bisimilar");
    let std_kind = isc(&[
        "bisim", "--kind", "standard", "--left", &m, "--left-point", "X", "--right", &mp,
        "--right-point", "Zp",
    ]);
    assert_eq!(String::from_utf8_lossy(&std_kind.stdout).trim(), "not bisimilar");
}

#[test]
fn transform_with_explicit_order() {
    let dir = tempfile::tempdir().unwrap();
    let model = emit_fixture(dir.path(), "fig4.C");
    let formula = "p@b & <c><d> p@a & <c><e> !p@a";
    let out = isc(&[
        "transform", "--model", &model, "--point", "X", "--formula", formula, "--order",
        "Y2;X;Y3",
    ]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "<c><d> alive(a)");

    let out = isc(&["transform", "--model", &model, "--point", "X", "--formula", formula]);
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim(),
        "<c>(alive(d) & <d> alive(a))"
    );
}

#[test]
fn lifetree_text_and_dot() {
    let out = isc(&["lifetree", "--formula", "<a>(<b> !p@d & <c> p@d)"]);
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(text.contains("{a}"));
    assert!(text.contains("--a--> {a,b,c}"));

    let out = isc(&["lifetree", "--formula", "<a>(<b> !p@d & <c> p@d)", "--dot"]);
    let dot = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(dot.starts_with("graph lifetree {"));
    assert!(dot.contains("label=\"{a,b,c}\""));
}

#[test]
fn convert_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let model = emit_fixture(dir.path(), "fig1.C");
    let kripke = dir.path().join("k.json");
    let out = isc(&[
        "convert", "--to", "kripke", "--in", &model, "--out", kripke.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let back = dir.path().join("c.json");
    let out = isc(&[
        "convert", "--to", "simplicial", "--in", kripke.to_str().unwrap(), "--out",
        back.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    // The round-tripped model evaluates the example formula the same way.
    let out = isc(&[
        "check", "--model", back.to_str().unwrap(), "--point", "Y", "--formula",
        "<a> !alive(c)",
    ]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "True");
}

#[test]
fn fixtures_list_covers_the_registry() {
    let out = isc(&["fixtures", "list"]);
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    for id in ["fig1.C", "fig4.C", "ex.bisim2.Mpp", "prop4.path"] {
        assert!(text.contains(id), "{id} missing from list");
    }
}

#[test]
fn equiv_fragments() {
    let dir = tempfile::tempdir().unwrap();
    let c = emit_fixture(dir.path(), "fig1.C");
    let cp = emit_fixture(dir.path(), "fig1.Cp");
    let base = [
        "equiv", "--depth", "1", "--size", "3", "--left", &c, "--left-point", "Y", "--right",
        &cp, "--right-point", "Yp",
    ];
    let mut minus = base.to_vec();
    minus.extend(["--fragment", "lminus"]);
    let out = isc(&minus);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "equal");

    let mut plus = base.to_vec();
    plus.extend(["--fragment", "lplus"]);
    let out = isc(&plus);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("witness: "));

    let mut bad = base.to_vec();
    bad.extend(["--fragment", "l"]);
    assert_eq!(isc(&bad).status.code(), Some(2));
}
