// SPDX-License-Identifier: Apache-2.0

use std::process::{Command, Output};

use monocert::report::{Payload, RunReport};

fn monocert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monocert")).args(args).env_remove("MONOCERT_SEED").output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    let out = monocert(args);
    out.status.code().unwrap()
}

#[test]
fn exit_codes_per_subcommand() {
    let cases: &[(&[&str], i32)] = &[
        (&["--help"], 0),
        (&["--version"], 0),
        (&["maps"], 0),
        (&["check", "--map", "identity-2d", "--property", "strong=1"], 0),
        (&["check", "--map", "square-1d", "--property", "pseudo"], 2),
        (&["check", "--map", "square-1d", "--property", "bogus"], 1),
        (&["sweep", "--map", "identity-2d", "--line", "v=1,0", "--budget", "500"], 0),
        (&["sweep", "--map", "saddle-2d", "--line", "v=1,0", "--budget", "2000"], 2),
        (&["sweep", "--map", "saddle-2d", "--line", "v=1,0", "--property", "monotone"], 1),
        (&["theorem1", "--map", "affine-pd-2d", "--line", "v=1,0", "--budget", "500", "--points", "3"], 0),
        (&["theorem1", "--map", "saddle-2d", "--line", "v=1,0", "--budget", "2000", "--points", "3"], 0),
        (&["prop1", "--map", "identity-1d", "--line", "v=1", "--budget", "500"], 0),
        (&["trace", "--map", "identity-2d", "--line", "v=1,0", "--x", "0,-0.5", "--y", "0,0.5"], 0),
        (&["trace", "--map", "saddle-2d", "--line", "v=1,0", "--x", "0,-0.5", "--y", "0,0.5", "--z", "1,0"], 2),
        (&["trace", "--map", "identity-2d", "--line", "v=1,0", "--x", "0,0", "--y", "1,0"], 1),
        (&["jacobian", "--map", "cubic-1d", "--at", "0.5"], 0),
        (&["jacobian", "--map", "saddle-2d", "--at", "0,0"], 2),
        (&["mvt", "--map", "abs-1d", "--x", "-0.5", "--y", "0.7"], 0),
        (&["counterexample", "--budget", "500"], 0),
        (&["counterexample", "--budget", "500", "--line", "v=1,0,0"], 2),
        (&["hierarchy", "--map", "cubic-1d", "--budget", "2000"], 0),
        (&["check", "--map", "file:/nonexistent.json", "--property", "quasi"], 1),
        (&["check", "--map", "identity-2d", "--property", "quasi", "--domain", "box:1:0"], 1),
    ];
    for (args, expected) in cases {
        let out = monocert(args);
        assert_eq!(
            out.status.code(),
            Some(*expected),
            "{args:?}\nstdout: {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn map_file_with_two_selections() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sel.json");
    // Two selections of a set-valued map: each is monotone alone but their union is not.
    std::fs::write(
        &path,
        r#"{"name":"two","dimension":1,"components":["x1"],"selections":[["x1 - 1"]],"domain":"box:-1:1"}"#,
    )
    .unwrap();
    let spec = format!("file:{}", path.display());
    assert_eq!(code(&["check", "--map", &spec, "--property", "monotone", "--budget", "2000"]), 2);
    // Jacobian estimation needs a single-valued map.
    assert_eq!(code(&["jacobian", "--map", &spec, "--at", "0"]), 1);
}

#[test]
fn sweep_csv_export() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let csv_arg = csv.display().to_string();
    let c = code(&["sweep", "--map", "neg-1d", "--line", "v=1", "--lambda", "-1:1:3", "--budget", "1000", "--csv", &csv_arg]);
    assert_eq!(c, 2);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "lambda,status,x1,y1,lhs,rhs,margin");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().any(|r| r.contains("falsified")));
}

#[test]
fn json_report_parses_and_seed_env_applies() {
    let run = |extra: &[&str], env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_monocert"));
        cmd.args(["check", "--map", "square-1d", "--property", "pseudo", "--budget", "800", "--json"]).args(extra);
        match env {
            Some(s) => cmd.env("MONOCERT_SEED", s),
            None => cmd.env_remove("MONOCERT_SEED"),
        };
        RunReport::from_json(&String::from_utf8(cmd.output().unwrap().stdout).unwrap()).unwrap()
    };
    let from_env = run(&[], Some("17"));
    assert_eq!(from_env.seed, 17);
    assert_eq!(from_env.schema_version, 1);
    let explicit = run(&["--seed", "18"], Some("17"));
    assert_eq!(explicit.seed, 18);
    let Payload::Check(v) = &from_env.payload else { panic!("wrong payload") };
    assert!(v.is_falsified());
}
