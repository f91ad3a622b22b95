use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn persinv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_persinv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn features_report_total_volume() {
    let path = fixture("two_intervals.json");
    let out = persinv(&[
        "features",
        path.to_str().unwrap(),
        "--family",
        "p",
        "--max-degree",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let row = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["a"] == serde_json::json!([1]) && r["b"] == serde_json::json!([0]))
        .expect("row a=1, b=0");
    assert_eq!(row["value"], "4/1");
    assert_eq!(row["family"], "p");
}

#[test]
fn features_as_csv() {
    let path = fixture("two_intervals.json");
    let out = persinv(&[
        "features",
        path.to_str().unwrap(),
        "--family",
        "F",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("a,b,family,value,approx,provenance\n"));
    assert!(text.contains("\n1,0,F,4/1,"));
}

#[test]
fn l_shape_has_negative_degenerate_term() {
    let path = fixture("l_shape.json");
    let out = persinv(&["decompose", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 3);
    let negative: Vec<_> = terms.iter().filter(|t| t["coeff"] == -1).collect();
    assert_eq!(negative.len(), 1);
    assert_eq!(negative[0]["x"], serde_json::json!([0, 0]));
    assert_eq!(negative[0]["y"], serde_json::json!([0, 0]));

    let reduced = persinv(&["decompose", path.to_str().unwrap(), "--reduce-degenerate"]);
    let v: Value = serde_json::from_str(&stdout(&reduced)).unwrap();
    // every term has a zero-length side
    assert!(v["terms"].as_array().unwrap().is_empty());
}

#[test]
fn non_commuting_module_is_rejected() {
    let path = fixture("non_commuting.json");
    let out = persinv(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["valid"], false);
    assert_eq!(v["violations"][0]["kind"], "non-commuting");

    let out = persinv(&["rank-table", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("non-commuting"));
}

#[test]
fn valid_module_passes_validation() {
    let out = persinv(&["validate", fixture("l_shape.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "{\n  \"valid\": true,\n  \"violations\": []\n}\n"
    );
}

#[test]
fn malformed_input_reports_position() {
    let out = persinv(&["rank-table", fixture("malformed.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 5"), "{err}");
}

#[test]
fn missing_file_is_an_io_error() {
    let out = persinv(&["rank-table", "/nonexistent/module.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn decompose_then_reconstruct_matches_rank_table() {
    for (i, args) in [
        vec!["gen-random", "--n", "2", "--box", "4", "--seed", "17"],
        vec![
            "gen-random",
            "--n",
            "2",
            "--box",
            "4",
            "--general",
            "--seed",
            "4",
        ],
        vec!["gen-random", "--n", "3", "--box", "3", "--seed", "9"],
    ]
    .into_iter()
    .enumerate()
    {
        let module = scratch(&format!("round-trip-{i}.json"));
        let set = scratch(&format!("round-trip-{i}-set.json"));
        let mut gen = args.clone();
        gen.extend(["-o", module.to_str().unwrap()]);
        assert_eq!(persinv(&gen).status.code(), Some(0));

        let rank = persinv(&["rank-table", module.to_str().unwrap()]);
        assert_eq!(rank.status.code(), Some(0));
        let dec = persinv(&[
            "decompose",
            module.to_str().unwrap(),
            "-o",
            set.to_str().unwrap(),
        ]);
        assert_eq!(dec.status.code(), Some(0));
        let rec = persinv(&["reconstruct", set.to_str().unwrap()]);
        assert_eq!(rec.status.code(), Some(0));
        assert_eq!(rank.stdout, rec.stdout, "round trip {i}");
    }
}

#[test]
fn outputs_are_deterministic() {
    let gen = [
        "gen-random",
        "--n",
        "2",
        "--box",
        "5",
        "--general",
        "--seed",
        "123",
    ];
    let a = persinv(&gen);
    let b = persinv(&gen);
    assert_eq!(a.stdout, b.stdout);
    let other = persinv(&[
        "gen-random",
        "--n",
        "2",
        "--box",
        "5",
        "--general",
        "--seed",
        "124",
    ]);
    assert_ne!(a.stdout, other.stdout);

    let path = scratch("determinism.json");
    std::fs::write(&path, &a.stdout).unwrap();
    for cmd in ["rank-table", "decompose", "features"] {
        let x = persinv(&[cmd, path.to_str().unwrap()]);
        let y = persinv(&[cmd, path.to_str().unwrap()]);
        assert_eq!(x.status.code(), Some(0), "{cmd}");
        assert_eq!(x.stdout, y.stdout, "{cmd}");
    }
}

#[test]
fn recover_one_parameter_module() {
    let out = persinv(&["recover", fixture("one_parameter.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["exact"], true);
    let cubes: Vec<(Value, Value)> = v["cubes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["x"].clone(), c["y"].clone()))
        .collect();
    assert_eq!(
        cubes,
        vec![
            (serde_json::json!([1]), serde_json::json!([4])),
            (serde_json::json!([2]), serde_json::json!([3])),
        ]
    );
}

#[test]
fn check_algebra_table() {
    let out = persinv(&["check-algebra", "--n", "1", "--max-degree", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().skip(1).all(|l| l.ends_with("PASS")));
    assert!(text.contains("pascal-identity"));
}
