mod common;

use serde_json::Value;
use srtor::cli::{parse_problem, run, Outcome};

use common::*;

fn srtor(args: &[&str]) -> Outcome {
    let mut argv = vec!["srtor".to_string()];
    argv.extend(args.iter().map(|a| match a.strip_prefix('@') {
        Some(name) => corpus_path(name).display().to_string(),
        None => a.to_string(),
    }));
    run(argv)
}

fn json(args: &[&str]) -> Value {
    let mut with = args.to_vec();
    with.push("--json");
    let out = srtor(&with);
    assert_eq!(out.code, 0, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn tor_table_for_weighted_line() {
    let out = srtor(&["tor", "--input", "@wps12.tcx", "--max-degree", "8"]);
    assert_eq!(out.code, 0);
    assert!(
        out.stdout.contains("q=4: Z/2 at (p=0, j=4)"),
        "{}",
        out.stdout
    );
    let v = json(&["tor", "--input", "@wps12.tcx", "--max-degree", "8"]);
    let entries = v["result"]["entries"].as_array().unwrap();
    assert!(entries.iter().all(|e| e["p"] == 0));
    assert!(entries.contains(&serde_json::json!({"p":0,"j":4,"q":4,"rank":0,"torsion":[2]})));
    assert_eq!(v["command"], "tor");
    assert_eq!(v["max_degree"], 8);
}

#[test]
fn ghost_only_complex() {
    let dir = std::env::temp_dir().join(format!("srtor-empty-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("empty.tcx");
    // A ghost vertex: x1 = 0 in Z[K] = Z, so u1 = x1 acts by zero and xi1
    // survives as a free class at (1, 2).
    std::fs::write(&path, "m = 1\nfaces =\nB = [1]\n").unwrap();
    let out = run([
        "srtor",
        "tor",
        "--json",
        "--max-degree",
        "4",
        "--input",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    let entries = v["result"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 2, "{entries:?}");
    assert_eq!(
        entries[0],
        serde_json::json!({"p":0,"j":0,"q":0,"rank":1,"torsion":[]})
    );
    assert_eq!(
        entries[1],
        serde_json::json!({"p":1,"j":2,"q":1,"rank":1,"torsion":[]})
    );
}

#[test]
fn bigcm_failure_is_a_result() {
    let out = srtor(&["check-bigcm", "--input", "@prod1212.tcx"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(
        out.stdout.starts_with("bigcm: FAILS: witness at (p=1, j="),
        "{}",
        out.stdout
    );
    let v = json(&["check-bigcm", "--input", "@prod1212.tcx"]);
    let bigcm = &v["result"]["bigcm"];
    assert_eq!(bigcm["status"], "FAILS");
    assert_eq!(bigcm["bound"], 12);
    assert_eq!(bigcm["witness"]["p"], 1);
    assert!(!bigcm["witness"]["terms"].as_array().unwrap().is_empty());
    assert_eq!(v["result"]["regular_sequence"]["failure"]["index"], 2);
}

#[test]
fn bigcm_holds_on_smooth_square() {
    let v = json(&["check-bigcm", "--input", "@cp1xcp1.tcx"]);
    assert_eq!(
        v["result"]["bigcm"],
        serde_json::json!({"status": "HOLDS_UP_TO", "bound": 12})
    );
}

#[test]
fn local_freeness_lists_determinants() {
    let out = srtor(&["check-local-free", "--input", "@prod1212.tcx"]);
    assert_eq!(out.code, 0);
    assert_eq!(
        out.stdout,
        "PASS\n  det B_{1 2} = 2\n  det B_{2 3} = 4\n  det B_{3 4} = 2\n  det B_{1 4} = -1\n"
    );
    let v = json(&["check-local-free", "--input", "@prod1212.tcx"]);
    assert_eq!(v["result"]["status"], "PASS");
    assert_eq!(
        v["result"]["faces"][1],
        serde_json::json!({"face": [2, 3], "det": 4})
    );
}

#[test]
fn connectedness() {
    let v = json(&["check-connected", "--input", "@wps123.tcx"]);
    assert_eq!(v["result"]["connected"], true);
}

#[test]
fn free_and_depth() {
    let out = srtor(&["check-free", "--input", "@wps12.tcx"]);
    assert!(out.stdout.contains("free_over_R: FAILS"), "{}", out.stdout);
    assert!(out
        .stdout
        .contains("depth estimate: 1 (conditional on j <= 12)"));
    let out = srtor(&["check-free", "--input", "@prod1212.tcx"]);
    assert!(
        out.stdout.contains("depth estimate: <= 1"),
        "{}",
        out.stdout
    );
}

#[test]
fn gkm_and_find_torsion() {
    let out = srtor(&["gkm", "--input", "@gkm_square.tcx", "--element", "x3"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(
        out.stdout.starts_with("Phi(x3) = (0, -u1, -u1, 0)\n"),
        "{}",
        out.stdout
    );
    let v = json(&[
        "find-torsion",
        "--input",
        "@gkm_square.tcx",
        "--extra",
        "u3",
        "--vertex",
        "{1 2}",
    ]);
    assert_eq!(v["result"]["g"], "-u2 + u3");
    assert_eq!(v["result"]["f"], "x1*x2");
    assert_eq!(v["result"]["verified"], true);
    let by_expr = json(&[
        "find-torsion",
        "--input",
        "@gkm_square.tcx",
        "--extra",
        "x2 + x3 - x4",
        "--vertex",
        "1,2",
    ]);
    assert_eq!(by_expr["result"], v["result"]);
}

#[test]
fn gkm_rejects_singular_vertex() {
    let out = srtor(&["gkm", "--input", "@k1.tcx", "--element", "x1"]);
    // K1 is pure with 2-vertex faces and nonsingular B_v, so it is accepted.
    assert_eq!(out.code, 0, "{}", out.stderr);
    let dir = std::env::temp_dir().join(format!("srtor-gkm-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("singular.tcx");
    std::fs::write(
        &path,
        "m = 4\nfaces = {1 2} {2 3} {3 4} {1 4}\nB = [1 1 1 0 ; 0 0 1 1]\n",
    )
    .unwrap();
    let out = run([
        "srtor",
        "gkm",
        "--element",
        "x1",
        "--input",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("not GKM"), "{}", out.stderr);
}

#[test]
fn annihilate_with_extra_form() {
    let v = json(&[
        "annihilate",
        "--input",
        "@gkm_square.tcx",
        "--element",
        "x1*x2",
        "--extra",
        "u3",
        "--max-degree",
        "2",
    ]);
    let list = v["result"]["annihilators"].as_array().unwrap();
    assert_eq!(list.len(), 1, "{list:?}");
    assert_eq!(list[0]["degree"], 2);
    let g = list[0]["element"].as_str().unwrap();
    assert!(g == "-u2 + u3" || g == "u2 - u3", "{g}");
}

#[test]
fn gysin_reports_exactness() {
    let out = srtor(&[
        "gysin",
        "--input",
        "@prod1212.tcx",
        "--max-degree",
        "8",
        "--split",
        "1",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("splitting off row 1"));
    assert!(out.stdout.ends_with("exact: true\n"), "{}", out.stdout);
}

#[test]
fn hilbert_function() {
    let v = json(&["hilbert", "--input", "@cp1xcp1.tcx", "--max-degree", "6"]);
    let ranks: Vec<i64> = v["result"]["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["rank"].as_i64().unwrap())
        .collect();
    let k = square();
    let oracle: Vec<i64> = (0..=3).map(|h| brute_force_hilbert(&k, h)).collect();
    assert_eq!(ranks, oracle);
}

#[test]
fn rational_mode_matches_integral_ranks() {
    let q = json(&[
        "tor",
        "--rational",
        "--input",
        "@prod1212.tcx",
        "--max-degree",
        "10",
    ]);
    let z = json(&["tor", "--input", "@prod1212.tcx", "--max-degree", "10"]);
    let free: Vec<(i64, i64, i64)> = z["result"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["rank"].as_i64().unwrap() > 0)
        .map(|e| {
            (
                e["p"].as_i64().unwrap(),
                e["j"].as_i64().unwrap(),
                e["rank"].as_i64().unwrap(),
            )
        })
        .collect();
    let dims: Vec<(i64, i64, i64)> = q["result"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            (
                e["p"].as_i64().unwrap(),
                e["j"].as_i64().unwrap(),
                e["dim"].as_i64().unwrap(),
            )
        })
        .collect();
    assert_eq!(free, dims);
}

#[test]
fn json_is_byte_stable() {
    for (name, _) in corpus() {
        for cmd in [
            "tor",
            "check-bigcm",
            "check-free",
            "check-local-free",
            "hilbert",
        ] {
            let path = format!("@{name}");
            let args = [cmd, "--input", path.as_str(), "--max-degree", "8", "--json"];
            let a = srtor(&args);
            let b = srtor(&args);
            assert_eq!(a, b, "{cmd} {name}");
        }
    }
}

#[test]
fn render_round_trips_on_corpus() {
    for (name, spec) in corpus() {
        let again = parse_problem(&spec.render()).unwrap();
        assert_eq!(again.complex.faces(), spec.complex.faces(), "{name}");
        assert_eq!(again.b, spec.b, "{name}");
        assert_eq!(again.forms, spec.forms, "{name}");
        assert_eq!(again.render(), spec.render(), "{name}");
    }
}

#[test]
fn exit_codes() {
    for (name, spec) in corpus() {
        if spec.b.is_none() {
            continue;
        }
        let path = format!("@{name}");
        for cmd in [
            "tor",
            "check-bigcm",
            "check-free",
            "check-local-free",
            "check-connected",
        ] {
            let out = srtor(&[cmd, "--input", path.as_str(), "--max-degree", "8"]);
            assert_eq!(out.code, 0, "{cmd} {name}: {}", out.stderr);
        }
    }
    let out = srtor(&["tor", "--input", "@malformed.tcx"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("line 2, column 31"), "{}", out.stderr);
    assert_eq!(srtor(&["tor", "--input", "@does-not-exist.tcx"]).code, 1);
    assert_eq!(srtor(&["tor"]).code, 1);
    assert_eq!(srtor(&["frobnicate"]).code, 1);
    assert_eq!(
        srtor(&[
            "find-torsion",
            "--input",
            "@gkm_square.tcx",
            "--extra",
            "u3",
            "--vertex",
            "1 3"
        ])
        .code,
        1
    );
    let help = srtor(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("check-bigcm"));
}

#[test]
fn parse_examples() {
    let p =
        parse_problem("m = 4\nfaces = {1 2} {2 3} {3 4} {1 4}\nB = [1 0 -2 0 ; 0 2 0 -1]").unwrap();
    assert_eq!(p.complex.faces(), square().faces());
    assert_eq!(p.b, Some(subgroup(&[&[1, 0, -2, 0], &[0, 2, 0, -1]])));
    let p = parse_problem("m = 2\nfaces = {1} {2}\nB = [2 -1]").unwrap();
    assert_eq!(p.b, Some(subgroup(&[&[2, -1]])));
    let err = parse_problem("m = 2\nfaces = {1 3}").unwrap_err();
    assert!(err.to_string().contains("vertex 3 out of range"), "{err}");
}
