use ufschur::cli::run;

fn ufschur(args: &str) -> ufschur::cli::Outcome {
    run(std::iter::once("ufschur").chain(args.split_whitespace()))
}

#[test]
fn inverse_json_has_five_terms() {
    let out = ufschur("fgl inverse --trunc 5");
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["trunc"], 5);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 5);
    assert_eq!(terms[0]["m"]["x1"], 1);
    assert_eq!(terms[0]["coeff"][0]["c"], "-1");
}

#[test]
fn q_one_in_one_variable() {
    let out = ufschur("schur pq --kind Q --lambda 1 --nvars 1 --b symbolic --trunc 4 --format csv");
    assert_eq!(out.code, 0, "{}", out.stderr);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[1], "x1,2");
    assert_eq!(lines[2], "x1^2,\"a[1,1]\"");
}

#[test]
fn verify_all_passes() {
    let out = ufschur("verify all --trunc 5 --max-size 4");
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["suites"].as_array().unwrap().len(), 7);
}

#[test]
fn output_does_not_depend_on_threads() {
    for cmd in ["verify stability --trunc 5 --max-size 3", "loc expand --type A --lambda 1 --mu 1 --trunc 3", "hopf coproduct --lambda 2,1 --trunc 4"] {
        let one = ufschur(&format!("{cmd} --threads 1"));
        let four = ufschur(&format!("{cmd} --threads 4"));
        assert_eq!(one.code, 0, "{cmd}: {}", one.stderr);
        assert_eq!(one, four, "{cmd}");
    }
}

#[test]
fn usage_errors_exit_two() {
    for cmd in ["", "fgl", "fgl bogus", "schur pq --lambda 2,2", "schur pq --lambda x", "fgl inverse --trunc 0", "fgl inverse --spec mult:q", "schur sfn --lambda 1,1,1 --nvars 2", "loc phi --lambda 9 --trunc 3"] {
        assert_eq!(ufschur(cmd).code, 2, "{cmd:?}");
    }
}

#[test]
fn help_exits_zero() {
    let out = ufschur("--help");
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("verify"));
}

#[test]
fn gkm_report_and_csv() {
    let out = ufschur("loc gkm --type C --lambda 1 --mu 2 --window 3 --trunc 4 --format csv");
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("passed,true"));
    assert!(out.stdout.contains("pairs_checked,18"));
}

#[test]
fn duals_and_structure_constants() {
    let out = ufschur("dual qhat --lambda 1 --yvars 2 --trunc 3 --format csv");
    assert_eq!(out.stdout, "k,monomial,coefficient\n1,y2,2\n1,y1,2\n");
    let out = ufschur("hopf structure --kind Q --lambda 1 --mu 1 --trunc 3 --format csv");
    assert_eq!(out.stdout, "label,monomial,coefficient\n2,1,1\n1,1,\"a[1,1]\"\n");
}

#[test]
fn writes_to_file() {
    let path = std::env::temp_dir().join(format!("ufschur-cli-{}.json", std::process::id()));
    let out = ufschur(&format!("fgl nseries --n 3 --trunc 3 --out {}", path.display()));
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(text.contains("\"x1\": 1"));
}
