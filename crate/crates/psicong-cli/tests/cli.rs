use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psicong"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("valid JSON on stdout")
}

#[test]
fn derive_catalan_json_matches_catalog_solution() {
    let o = run(&["derive", "--sequence", "catalan", "--alpha", "1", "--json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["mod_exp"], 3);
    assert_eq!(v["epsilon"], -1);
    let rep = psicong::PsiPoly::from_json(&v).unwrap();
    let fixture = psicong::stored_fixture(psicong::SequenceId::Catalan, 3).unwrap();
    assert!(rep.series_eq(&fixture, 800));
}

#[test]
fn verify_all_mod_27() {
    let o = run(&[
        "verify",
        "--sequence",
        "all",
        "--mod",
        "27",
        "--terms",
        "729",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().count() >= 14);
}

#[test]
fn verify_reports_rows_in_input_order() {
    let a = json(&run(&["verify", "--mod", "9", "--terms", "200", "--json"]));
    let b = json(&run(&["verify", "--mod", "9", "--terms", "200", "--json"]));
    assert_eq!(a, b);
    let names: Vec<&str> = a["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["sequence"].as_str().unwrap())
        .collect();
    assert_eq!(names[0], "almost_central_binomial");
    assert!(names.contains(&"free_subgroups,m=5"));
}

#[test]
fn round_trip_through_json() {
    let dir = std::env::temp_dir().join(format!("psicong-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for id in ["motzkin", "schroeder", "eulerian_odd"] {
        let o = run(&["derive", "--sequence", id, "--json"]);
        assert!(o.status.success());
        let path = dir.join(format!("{id}.json"));
        std::fs::write(&path, &o.stdout).unwrap();
        let direct = json(&run(&["verify", "--sequence", id, "--json"]));
        let reread = json(&run(&[
            "verify",
            "--sequence",
            id,
            "--input",
            path.to_str().unwrap(),
            "--json",
        ]));
        assert_eq!(direct, reread);
        assert_eq!(direct["ok"], true);
    }
    // a representation of the wrong sequence is caught
    let path = dir.join("motzkin.json");
    let o = run(&[
        "verify",
        "--sequence",
        "riordan",
        "--input",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn printed_errata_fail_fixture_check() {
    let o = run(&[
        "verify",
        "--sequence",
        "hex_tree",
        "--mod",
        "9",
        "--fixture-check",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["results"][0]["derived_ok"], true);
    assert_eq!(v["results"][0]["fixture_ok"], false);
    assert_eq!(v["results"][0]["fixture_first_mismatch"], 1);
}

#[test]
fn huge_psi_coefficient() {
    let n = "1000000000000000000000";
    let o9 = run(&["psi-coeff", "--power", "3", "--mod", "9", "--n", n]);
    assert!(o9.status.success());
    assert_eq!(stdout(&o9).lines().count(), 1);
    let o27 = json(&run(&[
        "psi-coeff",
        "--power",
        "3",
        "--mod",
        "27",
        "--n",
        n,
        "--json",
    ]));
    let v9: u64 = stdout(&o9)
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(o27["value"].as_u64().unwrap() % 9, v9);
    assert!(stdout(&o9).contains("(mod 9)"));
}

#[test]
fn coefficients() {
    let want = psicong::oracle_terms(psicong::SequenceId::Motzkin, 101, 3).coeff(100);
    let o = json(&run(&[
        "coeff",
        "--sequence",
        "motzkin",
        "--n",
        "100",
        "--mod",
        "27",
        "--json",
    ]));
    assert_eq!(o["value"].as_u64().unwrap(), want);
    assert_eq!(o["method"], "series");
    let o = run(&[
        "coeff",
        "--sequence",
        "motzkin",
        "--n",
        "99999999999999999999",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("supports n <="));
    let o = json(&run(&[
        "coeff",
        "--sequence",
        "free_subgroups",
        "--n",
        "3",
        "--mod",
        "9",
        "--json",
    ]));
    assert_eq!(o["value"], 7);
    assert_eq!(o["method"], "digit rule");
}

#[test]
fn classify_free() {
    assert_eq!(
        stdout(&run(&["classify-free", "--n", "1", "--mod", "3"])).trim(),
        "2 (mod 3)"
    );
    assert_eq!(
        stdout(&run(&["classify-free", "--n", "3", "--mod", "9"])).trim(),
        "7 (mod 9)"
    );
    let f = psicong::sequences::free_subgroup_numbers(1, 100, 3);
    for lambda in 1..100usize {
        let v = json(&run(&[
            "classify-free",
            "--n",
            &lambda.to_string(),
            "--mod",
            "27",
            "--json",
        ]));
        assert_eq!(v["is_one"], f[lambda] == 1, "lambda={lambda}");
    }
}

#[test]
fn minpoly_and_apery_scan() {
    let v = json(&run(&["minpoly", "--terms", "400", "--json"]));
    assert_eq!(v["ok"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 13);
    let o = run(&["apery-scan", "--max-n", "729", "--json"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["counterexamples"].as_array().unwrap().len(), 0);
}

#[test]
fn usage_and_solver_exit_codes() {
    assert_eq!(run(&["verify", "--mod", "7"]).status.code(), Some(2));
    assert_eq!(
        run(&["derive", "--sequence", "nonsense"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["derive", "--sequence", "apery_zeta3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["psi-coeff", "--power", "7", "--n", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn list_ids() {
    let v = json(&run(&["list", "--json"]));
    let ids: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["id"].as_str().unwrap())
        .collect();
    assert!(ids.contains(&"catalan") && ids.contains(&"apery_zeta3"));
}

#[test]
fn data_dir_override() {
    let dir = std::env::temp_dir().join(format!("psicong-data-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    // a fixture file claiming the Catalan series is 1
    let one =
        r#"{"epsilon":-1,"gamma":1,"alpha":1,"mod_exp":3,"coeffs":[{"den_pow":0,"num":[[0,1]]}]}"#;
    std::fs::write(dir.join("catalan_27.json"), one).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_psicong"))
        .args([
            "verify",
            "--sequence",
            "catalan",
            "--fixture-check",
            "--json",
        ])
        .env("PSICONG_DATA_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["results"][0]["fixture_ok"], false);
    std::fs::remove_dir_all(&dir).ok();
}
