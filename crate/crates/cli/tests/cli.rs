use std::path::PathBuf;
use std::process::Command;

use bredon::abelian::{FGAbelianGroup, GradedGroup};
use bredon::burnside::Coefficients;
use bredon::closed_form::sphere_formula;
use bredon::homology::Theory;
use bredon::spectral::{build_e1, from_json, turn_page};

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bredon")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "tests", "golden", name].iter().collect();
    std::fs::read_to_string(path).expect("golden file")
}

fn groups_from_json(v: &serde_json::Value) -> GradedGroup {
    let mut g = GradedGroup::new();
    for e in v.as_array().unwrap() {
        let rank = e["free_rank"].as_u64().unwrap() as usize;
        let torsion = e["invariant_factors"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap());
        g.add(e["degree"].as_i64().unwrap(), &FGAbelianGroup::from_cyclic_orders(std::iter::repeat_n(0, rank).chain(torsion)));
    }
    g
}

#[test]
fn gamma_sphere_all_routes_agree() {
    let (code, out, _) = run(&["compute", "--p", "3", "--coeff", "constant-z", "--sphere", "1g", "--theory", "homology", "--method", "all"]);
    assert_eq!(code, 0);
    assert!(out.contains("degree 0: Z/3"));
    assert!(out.contains("degree 1: Z/2"));
    assert!(out.contains("verdict: routes agree (formula, chain, spectral)"));
}

#[test]
fn shifted_e2_chart_matches_golden() {
    let (code, out, _) = run(&["chart", "--p", "5", "--l", "-4", "--m", "5", "--coeff", "constant-z", "--page", "2", "--format", "ascii"]);
    assert_eq!(code, 0);
    assert_eq!(out, golden("e2_shifted_orbit_space.txt"));
    let (_, e1, _) = run(&["chart", "--p", "5", "--l", "-4", "--m", "5", "--page", "1"]);
    assert_eq!(e1, golden("e1_shifted_orbit_space.txt"));
    let (_, hom, _) = run(&["chart", "--p", "5", "--l", "0", "--m", "5"]);
    assert_eq!(hom, golden("e1_s5g_homology.txt"));
    let (_, coh, _) = run(&["chart", "--p", "5", "--l", "0", "--m", "5", "--theory", "cohomology"]);
    assert_eq!(coh, golden("e1_s5g_cohomology.txt"));
}

#[test]
fn constant_grid_passes() {
    let (code, out, _) = run(&["verify", "--p", "5", "--max-m", "3", "--max-l", "3", "--coeff", "constant-z"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.ends_with("56 cases, 56 passed, 0 failed\n"));
}

#[test]
fn burnside_homology_grid_reports_the_missing_p_torsion() {
    let (code, out, _) = run(&["verify", "--p", "5", "--max-m", "3", "--max-l", "3", "--coeff", "burnside", "--theory", "homology"]);
    assert_eq!(code, 2);
    let fails: Vec<&str> = out.lines().filter(|l| l.starts_with("FAIL")).collect();
    // six spheres, each flagged by the chain route and by the cofiber sequence
    assert_eq!(fails.len(), 12, "{out}");
    let mut cases: Vec<&str> = fails.iter().map(|l| l.split(':').next().unwrap()).collect();
    cases.dedup();
    assert_eq!(cases.len(), 6);
    assert!(cases.iter().all(|c| c.contains(" sphere ") && (c.contains(" l=0 ") || c.contains(" l=2 "))));
    assert!(fails.iter().all(|l| l.ends_with("+Z/5")));
    let (code, _, _) = run(&["verify", "--p", "5", "--max-m", "3", "--max-l", "3", "--coeff", "burnside", "--theory", "cohomology"]);
    assert_eq!(code, 0);
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["compute", "--sphere", ""],
        vec!["compute", "--sphere", "3x"],
        vec!["compute", "--p", "5", "--sphere", "1g3"],
        vec!["compute", "--p", "9", "--sphere", "1g"],
        vec!["compute", "--sphere", "1g", "--coeff", "rational"],
        vec!["chart", "--l", "0", "--m", "0"],
        vec!["chart", "--l", "0", "--m", "2", "--page", "3"],
        vec!["nonsense"],
    ] {
        let (code, _, err) = run(&args);
        assert_eq!(code, 1, "{args:?}");
        assert!(!err.is_empty());
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["compute", "--p", "5", "--sphere", "2g1+1g2-3a", "--coeff", "burnside", "--theory", "cohomology", "--format", "json"];
    assert_eq!(run(&args).1, run(&args).1);
    let grid = ["verify", "--p", "3,5", "--max-m", "2", "--max-l", "2", "--format", "json"];
    assert_eq!(run(&grid).1, run(&grid).1);
}

#[test]
fn json_round_trips() {
    let (_, out, _) = run(&["compute", "--p", "7", "--sphere", "3g-2a+1e", "--method", "formula", "--theory", "cohomology", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let expected = sphere_formula(7, -2, 3, Coefficients::ConstantZ, Theory::Cohomology).group.shift(1);
    assert_eq!(groups_from_json(&v["routes"][0]["groups"]), expected);
    assert!(v.get("verdict").is_none());

    let (_, out, _) = run(&["chart", "--p", "5", "--l", "-4", "--m", "5", "--page", "2", "--format", "json"]);
    let page = from_json(&serde_json::from_str(&out).unwrap()).unwrap();
    assert_eq!(page, turn_page(&build_e1(5, -4, 5, Coefficients::ConstantZ, Theory::Homology).unwrap()).unwrap());
}

#[test]
fn all_method_always_carries_a_verdict() {
    for format in ["text", "json", "csv"] {
        let (_, out, _) = run(&["compute", "--p", "5", "--sphere", "1a+2g", "--format", format]);
        assert!(out.contains("verdict"), "{format}: {out}");
    }
}

#[test]
fn negative_degrees_are_served_with_provenance() {
    let (code, out, _) = run(&["compute", "--p", "5", "--sphere", "-2g+1a", "--method", "chain"]);
    assert_eq!(code, 0);
    assert!(out.contains("notice: chain route unavailable"));
    assert!(out.contains("extended by duality"));
}

#[test]
fn csv_has_one_row_per_degree() {
    let (_, out, _) = run(&["compute", "--p", "3", "--sphere", "1g", "--method", "formula", "--format", "csv"]);
    assert_eq!(out, "method,degree,free_rank,invariant_factors\nformula,0,0,3\nformula,1,0,2\n");
}

#[test]
fn mackey_axioms_hold() {
    for coeff in ["burnside", "constant-z"] {
        let (code, out, _) = run(&["mackey", "--p", "5", "--coeff", coeff]);
        assert_eq!(code, 0);
        assert!(out.ends_with("axioms: all hold\n"));
    }
    let (_, out, _) = run(&["mackey", "--p", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["levels"][3]["group"], "Z^4");
}

#[test]
fn lower_levels_come_from_chains() {
    let (code, out, _) = run(&["compute", "--p", "5", "--sphere", "4a", "--coeff", "burnside", "--level", "z2", "--method", "all"]);
    assert_eq!(code, 0);
    assert!(out.contains("formula: unavailable"));
    assert!(out.contains("degree 0: Z\n"));
    assert!(out.contains("degree 2: Z/2\n"));
    assert!(out.contains("degree 4: Z\n"));
}
