mod common;

use std::fs;
use std::process::Command;

use seating::cli::{read_plan, run_solve, SolveArgs, EXIT_INVALID, EXIT_OK};
use seating::pipeline::{score_assignment, SolveConfig};
use tempfile::TempDir;

fn args(dir: &TempDir) -> SolveArgs {
    let (people, spec, tables) = common::toy();
    let files = common::write_csvs(dir.path(), &people, &spec, &tables);
    SolveArgs {
        people: files.people,
        relationships: files.relationships,
        tables: files.tables,
        out: dir.path().join("plan.json"),
        seed: 0,
        epsilon: None,
        max_iter: 100,
        neutral_weight: 0.1,
        oracle: false,
        quiet: true,
    }
}

#[test]
fn toy_solve_writes_four_assignments() {
    let dir = TempDir::new().unwrap();
    let a = args(&dir);
    let run = run_solve(&a);
    assert_eq!(run.exit_code, EXIT_OK, "{}", run.report);
    let plan = read_plan(&a.out).unwrap();
    assert_eq!(plan.assignments.len(), 4);
    assert_eq!(plan.assignments["anya"], plan.assignments["buffy"]);
    assert_eq!(plan.assignments["cordelia"], plan.assignments["dawn"]);
    for row in ["# seated", "volume", "# components"] {
        assert!(run.report.lines().any(|l| l.starts_with(row)), "{}", run.report);
    }
}

#[test]
fn oracle_flag_records_the_optimum() {
    let dir = TempDir::new().unwrap();
    let mut a = args(&dir);
    a.oracle = true;
    let run = run_solve(&a);
    assert_eq!(run.exit_code, EXIT_OK);
    let plan = read_plan(&a.out).unwrap();
    let oracle = plan.oracle.expect("oracle comparison");
    assert!(oracle.same_partition);
    assert_eq!(Some(oracle.objective), plan.objective);
}

#[test]
fn plan_file_round_trips() {
    let dir = TempDir::new().unwrap();
    let a = args(&dir);
    run_solve(&a);
    let plan = read_plan(&a.out).unwrap();
    let (people, spec, tables) = common::toy();
    let score = score_assignment(&people, &spec, &tables, &a.config(), &plan.assignments).unwrap();
    assert_eq!(score.objective, plan.objective);
    assert_eq!(score.per_table, plan.per_table);
    assert_eq!(plan.config.neutral_weight, SolveConfig::default().neutral_weight);
}

#[test]
fn same_seed_gives_identical_bytes() {
    let dir = TempDir::new().unwrap();
    let mut a = args(&dir);
    run_solve(&a);
    let first = fs::read(&a.out).unwrap();
    a.out = dir.path().join("again.json");
    run_solve(&a);
    assert_eq!(first, fs::read(&a.out).unwrap());
}

#[test]
fn bad_category_names_its_line() {
    let dir = TempDir::new().unwrap();
    let a = args(&dir);
    fs::write(
        &a.relationships,
        "person_a,person_b,category\nanya,buffy,keep_together\nbuffy,dawn,keep_close\n",
    )
    .unwrap();
    let run = run_solve(&a);
    assert_eq!(run.exit_code, EXIT_INVALID);
    assert!(run.report.contains(":3:"), "{}", run.report);
    assert!(run.report.contains("keep_close"));
    assert!(!a.out.exists());
}

#[test]
fn missing_header_is_an_error() {
    let dir = TempDir::new().unwrap();
    let a = args(&dir);
    fs::write(&a.people, "anya,Anya\n").unwrap();
    let run = run_solve(&a);
    assert_eq!(run.exit_code, EXIT_INVALID);
    assert!(run.report.contains("expected header `id,name`"));
}

#[test]
fn infeasible_reports_capacity_sum() {
    let dir = TempDir::new().unwrap();
    let a = args(&dir);
    fs::write(&a.tables, "table_id,capacity\nT1,1\nT2,2\n").unwrap();
    let run = run_solve(&a);
    assert_eq!(run.exit_code, EXIT_INVALID);
    assert!(run.report.contains("only 3 seats"), "{}", run.report);
}

#[test]
fn contradictions_warn_without_failing() {
    let dir = TempDir::new().unwrap();
    let a = args(&dir);
    fs::write(
        &a.relationships,
        "person_a,person_b,category\nanya,buffy,keep_together\nanya,cordelia,keep_together\nbuffy,cordelia,keep_apart\n",
    )
    .unwrap();
    fs::write(&a.tables, "table_id,capacity\nT1,3\nT2,3\n").unwrap();
    let run = run_solve(&a);
    assert_eq!(run.exit_code, EXIT_OK);
    assert!(run.report.contains("must sit together"), "{}", run.report);
}

#[test]
fn binary_exit_codes() {
    let dir = TempDir::new().unwrap();
    let a = args(&dir);
    let bin = env!("CARGO_BIN_EXE_seating");
    let ok = Command::new(bin)
        .args(["solve", "--quiet", "--people"])
        .arg(&a.people)
        .arg("--relationships")
        .arg(&a.relationships)
        .arg("--tables")
        .arg(&a.tables)
        .arg("--out")
        .arg(&a.out)
        .status()
        .unwrap();
    assert_eq!(ok.code(), Some(0));
    fs::write(&a.tables, "table_id,capacity\nT1,1\n").unwrap();
    let out = Command::new(bin)
        .args(["solve", "--people"])
        .arg(&a.people)
        .arg("--relationships")
        .arg(&a.relationships)
        .arg("--tables")
        .arg(&a.tables)
        .arg("--out")
        .arg(dir.path().join("x.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("infeasible"));
}
