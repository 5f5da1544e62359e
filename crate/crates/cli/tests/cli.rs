use std::path::Path;
use std::process::{Command, Output};

fn bap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bap")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn solve_trap_row() {
    let out = bap(&[
        "solve",
        "--fixture",
        "exchange_trap",
        "--algo",
        "aa",
        "--construct",
        "randomxygreedy",
        "--seed",
        "7",
        "--no-time",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().nth(2).unwrap();
    assert_eq!(row, "exchange_trap 2x2 0,randomxygreedy/aa,7,-4,0,0,1,0,true");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&bap(&["--help"])), 0);
    assert_eq!(code(&bap(&["solve", "--fixture", "exchange_trap"])), 1);
    assert_eq!(
        code(&bap(&["solve", "--fixture", "exchange_trap", "--algo", "nope"])),
        1
    );
    assert_eq!(code(&bap(&["solve", "--fixture", "nope", "--algo", "2ex"])), 1);
    assert_eq!(code(&bap(&["avg", "--instance", "/nonexistent/file.bap"])), 2);
    let threads = Command::new(env!("CARGO_BIN_EXE_bap"))
        .args(["avg", "--fixture", "exchange_trap"])
        .env("BAP_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&threads), 1);
}

#[test]
fn gen_solve_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = bap(&[
        "gen", "--kind", "uniform", "--m", "4", "--n", "5", "--count", "2", "--seed", "3", "--out", d,
    ]);
    assert_eq!(code(&out), 0);
    let manifest = String::from_utf8(out.stdout).unwrap();
    let first = manifest.lines().next().unwrap().to_string();
    assert!(Path::new(&first).exists());

    let sol = dir.path().join("s.sol");
    let out = bap(&[
        "solve",
        "--instance",
        &first,
        "--algo",
        "aa-2exopt-first-step",
        "--construct",
        "greedy",
        "--solution",
        sol.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let value = text.lines().nth(2).unwrap().split(',').nth(3).unwrap().to_string();

    let ok = bap(&[
        "verify",
        "--instance",
        &first,
        "--solution",
        sol.to_str().unwrap(),
        "--value",
        &value,
    ]);
    assert_eq!(code(&ok), 0);
    let report = String::from_utf8(ok.stdout).unwrap();
    assert!(report.contains("(ok)") && report.contains("<= A: yes"), "{report}");

    let tampered = (value.parse::<i64>().unwrap() - 1).to_string();
    let bad = bap(&[
        "verify",
        "--instance",
        &first,
        "--solution",
        sol.to_str().unwrap(),
        "--value",
        &tampered,
    ]);
    assert_eq!(code(&bad), 3);

    let avg = bap(&["avg", "--fixture", "greedy_pathology"]);
    assert_eq!(String::from_utf8(avg.stdout).unwrap().trim(), "669/2");
}

#[test]
fn experiment_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("grid.toml");
    std::fs::write(
        &config,
        "algorithms = [\"random/2ex\", \"random/aa\"]\nseeds = [1, 2, 3]\noutput = \"r.csv\"\n\n\
         [[instances]]\nfixture = \"exchange_trap\"\n\n[[generate]]\nkind = \"normal\"\nm = 3\nn = 3\nseed = 2\ncount = 1\n",
    )
    .unwrap();
    let out = bap(&["experiment", config.to_str().unwrap(), "--no-time"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("r.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(2).take_while(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 12);
}
