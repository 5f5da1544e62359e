//! Subcommand implementations. Each writes its report to `out`.

use std::collections::HashSet;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Duration;

use bap::instgen::{fixtures, generate, read_instance, write_instance, GenSpec, InstanceKind};
use bap::objective::{at_most, format_rational};
use bap::{
    average_value, evaluate, multistart, two_exchange_bound, Algorithm, BapInstance, Budget, Constructor, Exec, Search,
    Solution,
};
use clap::Args;

use crate::config::{Experiment, ExperimentConfig};
use crate::error::{CliError, Result};
use crate::rows::{read_results, row_line, write_header, write_results, ResultRow, RowKey};
use crate::solution_file::{read_solution, write_solution};

#[derive(Args, Clone, Debug, Default)]
#[group(required = true, multiple = false)]
pub struct InstanceArg {
    /// Instance file.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    /// Built-in fixture: greedy_pathology, exchange_trap or hp_trap:<m>:<n>:<h>.
    #[arg(long)]
    pub fixture: Option<String>,
}

impl InstanceArg {
    pub fn file(path: impl Into<PathBuf>) -> Self {
        Self {
            instance: Some(path.into()),
            fixture: None,
        }
    }

    pub fn fixture(name: &str) -> Self {
        Self {
            instance: None,
            fixture: Some(name.into()),
        }
    }

    pub fn load(&self) -> Result<BapInstance> {
        match (&self.instance, &self.fixture) {
            (Some(path), None) => read_instance(path).map_err(|e| CliError::data(path.display(), e)),
            (None, Some(name)) => Ok(fixtures::by_name(name)?),
            _ => Err(CliError::Usage("give exactly one of --instance or --fixture".into())),
        }
    }
}

#[derive(Args, Clone, Debug)]
pub struct GenArgs {
    /// uniform, normal, euclidean or rank1.
    #[arg(long)]
    pub kind: InstanceKind,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub first_index: usize,
    /// Output directory, created when missing.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Clone, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: InstanceArg,
    /// Search: none, brute, a local search such as 2ex or 3exopt-first, or a composite.
    #[arg(long)]
    pub algo: Search,
    #[arg(long, default_value = "random")]
    pub construct: Constructor,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Run a multistart with this many restarts.
    #[arg(long)]
    pub restarts: Option<u64>,
    /// Wall-clock limit in milliseconds: for the whole multistart, or for the single run.
    #[arg(long)]
    pub time_ms: Option<u64>,
    /// Multistart even without --restarts (needs --time-ms).
    #[arg(long)]
    pub multistart: bool,
    /// Run multistart restarts one at a time.
    #[arg(long)]
    pub sequential: bool,
    /// Where to write the solution; printed to stderr otherwise.
    #[arg(long)]
    pub solution: Option<PathBuf>,
    /// Report time_ms as 0.
    #[arg(long)]
    pub no_time: bool,
}

#[derive(Args, Clone, Debug)]
pub struct ExperimentArgs {
    /// TOML configuration.
    pub config: PathBuf,
    /// Overrides the configured output path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub sequential: bool,
    /// Report time_ms as 0.
    #[arg(long)]
    pub no_time: bool,
}

#[derive(Args, Clone, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: InstanceArg,
    #[arg(long)]
    pub solution: PathBuf,
    /// Claimed objective value.
    #[arg(long, allow_hyphen_values = true)]
    pub value: Option<i64>,
}

#[derive(Args, Clone, Debug)]
pub struct AvgArgs {
    #[command(flatten)]
    pub input: InstanceArg,
}

/// File name for an instance name: spaces and path separators become `_`.
pub fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_whitespace() || c == '/' || c == '\\' || c == ':' {
                '_'
            } else {
                c
            }
        })
        .collect()
}

pub fn cmd_gen(args: &GenArgs, out: &mut impl Write) -> Result<Vec<PathBuf>> {
    let spec = GenSpec {
        first_index: args.first_index,
        ..GenSpec::new(args.kind, args.m, args.n, args.seed, args.count)
    };
    let instances = generate(&spec)?;
    std::fs::create_dir_all(&args.out).map_err(|e| CliError::data(args.out.display(), e))?;
    let mut paths = Vec::with_capacity(instances.len());
    for inst in &instances {
        let path = args.out.join(format!("{}.bap", file_stem(inst.name())));
        write_instance(inst, &path).map_err(|e| CliError::data(path.display(), e))?;
        writeln!(out, "{}", path.display())?;
        paths.push(path);
    }
    Ok(paths)
}

/// Runs one row: a single run without a budget, a multistart with one.
pub fn run_row(
    inst: &BapInstance,
    algorithm: &Algorithm,
    seed: u64,
    budget: Option<Budget>,
    exec: Exec,
    record_time: bool,
) -> Result<(ResultRow, Solution)> {
    let (report, restarts, best_iter, elapsed) = match budget {
        None => {
            let r = algorithm.run(inst, seed, None)?;
            let elapsed = r.elapsed;
            (r, 1, 0, elapsed)
        }
        Some(budget) => {
            let m = multistart(inst, algorithm, budget, seed, exec)?;
            (m.best, m.restarts, m.best_iter, m.elapsed)
        }
    };
    let row = ResultRow {
        instance: inst.name().to_string(),
        algorithm: algorithm.to_string(),
        seed,
        value: report.value,
        time_ms: if record_time { elapsed.as_millis() as u64 } else { 0 },
        iterations: report.iterations,
        restarts,
        best_iter,
        converged: report.converged,
    };
    Ok((row, report.solution))
}

fn solution_comments(row: &ResultRow) -> Vec<String> {
    vec![
        format!("instance {}", row.instance),
        format!("algorithm {} seed {}", row.algorithm, row.seed),
        format!("value {}", row.value),
    ]
}

pub fn cmd_solve(args: &SolveArgs, out: &mut impl Write) -> Result<ResultRow> {
    let inst = args.input.load()?;
    let algorithm = Algorithm::new(args.construct, args.algo);
    let time_limit = args.time_ms.map(Duration::from_millis);
    let exec = if args.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    };
    let (row, solution) = if args.restarts.is_some() || args.multistart {
        let budget = Budget {
            time_limit,
            restarts: args.restarts,
        };
        run_row(&inst, &algorithm, args.seed, Some(budget), exec, !args.no_time)?
    } else {
        let r = algorithm.run(&inst, args.seed, time_limit)?;
        let row = ResultRow {
            instance: inst.name().to_string(),
            algorithm: algorithm.to_string(),
            seed: args.seed,
            value: r.value,
            time_ms: if args.no_time { 0 } else { r.elapsed.as_millis() as u64 },
            iterations: r.iterations,
            restarts: 1,
            best_iter: 0,
            converged: r.converged,
        };
        (row, r.solution)
    };
    write_header(out)?;
    out.write_all(&row_line(&row)?)?;
    match &args.solution {
        Some(path) => write_solution(path, &solution, &solution_comments(&row))?,
        None => eprint!("{}", crate::solution_file::format_solution(&solution, &[])),
    }
    Ok(row)
}

/// Outcome of an experiment run.
#[derive(Clone, Debug)]
pub struct ExperimentSummary {
    pub rows: Vec<ResultRow>,
    /// Rows computed in this invocation; the rest were resumed from the output file.
    pub computed: usize,
    pub output: Option<PathBuf>,
}

/// Runs the grid. Rows already present in the output file are kept; new rows
/// are appended as they finish, and the file is finally rewritten sorted with
/// its aggregate section.
pub fn run_experiment(exp: &Experiment) -> Result<ExperimentSummary> {
    let mut jobs: Vec<(usize, usize, u64)> = Vec::new();
    for i in 0..exp.instances.len() {
        for a in 0..exp.algorithms.len() {
            for &seed in &exp.seeds {
                jobs.push((i, a, seed));
            }
        }
    }
    let key_of = |&(i, a, seed): &(usize, usize, u64)| -> RowKey {
        (exp.instances[i].name().to_string(), exp.algorithms[a].to_string(), seed)
    };
    let wanted: HashSet<RowKey> = jobs.iter().map(key_of).collect();

    let mut rows: Vec<ResultRow> = match &exp.output {
        Some(path) if path.exists() => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::data(path.display(), e))?;
            let mut seen = HashSet::new();
            read_results(&text)
                .into_iter()
                .filter(|r| wanted.contains(&r.key()) && seen.insert(r.key()))
                .collect()
        }
        _ => Vec::new(),
    };
    let done: HashSet<RowKey> = rows.iter().map(ResultRow::key).collect();
    let pending: Vec<(usize, usize, u64)> = jobs.into_iter().filter(|j| !done.contains(&key_of(j))).collect();

    let sink = match &exp.output {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            let mut text = Vec::new();
            write_header(&mut text)?;
            crate::rows::sort_rows(&mut rows);
            for r in &rows {
                text.extend(row_line(r)?);
            }
            std::fs::write(path, text).map_err(|e| CliError::data(path.display(), e))?;
            Some(Mutex::new(OpenOptions::new().append(true).open(path)?))
        }
        None => None,
    };
    if let Some(dir) = &exp.solutions {
        std::fs::create_dir_all(dir).map_err(|e| CliError::data(dir.display(), e))?;
    }

    let exec = if exp.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    };
    let results = exec.map(pending.len(), |t| -> Result<ResultRow> {
        let (i, a, seed) = pending[t];
        let inst = &exp.instances[i];
        let (row, solution) = run_row(
            inst,
            &exp.algorithms[a],
            seed,
            exp.budget,
            Exec::Sequential,
            exp.record_time,
        )?;
        if let Some(dir) = &exp.solutions {
            let name = format!(
                "{}__{}__{}.sol",
                file_stem(&row.instance),
                file_stem(&row.algorithm),
                seed
            );
            write_solution(&dir.join(name), &solution, &solution_comments(&row))?;
        }
        if let Some(sink) = &sink {
            let line = row_line(&row)?;
            let mut file = sink.lock().expect("row sink poisoned");
            file.write_all(&line)?;
            file.flush()?;
        }
        Ok(row)
    });
    let computed = results.len();
    for r in results {
        rows.push(r?);
    }
    crate::rows::sort_rows(&mut rows);

    if let Some(path) = &exp.output {
        let mut text = Vec::new();
        write_results(&mut text, &rows)?;
        let tmp = path.with_extension("csv.tmp");
        std::fs::write(&tmp, text)?;
        std::fs::rename(&tmp, path)?;
    }
    Ok(ExperimentSummary {
        rows,
        computed,
        output: exp.output.clone(),
    })
}

pub fn cmd_experiment(args: &ExperimentArgs, out: &mut impl Write) -> Result<ExperimentSummary> {
    let config = ExperimentConfig::load(&args.config)?;
    let base = args.config.parent().unwrap_or(Path::new("."));
    let mut exp = config.resolve(base)?;
    if let Some(o) = &args.out {
        exp.output = Some(o.clone());
    }
    exp.sequential |= args.sequential;
    exp.record_time &= !args.no_time;
    let summary = run_experiment(&exp)?;
    match &summary.output {
        Some(path) => writeln!(
            out,
            "{} rows ({} new) written to {}",
            summary.rows.len(),
            summary.computed,
            path.display()
        )?,
        None => write_results(out, &summary.rows)?,
    }
    Ok(summary)
}

/// Verification report of a solution against its instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub value: i64,
    pub matches_claim: Option<bool>,
    pub average: String,
    pub at_most_average: bool,
    /// `None` when the instance has negative `Q` entries or nonzero linear terms.
    pub at_most_two_exchange_bound: Option<bool>,
}

pub fn verify_solution(inst: &BapInstance, s: &Solution, claimed: Option<i64>) -> Result<Verification> {
    let value = evaluate(inst, s).map_err(|e| CliError::Data(e.to_string()))?;
    let avg = average_value(inst);
    Ok(Verification {
        value,
        matches_claim: claimed.map(|c| c == value),
        average: format_rational(&avg),
        at_most_average: at_most(value, &avg),
        at_most_two_exchange_bound: inst
            .is_bound_eligible()
            .then(|| at_most(value, &two_exchange_bound(inst))),
    })
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut impl Write) -> Result<Verification> {
    let inst = args.input.load()?;
    let solution = read_solution(&args.solution)?;
    let v = verify_solution(&inst, &solution, args.value)?;
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    writeln!(out, "instance: {} ({}x{})", inst.name(), inst.m(), inst.n())?;
    writeln!(out, "value: {}", v.value)?;
    if let (Some(claimed), Some(ok)) = (args.value, v.matches_claim) {
        writeln!(out, "claimed: {claimed} ({})", if ok { "ok" } else { "mismatch" })?;
    }
    writeln!(out, "average: {}", v.average)?;
    writeln!(out, "<= A: {}", yes_no(v.at_most_average))?;
    match v.at_most_two_exchange_bound {
        Some(b) => writeln!(out, "<= 2mn/(m+n)*A: {}", yes_no(b))?,
        None => writeln!(out, "<= 2mn/(m+n)*A: n/a (needs nonnegative Q and zero C, D)")?,
    }
    if v.matches_claim == Some(false) {
        return Err(CliError::Mismatch(format!(
            "claimed value {} but the solution evaluates to {}",
            args.value.unwrap_or_default(),
            v.value
        )));
    }
    Ok(v)
}

pub fn cmd_avg(args: &AvgArgs, out: &mut impl Write) -> Result<String> {
    let inst = args.input.load()?;
    let avg = format_rational(&average_value(&inst));
    writeln!(out, "{avg}")?;
    Ok(avg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solution_file::parse_solution;

    fn solve_args(fixture: &str, algo: &str, construct: &str, seed: u64) -> SolveArgs {
        SolveArgs {
            input: InstanceArg::fixture(fixture),
            algo: algo.parse().unwrap(),
            construct: construct.parse().unwrap(),
            seed,
            restarts: None,
            time_ms: None,
            multistart: false,
            sequential: false,
            solution: None,
            no_time: true,
        }
    }

    #[test]
    fn solve_trap_gets_stuck() {
        let mut out = Vec::new();
        let row = cmd_solve(&solve_args("exchange_trap", "aa", "randomxygreedy", 7), &mut out).unwrap();
        assert_eq!(row.value, -4);
        let text = String::from_utf8(out).unwrap();
        assert!(
            text.ends_with("exchange_trap 2x2 0,randomxygreedy/aa,7,-4,0,0,1,0,true\n"),
            "{text}"
        );
    }

    #[test]
    fn solve_brute_and_zero() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("zero.bap");
        write_instance(&BapInstance::zeros(3, 3).unwrap(), &path).unwrap();
        let mut args = solve_args("exchange_trap", "2exopt", "greedy", 0);
        args.input = InstanceArg::file(&path);
        assert_eq!(cmd_solve(&args, &mut Vec::new()).unwrap().value, 0);

        let mut args = solve_args("greedy_pathology", "brute", "random", 0);
        let sol = dir.path().join("opt.sol");
        args.solution = Some(sol.clone());
        let row = cmd_solve(&args, &mut Vec::new()).unwrap();
        assert_eq!(row.value, 0);
        let s = parse_solution(&std::fs::read_to_string(&sol).unwrap()).unwrap();
        assert_eq!(evaluate(&fixtures::greedy_pathology(), &s).unwrap(), 0);
    }

    #[test]
    fn solve_multistart_counts_restarts() {
        let mut args = solve_args("hp_trap:4:5:2", "2ex", "random", 3);
        args.restarts = Some(5);
        let row = cmd_solve(&args, &mut Vec::new()).unwrap();
        assert_eq!(row.restarts, 5);
        assert!(row.best_iter < 5);
    }

    #[test]
    fn gen_writes_readable_files() {
        let dir = tempfile::tempdir().unwrap();
        let args = GenArgs {
            kind: InstanceKind::Euclidean,
            m: 3,
            n: 4,
            count: 3,
            seed: 1,
            first_index: 0,
            out: dir.path().to_path_buf(),
        };
        let mut out = Vec::new();
        let paths = cmd_gen(&args, &mut out).unwrap();
        assert_eq!(paths.len(), 3);
        assert!(paths[0].ends_with("euclidean_3x4_0.bap"));
        let text = std::fs::read_to_string(&paths[1]).unwrap();
        assert!(text.contains("POINTS"));
        let expected = generate(&GenSpec::new(InstanceKind::Euclidean, 3, 4, 1, 3)).unwrap();
        for (p, e) in paths.iter().zip(&expected) {
            assert_eq!(&read_instance(p).unwrap(), e);
        }
        let again = cmd_gen(&args, &mut Vec::new()).unwrap();
        assert_eq!(std::fs::read_to_string(&again[1]).unwrap(), text);
    }

    #[test]
    fn verify_detects_tampering() {
        let dir = tempfile::tempdir().unwrap();
        let sol = dir.path().join("s.sol");
        let inst = fixtures::exchange_trap();
        write_solution(&sol, &Solution::identity(2, 2), &[]).unwrap();
        let args = VerifyArgs {
            input: InstanceArg::fixture("exchange_trap"),
            solution: sol.clone(),
            value: Some(-4),
        };
        let mut out = Vec::new();
        let v = cmd_verify(&args, &mut out).unwrap();
        assert_eq!(v.value, -4);
        assert!(String::from_utf8(out).unwrap().contains("claimed: -4 (ok)"));
        let bad = VerifyArgs {
            value: Some(-5),
            ..args
        };
        let err = cmd_verify(&bad, &mut Vec::new()).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        let wrong_dims = VerifyArgs {
            input: InstanceArg::fixture("greedy_pathology"),
            solution: sol,
            value: None,
        };
        assert_eq!(cmd_verify(&wrong_dims, &mut Vec::new()).unwrap_err().exit_code(), 2);
        assert_eq!(inst.m(), 2);
    }

    #[test]
    fn rounding_is_always_below_average() {
        for seed in 0..20 {
            let inst = bap::instgen::generate_one(InstanceKind::Normal, 4, 5, seed, 0).unwrap();
            let v = verify_solution(&inst, &bap::construct::rounding(&inst), None).unwrap();
            assert!(v.at_most_average);
            if !inst.q_is_nonnegative() {
                assert_eq!(v.at_most_two_exchange_bound, None);
            }
        }
    }

    #[test]
    fn avg_is_exact() {
        let args = AvgArgs {
            input: InstanceArg::fixture("greedy_pathology"),
        };
        assert_eq!(cmd_avg(&args, &mut Vec::new()).unwrap(), "669/2");
    }

    fn small_experiment(dir: &Path) -> Experiment {
        let text = r#"
algorithms = ["random/2ex", "randomxygreedy/aa"]
seeds = [1, 2, 3]
record_time = false
output = "out/results.csv"
solutions = "sols"

[budget]
restarts = 2

[[generate]]
kind = "uniform"
m = 4
n = 4
seed = 5
count = 2
"#;
        ExperimentConfig::parse(text).unwrap().resolve(dir).unwrap()
    }

    #[test]
    fn experiment_grid_resume_and_determinism() {
        let dir = tempfile::tempdir().unwrap();
        let exp = small_experiment(dir.path());
        let first = run_experiment(&exp).unwrap();
        assert_eq!(first.rows.len(), 12);
        assert_eq!(first.computed, 12);
        let path = exp.output.clone().unwrap();
        let full = std::fs::read_to_string(&path).unwrap();

        // every emitted value re-verifies against its solution file
        for row in &first.rows {
            let inst = exp.instances.iter().find(|i| i.name() == row.instance).unwrap();
            let name = format!(
                "{}__{}__{}.sol",
                file_stem(&row.instance),
                file_stem(&row.algorithm),
                row.seed
            );
            let s = read_solution(&dir.path().join("sols").join(name)).unwrap();
            assert_eq!(
                verify_solution(inst, &s, Some(row.value)).unwrap().matches_claim,
                Some(true)
            );
        }

        // simulate an interrupt: keep the header and five rows plus half a line
        let lines: Vec<&str> = full.lines().collect();
        let mut cut = lines[..7].join("\n");
        cut.push('\n');
        cut.push_str(&lines[7][..lines[7].len() / 2]);
        std::fs::write(&path, cut).unwrap();
        let resumed = run_experiment(&exp).unwrap();
        assert_eq!(resumed.computed, 7);
        assert_eq!(std::fs::read_to_string(&path).unwrap(), full);

        // a finished file is not recomputed
        assert_eq!(run_experiment(&exp).unwrap().computed, 0);
        assert_eq!(std::fs::read_to_string(&path).unwrap(), full);

        let seq = Experiment {
            sequential: true,
            output: Some(dir.path().join("seq.csv")),
            ..exp
        };
        run_experiment(&seq).unwrap();
        assert_eq!(std::fs::read_to_string(dir.path().join("seq.csv")).unwrap(), full);
    }

    #[test]
    fn aggregate_matches_rows() {
        let dir = tempfile::tempdir().unwrap();
        let exp = small_experiment(dir.path());
        let summary = run_experiment(&exp).unwrap();
        let agg = crate::rows::aggregate(&summary.rows);
        assert_eq!(agg.len(), 2);
        for a in &agg {
            let members: Vec<&ResultRow> = summary.rows.iter().filter(|r| r.algorithm == a.algorithm).collect();
            let mean = members.iter().map(|r| r.value as f64).sum::<f64>() / members.len() as f64;
            assert_eq!(a.runs, 6);
            assert!((a.mean_value - mean).abs() < 1e-9);
        }
    }
}
