use std::{
    fmt::Write as _,
    fs,
    io::{self, Write as _},
    path::{Path, PathBuf},
    process::ExitCode,
    time::Duration,
};

use clap::{Parser, Subcommand};
use misro::{
    bench::{run_suite, write_results, BenchConfig, BenchStatus},
    core::{
        apply_mitigation, calc_criticality, generate,
        solvers::{greedy_saturate, saturate_within, SolveOutcome, Status},
        Assignment, GenSpec, Instance, MitigationAction, Mode, SideConstraint,
    },
    dzn::{emit_dzn, parse_dzn},
    json::{assignment_from_json, assignment_to_json, instance_from_json, instance_to_json, side_from_json},
    solve::{solve, SolveConfig, Strategy},
    Error,
};

/// Risk quantification under requirement criticality limits.
#[derive(Parser)]
#[command(name = "misro", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random benchmark instance.
    Gen {
        #[arg(long)]
        alpha: u32,
        #[arg(long)]
        beta: u32,
        #[arg(long)]
        gamma: u32,
        /// 1 = linear, 2 = bilinear, 3 = quadratic.
        #[arg(long, value_parser = parse_mode)]
        mode: Mode,
        #[arg(long, env = "MISRO_SEED", default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = *GenSpec::DEFAULT_C_RANGE.start())]
        c_min: u32,
        #[arg(long, default_value_t = *GenSpec::DEFAULT_C_RANGE.end())]
        c_max: u32,
        /// Write DZN instead of JSON.
        #[arg(long)]
        dzn: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Maximize the minimum quantification of an instance.
    Solve {
        file: PathBuf,
        #[arg(long, default_value = "bnb", value_parser = parse_strategy)]
        strategy: Strategy,
        /// JSON list of side constraints.
        #[arg(long)]
        constraints: Option<PathBuf>,
        /// Seconds allowed for branch and bound.
        #[arg(long, default_value_t = 300.0)]
        timeout: f64,
        /// Raise every risk to its largest value that keeps the solution acceptable.
        #[arg(long)]
        saturate: bool,
    },
    /// Report the criticality of every requirement under an assignment.
    Check {
        file: PathBuf,
        #[arg(long)]
        assignment: PathBuf,
    },
    /// Exhaustive reference optimum for small instances.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        constraints: Option<PathBuf>,
        /// Largest number of assignments to enumerate.
        #[arg(long, default_value_t = misro::core::oracle::DEFAULT_CAP)]
        cap: u128,
    },
    /// Convert an instance to MiniZinc data.
    ExportDzn {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Convert MiniZinc data to a JSON instance.
    ImportDzn {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a benchmark sweep.
    Bench {
        /// TOML configuration; defaults apply to omitted keys.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Directory for results.csv and summary.csv.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, env = "MISRO_SEED")]
        seed: Option<u64>,
    },
    /// Lower the levels of one risk and compare criticality before and after.
    Mitigate {
        file: PathBuf,
        #[arg(long)]
        assignment: PathBuf,
        /// Zero-based risk index.
        #[arg(long)]
        risk: usize,
        #[arg(long, default_value_t = 0)]
        dl: u8,
        #[arg(long, default_value_t = 0)]
        ds: u8,
        /// Write the mitigated assignment here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse::<u8>().ok().and_then(Mode::from_code).ok_or_else(|| format!("expected 1, 2 or 3, got `{s}`"))
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    match s.parse()? {
        Strategy::Oracle => Err("use the oracle subcommand for exhaustive search".into()),
        st => Ok(st),
    }
}

const EXIT_INFEASIBLE: u8 = 2;
const EXIT_DEADLINE: u8 = 3;

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e)),
    }
}

fn is_dzn(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("dzn"))
}

/// Loads a JSON or, by extension, DZN instance.
fn load_instance(path: &Path) -> Result<Instance, Error> {
    let text = read(path)?;
    if is_dzn(path) {
        let name = path.file_stem().map_or("instance".into(), |s| s.to_string_lossy());
        return Ok(parse_dzn(&text, &name)?);
    }
    let parsed = instance_from_json(&text)?;
    for w in &parsed.warnings {
        log::warn!("{}: {w}", path.display());
    }
    Ok(parsed.value)
}

fn load_side(path: Option<&Path>) -> Result<Vec<SideConstraint>, Error> {
    match path {
        Some(p) => Ok(side_from_json(&read(p)?)?),
        None => Ok(Vec::new()),
    }
}

fn load_assignment(path: &Path, mode: Mode) -> Result<Assignment, Error> {
    Ok(assignment_from_json(&read(path)?, mode)?)
}

fn assignment_table(out: &mut String, a: &Assignment) {
    writeln!(out, "risk\tl\ts\tQ").unwrap();
    for j in 0..a.len() {
        let (l, s) = a.pair(j);
        writeln!(out, "{j}\t{l}\t{s}\t{}", a.q()[j]).unwrap();
    }
}

fn criticality_table(out: &mut String, inst: &Instance, a: &Assignment) -> Result<bool, Error> {
    let report = calc_criticality(inst, a)?;
    writeln!(out, "requirement\tcriticality\tlimit\tacceptable").unwrap();
    for (i, row) in report.rows.iter().enumerate() {
        let value = row.value.map_or_else(|| "-".to_string(), |f| f.to_string());
        let ok = if row.acceptable { "yes" } else { "no" };
        writeln!(out, "{i}\t{value}\t{}/100\t{ok}", row.threshold).unwrap();
    }
    let all = report.overall_acceptable();
    writeln!(out, "acceptable: {}", if all { "yes" } else { "no" }).unwrap();
    Ok(all)
}

fn exit_for(status: Status) -> ExitCode {
    match status {
        Status::Optimal | Status::FeasibleNotProven => ExitCode::SUCCESS,
        Status::Infeasible => ExitCode::from(EXIT_INFEASIBLE),
        Status::DeadlineExceededWithIncumbent | Status::DeadlineExceededNoIncumbent => ExitCode::from(EXIT_DEADLINE),
    }
}

fn report_outcome(inst: &Instance, outcome: &SolveOutcome, shown: Option<&Assignment>) -> Result<ExitCode, Error> {
    let q_den = inst.mode.denominator();
    let mut out = String::new();
    writeln!(out, "instance: {}", inst.name).unwrap();
    writeln!(out, "status: {}", outcome.status).unwrap();
    if let Some(obj) = outcome.objective() {
        writeln!(out, "objective: {obj} ({obj}/{q_den})").unwrap();
    }
    if outcome.status != Status::Optimal && outcome.status != Status::Infeasible {
        if let Some(b) = outcome.bound {
            writeln!(out, "bound: {b} ({b}/{q_den})").unwrap();
        }
    }
    if let Some(a) = shown {
        assignment_table(&mut out, a);
        criticality_table(&mut out, inst, a)?;
    }
    write_out(None, &out)?;
    if let Some(t) = outcome.stats.wall_time {
        eprintln!("time: {:.3} ms, nodes: {}", t.as_secs_f64() * 1e3, outcome.stats.nodes);
    }
    Ok(exit_for(outcome.status))
}

fn run(cmd: Command) -> Result<ExitCode, Error> {
    match cmd {
        Command::Gen { alpha, beta, gamma, mode, seed, c_min, c_max, dzn, output } => {
            let spec = GenSpec { c_range: c_min..=c_max, ..GenSpec::new(alpha, beta, gamma, mode, seed) };
            let inst = generate(&spec)?;
            let text = if dzn { emit_dzn(&inst) } else { instance_to_json(&inst) };
            write_out(output.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve { file, strategy, constraints, timeout, saturate } => {
            let inst = load_instance(&file)?;
            let side = load_side(constraints.as_deref())?;
            let timeout = Duration::try_from_secs_f64(timeout)
                .ok()
                .filter(|t| !t.is_zero())
                .ok_or_else(|| Error::Usage(format!("bad timeout {timeout}")))?;
            let cfg = SolveConfig { timeout, ..SolveConfig::default() };
            let outcome = solve(strategy, &inst, &side, &cfg)?;
            let mut shown = outcome.solution.as_ref().map(|s| s.assignment.clone());
            if let (true, Some(sol)) = (saturate, &outcome.solution) {
                shown = Some(if side.is_empty() {
                    greedy_saturate(&inst, sol)?
                } else {
                    saturate_within(&inst, &side, &sol.assignment)?
                });
            }
            report_outcome(&inst, &outcome, shown.as_ref())
        }
        Command::Oracle { file, constraints, cap } => {
            let inst = load_instance(&file)?;
            let side = load_side(constraints.as_deref())?;
            let cfg = SolveConfig { oracle_cap: cap, ..SolveConfig::default() };
            let outcome = solve(Strategy::Oracle, &inst, &side, &cfg)?;
            let shown = outcome.solution.as_ref().map(|s| s.assignment.clone());
            report_outcome(&inst, &outcome, shown.as_ref())
        }
        Command::Check { file, assignment } => {
            let inst = load_instance(&file)?;
            let a = load_assignment(&assignment, inst.mode)?;
            let mut out = String::new();
            assignment_table(&mut out, &a);
            let ok = criticality_table(&mut out, &inst, &a)?;
            write_out(None, &out)?;
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(EXIT_INFEASIBLE) })
        }
        Command::ExportDzn { file, output } => {
            let inst = load_instance(&file)?;
            write_out(output.as_deref(), &emit_dzn(&inst))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ImportDzn { file, output } => {
            let text = read(&file)?;
            let name = file.file_stem().map_or("instance".into(), |s| s.to_string_lossy());
            let inst = parse_dzn(&text, &name)?;
            write_out(output.as_deref(), &instance_to_json(&inst))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench { config, output, workers, seed } => {
            let mut cfg = match &config {
                Some(p) => BenchConfig::from_toml(&read(p)?)?,
                None => BenchConfig::default(),
            };
            if let Some(dir) = output {
                cfg.output = Some(dir);
            }
            if let Some(w) = workers {
                cfg.workers = w;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let report = run_suite(&cfg)?;
            match &cfg.output {
                Some(dir) => eprintln!("wrote {} rows to {}", report.records.len(), dir.display()),
                None => write_results(io::stdout().lock(), &report.records).map_err(|e| Error::io("<stdout>", e))?,
            }
            let unsound = report.records.iter().filter(|r| r.status == BenchStatus::Unsound).count();
            if unsound > 0 {
                return Err(misro::bench::BenchError::Unsound(unsound).into());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Mitigate { file, assignment, risk, dl, ds, output } => {
            let inst = load_instance(&file)?;
            let before = load_assignment(&assignment, inst.mode)?;
            let after = apply_mitigation(&before, &MitigationAction { risk, delta_l: dl, delta_s: ds })?;
            let (l0, s0) = before.pair(risk);
            let (l1, s1) = after.pair(risk);
            let mut out = String::new();
            writeln!(out, "risk {risk}: l {l0} -> {l1}, s {s0} -> {s1}, Q {} -> {}", before.q()[risk], after.q()[risk])
                .unwrap();
            writeln!(out, "before:").unwrap();
            criticality_table(&mut out, &inst, &before)?;
            writeln!(out, "after:").unwrap();
            let ok = criticality_table(&mut out, &inst, &after)?;
            write_out(None, &out)?;
            if let Some(p) = output {
                write_out(Some(&p), &assignment_to_json(&after))?;
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(EXIT_INFEASIBLE) })
        }
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error: usage: {}", one_line(first));
            return ExitCode::FAILURE;
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}: {}", e.kind(), one_line(&e.to_string()));
            ExitCode::FAILURE
        }
    }
}
