//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::{
    panic::{catch_unwind, AssertUnwindSafe},
    process::{Command, ExitCode},
    time::{Duration, Instant},
};

use misro::{
    bench::{quality, run_suite, write_results, BenchConfig, BenchStatus, Quality},
    core::{
        apply_mitigation, calc_criticality, generate, is_acceptable,
        oracle::{brute_force, DEFAULT_CAP},
        quantify,
        solvers::{greedy_saturate, solve_bnb, solve_fastpath, Never, Solution, SolveOutcome, Status},
        Assignment, Error as CoreError, GenSpec, Instance, MitigationAction, Mode, SideConstraint, SplitMix64,
    },
    dzn::{emit_dzn, parse_dzn},
    json::{instance_from_json, instance_to_json},
    solve::{solve, SolveConfig, Strategy, WallClock},
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn pick(rng: &mut SplitMix64, lo: u32, hi: u32) -> u32 {
    rng.uniform(lo, hi)
}

/// Small random instance; a third of them draw C from the full range so that
/// some are infeasible.
fn small_instance(rng: &mut SplitMix64, k: u32, max_n: u32, max_m: u32) -> Instance {
    let mode = Mode::ALL[k as usize % 3];
    let n = pick(rng, 1, max_n);
    let m = pick(rng, 1, max_m);
    let mut spec = GenSpec::new(n, m, k + 1, mode, rng.next_u64());
    if k % 3 == 2 {
        spec.c_range = 0..=99;
    }
    generate(&spec).expect("valid spec")
}

fn random_side(rng: &mut SplitMix64, inst: &Instance) -> SideConstraint {
    let risk = pick(rng, 0, inst.n as u32 - 1) as usize;
    let level = pick(rng, 1, 6) as u8;
    let mask = pick(rng, 1, 63) as u8;
    let q = pick(rng, inst.mode.min_value(), inst.mode.denominator());
    match pick(rng, 0, 5) {
        0 => SideConstraint::FixLikelihood { risk, level },
        1 => SideConstraint::FixSeverity { risk, level },
        2 => SideConstraint::RestrictLikelihood { risk, levels: mask },
        3 => SideConstraint::RestrictSeverity { risk, levels: mask },
        4 => SideConstraint::MinQuant { risk, value: q },
        _ => SideConstraint::MaxQuant { risk, value: q },
    }
}

/// Status and objective, the parts every exact strategy must agree on.
fn verdict(out: &SolveOutcome) -> (Status, Option<u32>) {
    (out.status, out.objective())
}

fn unconstrained_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = SplitMix64::new(0xacce_0001);
    let (mut infeasible, mut per_mode) = (0, [0; 3]);
    for k in 0..330 {
        let inst = small_instance(&mut rng, k, 4, 6);
        let fast = solve_fastpath(&inst, &[]).map_err(|e| e.to_string())?;
        let bnb = solve_bnb(&inst, &[], &Never).map_err(|e| e.to_string())?;
        let oracle = brute_force(&inst, &[], DEFAULT_CAP).map_err(|e| e.to_string())?;
        ensure!(
            verdict(&fast) == verdict(&oracle) && verdict(&bnb) == verdict(&oracle),
            "{}: fastpath {:?}, bnb {:?}, oracle {:?}",
            inst.name,
            verdict(&fast),
            verdict(&bnb),
            verdict(&oracle)
        );
        infeasible += usize::from(oracle.status == Status::Infeasible);
        per_mode[k as usize % 3] += 1;
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    Ok(format!(
        "330 instances ({per_mode:?} per mode, {infeasible} infeasible) agree in {:.1} s",
        elapsed.as_secs_f64()
    ))
}

fn constrained_equivalence() -> Outcome {
    let mut rng = SplitMix64::new(0xacce_0002);
    let (mut optimal, mut infeasible, mut rejected) = (0, 0, 0);
    for k in 0..240 {
        let inst = small_instance(&mut rng, k, 4, 6);
        let count = pick(&mut rng, 1, 3);
        let side: Vec<_> = (0..count).map(|_| random_side(&mut rng, &inst)).collect();
        let bnb = solve_bnb(&inst, &side, &Never).map_err(|e| e.to_string())?;
        let oracle = brute_force(&inst, &side, DEFAULT_CAP).map_err(|e| e.to_string())?;
        ensure!(
            verdict(&bnb) == verdict(&oracle),
            "{} {side:?}: bnb {:?}, oracle {:?}",
            inst.name,
            verdict(&bnb),
            verdict(&oracle)
        );
        match oracle.status {
            Status::Optimal => optimal += 1,
            Status::Infeasible => infeasible += 1,
            _ => rejected += 1,
        }
    }
    ensure!(infeasible > 0 && optimal > 0, "sample lacks variety: {optimal} optimal, {infeasible} infeasible");
    ensure!(rejected == 0, "{rejected} unexpected statuses");
    Ok(format!("240 instances agree ({optimal} optimal, {infeasible} infeasible)"))
}

/// Largest achievable value within the tightest row, computed from the
/// quantification formulas directly.
fn closed_form(inst: &Instance) -> Option<u32> {
    let q_den = [12u64, 36, 216][inst.mode.code() as usize - 1];
    let values = (1u64..=6).flat_map(|l| {
        (1u64..=6).map(move |s| match inst.mode {
            Mode::Linear => l + s,
            Mode::Bilinear => l * s,
            Mode::Quadratic => l * s * s,
        })
    });
    let c_min =
        inst.matrix.iter().zip(&inst.c).filter(|(row, _)| row.iter().any(|&w| w > 0)).map(|(_, &c)| u64::from(c)).min();
    let cap = c_min.map_or(u64::MAX, |c| q_den * c);
    values.filter(|&v| 100 * v <= cap).max().map(|v| v as u32)
}

fn analytic_collapse() -> Outcome {
    let mut rng = SplitMix64::new(0xacce_0003);
    for k in 0..120u32 {
        let spec = GenSpec::new(50, 50, k + 1, Mode::ALL[k as usize % 3], rng.next_u64());
        let inst = generate(&spec).map_err(|e| e.to_string())?;
        let bnb = solve_bnb(&inst, &[], &Never).map_err(|e| e.to_string())?;
        let expected = closed_form(&inst);
        ensure!(bnb.objective() == expected, "{}: bnb {:?}, closed form {expected:?}", inst.name, bnb.objective());
        ensure!(bnb.status == Status::Optimal, "{}: status {}", inst.name, bnb.status);
    }
    Ok("120 instances at alpha = beta = 50 match the closed form".into())
}

fn protocol_sweep() -> Outcome {
    let cfg = BenchConfig { strategies: vec![Strategy::Fastpath], ..BenchConfig::default() };
    let start = Instant::now();
    let report = run_suite(&cfg).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let r = &report.records;
    ensure!(r.len() == 2400, "{} rows", r.len());
    let timeouts = r.iter().filter(|x| matches!(x.status, BenchStatus::Solver(s) if s.is_deadline())).count();
    let infeasible = r.iter().filter(|x| x.status == BenchStatus::Solver(Status::Infeasible)).count();
    let not_optimal = r.iter().filter(|x| x.status != BenchStatus::Solver(Status::Optimal)).count();
    ensure!(
        timeouts == 0 && infeasible == 0 && not_optimal == 0,
        "{timeouts} timeouts, {infeasible} infeasible, {not_optimal} not optimal"
    );
    ensure!(elapsed < Duration::from_secs(600), "sweep took {elapsed:?}");
    let largest = r.iter().filter(|x| x.alpha == 500 && x.beta == 400).map(|x| x.time).max().unwrap_or_default();
    ensure!(largest < Duration::from_millis(100), "slowest alpha=500 beta=400 solve took {largest:?}");
    Ok(format!(
        "2400 fastpath rows, all Optimal, sweep {:.1} s, slowest 500x400 solve {:.3} ms",
        elapsed.as_secs_f64(),
        largest.as_secs_f64() * 1e3
    ))
}

/// Side-constraint check written against the constraint definitions only.
fn satisfies(a: &Assignment, c: &SideConstraint) -> bool {
    let has = |mask: u8, level: u8| mask & (1 << (level - 1)) != 0;
    let j = c.risk();
    let (l, s) = a.pair(j);
    match *c {
        SideConstraint::FixLikelihood { level, .. } => l == level,
        SideConstraint::FixSeverity { level, .. } => s == level,
        SideConstraint::RestrictLikelihood { levels, .. } => has(levels, l),
        SideConstraint::RestrictSeverity { levels, .. } => has(levels, s),
        SideConstraint::MinQuant { value, .. } => a.q()[j] >= value,
        SideConstraint::MaxQuant { value, .. } => a.q()[j] <= value,
    }
}

fn bnb_scalability() -> Outcome {
    let mut rng = SplitMix64::new(0xacce_0005);
    let cfg = SolveConfig { timeout: Duration::from_secs(300), ..SolveConfig::default() };
    let (mut optimal, mut infeasible, mut other) = (0, 0, Vec::new());
    let mut slowest = Duration::ZERO;
    for k in 0..30u32 {
        let spec = GenSpec::new(100, 100, k + 1, Mode::ALL[k as usize % 3], rng.next_u64());
        let inst = generate(&spec).map_err(|e| e.to_string())?;
        let side: Vec<_> = (0..5).map(|_| random_side(&mut rng, &inst)).collect();
        let out = solve(Strategy::Bnb, &inst, &side, &cfg).map_err(|e| e.to_string())?;
        slowest = slowest.max(out.stats.wall_time.unwrap_or_default());
        if let Some(sol) = &out.solution {
            ensure!(is_acceptable(&inst, &sol.assignment).unwrap(), "{}: unacceptable solution", inst.name);
            ensure!(side.iter().all(|c| satisfies(&sol.assignment, c)), "{}: side constraint violated", inst.name);
        }
        match out.status {
            Status::Optimal => optimal += 1,
            Status::Infeasible => infeasible += 1,
            s => other.push(format!("{}: {s}", inst.name)),
        }
    }
    let proven = optimal + infeasible;
    ensure!(proven * 100 >= 95 * 30, "{proven}/30 proven; unresolved: {other:?}");
    Ok(format!(
        "{proven}/30 proven within 300 s ({optimal} optimal, {infeasible} proven infeasible), all sound, slowest {:.1} ms",
        slowest.as_secs_f64() * 1e3
    ))
}

fn quality_metric() -> Outcome {
    for optimum in 1..=216u32 {
        let full = quality(optimum, optimum).map_err(|e| e.to_string())?;
        ensure!(full.to_string() == "100.0", "quality({optimum}, {optimum}) = {full}");
        let mut prev = quality(0, optimum).map_err(|e| e.to_string())?;
        for best in 1..=optimum {
            let q = quality(best, optimum).map_err(|e| e.to_string())?;
            ensure!(q >= prev, "not monotone at ({best}, {optimum})");
            prev = q;
        }
        ensure!(quality(optimum + 1, optimum).is_err(), "best > optimum accepted");
    }
    for (best, optimum, text) in [(18, 18, "100.0"), (16, 18, "88.9"), (9, 18, "50.0"), (18, 36, "50.0")] {
        let q = quality(best, optimum).map_err(|e| e.to_string())?;
        ensure!(q.to_string() == text, "quality({best}, {optimum}) = {q}, expected {text}");
    }
    let cfg = BenchConfig {
        alpha_set: vec![5, 10],
        beta_set: vec![4, 50],
        versions: 2,
        strategies: vec![Strategy::Fastpath, Strategy::Bnb],
        ..BenchConfig::default()
    };
    let report = run_suite(&cfg).map_err(|e| e.to_string())?;
    let bad = report
        .records
        .iter()
        .filter(|r| r.status == BenchStatus::Solver(Status::Optimal) && r.quality_pct != Some(Quality::FULL))
        .count();
    ensure!(bad == 0, "{bad} Optimal rows without 100.0");
    Ok("exact 100.0 and 50.0, monotone for every optimum up to 216, Optimal rows score 100.0".into())
}

fn codec_laws() -> Outcome {
    let mut rng = SplitMix64::new(0xacce_0007);
    for k in 0..1000u32 {
        let lo = pick(&mut rng, 0, 99);
        let hi = pick(&mut rng, lo, 99);
        let spec = GenSpec {
            c_range: lo..=hi,
            ..GenSpec::new(
                pick(&mut rng, 1, 40),
                pick(&mut rng, 1, 40),
                k + 1,
                Mode::ALL[k as usize % 3],
                rng.next_u64(),
            )
        };
        let inst = generate(&spec).map_err(|e| e.to_string())?;
        let json = instance_from_json(&instance_to_json(&inst)).map_err(|e| e.to_string())?;
        ensure!(json.value == inst && json.warnings.is_empty(), "{}: JSON round trip differs", inst.name);
        let dzn = parse_dzn(&emit_dzn(&inst), &inst.name).map_err(|e| e.to_string())?;
        ensure!(dzn == Instance { gen: None, ..inst.clone() }, "{}: DZN round trip differs", inst.name);
    }
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/");
    let read = |f: &str| std::fs::read_to_string(format!("{dir}{f}")).unwrap();
    for (file, kind) in [
        ("dim_mismatch.dzn", "dimension"),
        ("negative_c.dzn", "range"),
        ("missing_m.dzn", "missing"),
        ("syntax.dzn", "syntax"),
    ] {
        match parse_dzn(&read(file), "x") {
            Err(e) if e.kind() == kind => {}
            other => return Err(format!("{file}: expected {kind} error, got {other:?}")),
        }
    }
    for (file, kind) in [("missing_m.json", "schema"), ("truncated.json", "json")] {
        match instance_from_json(&read(file)) {
            Err(e) if e.kind() == kind => {}
            other => return Err(format!("{file}: expected {kind} error, got {other:?}")),
        }
    }
    let extra = instance_from_json(&read("extra_field.json")).map_err(|e| e.to_string())?;
    ensure!(extra.warnings.len() == 1, "unknown field not reported");
    Ok("1000 JSON and 1000 DZN round trips, 7 malformed fixtures classified".into())
}

fn optimum(inst: &Instance, side: &[SideConstraint]) -> Result<Option<u32>, String> {
    Ok(solve_bnb(inst, side, &Never).map_err(|e| e.to_string())?.objective())
}

fn invariant_suite() -> Outcome {
    // Quantification is strictly increasing in both levels.
    for mode in Mode::ALL {
        for l in 1..=6u32 {
            for s in 1..=6u32 {
                let q = quantify(mode, l, s).map_err(|e| e.to_string())?;
                if l < 6 {
                    ensure!(quantify(mode, l + 1, s).unwrap() > q, "{mode}: not increasing in l at ({l}, {s})");
                }
                if s < 6 {
                    ensure!(quantify(mode, l, s + 1).unwrap() > q, "{mode}: not increasing in s at ({l}, {s})");
                }
            }
        }
    }

    // Mitigation strictly lowers Q and refuses to eliminate a risk.
    for mode in Mode::ALL {
        for l in 1..=6u8 {
            for s in 1..=6u8 {
                let a = Assignment::from_pairs(mode, &[(l, s)]).map_err(|e| e.to_string())?;
                for dl in 0..=6u8 {
                    for ds in 0..=6u8 {
                        let r = apply_mitigation(&a, &MitigationAction { risk: 0, delta_l: dl, delta_s: ds });
                        match r {
                            Ok(b) => {
                                ensure!(b.q()[0] < a.q()[0] && dl + ds > 0, "({l},{s})-({dl},{ds}) did not lower Q")
                            }
                            Err(CoreError::NoOpMitigation { .. }) => ensure!(dl == 0 && ds == 0, "spurious no-op"),
                            Err(CoreError::RiskElimination { .. }) => {
                                ensure!(dl >= l || ds >= s, "spurious floor error")
                            }
                            Err(e) => return Err(e.to_string()),
                        }
                    }
                }
            }
        }
    }

    let mut rng = SplitMix64::new(0xacce_0008);
    let random_assignment = |rng: &mut SplitMix64, mode: Mode, n: usize| {
        let pairs: Vec<(u8, u8)> = (0..n).map(|_| (pick(rng, 1, 6) as u8, pick(rng, 1, 6) as u8)).collect();
        Assignment::from_pairs(mode, &pairs).unwrap()
    };

    // Scaling a row leaves acceptability unchanged.
    let mut checked = 0;
    for k in 0..100u32 {
        let spec = GenSpec {
            m_range: 0..=2,
            ..GenSpec::new(pick(&mut rng, 1, 6), pick(&mut rng, 1, 4), k + 1, Mode::ALL[k as usize % 3], rng.next_u64())
        };
        let inst = generate(&spec).unwrap();
        let row = pick(&mut rng, 0, inst.m as u32 - 1) as usize;
        let factor = pick(&mut rng, 2, 5);
        let mut matrix = inst.matrix.clone();
        matrix[row].iter_mut().for_each(|w| *w *= factor);
        let scaled = Instance::new("scaled", inst.mode, matrix, inst.c.clone()).map_err(|e| e.to_string())?;
        for _ in 0..50 {
            let a = random_assignment(&mut rng, inst.mode, inst.n);
            let (x, y) = (calc_criticality(&inst, &a).unwrap(), calc_criticality(&scaled, &a).unwrap());
            ensure!(
                x.rows[row].acceptable == y.rows[row].acceptable,
                "{}: scaling row {row} by {factor} changed acceptability",
                inst.name
            );
            ensure!(x.rows[row].value == y.rows[row].value, "{}: scaling changed the criticality", inst.name);
            checked += 1;
        }
    }

    // At full quantification every weighted row has criticality exactly 1.
    for k in 0..100u32 {
        let inst = small_instance(&mut rng, k, 8, 8);
        let full = Assignment::uniform(inst.mode, inst.n, (6, 6)).unwrap();
        for row in calc_criticality(&inst, &full).unwrap().rows {
            ensure!(
                row.value.map_or(row.lambda == 0, |v| v.is_one()),
                "{}: saturated criticality {:?}",
                inst.name,
                row.value
            );
        }
    }

    // Adding a side constraint never raises the optimum.
    for k in 0..100u32 {
        let inst = small_instance(&mut rng, k, 4, 5);
        let base: Vec<_> = (0..pick(&mut rng, 0, 2)).map(|_| random_side(&mut rng, &inst)).collect();
        let mut more = base.clone();
        more.push(random_side(&mut rng, &inst));
        let (before, after) = (optimum(&inst, &base)?, optimum(&inst, &more)?);
        ensure!(after <= before, "{}: {before:?} rose to {after:?} after adding {:?}", inst.name, more.last());
    }

    // Greedy saturation dominates its base, keeps the objective and is idempotent.
    for k in 0..200u32 {
        let inst = small_instance(&mut rng, k, 30, 20);
        let Some(sol) = solve_fastpath(&inst, &[]).unwrap().solution else { continue };
        let g = greedy_saturate(&inst, &sol).map_err(|e| e.to_string())?;
        ensure!(is_acceptable(&inst, &g).unwrap(), "{}: saturated assignment unacceptable", inst.name);
        ensure!(g.min_q() == Some(sol.objective), "{}: saturation changed the objective", inst.name);
        ensure!(g.q().iter().zip(sol.assignment.q()).all(|(a, b)| a >= b), "{}: saturation lowered a risk", inst.name);
        let again = greedy_saturate(&inst, &Solution { assignment: g.clone(), ..sol }).unwrap();
        ensure!(again == g, "{}: saturation not idempotent", inst.name);
    }
    Ok(format!("monotonicity, mitigation, {checked} scaling checks, saturation, 100 anti-monotonicity pairs, 200 greedy runs"))
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_misro");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |args: &[&str]| -> Result<Vec<u8>, String> {
        let out = Command::new(bin).args(args).env_remove("MISRO_SEED").output().map_err(|e| e.to_string())?;
        Ok(out.stdout)
    };
    let gen = ["gen", "--alpha", "50", "--beta", "40", "--gamma", "3", "--mode", "3"];
    let first = run(&gen)?;
    ensure!(first == run(&gen)?, "gen output differs between runs");
    let file = dir.path().join("i.json");
    std::fs::write(&file, &first).map_err(|e| e.to_string())?;
    let side = dir.path().join("side.json");
    std::fs::write(
        &side,
        r#"[{"kind":"max_quant","risk":3,"value":50},{"kind":"restrict_likelihood","risk":7,"levels":[2,5]}]"#,
    )
    .map_err(|e| e.to_string())?;
    let path = file.to_str().unwrap();
    for args in [
        vec!["solve", path],
        vec!["solve", path, "--saturate"],
        vec!["solve", path, "--constraints", side.to_str().unwrap()],
        vec!["solve", path, "--strategy", "fastpath"],
    ] {
        let a = run(&args)?;
        ensure!(!a.is_empty() && a == run(&args)?, "{args:?} output differs between runs");
    }

    let inst = generate(&GenSpec::new(50, 40, 3, Mode::Quadratic, 42)).unwrap();
    let x = solve_bnb(&inst, &[], &WallClock::after(Duration::from_secs(60))).unwrap();
    let y = solve_bnb(&inst, &[], &Never).unwrap();
    ensure!(x == y, "bnb outcomes differ, including node counts");

    let cfg = BenchConfig {
        alpha_set: vec![5, 50],
        beta_set: vec![4, 50],
        versions: 3,
        strategies: vec![Strategy::Fastpath, Strategy::Bnb],
        ..BenchConfig::default()
    };
    let csv = |workers: usize| -> Result<String, String> {
        let report = run_suite(&BenchConfig { workers, ..cfg.clone() }).map_err(|e| e.to_string())?;
        let mut buf = Vec::new();
        write_results(&mut buf, &report.records).map_err(|e| e.to_string())?;
        let text = String::from_utf8(buf).unwrap();
        Ok(text.lines().map(|l| l.rsplitn(3, ',').nth(2).unwrap().to_owned() + "\n").collect())
    };
    let reference = csv(1)?;
    ensure!(reference == csv(1)? && reference == csv(3)?, "bench CSV differs outside the timing columns");
    Ok("gen, solve and bench repeat byte for byte outside timing columns".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("oracle equivalence, unconstrained", unconstrained_equivalence),
        ("oracle equivalence, side-constrained", constrained_equivalence),
        ("analytic collapse", analytic_collapse),
        ("protocol sweep", protocol_sweep),
        ("branch and bound scalability", bnb_scalability),
        ("quality metric", quality_metric),
        ("codec laws", codec_laws),
        ("invariant suite", invariant_suite),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {}. {name}: {detail} [{secs:.1} s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}. {name}: {detail} [{secs:.1} s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
