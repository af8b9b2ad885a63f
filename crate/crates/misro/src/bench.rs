//! Benchmark sweeps over generated instances.
//!
//! Every `(alpha, beta, gamma, mode)` combination of a [`BenchConfig`] is
//! generated once and solved by each requested strategy. Results are one
//! [`BenchRecord`] per `(instance, strategy)`, in configuration order,
//! independent of the number of workers.

use std::{
    fmt, fs, io,
    path::{Path, PathBuf},
    sync::{
        atomic::{AtomicUsize, Ordering},
        mpsc,
    },
    thread,
    time::Duration,
};

use misro_core::{
    generate, is_acceptable,
    solvers::{BnbOptions, SolveOutcome, Status},
    Error as CoreError, GenSpec, Instance, Mode,
};
use serde::Deserialize;

use crate::solve::{solve, SolveConfig, Strategy};

pub const RESULTS_FILE: &str = "results.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const RESULTS_HEADER: [&str; 12] = [
    "instance",
    "alpha",
    "beta",
    "gamma",
    "mode",
    "strategy",
    "status",
    "best_minq",
    "optimum_minq",
    "quality_pct",
    "time_ms",
    "nodes",
];
pub const SUMMARY_HEADER: [&str; 11] = [
    "alpha",
    "beta",
    "mode",
    "strategy",
    "instances",
    "optimal",
    "infeasible",
    "timeouts",
    "failures",
    "mean_time_ms",
    "median_time_ms",
];

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot write {}: {source}", path.display())]
    Output {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("best value {best} exceeds optimum {optimum}")]
    Inconsistent { best: u32, optimum: u32 },
    #[error("{0} rows failed the soundness audit")]
    Unsound(usize),
}

impl BenchError {
    pub fn kind(&self) -> &'static str {
        match self {
            BenchError::Config(_) => "config",
            BenchError::Output { .. } => "io",
            BenchError::Inconsistent { .. } | BenchError::Unsound(_) => "inconsistent",
        }
    }
}

/// A percentage with one decimal, stored in tenths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quality {
    tenths: u32,
}

impl Quality {
    pub const FULL: Quality = Quality { tenths: 1000 };

    pub fn tenths(self) -> u32 {
        self.tenths
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.tenths) / 10.0
    }
}

impl fmt::Display for Quality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.tenths / 10, self.tenths % 10)
    }
}

/// `100 * best / optimum`, rounded half up to one decimal.
pub fn quality(best: u32, optimum: u32) -> Result<Quality, BenchError> {
    if optimum == 0 || best > optimum {
        return Err(BenchError::Inconsistent { best, optimum });
    }
    let (best, optimum) = (u64::from(best), u64::from(optimum));
    let tenths = (2000 * best + optimum) / (2 * optimum);
    Ok(Quality { tenths: tenths as u32 })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub alpha_set: Vec<u32>,
    pub beta_set: Vec<u32>,
    pub versions: u32,
    pub modes: Vec<Mode>,
    pub strategies: Vec<Strategy>,
    pub timeout: Duration,
    pub seed: u64,
    pub c_range: (u32, u32),
    pub m_range: (u32, u32),
    pub oracle_cap: u128,
    pub workers: usize,
    /// Directory receiving the CSV files; nothing is written when absent.
    pub output: Option<PathBuf>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            alpha_set: vec![5, 10, 50, 100, 150, 200, 250, 300, 400, 500],
            beta_set: vec![4, 50, 100, 150, 200, 250, 300, 400],
            versions: 10,
            modes: Mode::ALL.to_vec(),
            strategies: vec![Strategy::Fastpath, Strategy::Bnb],
            timeout: Duration::from_secs(300),
            seed: 42,
            c_range: (*GenSpec::DEFAULT_C_RANGE.start(), *GenSpec::DEFAULT_C_RANGE.end()),
            m_range: (*GenSpec::DEFAULT_M_RANGE.start(), *GenSpec::DEFAULT_M_RANGE.end()),
            oracle_cap: misro_core::oracle::DEFAULT_CAP,
            workers: thread::available_parallelism().map_or(1, |n| n.get()),
            output: None,
        }
    }
}

#[derive(Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ConfigFile {
    alpha_set: Vec<u32>,
    beta_set: Vec<u32>,
    versions: u32,
    modes: Vec<u8>,
    strategies: Vec<Strategy>,
    timeout_secs: f64,
    seed: u64,
    c_range: [u32; 2],
    m_range: [u32; 2],
    oracle_cap: u64,
    workers: usize,
    output: Option<PathBuf>,
}

impl Default for ConfigFile {
    fn default() -> Self {
        let d = BenchConfig::default();
        ConfigFile {
            alpha_set: d.alpha_set,
            beta_set: d.beta_set,
            versions: d.versions,
            modes: d.modes.iter().map(|m| m.code()).collect(),
            strategies: d.strategies,
            timeout_secs: d.timeout.as_secs_f64(),
            seed: d.seed,
            c_range: [d.c_range.0, d.c_range.1],
            m_range: [d.m_range.0, d.m_range.1],
            oracle_cap: d.oracle_cap as u64,
            workers: d.workers,
            output: d.output,
        }
    }
}

impl BenchConfig {
    /// Reads a TOML configuration; omitted keys keep their defaults.
    pub fn from_toml(text: &str) -> Result<Self, BenchError> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| BenchError::Config(e.message().to_string()))?;
        let modes = file
            .modes
            .iter()
            .map(|&c| Mode::from_code(c).ok_or_else(|| BenchError::Config(format!("unknown mode code {c}"))))
            .collect::<Result<_, _>>()?;
        let timeout = Duration::try_from_secs_f64(file.timeout_secs)
            .map_err(|_| BenchError::Config(format!("bad timeout {}", file.timeout_secs)))?;
        let cfg = BenchConfig {
            alpha_set: file.alpha_set,
            beta_set: file.beta_set,
            versions: file.versions,
            modes,
            strategies: file.strategies,
            timeout,
            seed: file.seed,
            c_range: (file.c_range[0], file.c_range[1]),
            m_range: (file.m_range[0], file.m_range[1]),
            oracle_cap: u128::from(file.oracle_cap),
            workers: file.workers,
            output: file.output,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let fail = |msg: &str| Err(BenchError::Config(msg.to_string()));
        if self.alpha_set.is_empty() || self.beta_set.is_empty() || self.modes.is_empty() || self.strategies.is_empty()
        {
            return fail("alpha_set, beta_set, modes and strategies must be nonempty");
        }
        if self.timeout.is_zero() {
            return fail("timeout must be positive");
        }
        if self.versions == 0 {
            return fail("versions must be at least 1");
        }
        if self.workers == 0 {
            return fail("workers must be at least 1");
        }
        for job in self.jobs().take(1) {
            job.check().map_err(|e| BenchError::Config(e.to_string()))?;
        }
        if self.alpha_set.contains(&0) || self.beta_set.contains(&0) {
            return fail("alpha and beta must be at least 1");
        }
        Ok(())
    }

    fn spec(&self, alpha: u32, beta: u32, gamma: u32, mode: Mode) -> GenSpec {
        GenSpec {
            m_range: self.m_range.0..=self.m_range.1,
            c_range: self.c_range.0..=self.c_range.1,
            ..GenSpec::new(alpha, beta, gamma, mode, self.seed)
        }
    }

    /// Every generator spec of the sweep, in emission order.
    pub fn jobs(&self) -> impl Iterator<Item = GenSpec> + '_ {
        self.alpha_set.iter().flat_map(move |&a| {
            self.beta_set.iter().flat_map(move |&b| {
                (1..=self.versions).flat_map(move |g| self.modes.iter().map(move |&mode| self.spec(a, b, g, mode)))
            })
        })
    }

    pub fn expected_rows(&self) -> usize {
        self.alpha_set.len() * self.beta_set.len() * self.versions as usize * self.modes.len() * self.strategies.len()
    }

    fn solve_config(&self) -> SolveConfig {
        SolveConfig { timeout: self.timeout, oracle_cap: self.oracle_cap, bnb: BnbOptions::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BenchStatus {
    Solver(Status),
    /// The oracle refused an instance above its enumeration cap.
    Skipped,
    /// A returned assignment failed the independent acceptability check.
    Unsound,
    Error,
}

impl BenchStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            BenchStatus::Solver(s) => s.as_str(),
            BenchStatus::Skipped => "Skipped",
            BenchStatus::Unsound => "Unsound",
            BenchStatus::Error => "Error",
        }
    }
}

impl fmt::Display for BenchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub instance: String,
    pub alpha: u32,
    pub beta: u32,
    pub gamma: u32,
    pub mode: Mode,
    pub strategy: Strategy,
    pub status: BenchStatus,
    pub best_minq: Option<u32>,
    /// Optimum proven by any strategy on the same instance.
    pub optimum_minq: Option<u32>,
    pub quality_pct: Option<Quality>,
    pub time: Duration,
    pub nodes: u64,
}

impl BenchRecord {
    pub fn time_ms(&self) -> f64 {
        self.time.as_secs_f64() * 1e3
    }

    fn fields(&self) -> [String; 12] {
        let opt = |v: Option<u32>| v.map_or_else(String::new, |v| v.to_string());
        [
            self.instance.clone(),
            self.alpha.to_string(),
            self.beta.to_string(),
            self.gamma.to_string(),
            self.mode.code().to_string(),
            self.strategy.to_string(),
            self.status.to_string(),
            opt(self.best_minq),
            opt(self.optimum_minq),
            self.quality_pct.map_or_else(String::new, |q| q.to_string()),
            format!("{:.3}", self.time_ms()),
            self.nodes.to_string(),
        ]
    }
}

/// Aggregate over the versions of one configuration and strategy. Times are
/// taken over solved runs only, that is Optimal or Infeasible.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub alpha: u32,
    pub beta: u32,
    pub mode: Mode,
    pub strategy: Strategy,
    pub instances: usize,
    pub optimal: usize,
    pub infeasible: usize,
    pub timeouts: usize,
    pub failures: usize,
    pub mean_time_ms: Option<f64>,
    pub median_time_ms: Option<f64>,
}

impl SummaryRow {
    fn fields(&self) -> [String; 11] {
        let ms = |v: Option<f64>| v.map_or_else(String::new, |v| format!("{v:.3}"));
        [
            self.alpha.to_string(),
            self.beta.to_string(),
            self.mode.code().to_string(),
            self.strategy.to_string(),
            self.instances.to_string(),
            self.optimal.to_string(),
            self.infeasible.to_string(),
            self.timeouts.to_string(),
            self.failures.to_string(),
            ms(self.mean_time_ms),
            ms(self.median_time_ms),
        ]
    }
}

pub fn summarize(records: &[BenchRecord]) -> Vec<SummaryRow> {
    let mut rows: Vec<(SummaryRow, Vec<f64>)> = Vec::new();
    for r in records {
        let key = (r.alpha, r.beta, r.mode, r.strategy);
        let at = match rows.iter().position(|(s, _)| (s.alpha, s.beta, s.mode, s.strategy) == key) {
            Some(at) => at,
            None => {
                let row = SummaryRow {
                    alpha: r.alpha,
                    beta: r.beta,
                    mode: r.mode,
                    strategy: r.strategy,
                    instances: 0,
                    optimal: 0,
                    infeasible: 0,
                    timeouts: 0,
                    failures: 0,
                    mean_time_ms: None,
                    median_time_ms: None,
                };
                rows.push((row, Vec::new()));
                rows.len() - 1
            }
        };
        let (row, times) = &mut rows[at];
        row.instances += 1;
        match r.status {
            BenchStatus::Solver(Status::Optimal) => row.optimal += 1,
            BenchStatus::Solver(Status::Infeasible) => row.infeasible += 1,
            BenchStatus::Solver(s) if s.is_deadline() => row.timeouts += 1,
            _ => row.failures += 1,
        }
        if matches!(r.status, BenchStatus::Solver(Status::Optimal | Status::Infeasible)) {
            times.push(r.time_ms());
        }
    }
    rows.into_iter()
        .map(|(mut row, mut times)| {
            if !times.is_empty() {
                times.sort_by(f64::total_cmp);
                let k = times.len();
                row.mean_time_ms = Some(times.iter().sum::<f64>() / k as f64);
                row.median_time_ms =
                    Some(if k % 2 == 1 { times[k / 2] } else { (times[k / 2 - 1] + times[k / 2]) / 2.0 });
            }
            row
        })
        .collect()
}

fn csv_writer<W: io::Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)
}

fn write_rows<W: io::Write, const N: usize>(
    out: W,
    header: [&str; N],
    rows: impl Iterator<Item = [String; N]>,
) -> io::Result<()> {
    let mut w = csv_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()
}

pub fn write_results<W: io::Write>(out: W, records: &[BenchRecord]) -> io::Result<()> {
    write_rows(out, RESULTS_HEADER, records.iter().map(BenchRecord::fields))
}

pub fn write_summary<W: io::Write>(out: W, rows: &[SummaryRow]) -> io::Result<()> {
    write_rows(out, SUMMARY_HEADER, rows.iter().map(SummaryRow::fields))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
    pub summary: Vec<SummaryRow>,
}

fn classify(result: &misro_core::Result<SolveOutcome>, inst: &Instance) -> BenchStatus {
    match result {
        Ok(out) => match &out.solution {
            Some(sol) if !is_acceptable(inst, &sol.assignment).unwrap_or(false) => BenchStatus::Unsound,
            _ => BenchStatus::Solver(out.status),
        },
        Err(CoreError::OracleCapExceeded { .. }) => BenchStatus::Skipped,
        Err(_) => BenchStatus::Error,
    }
}

fn run_job(cfg: &BenchConfig, spec: &GenSpec) -> Vec<BenchRecord> {
    let record = |strategy, status, best, time, nodes| BenchRecord {
        instance: spec.name(),
        alpha: spec.alpha,
        beta: spec.beta,
        gamma: spec.gamma,
        mode: spec.mode,
        strategy,
        status,
        best_minq: best,
        optimum_minq: None,
        quality_pct: None,
        time,
        nodes,
    };
    let inst = match generate(spec) {
        Ok(inst) => inst,
        Err(e) => {
            log::error!("{}: generation failed: {e}", spec.name());
            return cfg.strategies.iter().map(|&st| record(st, BenchStatus::Error, None, Duration::ZERO, 0)).collect();
        }
    };
    let solve_cfg = cfg.solve_config();
    let mut records: Vec<BenchRecord> = cfg
        .strategies
        .iter()
        .map(|&st| {
            let result = solve(st, &inst, &[], &solve_cfg);
            let status = classify(&result, &inst);
            if let Err(e) = &result {
                log::warn!("{} {st}: {e}", inst.name);
            }
            let (best, time, nodes) = match &result {
                Ok(out) => (out.objective(), out.stats.wall_time.unwrap_or_default(), out.stats.nodes),
                Err(_) => (None, Duration::ZERO, 0),
            };
            record(st, status, best, time, nodes)
        })
        .collect();

    let proven: Vec<u32> = records
        .iter()
        .filter(|r| r.status == BenchStatus::Solver(Status::Optimal))
        .filter_map(|r| r.best_minq)
        .collect();
    let optimum = proven.iter().copied().max();
    if proven.iter().any(|&v| Some(v) != optimum) {
        log::error!("{}: strategies disagree on the optimum: {proven:?}", inst.name);
        for r in records.iter_mut().filter(|r| r.status == BenchStatus::Solver(Status::Optimal)) {
            r.status = BenchStatus::Unsound;
        }
        return records;
    }
    for r in &mut records {
        r.optimum_minq = optimum;
        if let (Some(best), Some(opt)) = (r.best_minq, optimum) {
            match quality(best, opt) {
                Ok(q) => r.quality_pct = Some(q),
                Err(e) => {
                    log::error!("{} {}: {e}", r.instance, r.strategy);
                    r.status = BenchStatus::Unsound;
                }
            }
        }
    }
    records
}

fn prepare_output(dir: &Path) -> Result<(), BenchError> {
    let fail = |path: &Path| {
        let path = path.to_path_buf();
        move |source| BenchError::Output { path, source }
    };
    fs::create_dir_all(dir).map_err(fail(dir))?;
    for name in [RESULTS_FILE, SUMMARY_FILE] {
        let path = dir.join(name);
        fs::File::create(&path).map_err(fail(&path))?;
    }
    Ok(())
}

fn write_output(dir: &Path, report: &BenchReport) -> Result<(), BenchError> {
    let write = |name: &str, f: &dyn Fn(&mut Vec<u8>) -> io::Result<()>| {
        let path = dir.join(name);
        let mut buf = Vec::new();
        f(&mut buf).and_then(|()| fs::write(&path, buf)).map_err(|source| BenchError::Output { path, source })
    };
    write(RESULTS_FILE, &|b| write_results(b, &report.records))?;
    write(SUMMARY_FILE, &|b| write_summary(b, &report.summary))
}

/// Runs the sweep described by `cfg`, writing `results.csv` and
/// `summary.csv` into `cfg.output` when set. Solver failures become status
/// rows; only configuration and output errors abort.
pub fn run_suite(cfg: &BenchConfig) -> Result<BenchReport, BenchError> {
    cfg.validate()?;
    if let Some(dir) = &cfg.output {
        prepare_output(dir)?;
    }
    let jobs: Vec<GenSpec> = cfg.jobs().collect();
    let mut slots: Vec<Option<Vec<BenchRecord>>> = vec![None; jobs.len()];
    let workers = cfg.workers.min(jobs.len()).max(1);
    log::info!("running {} instances on {workers} worker(s)", jobs.len());
    if workers == 1 {
        for (slot, spec) in slots.iter_mut().zip(&jobs) {
            *slot = Some(run_job(cfg, spec));
        }
    } else {
        let next = AtomicUsize::new(0);
        let (tx, rx) = mpsc::channel();
        thread::scope(|s| {
            for _ in 0..workers {
                let tx = tx.clone();
                let (next, jobs) = (&next, &jobs);
                s.spawn(move || loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(spec) = jobs.get(i) else { break };
                    if tx.send((i, run_job(cfg, spec))).is_err() {
                        break;
                    }
                });
            }
            drop(tx);
            for (i, recs) in rx {
                slots[i] = Some(recs);
            }
        });
    }
    let records: Vec<BenchRecord> = slots.into_iter().flat_map(|s| s.expect("every job reports")).collect();
    let report = BenchReport { summary: summarize(&records), records };
    if let Some(dir) = &cfg.output {
        write_output(dir, &report)?;
    }
    Ok(report)
}
