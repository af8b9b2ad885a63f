//! Wall-clock deadlines and timed solver dispatch.

use std::{
    fmt,
    str::FromStr,
    time::{Duration, Instant},
};

use misro_core::{
    oracle::brute_force,
    solvers::{solve_bnb_with, solve_fastpath, BnbOptions, Deadline, SolveOutcome},
    Instance, SideConstraint,
};
use serde::{Deserialize, Serialize};

/// Expires once the wall clock passes a fixed instant.
#[derive(Debug, Clone, Copy)]
pub struct WallClock {
    end: Option<Instant>,
}

impl WallClock {
    pub fn after(timeout: Duration) -> Self {
        WallClock { end: Instant::now().checked_add(timeout) }
    }
}

impl Deadline for WallClock {
    fn expired(&self) -> bool {
        self.end.is_some_and(|end| Instant::now() >= end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Fastpath,
    Bnb,
    Oracle,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Fastpath, Strategy::Bnb, Strategy::Oracle];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Fastpath => "fastpath",
            Strategy::Bnb => "bnb",
            Strategy::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL.into_iter().find(|st| st.as_str() == s).ok_or_else(|| format!("unknown strategy `{s}`"))
    }
}

/// Per-call solver settings.
#[derive(Debug, Clone)]
pub struct SolveConfig {
    pub timeout: Duration,
    pub oracle_cap: u128,
    pub bnb: BnbOptions,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            timeout: Duration::from_secs(300),
            oracle_cap: misro_core::oracle::DEFAULT_CAP,
            bnb: BnbOptions::default(),
        }
    }
}

/// Runs `strategy` and records its wall time in the outcome. The timeout
/// applies to branch and bound only; the other strategies run to completion.
pub fn solve(
    strategy: Strategy,
    inst: &Instance,
    side: &[SideConstraint],
    cfg: &SolveConfig,
) -> misro_core::Result<SolveOutcome> {
    let start = Instant::now();
    let mut outcome = match strategy {
        Strategy::Fastpath => solve_fastpath(inst, side)?,
        Strategy::Bnb => solve_bnb_with(inst, side, &WallClock::after(cfg.timeout), &cfg.bnb)?,
        Strategy::Oracle => brute_force(inst, side, cfg.oracle_cap)?,
    };
    outcome.stats.wall_time = Some(start.elapsed());
    Ok(outcome)
}
