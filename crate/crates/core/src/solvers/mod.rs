//! Exact strategies for the max-min problem.
//!
//! * [`solve_fastpath`] uses the closed form available without side
//!   constraints.
//! * [`solve_bnb`] runs a descending threshold search with bounds-consistency
//!   propagation and accepts [`SideConstraint`](crate::SideConstraint)s.
//! * [`greedy_saturate`] post-processes a solution, raising each risk as far
//!   as the rows allow.

mod bnb;
mod deadline;
mod fastpath;
mod greedy;
mod rows;

use core::{fmt, time::Duration};

pub use self::{
    bnb::{solve_bnb, solve_bnb_with, BnbOptions, ValueOrder},
    deadline::{CheckBudget, Deadline, Never},
    fastpath::solve_fastpath,
    greedy::{greedy_saturate, saturate_within},
};
use crate::Assignment;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Optimal,
    FeasibleNotProven,
    Infeasible,
    DeadlineExceededWithIncumbent,
    DeadlineExceededNoIncumbent,
}

impl Status {
    pub fn is_deadline(self) -> bool {
        matches!(self, Status::DeadlineExceededWithIncumbent | Status::DeadlineExceededNoIncumbent)
    }

    /// Short identifier used in CSV output. Both deadline variants map to
    /// `DeadlineExceeded`; the incumbent shows up in the objective column.
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Optimal => "Optimal",
            Status::FeasibleNotProven => "FeasibleNotProven",
            Status::Infeasible => "Infeasible",
            Status::DeadlineExceededWithIncumbent | Status::DeadlineExceededNoIncumbent => "DeadlineExceeded",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub assignment: Assignment,
    /// `min_j Q[j]`
    pub objective: u32,
    pub proven_optimal: bool,
}

impl Solution {
    pub(crate) fn new(assignment: Assignment, proven_optimal: bool) -> Self {
        let objective = assignment.min_q().expect("solutions cover at least one risk");
        Solution { assignment, objective, proven_optimal }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub nodes: u64,
    pub propagations: u64,
    /// Objective thresholds tested by the threshold search.
    pub thresholds: u64,
    /// Filled in by callers that own a clock.
    pub wall_time: Option<Duration>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: Status,
    pub solution: Option<Solution>,
    /// Best proven upper bound on the objective. Meaningless (`None`) when
    /// infeasible.
    pub bound: Option<u32>,
    pub stats: SolveStats,
}

impl SolveOutcome {
    pub(crate) fn infeasible(stats: SolveStats) -> Self {
        SolveOutcome { status: Status::Infeasible, solution: None, bound: None, stats }
    }

    pub(crate) fn optimal(assignment: Assignment, stats: SolveStats) -> Self {
        let solution = Solution::new(assignment, true);
        SolveOutcome { status: Status::Optimal, bound: Some(solution.objective), solution: Some(solution), stats }
    }

    pub fn objective(&self) -> Option<u32> {
        self.solution.as_ref().map(|s| s.objective)
    }
}
