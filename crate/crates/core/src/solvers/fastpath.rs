use crate::{criticality::CRITICALITY_SCALE, AchievableSet, Assignment, Error, Instance, Result, SideConstraint};

use super::{SolveOutcome, SolveStats};

/// Closed-form optimum of the unconstrained problem.
///
/// Weights are nonnegative and the objective is max-min, so if the smallest
/// quantification is `t` every row's weighted average is at least `t`, while
/// the uniform assignment `Q = (t, ..., t)` reaches exactly `t`. Each row with
/// `lambda_i > 0` therefore reduces to `100 t <= C_i q_den`, and the optimum is
/// the largest achievable `t` passing the tightest such row. Runs in
/// `O(m n)`.
///
/// Returns the uniform assignment built from the smallest witness pair of
/// `t`. Refuses side constraints.
pub fn solve_fastpath(inst: &Instance, side: &[SideConstraint]) -> Result<SolveOutcome> {
    if !side.is_empty() {
        return Err(Error::UnsupportedConstraints);
    }
    inst.check()?;
    let q_den = inst.mode.denominator() as u64;
    let binding = inst.c.iter().zip(&inst.lambda).filter(|(_, &l)| l > 0).map(|(&c, _)| c).min();
    // 100 t <= q_den * C  <=>  t <= floor(q_den * C / 100)
    let limit = binding.map_or(q_den, |c| q_den * c as u64 / CRITICALITY_SCALE);
    let stats = SolveStats::default();
    match AchievableSet::full(inst.mode).largest_at_most(limit as u32) {
        Some(best) => {
            let assignment = Assignment::uniform(inst.mode, inst.n, best.witness)?;
            Ok(SolveOutcome::optimal(assignment, stats))
        }
        None => Ok(SolveOutcome::infeasible(stats)),
    }
}
