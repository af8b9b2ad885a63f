use alloc::vec::Vec;

use crate::{achievable_values, side::allowed_pairs, AchievableSet, Assignment, Instance, Result, SideConstraint};

use super::{rows::RowModel, Deadline, Solution, SolveOutcome, SolveStats, Status};

/// Order in which a risk's candidate quantifications are tried.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ValueOrder {
    /// Greatest value first; the first solution found is saturated.
    #[default]
    Descending,
    /// Smallest value first; the first solution found is the pointwise
    /// minimal assignment at the optimal threshold.
    Ascending,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BnbOptions {
    pub value_order: ValueOrder,
}

/// [`solve_bnb_with`] using default options.
pub fn solve_bnb(inst: &Instance, side: &[SideConstraint], deadline: &impl Deadline) -> Result<SolveOutcome> {
    solve_bnb_with(inst, side, deadline, &BnbOptions::default())
}

/// Exact search over per-risk achievable quantification domains.
///
/// Candidate objective thresholds `t` are tried in decreasing order. For a
/// threshold, every risk's lower bound becomes its smallest allowed value
/// `>= t`; because all weights are nonnegative, feasibility at `t` is monotone
/// and the first feasible `t` is optimal. Each threshold is tested by a
/// depth-first search over risks in input order with bounds-consistency
/// propagation on every row.
///
/// Before the descending sweep the pointwise-minimal assignment is checked:
/// if it violates a row nothing is feasible, otherwise it becomes the
/// incumbent returned when the deadline expires.
pub fn solve_bnb_with(
    inst: &Instance,
    side: &[SideConstraint],
    deadline: &impl Deadline,
    opts: &BnbOptions,
) -> Result<SolveOutcome> {
    inst.check()?;
    let pairs = allowed_pairs(inst, side)?;
    let mut stats = SolveStats::default();
    if pairs.iter().any(|p| p.is_empty()) {
        return Ok(SolveOutcome::infeasible(stats));
    }
    let domains = pairs.into_iter().map(|p| achievable_values(inst.mode, p)).collect::<Result<Vec<_>>>()?;
    let mut search = Search {
        inst,
        rows: RowModel::new(inst),
        domains: &domains,
        order: opts.value_order,
        deadline,
        stats: &mut stats,
    };
    let top = domains.iter().map(AchievableSet::max).min().expect("n >= 1");

    if search.deadline.expired() {
        return Ok(timed_out(None, top, stats));
    }
    let floor: Vec<u32> = domains.iter().map(AchievableSet::min).collect();
    search.stats.thresholds += 1;
    if search.root_slack(&floor).is_none() {
        return Ok(SolveOutcome::infeasible(stats));
    }
    let incumbent = Solution::new(search.witness(&floor)?, false);

    // Thresholds above the incumbent, high to low.
    let mut candidates: Vec<u32> =
        domains.iter().flat_map(|d| d.values()).filter(|&v| v > incumbent.objective && v <= top).collect();
    candidates.sort_unstable_by(|a, b| b.cmp(a));
    candidates.dedup();

    for t in candidates {
        if search.deadline.expired() {
            return Ok(timed_out(Some(incumbent), t, stats));
        }
        search.stats.thresholds += 1;
        let lower: Vec<u32> =
            domains.iter().map(|d| d.smallest_at_least(t).expect("t <= max of every domain").value).collect();
        let Some(mut slack) = search.root_slack(&lower) else {
            continue;
        };
        match search.dive(&lower, &mut slack) {
            Dive::Found(q) => {
                let assignment = search.witness(&q)?;
                debug_assert_eq!(assignment.min_q(), Some(t));
                return Ok(SolveOutcome::optimal(assignment, stats));
            }
            Dive::Expired => return Ok(timed_out(Some(incumbent), t, stats)),
            Dive::Exhausted => {}
        }
    }

    let mut solution = incumbent;
    solution.proven_optimal = true;
    Ok(SolveOutcome { status: Status::Optimal, bound: Some(solution.objective), solution: Some(solution), stats })
}

fn timed_out(incumbent: Option<Solution>, bound: u32, stats: SolveStats) -> SolveOutcome {
    let status = match incumbent {
        Some(_) => Status::DeadlineExceededWithIncumbent,
        None => Status::DeadlineExceededNoIncumbent,
    };
    SolveOutcome { status, solution: incumbent, bound: Some(bound), stats }
}

enum Dive {
    Found(Vec<u32>),
    Exhausted,
    Expired,
}

/// Remaining candidate indices `[lo, hi)` into one risk's domain.
struct Frame {
    lo: usize,
    hi: usize,
    applied: Option<u32>,
}

struct Search<'a, D> {
    inst: &'a Instance,
    rows: RowModel,
    domains: &'a [AchievableSet],
    order: ValueOrder,
    deadline: &'a D,
    stats: &'a mut SolveStats,
}

impl<D: Deadline> Search<'_, D> {
    /// Slack of every row at `q`, or `None` if some row is violated.
    fn root_slack(&mut self, q: &[u32]) -> Option<Vec<i64>> {
        self.stats.propagations += 1;
        let slack = self.rows.slack(q);
        slack.iter().all(|&s| s >= 0).then_some(slack)
    }

    /// Candidate range for risk `j`: domain values between its lower bound
    /// and the largest value every row still admits.
    fn open(&mut self, j: usize, lower: u32, slack: &[i64]) -> Frame {
        self.stats.propagations += 1;
        let domain = &self.domains[j];
        let upper = self.rows.headroom(j, slack).map_or(u32::MAX, |h| lower.saturating_add(h));
        Frame { lo: domain.lower_index(lower), hi: domain.upper_index(upper), applied: None }
    }

    fn dive(&mut self, lower: &[u32], slack: &mut [i64]) -> Dive {
        let n = lower.len();
        let mut q = lower.to_vec();
        let mut frames = Vec::with_capacity(n);
        frames.push(self.open(0, lower[0], slack));
        loop {
            let j = frames.len() - 1;
            let frame = frames.last_mut().unwrap();
            if let Some(v) = frame.applied.take() {
                self.rows.shift(j, lower[j] as i64 - v as i64, slack);
                q[j] = lower[j];
            }
            if frame.lo >= frame.hi {
                frames.pop();
                if frames.is_empty() {
                    return Dive::Exhausted;
                }
                continue;
            }
            let idx = match self.order {
                ValueOrder::Descending => {
                    frame.hi -= 1;
                    frame.hi
                }
                ValueOrder::Ascending => {
                    frame.lo += 1;
                    frame.lo - 1
                }
            };
            let v = self.domains[j].entries()[idx].value;
            self.stats.nodes += 1;
            if self.deadline.expired() {
                return Dive::Expired;
            }
            frame.applied = Some(v);
            q[j] = v;
            if !self.rows.shift(j, v as i64 - lower[j] as i64, slack) {
                continue;
            }
            if j + 1 == n {
                return Dive::Found(q);
            }
            let next = self.open(j + 1, lower[j + 1], slack);
            frames.push(next);
        }
    }

    fn witness(&self, q: &[u32]) -> Result<Assignment> {
        let pairs: Vec<(u8, u8)> =
            q.iter().zip(self.domains).map(|(&v, d)| d.witness(v).expect("value comes from the domain")).collect();
        Assignment::from_pairs(self.inst.mode, &pairs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{
        is_acceptable,
        solvers::{solve_fastpath, CheckBudget, Never},
        Error, Mode,
    };
    use alloc::vec;

    fn example_a() -> Instance {
        Instance::new("a", Mode::Bilinear, vec![vec![10, 0, 5], vec![2, 2, 2]], vec![50, 75]).unwrap()
    }

    #[test]
    fn example_a_matches_fastpath_and_saturates() {
        let inst = example_a();
        let out = solve_bnb(&inst, &[], &Never).unwrap();
        assert_eq!(out.status, Status::Optimal);
        assert_eq!(out.objective(), Some(18));
        assert_eq!(out.objective(), solve_fastpath(&inst, &[]).unwrap().objective());
        assert_eq!(out.solution.unwrap().assignment.q(), &[18, 36, 18]);
    }

    #[test]
    fn ascending_order_returns_uniform() {
        let inst = example_a();
        let opts = BnbOptions { value_order: ValueOrder::Ascending };
        let out = solve_bnb_with(&inst, &[], &Never, &opts).unwrap();
        assert_eq!(out.solution.unwrap().assignment.q(), &[18, 18, 18]);
    }

    #[test]
    fn fixed_severity_caps_the_objective() {
        let inst = example_a();
        let side = [SideConstraint::FixSeverity { risk: 0, level: 2 }];
        let out = solve_bnb(&inst, &side, &Never).unwrap();
        assert_eq!(out.status, Status::Optimal);
        assert_eq!(out.objective(), Some(12));
        let a = out.solution.unwrap().assignment;
        assert_eq!(a.severity()[0], 2);
        assert!(is_acceptable(&inst, &a).unwrap());
    }

    #[test]
    fn infeasible_and_inconsistent() {
        let inst = Instance::new("i", Mode::Linear, vec![vec![5]], vec![10]).unwrap();
        assert_eq!(solve_bnb(&inst, &[], &Never).unwrap().status, Status::Infeasible);

        let inst = example_a();
        let side =
            [SideConstraint::FixLikelihood { risk: 1, level: 1 }, SideConstraint::MinQuant { risk: 1, value: 7 }];
        let out = solve_bnb(&inst, &side, &Never).unwrap();
        assert_eq!(out.status, Status::Infeasible);
        assert_eq!(out.bound, None);
    }

    #[test]
    fn precondition_errors() {
        let inst = example_a();
        let side = [SideConstraint::MinQuant { risk: 0, value: 37 }];
        assert!(matches!(solve_bnb(&inst, &side, &Never), Err(Error::InvalidSideConstraint { index: 0, .. })));
    }

    #[test]
    fn deadline_paths() {
        let inst = example_a();
        let out = solve_bnb(&inst, &[], &CheckBudget::new(0)).unwrap();
        assert_eq!(out.status, Status::DeadlineExceededNoIncumbent);
        assert!(out.solution.is_none());
        assert_eq!(out.bound, Some(36));

        let out = solve_bnb(&inst, &[], &CheckBudget::new(1)).unwrap();
        assert_eq!(out.status, Status::DeadlineExceededWithIncumbent);
        let sol = out.solution.unwrap();
        assert_eq!(sol.objective, 1);
        assert!(!sol.proven_optimal);
        assert_eq!(out.bound, Some(36));
    }

    #[test]
    fn deterministic_stats() {
        let inst = example_a();
        let a = solve_bnb(&inst, &[], &Never).unwrap();
        let b = solve_bnb(&inst, &[], &Never).unwrap();
        assert_eq!(a, b);
        assert!(a.stats.nodes >= 3);
    }
}
