//! Exhaustive reference solver for small instances.
//!
//! Shares nothing with [`crate::solvers`] beyond the public data types. It
//! derives quantifications from the real-valued definitions (levels `k / 6`)
//! with its own rational arithmetic, filters side constraints with its own
//! predicate, and checks rows with 128-bit sums on a common 1/216 grid.

use alloc::{vec, vec::Vec};

use crate::{
    solvers::{Solution, SolveOutcome, SolveStats, Status},
    Assignment, Error, Instance, Mode, Result, SideConstraint,
};

/// Largest number of assignments enumerated by default (`36^5` fits).
pub const DEFAULT_CAP: u128 = 100_000_000;

const LEVELS: u64 = 6;
/// Common denominator of every quantification: lcm(12, 36, 216).
const GRID: u128 = 216;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Ratio(u128, u128);

impl Ratio {
    fn new(n: u128, d: u128) -> Ratio {
        let (mut a, mut b) = (n, d);
        while b != 0 {
            (a, b) = (b, a % b);
        }
        Ratio(n / a, d / a)
    }
    fn add(self, o: Ratio) -> Ratio {
        Ratio::new(self.0 * o.1 + o.0 * self.1, self.1 * o.1)
    }
    fn mul(self, o: Ratio) -> Ratio {
        Ratio::new(self.0 * o.0, self.1 * o.1)
    }
}

/// Quantification as an exact ratio in `(0, 1]`.
fn real_quantification(mode: Mode, l: u8, s: u8) -> Ratio {
    let l = Ratio::new(l as u128, LEVELS as u128);
    let s = Ratio::new(s as u128, LEVELS as u128);
    match mode {
        Mode::Linear => l.add(s).mul(Ratio::new(1, 2)),
        Mode::Bilinear => l.mul(s),
        Mode::Quadratic => l.mul(s).mul(s),
    }
}

/// Smallest denominator on which every quantification of `mode` is integral.
fn integer_scale(mode: Mode) -> u128 {
    let mut scale = 1u128;
    for l in 1..=LEVELS as u8 {
        for s in 1..=LEVELS as u8 {
            let d = real_quantification(mode, l, s).1;
            let mut g = (scale, d);
            while g.1 != 0 {
                g = (g.1, g.0 % g.1);
            }
            scale = scale / g.0 * d;
        }
    }
    scale
}

#[derive(Clone, Copy)]
struct Choice {
    l: u8,
    s: u8,
    /// Quantification in units of 1/216.
    grid: u128,
}

fn admits(c: &SideConstraint, scale: u128, ch: &Choice) -> bool {
    // q >= v / scale  <=>  grid * scale >= v * 216
    let lhs = ch.grid * scale;
    match *c {
        SideConstraint::FixLikelihood { level, .. } => ch.l == level,
        SideConstraint::FixSeverity { level, .. } => ch.s == level,
        SideConstraint::RestrictLikelihood { levels, .. } => (levels >> (ch.l - 1)) & 1 == 1,
        SideConstraint::RestrictSeverity { levels, .. } => (levels >> (ch.s - 1)) & 1 == 1,
        SideConstraint::MinQuant { value, .. } => lhs >= value as u128 * GRID,
        SideConstraint::MaxQuant { value, .. } => lhs <= value as u128 * GRID,
    }
}

struct Row {
    weights: Vec<u128>,
    /// `216 * C * lambda`, compared against `100 * sum_j M * grid_j`.
    limit: u128,
}

struct Enumeration<'a> {
    choices: &'a [Vec<Choice>],
    rows: &'a [Row],
    picks: Vec<usize>,
    best: Option<(u128, Vec<usize>)>,
    leaves: u64,
}

impl Enumeration<'_> {
    fn run(&mut self, depth: usize, sums: &[u128], min_grid: u128) {
        if depth == self.choices.len() {
            self.leaves += 1;
            let ok = self.rows.iter().zip(sums).all(|(row, &sum)| 100 * sum <= row.limit);
            if ok && self.best.as_ref().is_none_or(|(b, _)| min_grid > *b) {
                self.best = Some((min_grid, self.picks.clone()));
            }
            return;
        }
        let mut next = vec![0u128; sums.len()];
        for (k, ch) in self.choices[depth].iter().enumerate() {
            for ((n, &s), row) in next.iter_mut().zip(sums).zip(self.rows) {
                *n = s + row.weights[depth] * ch.grid;
            }
            self.picks[depth] = k;
            self.run(depth + 1, &next, min_grid.min(ch.grid));
        }
    }
}

/// Exhaustively enumerates every `(l, s)` assignment allowed by `side` in
/// lexicographic order (risk by risk, then `l`, then `s`) and returns the
/// max-min optimum with the lexicographically smallest optimal assignment.
///
/// Fails with [`Error::OracleCapExceeded`] when the product of per-risk
/// allowed pair counts exceeds `cap`.
pub fn brute_force(inst: &Instance, side: &[SideConstraint], cap: u128) -> Result<SolveOutcome> {
    inst.check()?;
    for (index, c) in side.iter().enumerate() {
        c.check(inst.n, inst.mode).map_err(|reason| Error::InvalidSideConstraint { index, reason })?;
    }
    let mode = inst.mode;
    let scale = integer_scale(mode);

    let choices: Vec<Vec<Choice>> = (0..inst.n)
        .map(|j| {
            let mut list = Vec::new();
            for l in 1..=LEVELS as u8 {
                for s in 1..=LEVELS as u8 {
                    let q = real_quantification(mode, l, s);
                    debug_assert_eq!(GRID % q.1, 0);
                    let ch = Choice { l, s, grid: q.0 * (GRID / q.1) };
                    if side.iter().filter(|c| c.risk() == j).all(|c| admits(c, scale, &ch)) {
                        list.push(ch);
                    }
                }
            }
            list
        })
        .collect();

    let count = choices.iter().fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128));
    if count > cap {
        return Err(Error::OracleCapExceeded { count, cap });
    }
    let mut stats = SolveStats::default();
    if count == 0 {
        return Ok(SolveOutcome { status: Status::Infeasible, solution: None, bound: None, stats });
    }

    let rows: Vec<Row> = inst
        .matrix
        .iter()
        .zip(&inst.c)
        .filter_map(|(row, &c)| {
            let lambda: u128 = row.iter().map(|&w| w as u128).sum();
            (lambda > 0)
                .then(|| Row { weights: row.iter().map(|&w| w as u128).collect(), limit: GRID * c as u128 * lambda })
        })
        .collect();

    let mut e = Enumeration { choices: &choices, rows: &rows, picks: vec![0; inst.n], best: None, leaves: 0 };
    e.run(0, &vec![0; rows.len()], u128::MAX);
    stats.nodes = e.leaves;

    match e.best {
        None => Ok(SolveOutcome { status: Status::Infeasible, solution: None, bound: None, stats }),
        Some((min_grid, picks)) => {
            let pairs: Vec<(u8, u8)> =
                picks.iter().enumerate().map(|(j, &k)| (choices[j][k].l, choices[j][k].s)).collect();
            let assignment = Assignment::from_pairs(mode, &pairs)?;
            let objective = (min_grid * scale / GRID) as u32;
            Ok(SolveOutcome {
                status: Status::Optimal,
                bound: Some(objective),
                solution: Some(Solution { assignment, objective, proven_optimal: true }),
                stats,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_a() -> Instance {
        Instance::new("a", Mode::Bilinear, vec![vec![10, 0, 5], vec![2, 2, 2]], vec![50, 75]).unwrap()
    }

    #[test]
    fn scales_match_the_fixed_point_denominators() {
        assert_eq!(integer_scale(Mode::Linear), 12);
        assert_eq!(integer_scale(Mode::Bilinear), 36);
        assert_eq!(integer_scale(Mode::Quadratic), 216);
    }

    #[test]
    fn example_a_optimum_and_witness() {
        let out = brute_force(&example_a(), &[], DEFAULT_CAP).unwrap();
        assert_eq!(out.status, Status::Optimal);
        assert_eq!(out.objective(), Some(18));
        let a = out.solution.unwrap().assignment;
        assert_eq!(a.likelihood(), &[3, 3, 3]);
        assert_eq!(a.severity(), &[6, 6, 6]);
        assert_eq!(out.stats.nodes, 36u64.pow(3));
    }

    #[test]
    fn example_a_with_fixed_severity() {
        let side = [SideConstraint::FixSeverity { risk: 0, level: 2 }];
        let out = brute_force(&example_a(), &side, DEFAULT_CAP).unwrap();
        assert_eq!(out.objective(), Some(12));
        let a = out.solution.unwrap().assignment;
        assert_eq!((a.likelihood(), a.severity()), (&[6u8, 2, 2][..], &[2u8, 6, 6][..]));
    }

    #[test]
    fn linear_infeasible() {
        let inst = Instance::new("i", Mode::Linear, vec![vec![5]], vec![10]).unwrap();
        let out = brute_force(&inst, &[], DEFAULT_CAP).unwrap();
        assert_eq!(out.status, Status::Infeasible);
        assert_eq!(out.stats.nodes, 36);
    }

    #[test]
    fn cap_exceeded_for_six_risks() {
        let inst = Instance::new("big", Mode::Bilinear, vec![vec![1; 6]], vec![50]).unwrap();
        assert_eq!(
            brute_force(&inst, &[], DEFAULT_CAP),
            Err(Error::OracleCapExceeded { count: 36u128.pow(6), cap: DEFAULT_CAP })
        );
        // Side constraints shrink the space below the cap.
        let side: Vec<_> = (0..6).map(|risk| SideConstraint::FixLikelihood { risk, level: 2 }).collect();
        assert!(brute_force(&inst, &side, DEFAULT_CAP).is_ok());
    }

    #[test]
    fn quant_bounds() {
        let inst = Instance::new("q", Mode::Linear, vec![vec![1, 1]], vec![99]).unwrap();
        let side = [SideConstraint::MaxQuant { risk: 1, value: 5 }];
        let out = brute_force(&inst, &side, DEFAULT_CAP).unwrap();
        assert_eq!(out.objective(), Some(5));
    }
}
