use alloc::vec::Vec;
use core::{cmp::Ordering, fmt};

use crate::{model::Assignment, Error, Instance, Result};

/// Reference criticalities are stored in hundredths.
pub(crate) const CRITICALITY_SCALE: u64 = 100;

/// A non-negative reduced fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fraction {
    num: u64,
    den: u64,
}

impl Fraction {
    /// Panics if `den` is zero.
    pub fn new(num: u64, den: u64) -> Fraction {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den);
        Fraction { num: num / g, den: den / g }
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// Calculated criticality of one requirement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowCriticality {
    /// `sum_j M[i][j] * Q[j]`
    pub weighted_sum: u64,
    pub lambda: u64,
    /// Reference criticality in hundredths.
    pub threshold: u32,
    /// `weighted_sum / (lambda * q_den)`, undefined when `lambda == 0`.
    pub value: Option<Fraction>,
    pub acceptable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalityReport {
    pub denominator: u32,
    pub rows: Vec<RowCriticality>,
}

impl CriticalityReport {
    pub fn overall_acceptable(&self) -> bool {
        self.rows.iter().all(|r| r.acceptable)
    }
}

/// Right-hand side `C_i * q_den * lambda_i` of the cross-multiplied row test.
#[inline]
pub(crate) fn row_capacity(c: u32, q_den: u32, lambda: u64) -> u64 {
    c as u64 * q_den as u64 * lambda
}

pub(crate) fn check_dimensions(inst: &Instance, a: &Assignment) -> Result<()> {
    inst.check()?;
    if a.len() != inst.n {
        return Err(Error::DimensionMismatch { what: "assignment", expected: inst.n, found: a.len() });
    }
    if a.mode() != inst.mode {
        return Err(Error::ModeMismatch);
    }
    Ok(())
}

/// Per-requirement calculated criticality, in exact integer arithmetic.
///
/// Requirement `i` is acceptable iff
/// `100 * sum_j M[i][j] * Q[j] <= C[i] * q_den * lambda[i]`; rows with
/// `lambda[i] == 0` carry no constraint.
pub fn calc_criticality(inst: &Instance, a: &Assignment) -> Result<CriticalityReport> {
    check_dimensions(inst, a)?;
    let q_den = inst.mode.denominator();
    let rows = inst
        .matrix
        .iter()
        .zip(&inst.c)
        .zip(&inst.lambda)
        .map(|((row, &c), &lambda)| {
            let weighted_sum: u64 = row.iter().zip(a.q()).map(|(&w, &q)| w as u64 * q as u64).sum();
            let (value, acceptable) = if lambda == 0 {
                (None, true)
            } else {
                let ok = CRITICALITY_SCALE * weighted_sum <= row_capacity(c, q_den, lambda);
                (Some(Fraction::new(weighted_sum, lambda * q_den as u64)), ok)
            };
            RowCriticality { weighted_sum, lambda, threshold: c, value, acceptable }
        })
        .collect();
    Ok(CriticalityReport { denominator: q_den, rows })
}

pub fn is_acceptable(inst: &Instance, a: &Assignment) -> Result<bool> {
    Ok(calc_criticality(inst, a)?.overall_acceptable())
}
