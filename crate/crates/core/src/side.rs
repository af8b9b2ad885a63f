use alloc::vec::Vec;

use crate::{
    mode::{MAX_LEVEL, MIN_LEVEL},
    pairs::PairSet,
    Error, Instance, Mode, Result,
};

/// A restriction imposed by the experts on top of the base problem.
///
/// Risk indices are zero-based. Level sets are bitmasks with bit `k - 1`
/// standing for level `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SideConstraint {
    FixLikelihood {
        risk: usize,
        level: u8,
    },
    FixSeverity {
        risk: usize,
        level: u8,
    },
    RestrictLikelihood {
        risk: usize,
        levels: u8,
    },
    RestrictSeverity {
        risk: usize,
        levels: u8,
    },
    /// `Q[risk] >= value`, on the mode's denominator.
    MinQuant {
        risk: usize,
        value: u32,
    },
    /// `Q[risk] <= value`, on the mode's denominator.
    MaxQuant {
        risk: usize,
        value: u32,
    },
}

/// Level bitmask from a list of levels; out-of-range levels set no bit and are
/// caught by validation through [`level_mask_is_valid`].
pub fn level_mask(levels: impl IntoIterator<Item = u8>) -> u8 {
    levels.into_iter().filter(|l| (MIN_LEVEL..=MAX_LEVEL).contains(l)).fold(0, |m, l| m | (1 << (l - 1)))
}

fn level_mask_is_valid(mask: u8) -> bool {
    mask >> MAX_LEVEL == 0
}

impl SideConstraint {
    pub fn risk(&self) -> usize {
        match *self {
            SideConstraint::FixLikelihood { risk, .. }
            | SideConstraint::FixSeverity { risk, .. }
            | SideConstraint::RestrictLikelihood { risk, .. }
            | SideConstraint::RestrictSeverity { risk, .. }
            | SideConstraint::MinQuant { risk, .. }
            | SideConstraint::MaxQuant { risk, .. } => risk,
        }
    }

    /// Checks indices, levels and quantification bounds against an instance
    /// with `n` risks in `mode`.
    pub fn check(&self, n: usize, mode: Mode) -> core::result::Result<(), &'static str> {
        if self.risk() >= n {
            return Err("risk index out of range");
        }
        let level_ok = |l: u8| (MIN_LEVEL..=MAX_LEVEL).contains(&l);
        let q_ok = |v: u32| (mode.min_value()..=mode.denominator()).contains(&v);
        match *self {
            SideConstraint::FixLikelihood { level, .. } | SideConstraint::FixSeverity { level, .. } => {
                level_ok(level).then_some(()).ok_or("level outside [1, 6]")
            }
            SideConstraint::RestrictLikelihood { levels, .. } | SideConstraint::RestrictSeverity { levels, .. } => {
                level_mask_is_valid(levels).then_some(()).ok_or("level set mentions levels outside [1, 6]")
            }
            SideConstraint::MinQuant { value, .. } | SideConstraint::MaxQuant { value, .. } => {
                q_ok(value).then_some(()).ok_or("quantification bound outside the mode's range")
            }
        }
    }

    /// Whether the pair `(l, s)` at this constraint's risk satisfies it.
    pub(crate) fn admits(&self, mode: Mode, l: u8, s: u8) -> bool {
        match *self {
            SideConstraint::FixLikelihood { level, .. } => l == level,
            SideConstraint::FixSeverity { level, .. } => s == level,
            SideConstraint::RestrictLikelihood { levels, .. } => levels & (1 << (l - 1)) != 0,
            SideConstraint::RestrictSeverity { levels, .. } => levels & (1 << (s - 1)) != 0,
            SideConstraint::MinQuant { value, .. } => mode.eval(l, s) >= value,
            SideConstraint::MaxQuant { value, .. } => mode.eval(l, s) <= value,
        }
    }
}

/// Validates every constraint against `inst`.
pub(crate) fn check_all(inst: &Instance, side: &[SideConstraint]) -> Result<()> {
    for (index, c) in side.iter().enumerate() {
        c.check(inst.n, inst.mode).map_err(|reason| Error::InvalidSideConstraint { index, reason })?;
    }
    Ok(())
}

/// Allowed `(l, s)` pairs per risk after intersecting every constraint.
/// A risk may end up with an empty set.
pub(crate) fn allowed_pairs(inst: &Instance, side: &[SideConstraint]) -> Result<Vec<PairSet>> {
    check_all(inst, side)?;
    let mut sets = alloc::vec![PairSet::FULL; inst.n];
    for c in side {
        sets[c.risk()].retain(|l, s| c.admits(inst.mode, l, s));
    }
    Ok(sets)
}
