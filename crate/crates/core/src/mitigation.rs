use crate::{model::Assignment, Error, Result};

/// Lowers the likelihood and/or severity level of one risk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MitigationAction {
    pub risk: usize,
    pub delta_l: u8,
    pub delta_s: u8,
}

/// Applies `act` to a copy of `a`.
///
/// Every quantification mode is strictly increasing in both levels, so the
/// mitigated risk's quantification strictly decreases. Levels never drop below
/// 1: a risk can be reduced but not eliminated.
pub fn apply_mitigation(a: &Assignment, act: &MitigationAction) -> Result<Assignment> {
    let j = act.risk;
    if j >= a.len() {
        return Err(Error::RiskOutOfRange { index: j, n: a.len() });
    }
    if act.delta_l == 0 && act.delta_s == 0 {
        return Err(Error::NoOpMitigation { risk: j });
    }
    let (l, s) = a.pair(j);
    let (Some(l2), Some(s2)) = (l.checked_sub(act.delta_l), s.checked_sub(act.delta_s)) else {
        return Err(Error::RiskElimination { risk: j });
    };
    if l2 < 1 || s2 < 1 {
        return Err(Error::RiskElimination { risk: j });
    }
    let mut out = a.clone();
    out.set_pair(j, (l2, s2));
    debug_assert!(out.q()[j] < a.q()[j]);
    Ok(out)
}
