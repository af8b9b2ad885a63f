use alloc::vec::Vec;

use crate::{
    achievable_values, criticality::check_dimensions, side::allowed_pairs, AchievableSet, Assignment, Error, Instance,
    Result, SideConstraint,
};

use super::{rows::RowModel, Solution};

/// Raises each risk, in input order, to the largest achievable quantification
/// that keeps every row satisfied with the other risks fixed.
///
/// This mirrors a search that assigns each variable its greatest feasible
/// value in input order. The result stays acceptable, keeps the objective of
/// `base` and is componentwise at least `base`. Risks whose value does not
/// change keep their original levels.
pub fn greedy_saturate(inst: &Instance, base: &Solution) -> Result<Assignment> {
    check_dimensions(inst, &base.assignment)?;
    let full = AchievableSet::full(inst.mode);
    let domains: Vec<&AchievableSet> = (0..inst.n).map(|_| &full).collect();
    saturate(inst, &domains, &base.assignment)
}

/// [`greedy_saturate`] restricted to the pairs allowed by `side`. `base` must
/// already satisfy the side constraints.
pub fn saturate_within(inst: &Instance, side: &[SideConstraint], base: &Assignment) -> Result<Assignment> {
    check_dimensions(inst, base)?;
    let sets = allowed_pairs(inst, side)?;
    let owned = sets
        .iter()
        .enumerate()
        .map(|(j, set)| {
            let (l, s) = base.pair(j);
            if !set.contains(l, s) {
                return Err(Error::BaseViolatesSide { risk: j });
            }
            achievable_values(inst.mode, *set)
        })
        .collect::<Result<Vec<_>>>()?;
    let domains: Vec<&AchievableSet> = owned.iter().collect();
    saturate(inst, &domains, base)
}

fn saturate(inst: &Instance, domains: &[&AchievableSet], base: &Assignment) -> Result<Assignment> {
    let rows = RowModel::new(inst);
    let mut slack = rows.slack(base.q());
    if slack.iter().any(|&s| s < 0) {
        return Err(Error::UnacceptableBase);
    }
    let mut out = base.clone();
    for (j, domain) in domains.iter().enumerate() {
        let current = out.q()[j];
        let target = rows.headroom(j, &slack).map_or(u32::MAX, |h| current.saturating_add(h));
        if let Some(best) = domain.largest_at_most(target).filter(|b| b.value > current) {
            let ok = rows.shift(j, (best.value - current) as i64, &mut slack);
            debug_assert!(ok);
            out.set_pair(j, best.witness);
        }
    }
    Ok(out)
}
