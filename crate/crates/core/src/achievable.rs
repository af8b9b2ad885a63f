use alloc::vec::Vec;

use crate::{mode::Mode, pairs::PairSet, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AchievableValue {
    pub value: u32,
    /// Lexicographically smallest `(l, s)` pair producing `value`.
    pub witness: (u8, u8),
}

/// Sorted distinct quantifications reachable from a set of allowed pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AchievableSet {
    mode: Mode,
    entries: Vec<AchievableValue>,
}

/// Distinct values of `quantify(mode, l, s)` over `allowed`, each with its
/// smallest witness pair.
pub fn achievable_values(mode: Mode, allowed: PairSet) -> Result<AchievableSet> {
    if allowed.is_empty() {
        return Err(Error::EmptyPairSet);
    }
    let mut entries: Vec<AchievableValue> =
        allowed.iter().map(|(l, s)| AchievableValue { value: mode.eval(l, s), witness: (l, s) }).collect();
    // Stable sort keeps the lexicographic pair order inside each value.
    entries.sort_by_key(|e| e.value);
    entries.dedup_by_key(|e| e.value);
    Ok(AchievableSet { mode, entries })
}

impl AchievableSet {
    pub fn full(mode: Mode) -> AchievableSet {
        achievable_values(mode, PairSet::FULL).expect("full pair set is nonempty")
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn entries(&self) -> &[AchievableValue] {
        &self.entries
    }

    pub fn values(&self) -> impl DoubleEndedIterator<Item = u32> + ExactSizeIterator + '_ {
        self.entries.iter().map(|e| e.value)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn min(&self) -> u32 {
        self.entries[0].value
    }

    pub fn max(&self) -> u32 {
        self.entries[self.entries.len() - 1].value
    }

    pub fn contains(&self, value: u32) -> bool {
        self.position(value).is_ok()
    }

    pub fn witness(&self, value: u32) -> Option<(u8, u8)> {
        self.position(value).ok().map(|i| self.entries[i].witness)
    }

    pub fn largest_at_most(&self, value: u32) -> Option<AchievableValue> {
        let idx = self.entries.partition_point(|e| e.value <= value);
        idx.checked_sub(1).map(|i| self.entries[i])
    }

    pub fn smallest_at_least(&self, value: u32) -> Option<AchievableValue> {
        let idx = self.entries.partition_point(|e| e.value < value);
        self.entries.get(idx).copied()
    }

    /// Index of the first entry `>= value` (may equal `len()`).
    pub(crate) fn lower_index(&self, value: u32) -> usize {
        self.entries.partition_point(|e| e.value < value)
    }

    /// Index one past the last entry `<= value`.
    pub(crate) fn upper_index(&self, value: u32) -> usize {
        self.entries.partition_point(|e| e.value <= value)
    }

    fn position(&self, value: u32) -> core::result::Result<usize, usize> {
        self.entries.binary_search_by_key(&value, |e| e.value)
    }
}
