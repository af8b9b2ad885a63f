use core::fmt;

use crate::mode::{MAX_LEVEL, MIN_LEVEL};

/// A subset of the 36 `(likelihood, severity)` pairs.
///
/// Bit `(l - 1) * 6 + (s - 1)` is set when `(l, s)` is allowed, so iterating
/// bits in ascending order visits pairs in lexicographic order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PairSet(u64);

const FULL: u64 = (1 << 36) - 1;

impl PairSet {
    pub const EMPTY: PairSet = PairSet(0);
    pub const FULL: PairSet = PairSet(FULL);

    #[inline]
    fn bit(l: u8, s: u8) -> Option<u64> {
        let range = MIN_LEVEL..=MAX_LEVEL;
        if range.contains(&l) && range.contains(&s) {
            Some(1 << ((l - 1) as u64 * 6 + (s - 1) as u64))
        } else {
            None
        }
    }

    /// Out-of-range pairs are ignored.
    pub fn insert(&mut self, l: u8, s: u8) {
        if let Some(b) = Self::bit(l, s) {
            self.0 |= b;
        }
    }

    pub fn contains(&self, l: u8, s: u8) -> bool {
        Self::bit(l, s).is_some_and(|b| self.0 & b != 0)
    }

    pub fn retain(&mut self, mut keep: impl FnMut(u8, u8) -> bool) {
        let snapshot = *self;
        for (l, s) in snapshot.iter() {
            if !keep(l, s) {
                self.0 &= !Self::bit(l, s).unwrap();
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    /// Pairs in lexicographic `(l, s)` order.
    pub fn iter(&self) -> impl Iterator<Item = (u8, u8)> + '_ {
        let bits = self.0;
        (0..36u8).filter(move |i| bits & (1 << i) != 0).map(|i| (i / 6 + 1, i % 6 + 1))
    }
}

impl FromIterator<(u8, u8)> for PairSet {
    fn from_iter<T: IntoIterator<Item = (u8, u8)>>(iter: T) -> Self {
        let mut set = PairSet::EMPTY;
        for (l, s) in iter {
            set.insert(l, s);
        }
        set
    }
}

impl fmt::Debug for PairSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
