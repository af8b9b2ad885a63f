use core::cell::Cell;

/// Cooperative cancellation, polled by the search at every node.
pub trait Deadline {
    fn expired(&self) -> bool;
}

/// Never expires.
#[derive(Debug, Clone, Copy, Default)]
pub struct Never;

impl Deadline for Never {
    fn expired(&self) -> bool {
        false
    }
}

impl<F: Fn() -> bool> Deadline for F {
    fn expired(&self) -> bool {
        self()
    }
}

/// Expires after a fixed number of polls. Deterministic, unlike a clock.
#[derive(Debug, Clone)]
pub struct CheckBudget {
    remaining: Cell<u64>,
}

impl CheckBudget {
    pub fn new(polls: u64) -> Self {
        CheckBudget { remaining: Cell::new(polls) }
    }
}

impl Deadline for CheckBudget {
    fn expired(&self) -> bool {
        match self.remaining.get() {
            0 => true,
            k => {
                self.remaining.set(k - 1);
                false
            }
        }
    }
}
