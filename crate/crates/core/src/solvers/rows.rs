use alloc::vec::Vec;

use crate::{
    criticality::{row_capacity, CRITICALITY_SCALE},
    Instance,
};

/// Row constraints in cross-multiplied form:
/// `sum_j (100 * M[i][j]) * Q[j] <= C[i] * q_den * lambda[i]`.
///
/// Rows with `lambda[i] == 0` are dropped; they constrain nothing.
pub(crate) struct RowModel {
    capacity: Vec<i64>,
    /// Per risk, `(row, 100 * M[row][risk])` for every nonzero weight.
    columns: Vec<Vec<(usize, i64)>>,
}

impl RowModel {
    pub(crate) fn new(inst: &Instance) -> Self {
        let q_den = inst.mode.denominator();
        let mut capacity = Vec::new();
        let mut columns = alloc::vec![Vec::new(); inst.n];
        for ((row, &c), &lambda) in inst.matrix.iter().zip(&inst.c).zip(&inst.lambda) {
            if lambda == 0 {
                continue;
            }
            let r = capacity.len();
            capacity.push(row_capacity(c, q_den, lambda) as i64);
            for (j, &w) in row.iter().enumerate() {
                if w > 0 {
                    columns[j].push((r, CRITICALITY_SCALE as i64 * w as i64));
                }
            }
        }
        RowModel { capacity, columns }
    }

    /// `capacity - load(q)` per row; negative entries are violated rows.
    pub(crate) fn slack(&self, q: &[u32]) -> Vec<i64> {
        let mut slack = self.capacity.clone();
        for (col, &v) in self.columns.iter().zip(q) {
            for &(r, w) in col {
                slack[r] -= w * v as i64;
            }
        }
        slack
    }

    /// Largest amount risk `j` may grow by with every other risk fixed.
    /// `None` when no row constrains it.
    pub(crate) fn headroom(&self, j: usize, slack: &[i64]) -> Option<u32> {
        self.columns[j].iter().map(|&(r, w)| (slack[r].max(0) / w).min(u32::MAX as i64) as u32).min()
    }

    /// Shifts risk `j` by `delta` and reports whether every touched row still
    /// has nonnegative slack.
    pub(crate) fn shift(&self, j: usize, delta: i64, slack: &mut [i64]) -> bool {
        let mut ok = true;
        for &(r, w) in &self.columns[j] {
            slack[r] -= w * delta;
            ok &= slack[r] >= 0;
        }
        ok
    }
}
