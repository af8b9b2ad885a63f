use alloc::vec::Vec;
use core::fmt;

use crate::model::{row_sum, Instance};

pub(crate) const MAX_WEIGHT: u32 = 10;
pub(crate) const MAX_CRITICALITY: u32 = 99;

/// One broken instance invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoRequirements,
    NoRisks,
    RowCount { declared: usize, actual: usize },
    RowLength { row: usize, expected: usize, actual: usize },
    CriticalityLength { expected: usize, actual: usize },
    LambdaLength { expected: usize, actual: usize },
    WeightOutOfRange { row: usize, col: usize, value: u32 },
    CriticalityOutOfRange { row: usize, value: u32 },
    LambdaMismatch { row: usize, declared: u64, actual: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::NoRequirements => write!(f, "instance has no requirements (m = 0)"),
            Violation::NoRisks => write!(f, "instance has no risks (n = 0)"),
            Violation::RowCount { declared, actual } => {
                write!(f, "m = {declared} but matrix has {actual} rows")
            }
            Violation::RowLength { row, expected, actual } => {
                write!(f, "matrix row {row} has {actual} entries, expected {expected}")
            }
            Violation::CriticalityLength { expected, actual } => {
                write!(f, "C has {actual} entries, expected {expected}")
            }
            Violation::LambdaLength { expected, actual } => {
                write!(f, "lambda has {actual} entries, expected {expected}")
            }
            Violation::WeightOutOfRange { row, col, value } => {
                write!(f, "M[{row}][{col}] = {value} outside [0, {MAX_WEIGHT}]")
            }
            Violation::CriticalityOutOfRange { row, value } => {
                write!(f, "C[{row}] = {value} outside [0, {MAX_CRITICALITY}]")
            }
            Violation::LambdaMismatch { row, declared, actual } => {
                write!(f, "lambda[{row}] = {declared} but row {row} sums to {actual}")
            }
        }
    }
}

/// Every violated invariant of `inst`; empty when the instance is valid.
pub fn validate_instance(inst: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();
    if inst.m == 0 {
        out.push(Violation::NoRequirements);
    }
    if inst.n == 0 {
        out.push(Violation::NoRisks);
    }
    if inst.matrix.len() != inst.m {
        out.push(Violation::RowCount { declared: inst.m, actual: inst.matrix.len() });
    }
    for (i, row) in inst.matrix.iter().enumerate() {
        if row.len() != inst.n {
            out.push(Violation::RowLength { row: i, expected: inst.n, actual: row.len() });
        }
        for (j, &w) in row.iter().enumerate() {
            if w > MAX_WEIGHT {
                out.push(Violation::WeightOutOfRange { row: i, col: j, value: w });
            }
        }
    }
    if inst.c.len() != inst.m {
        out.push(Violation::CriticalityLength { expected: inst.m, actual: inst.c.len() });
    }
    for (i, &c) in inst.c.iter().enumerate() {
        if c > MAX_CRITICALITY {
            out.push(Violation::CriticalityOutOfRange { row: i, value: c });
        }
    }
    if inst.lambda.len() != inst.matrix.len() {
        out.push(Violation::LambdaLength { expected: inst.matrix.len(), actual: inst.lambda.len() });
    }
    for (i, (row, &declared)) in inst.matrix.iter().zip(&inst.lambda).enumerate() {
        let actual = row_sum(row);
        if actual != declared {
            out.push(Violation::LambdaMismatch { row: i, declared, actual });
        }
    }
    out
}
