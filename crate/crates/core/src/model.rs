use alloc::{collections::BTreeSet, string::String, vec::Vec};

use crate::{
    generate::GenSpec,
    mode::{check_level, LevelKind, Mode},
    validate::validate_instance,
    Error, Result,
};

/// Lifecycle phases, ethical requirements and risks of a medical intelligent
/// system. Only labels are kept; the numeric problem lives in [`Instance`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MisDefinition {
    phases: Vec<String>,
    requirements: Vec<String>,
    risks: Vec<String>,
}

impl MisDefinition {
    pub fn new(phases: Vec<String>, requirements: Vec<String>, risks: Vec<String>) -> Result<Self> {
        for (what, list) in [("phases", &phases), ("requirements", &requirements), ("risks", &risks)] {
            if list.is_empty() {
                return Err(Error::InvalidDefinition(alloc::format!("no {what}")));
            }
            let mut seen = BTreeSet::new();
            if let Some(dup) = list.iter().find(|label| !seen.insert(label.as_str())) {
                return Err(Error::InvalidDefinition(alloc::format!("duplicate label {dup:?} in {what}")));
            }
        }
        Ok(MisDefinition { phases, requirements, risks })
    }

    pub fn phases(&self) -> &[String] {
        &self.phases
    }

    pub fn requirements(&self) -> &[String] {
        &self.requirements
    }

    pub fn risks(&self) -> &[String] {
        &self.risks
    }
}

/// One optimization problem at a single lifecycle phase.
///
/// Fields are public so that malformed instances can be represented and
/// reported by [`validate_instance`]; [`Instance::new`] is the checked
/// constructor and the solvers refuse instances that do not validate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    pub mode: Mode,
    /// Number of requirements (rows).
    pub m: usize,
    /// Number of risks (columns).
    pub n: usize,
    /// `m x n` requirement-by-risk weights in `[0, 10]`.
    pub matrix: Vec<Vec<u32>>,
    /// Reference criticality per requirement, in hundredths (`[0, 99]`).
    pub c: Vec<u32>,
    /// Row sums of `matrix`.
    pub lambda: Vec<u64>,
    pub gen: Option<GenSpec>,
}

impl Instance {
    /// Builds an instance, deriving dimensions and `lambda` from `matrix`.
    pub fn new(name: impl Into<String>, mode: Mode, matrix: Vec<Vec<u32>>, c: Vec<u32>) -> Result<Self> {
        let inst = Self::new_unchecked(name, mode, matrix, c);
        inst.check()?;
        Ok(inst)
    }

    pub(crate) fn new_unchecked(name: impl Into<String>, mode: Mode, matrix: Vec<Vec<u32>>, c: Vec<u32>) -> Self {
        let lambda = matrix.iter().map(|row| row_sum(row)).collect();
        Instance {
            name: name.into(),
            mode,
            m: matrix.len(),
            n: matrix.first().map_or(0, Vec::len),
            matrix,
            c,
            lambda,
            gen: None,
        }
    }

    pub fn with_gen(mut self, gen: GenSpec) -> Self {
        self.gen = Some(gen);
        self
    }

    pub fn validate(&self) -> Vec<crate::Violation> {
        validate_instance(self)
    }

    /// `Err(InvalidInstance)` listing every violation, if any.
    pub fn check(&self) -> Result<()> {
        let violations = validate_instance(self);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidInstance(violations))
        }
    }

    /// True when both describe the same numeric problem, ignoring name and
    /// generation metadata.
    pub fn same_problem(&self, other: &Instance) -> bool {
        self.mode == other.mode
            && self.m == other.m
            && self.n == other.n
            && self.matrix == other.matrix
            && self.c == other.c
            && self.lambda == other.lambda
    }
}

pub(crate) fn row_sum(row: &[u32]) -> u64 {
    row.iter().map(|&w| w as u64).sum()
}

/// Likelihood and severity levels per risk, with the induced quantifications.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    mode: Mode,
    likelihood: Vec<u8>,
    severity: Vec<u8>,
    q: Vec<u32>,
}

impl Assignment {
    pub fn new(mode: Mode, likelihood: Vec<u8>, severity: Vec<u8>) -> Result<Self> {
        if likelihood.len() != severity.len() {
            return Err(Error::DimensionMismatch {
                what: "severity levels",
                expected: likelihood.len(),
                found: severity.len(),
            });
        }
        for &l in &likelihood {
            check_level(LevelKind::Likelihood, l as u32)?;
        }
        for &s in &severity {
            check_level(LevelKind::Severity, s as u32)?;
        }
        let q = likelihood.iter().zip(&severity).map(|(&l, &s)| mode.eval(l, s)).collect();
        Ok(Assignment { mode, likelihood, severity, q })
    }

    pub fn from_pairs(mode: Mode, pairs: &[(u8, u8)]) -> Result<Self> {
        let (l, s) = pairs.iter().copied().unzip();
        Self::new(mode, l, s)
    }

    /// Every risk set to the same `(l, s)` pair.
    pub fn uniform(mode: Mode, n: usize, pair: (u8, u8)) -> Result<Self> {
        Self::new(mode, alloc::vec![pair.0; n], alloc::vec![pair.1; n])
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn likelihood(&self) -> &[u8] {
        &self.likelihood
    }

    pub fn severity(&self) -> &[u8] {
        &self.severity
    }

    pub fn pair(&self, j: usize) -> (u8, u8) {
        (self.likelihood[j], self.severity[j])
    }

    pub fn q(&self) -> &[u32] {
        &self.q
    }

    /// The max-min objective; `None` for an empty assignment.
    pub fn min_q(&self) -> Option<u32> {
        self.q.iter().copied().min()
    }

    pub(crate) fn set_pair(&mut self, j: usize, (l, s): (u8, u8)) {
        self.likelihood[j] = l;
        self.severity[j] = s;
        self.q[j] = self.mode.eval(l, s);
    }

    /// Overwrites quantifications without touching levels, for probing
    /// values that no pair attains.
    #[cfg(test)]
    pub(crate) fn force_q(&mut self, q: &[u32]) {
        self.q.copy_from_slice(q);
    }
}
