//! Seeded benchmark instance generation.
//!
//! The stream generator is SplitMix64, fixed by algorithm so that other
//! implementations can reproduce instances bit for bit. The generator state is
//! seeded by folding `(seed, alpha, beta, gamma, mode code)` through
//! [`mix64`]:
//!
//! ```text
//! h = seed
//! for v in [alpha, beta, gamma, mode]:
//!     h = mix64((h + 0x9E3779B97F4A7C15) ^ v)
//! ```
//!
//! Draws are taken row-major over `M`, then over `C`. A draw from the
//! inclusive range `[lo, hi]` rejects raw outputs above the largest multiple
//! of `hi - lo + 1` and returns `lo + x % (hi - lo + 1)`.

use alloc::{format, vec::Vec};
use core::ops::RangeInclusive;

use crate::{
    model::Instance,
    validate::{MAX_CRITICALITY, MAX_WEIGHT},
    Error, Mode, Result,
};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output finalizer.
#[inline]
pub const fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub const fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Unbiased draw from `[lo, hi]`.
    pub fn uniform(&mut self, lo: u32, hi: u32) -> u32 {
        debug_assert!(lo <= hi);
        let span = (hi - lo) as u64 + 1;
        // 2^64 mod span; outputs above u64::MAX - rem would bias the modulo.
        let rem = (u64::MAX % span + 1) % span;
        let zone = u64::MAX - rem;
        loop {
            let x = self.next_u64();
            if x <= zone {
                return lo + (x % span) as u32;
            }
        }
    }
}

/// Parameters of one generated instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GenSpec {
    /// Number of risks.
    pub alpha: u32,
    /// Number of requirements.
    pub beta: u32,
    /// Version index.
    pub gamma: u32,
    pub mode: Mode,
    pub seed: u64,
    pub m_range: RangeInclusive<u32>,
    pub c_range: RangeInclusive<u32>,
}

impl GenSpec {
    pub const DEFAULT_M_RANGE: RangeInclusive<u32> = 0..=MAX_WEIGHT;
    /// The lower end keeps every generated instance feasible in every mode
    /// (Linear needs `C_i >= 17`).
    pub const DEFAULT_C_RANGE: RangeInclusive<u32> = 20..=90;

    pub fn new(alpha: u32, beta: u32, gamma: u32, mode: Mode, seed: u64) -> Self {
        GenSpec { alpha, beta, gamma, mode, seed, m_range: Self::DEFAULT_M_RANGE, c_range: Self::DEFAULT_C_RANGE }
    }

    /// `inst_<alpha>_<beta>_<gamma>`
    pub fn name(&self) -> alloc::string::String {
        format!("inst_{}_{}_{}", self.alpha, self.beta, self.gamma)
    }

    pub fn check(&self) -> Result<()> {
        if self.alpha == 0 || self.beta == 0 || self.gamma == 0 {
            return Err(Error::InvalidGenSpec("alpha, beta and gamma must be at least 1"));
        }
        if self.m_range.is_empty() || *self.m_range.end() > MAX_WEIGHT {
            return Err(Error::InvalidGenSpec("m_range must be a nonempty subrange of [0, 10]"));
        }
        if self.c_range.is_empty() || *self.c_range.end() > MAX_CRITICALITY {
            return Err(Error::InvalidGenSpec("c_range must be a nonempty subrange of [0, 99]"));
        }
        Ok(())
    }

    fn stream(&self) -> SplitMix64 {
        let h = [self.alpha as u64, self.beta as u64, self.gamma as u64, self.mode.code() as u64]
            .into_iter()
            .fold(self.seed, |h, v| mix64(h.wrapping_add(GOLDEN_GAMMA) ^ v));
        SplitMix64::new(h)
    }
}

/// Deterministic instance for `spec`: `beta` requirements by `alpha` risks.
pub fn generate(spec: &GenSpec) -> Result<Instance> {
    spec.check()?;
    let mut rng = spec.stream();
    let (m_lo, m_hi) = (*spec.m_range.start(), *spec.m_range.end());
    let (c_lo, c_hi) = (*spec.c_range.start(), *spec.c_range.end());
    let matrix: Vec<Vec<u32>> =
        (0..spec.beta).map(|_| (0..spec.alpha).map(|_| rng.uniform(m_lo, m_hi)).collect()).collect();
    let c = (0..spec.beta).map(|_| rng.uniform(c_lo, c_hi)).collect();
    Ok(Instance::new_unchecked(spec.name(), spec.mode, matrix, c).with_gen(spec.clone()))
}
