use core::fmt;

use crate::{Error, Result};

pub const MIN_LEVEL: u8 = 1;
pub const MAX_LEVEL: u8 = 6;

/// Which of the two risk attributes a level belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LevelKind {
    Likelihood,
    Severity,
}

impl fmt::Display for LevelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LevelKind::Likelihood => "likelihood",
            LevelKind::Severity => "severity",
        })
    }
}

/// Risk quantification function.
///
/// | mode      | integer value | denominator |
/// |-----------|---------------|-------------|
/// | Linear    | `l + s`       | 12          |
/// | Bilinear  | `l * s`       | 36          |
/// | Quadratic | `l * s^2`     | 216         |
///
/// The integer value over the denominator is the quantification in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Linear,
    Bilinear,
    Quadratic,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Linear, Mode::Bilinear, Mode::Quadratic];

    /// 1, 2 or 3, as used by the MiniZinc `mode` parameter.
    pub const fn code(self) -> u8 {
        match self {
            Mode::Linear => 1,
            Mode::Bilinear => 2,
            Mode::Quadratic => 3,
        }
    }

    pub const fn from_code(code: u8) -> Option<Mode> {
        match code {
            1 => Some(Mode::Linear),
            2 => Some(Mode::Bilinear),
            3 => Some(Mode::Quadratic),
            _ => None,
        }
    }

    /// Fixed-point denominator; also the largest attainable quantification.
    pub const fn denominator(self) -> u32 {
        match self {
            Mode::Linear => 12,
            Mode::Bilinear => 36,
            Mode::Quadratic => 216,
        }
    }

    /// Smallest attainable quantification, reached at `l = s = 1`.
    pub const fn min_value(self) -> u32 {
        match self {
            Mode::Linear => 2,
            Mode::Bilinear | Mode::Quadratic => 1,
        }
    }

    /// Quantification of in-range levels. Callers must have checked the range.
    #[inline]
    pub(crate) const fn eval(self, l: u8, s: u8) -> u32 {
        let (l, s) = (l as u32, s as u32);
        match self {
            Mode::Linear => l + s,
            Mode::Bilinear => l * s,
            Mode::Quadratic => l * s * s,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Linear => "linear",
            Mode::Bilinear => "bilinear",
            Mode::Quadratic => "quadratic",
        })
    }
}

pub(crate) fn check_level(kind: LevelKind, value: u32) -> Result<u8> {
    if (MIN_LEVEL as u32..=MAX_LEVEL as u32).contains(&value) {
        Ok(value as u8)
    } else {
        Err(Error::LevelOutOfRange { kind, value })
    }
}

/// Integer quantification of a risk with likelihood `l` and severity `s`.
pub fn quantify(mode: Mode, l: u32, s: u32) -> Result<u32> {
    let l = check_level(LevelKind::Likelihood, l)?;
    let s = check_level(LevelKind::Severity, s)?;
    Ok(mode.eval(l, s))
}
