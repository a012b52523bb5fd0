use core::fmt;

use crate::rational::{Rational, Threshold};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Attainment {
    Attained,
    InfimumOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MemoryClass {
    Positional,
    Finite,
    InfiniteForExact,
}

/// Which problem produced a threshold; fixes the reading of good and bad
/// sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Repair,
    Impair,
}

/// An interval of `ℚ≥0`. `hi = Infinite` means unbounded above.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub lo_closed: bool,
    pub hi: Threshold,
    pub hi_closed: bool,
}

impl Interval {
    pub fn empty() -> Self {
        Interval { lo: Rational::zero(), lo_closed: false, hi: Threshold::Finite(Rational::zero()), hi_closed: false }
    }

    pub fn is_empty(&self) -> bool {
        match &self.hi {
            Threshold::Infinite => false,
            Threshold::Finite(h) => h < &self.lo || (h == &self.lo && !(self.lo_closed && self.hi_closed)),
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.lo_closed { *x >= self.lo } else { *x > self.lo };
        let below = match &self.hi {
            Threshold::Infinite => true,
            Threshold::Finite(h) => {
                if self.hi_closed {
                    x <= h
                } else {
                    x < h
                }
            }
        };
        above && below
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("empty");
        }
        let l = if self.lo_closed { '[' } else { '(' };
        let r = if self.hi_closed && !self.hi.is_infinite() { ']' } else { ')' };
        write!(f, "{l}{},{}{r}", self.lo, self.hi)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdResult {
    pub value: Threshold,
    pub attainment: Attainment,
    pub memory: MemoryClass,
    pub orientation: Orientation,
}

impl ThresholdResult {
    pub fn new(value: Threshold, attainment: Attainment, memory: MemoryClass, orientation: Orientation) -> Self {
        ThresholdResult { value, attainment, memory, orientation }
    }

    pub fn infinite(orientation: Orientation) -> Self {
        ThresholdResult::new(Threshold::Infinite, Attainment::Attained, MemoryClass::Positional, orientation)
    }

    /// Thresholds at which the problem is solved: a repair exists, or the
    /// system is safe from impairment. A non-attained `τ*` is itself bad for
    /// repair and good for impair.
    pub fn good_set(&self) -> Interval {
        let attained = self.attainment == Attainment::Attained;
        match (self.orientation, &self.value) {
            (Orientation::Repair, Threshold::Infinite) => Interval::empty(),
            (Orientation::Repair, Threshold::Finite(t)) => {
                Interval { lo: t.clone(), lo_closed: attained, hi: Threshold::Infinite, hi_closed: false }
            }
            (Orientation::Impair, v) => {
                Interval { lo: Rational::zero(), lo_closed: true, hi: v.clone(), hi_closed: !attained }
            }
        }
    }

    pub fn bad_set(&self) -> Interval {
        let attained = self.attainment == Attainment::Attained;
        match (self.orientation, &self.value) {
            (Orientation::Repair, v) => Interval { lo: Rational::zero(), lo_closed: true, hi: v.clone(), hi_closed: !attained },
            (Orientation::Impair, Threshold::Infinite) => Interval::empty(),
            (Orientation::Impair, Threshold::Finite(t)) => {
                Interval { lo: t.clone(), lo_closed: attained, hi: Threshold::Infinite, hi_closed: false }
            }
        }
    }
}

impl fmt::Display for Attainment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Attainment::Attained => "ATTAINED",
            Attainment::InfimumOnly => "INFIMUM_ONLY",
        })
    }
}

impl fmt::Display for MemoryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MemoryClass::Positional => "POSITIONAL",
            MemoryClass::Finite => "FINITE",
            MemoryClass::InfiniteForExact => "INFINITE_FOR_EXACT",
        })
    }
}
