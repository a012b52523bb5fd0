use core::fmt;

use crate::error::{Error, Result};
use crate::lasso::Lasso;
use crate::rational::Rational;

/// Maps infinite cost sequences to a scalar.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Aggregator {
    /// Discounted sum; the first cost has weight `λ⁰`.
    DSum(Rational),
    Mean,
    Sup,
    LimSup,
}

impl Aggregator {
    pub fn check(&self) -> Result<()> {
        if let Aggregator::DSum(l) = self {
            if !l.is_positive() || *l >= Rational::one() {
                return Err(Error::BadDiscount);
            }
        }
        Ok(())
    }

    pub fn lambda(&self) -> Option<&Rational> {
        match self {
            Aggregator::DSum(l) => Some(l),
            _ => None,
        }
    }

    pub fn keyword(&self) -> &'static str {
        match self {
            Aggregator::DSum(_) => "DSUM",
            Aggregator::Mean => "MEAN",
            Aggregator::Sup => "SUP",
            Aggregator::LimSup => "LIMSUP",
        }
    }
}

impl fmt::Display for Aggregator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Aggregator::DSum(l) => write!(f, "DSUM {l}"),
            other => f.write_str(other.keyword()),
        }
    }
}

/// `Σ_{i<n} λⁱ·cᵢ` for a finite sequence.
pub fn dsum_finite(lambda: &Rational, costs: &[u64]) -> Rational {
    // Horner from the back.
    let mut acc = Rational::zero();
    for &c in costs.iter().rev() {
        acc = Rational::from(c) + lambda * &acc;
    }
    acc
}

/// Exact value of `agg` on `prefix · cycle^ω`.
pub fn eval_aggregator(agg: &Aggregator, costs: &Lasso<u64>) -> Rational {
    let (p, c) = (costs.prefix(), costs.cycle());
    match agg {
        Aggregator::DSum(l) => {
            let head = dsum_finite(l, p);
            let loop_once = dsum_finite(l, c);
            let lp = l.pow(p.len() as u32);
            let lc = l.pow(c.len() as u32);
            head + lp * loop_once / (Rational::one() - lc)
        }
        Aggregator::Mean => Rational::mean_of(c),
        Aggregator::Sup => {
            let m = p.iter().chain(c).copied().max().unwrap_or(0);
            Rational::from(m)
        }
        Aggregator::LimSup => Rational::from(c.iter().copied().max().unwrap_or(0)),
    }
}
