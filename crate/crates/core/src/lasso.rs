use alloc::vec::Vec;

use crate::error::{Error, Result};

/// An ultimately periodic sequence `prefix · cycle^ω`.
///
/// Used for words, runs, plays and cost sequences alike.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lasso<T> {
    prefix: Vec<T>,
    cycle: Vec<T>,
}

impl<T> Lasso<T> {
    pub fn new(prefix: Vec<T>, cycle: Vec<T>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::EmptyCycle);
        }
        Ok(Lasso { prefix, cycle })
    }

    pub fn prefix(&self) -> &[T] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[T] {
        &self.cycle
    }

    /// Number of distinct positions (`|prefix| + |cycle|`).
    pub fn span(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    /// Element at position `i` of the infinite sequence.
    pub fn at(&self, i: usize) -> &T {
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Position following `pos` when positions are folded into `0..span()`.
    pub fn next_position(&self, pos: usize) -> usize {
        if pos + 1 < self.span() {
            pos + 1
        } else {
            self.prefix.len()
        }
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> Lasso<U> {
        Lasso {
            prefix: self.prefix.iter().map(&mut f).collect(),
            cycle: self.cycle.iter().map(&mut f).collect(),
        }
    }

    pub fn into_parts(self) -> (Vec<T>, Vec<T>) {
        (self.prefix, self.cycle)
    }
}

impl<T: Clone> Lasso<T> {
    /// The first `n` elements of the infinite sequence.
    pub fn take(&self, n: usize) -> Vec<T> {
        (0..n).map(|i| self.at(i).clone()).collect()
    }

    /// Same infinite sequence with the cycle rotated left by `k`
    /// (the prefix absorbs the rotated elements).
    pub fn rotated(&self, k: usize) -> Self {
        let k = k % self.cycle.len();
        let mut prefix = self.prefix.clone();
        prefix.extend_from_slice(&self.cycle[..k]);
        let mut cycle = self.cycle[k..].to_vec();
        cycle.extend_from_slice(&self.cycle[..k]);
        Lasso { prefix, cycle }
    }

    /// Same infinite sequence with the cycle repeated `k` times.
    pub fn unrolled(&self, k: usize) -> Self {
        let k = k.max(1);
        let mut cycle = Vec::with_capacity(self.cycle.len() * k);
        for _ in 0..k {
            cycle.extend_from_slice(&self.cycle);
        }
        Lasso { prefix: self.prefix.clone(), cycle }
    }
}

impl<T: Clone + PartialEq> Lasso<T> {
    /// Whether both lassos denote the same infinite sequence.
    pub fn same_infinite_sequence(&self, other: &Self) -> bool {
        let n = self.span().max(other.span()) + self.cycle.len() * other.cycle.len();
        (0..n).all(|i| self.at(i) == other.at(i))
    }
}
