//! Subsets of `[n] = {1, ..., n}` packed into a `u32`.
//!
//! Element `i` lives at bit `i - 1`, so the integer value of a set is
//! `sum of 2^(i-1)` over its elements. Symmetric difference is XOR,
//! intersection is AND, union is OR.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SubsetMask(pub u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    /// Validates `bits < 2^n`.
    pub fn new(bits: u32, n: usize) -> Result<Self> {
        let m = SubsetMask(bits);
        if m.fits(n) {
            Ok(m)
        } else {
            Err(Error::BadMask { mask: bits, n })
        }
    }

    /// The whole set `[n]`.
    pub fn full(n: usize) -> Self {
        SubsetMask(full_bits(n))
    }

    pub fn singleton(i: usize) -> Self {
        debug_assert!(i >= 1);
        SubsetMask(1 << (i - 1))
    }

    /// Builds a set from 1-based indices; duplicates are harmless.
    pub fn from_indices(indices: &[usize], n: usize) -> Result<Self> {
        let mut bits = 0u32;
        for &i in indices {
            if i == 0 || i > n {
                return Err(Error::IndexOutOfRange { index: i, n });
            }
            bits |= 1 << (i - 1);
        }
        Ok(SubsetMask(bits))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn fits(self, n: usize) -> bool {
        n >= 32 || self.0 >> n == 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i >= 1 && self.0 & (1 << (i - 1)) != 0
    }

    pub fn union(self, o: Self) -> Self {
        SubsetMask(self.0 | o.0)
    }

    pub fn intersect(self, o: Self) -> Self {
        SubsetMask(self.0 & o.0)
    }

    /// `a + b` in `Z_2^n`.
    pub fn sym_diff(self, o: Self) -> Self {
        SubsetMask(self.0 ^ o.0)
    }

    pub fn minus(self, o: Self) -> Self {
        SubsetMask(self.0 & !o.0)
    }

    pub fn complement(self, n: usize) -> Self {
        SubsetMask(!self.0 & full_bits(n))
    }

    pub fn is_subset_of(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    /// 1-based sorted element list.
    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|b| self.0 & (1 << b) != 0).map(|b| b + 1).collect()
    }

    /// All subsets of `self`, including `self` and the empty set.
    pub fn subsets(self) -> Subsets {
        Subsets {
            full: self.0,
            next: Some(0),
        }
    }
}

pub(crate) fn full_bits(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Submask enumeration in increasing order.
pub struct Subsets {
    full: u32,
    next: Option<u32>,
}

impl Iterator for Subsets {
    type Item = SubsetMask;

    fn next(&mut self) -> Option<SubsetMask> {
        let cur = self.next?;
        self.next = if cur == self.full {
            None
        } else {
            Some((cur.wrapping_sub(self.full)) & self.full)
        };
        Some(SubsetMask(cur))
    }
}

/// Every `a` in `P[n]` in integer order.
pub fn all_subsets(n: usize) -> impl Iterator<Item = SubsetMask> + Clone {
    (0..=full_bits(n)).map(SubsetMask)
}

/// Chains `k1 ⊆ k2 ⊆ base`, yielded as `(k1, k2)`; there are `3^|base|` of them.
pub fn chains(base: SubsetMask) -> impl Iterator<Item = (SubsetMask, SubsetMask)> {
    base.subsets()
        .flat_map(|k2| k2.subsets().map(move |k1| (k1, k2)))
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (pos, i) in self.indices().into_iter().enumerate() {
            if pos > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
