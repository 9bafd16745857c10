//! The Boolean ring of all functions `Z_2^n -> Z_2`, written in one of the
//! three monomial bases:
//!
//! * `m^a`, the point indicator of `a`;
//! * `x^a = prod_{i in a} x_i`, which is 1 at `b` iff `a ⊆ b`;
//! * `w^a = prod_{i in a} (x_i + 1)`, which is 1 at `b` iff `b ⊆ complement(a)`.
//!
//! Coefficient vectors are indexed by [`SubsetMask`] integer value. The three
//! coordinate systems are related by subset and superset sums (Möbius
//! inversion over `P[n]`), which are computed here with the usual
//! axis-by-axis butterfly.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bits::BitVec;
use crate::error::{check_dim, same_dim, Error, Result};
use crate::subset::{all_subsets, SubsetMask};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RingBasis {
    M,
    X,
    W,
}

impl RingBasis {
    pub const ALL: [RingBasis; 3] = [RingBasis::M, RingBasis::X, RingBasis::W];

    pub fn letter(self) -> char {
        match self {
            RingBasis::M => 'm',
            RingBasis::X => 'x',
            RingBasis::W => 'w',
        }
    }
}

impl fmt::Display for RingBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

impl FromStr for RingBasis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "M" => Ok(RingBasis::M),
            "X" => Ok(RingBasis::X),
            "W" => Ok(RingBasis::W),
            _ => Err(Error::UnknownBasis(s.to_string())),
        }
    }
}

/// `Oa`: 1 iff `a` has odd cardinality.
pub fn odd_parity(a: SubsetMask) -> bool {
    a.len() % 2 == 1
}

// MASKS[i] has a one at every bit position whose i-th bit is set.
const AXIS_MASKS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

fn log2_len(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    Ok(len.trailing_zeros() as usize)
}

/// `out(b) = XOR_{a ⊆ b} v(a)`. An involution.
pub fn subset_sum_transform(v: &BitVec) -> Result<BitVec> {
    let n = log2_len(v.len())?;
    let mut out = v.clone();
    subset_sum_in_place(&mut out, n);
    Ok(out)
}

/// `out(a) = XOR_{b ⊇ a} v(b)`. An involution.
pub fn superset_sum_transform(v: &BitVec) -> Result<BitVec> {
    let n = log2_len(v.len())?;
    let mut out = v.clone();
    superset_sum_in_place(&mut out, n);
    Ok(out)
}

pub(crate) fn subset_sum_in_place(v: &mut BitVec, n: usize) {
    let words = v.words_mut();
    for axis in 0..n {
        if let Some(&mask) = AXIS_MASKS.get(axis) {
            let shift = 1 << axis;
            for w in words.iter_mut() {
                *w ^= (*w << shift) & mask;
            }
        } else {
            let stride = 1 << (axis - 6);
            for j in 0..words.len() {
                if j & stride != 0 {
                    words[j] ^= words[j ^ stride];
                }
            }
        }
    }
}

pub(crate) fn superset_sum_in_place(v: &mut BitVec, n: usize) {
    let len = 1usize << n;
    let words = v.words_mut();
    for axis in 0..n {
        if let Some(&mask) = AXIS_MASKS.get(axis) {
            let shift = 1 << axis;
            let keep = if len < 64 { (1u64 << len) - 1 } else { !0 };
            for w in words.iter_mut() {
                *w ^= (*w >> shift) & !mask & keep;
            }
        } else {
            let stride = 1 << (axis - 6);
            for j in 0..words.len() {
                if j & stride == 0 {
                    words[j] ^= words[j | stride];
                }
            }
        }
    }
}

/// `out(a) = v(complement(a))`.
pub(crate) fn complement_reindex(v: &BitVec, n: usize) -> BitVec {
    let full = SubsetMask::full(n).index();
    BitVec::from_fn(v.len(), |a| v.get(a ^ full))
}

/// Converts a coefficient vector between ring bases.
pub(crate) fn convert_coeffs(v: &BitVec, n: usize, from: RingBasis, to: RingBasis) -> BitVec {
    use RingBasis::*;
    let mut out = match (from, to) {
        (M, W) => complement_reindex(v, n),
        _ => v.clone(),
    };
    match (from, to) {
        (a, b) if a == b => {}
        (M, X) | (X, M) | (M, W) => subset_sum_in_place(&mut out, n),
        (W, M) => {
            subset_sum_in_place(&mut out, n);
            out = complement_reindex(&out, n);
        }
        (X, W) | (W, X) => superset_sum_in_place(&mut out, n),
        _ => unreachable!(),
    }
    out
}

/// An element of the Boolean ring, tagged with the basis its coefficients
/// refer to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingElem {
    n: usize,
    basis: RingBasis,
    coeffs: BitVec,
}

impl RingElem {
    pub fn from_coeffs(n: usize, basis: RingBasis, coeffs: BitVec) -> Result<Self> {
        check_dim(n)?;
        if coeffs.len() != 1 << n {
            return Err(Error::Shape(format!(
                "expected {} coefficients, got {}",
                1usize << n,
                coeffs.len()
            )));
        }
        Ok(RingElem { n, basis, coeffs })
    }

    pub fn zero(n: usize, basis: RingBasis) -> Result<Self> {
        check_dim(n)?;
        Ok(RingElem {
            n,
            basis,
            coeffs: BitVec::zeros(1 << n),
        })
    }

    /// The constant function 1, i.e. `x^∅`.
    pub fn one(n: usize) -> Result<Self> {
        Self::monomial(RingBasis::X, SubsetMask::EMPTY, n)
    }

    /// `m^a`, `x^a` or `w^a` as a single coefficient in its own basis.
    pub fn monomial(kind: RingBasis, a: SubsetMask, n: usize) -> Result<Self> {
        check_dim(n)?;
        if !a.fits(n) {
            return Err(Error::BadMask { mask: a.bits(), n });
        }
        let mut coeffs = BitVec::zeros(1 << n);
        coeffs.set(a.index(), true);
        Ok(RingElem {
            n,
            basis: kind,
            coeffs,
        })
    }

    /// The coordinate function `x_i`.
    pub fn coordinate(i: usize, n: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        Self::monomial(RingBasis::X, SubsetMask::singleton(i), n)
    }

    pub fn from_support(n: usize, basis: RingBasis, support: &[SubsetMask]) -> Result<Self> {
        let mut f = Self::zero(n, basis)?;
        for &a in support {
            if !a.fits(n) {
                return Err(Error::BadMask { mask: a.bits(), n });
            }
            f.coeffs.flip(a.index());
        }
        Ok(f)
    }

    /// Builds the function from its values, i.e. its `m`-coordinates.
    pub fn from_truth_table(n: usize, table: BitVec) -> Result<Self> {
        Self::from_coeffs(n, RingBasis::M, table)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> RingBasis {
        self.basis
    }

    pub fn coeffs(&self) -> &BitVec {
        &self.coeffs
    }

    pub fn coeff(&self, a: SubsetMask) -> bool {
        self.coeffs.get(a.index())
    }

    pub fn support(&self) -> Vec<SubsetMask> {
        self.coeffs.iter_ones().map(|i| SubsetMask(i as u32)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    pub fn convert(&self, target: RingBasis) -> RingElem {
        RingElem {
            n: self.n,
            basis: target,
            coeffs: convert_coeffs(&self.coeffs, self.n, self.basis, target),
        }
    }

    /// Values `f(a)` for every `a`, which are the `m`-coordinates.
    pub fn truth_table(&self) -> BitVec {
        convert_coeffs(&self.coeffs, self.n, self.basis, RingBasis::M)
    }

    pub fn eval(&self, point: SubsetMask) -> Result<bool> {
        if !point.fits(self.n) {
            return Err(Error::BadMask {
                mask: point.bits(),
                n: self.n,
            });
        }
        Ok(self.truth_table().get(point.index()))
    }

    pub fn add(&self, other: &RingElem) -> Result<RingElem> {
        same_dim(self.n, other.n)?;
        let mut coeffs = self.coeffs.clone();
        coeffs.xor_assign(&other.convert(self.basis).coeffs);
        Ok(RingElem {
            n: self.n,
            basis: self.basis,
            coeffs,
        })
    }

    /// Product in the ring; the result is expressed in the basis of `self`.
    ///
    /// In the `m` basis this is a pointwise AND. In the `x` and `w` bases it
    /// is the cover product `(fg)(c) = sum_{a ∪ b = c} f(a) g(b)`, computed
    /// as zeta transform, pointwise AND, Möbius transform.
    pub fn mul(&self, other: &RingElem) -> Result<RingElem> {
        same_dim(self.n, other.n)?;
        let rhs = other.convert(self.basis);
        let coeffs = match self.basis {
            RingBasis::M => {
                let mut c = self.coeffs.clone();
                c.and_assign(&rhs.coeffs);
                c
            }
            RingBasis::X | RingBasis::W => union_product(&self.coeffs, &rhs.coeffs, self.n),
        };
        Ok(RingElem {
            n: self.n,
            basis: self.basis,
            coeffs,
        })
    }

    /// `1 + f`.
    pub fn negate(&self) -> RingElem {
        self.add(&RingElem::one(self.n).expect("valid n")).expect("same n")
    }
}

/// `(f ⊔ g)(c) = XOR_{a ∪ b = c} f(a) g(b)`.
pub(crate) fn union_product(f: &BitVec, g: &BitVec, n: usize) -> BitVec {
    let mut zf = f.clone();
    subset_sum_in_place(&mut zf, n);
    let mut zg = g.clone();
    subset_sum_in_place(&mut zg, n);
    zf.and_assign(&zg);
    subset_sum_in_place(&mut zf, n);
    zf
}

/// Parity of the number of ordered `k`-tuples from `cover` whose union is `a`.
///
/// Computed by a dynamic program over unions of prefixes, so `k` may be large.
pub fn k_cover_parity(cover: &[SubsetMask], a: SubsetMask, k: usize) -> Result<bool> {
    if k == 0 {
        return Err(Error::ZeroPower);
    }
    let members: Vec<SubsetMask> = cover
        .iter()
        .copied()
        .filter(|c| c.is_subset_of(a))
        .collect();
    // parity[s] for s ⊆ a, indexed by the mask value.
    let mut parity = std::collections::HashMap::<u32, bool>::new();
    for &c in &members {
        *parity.entry(c.bits()).or_default() ^= true;
    }
    for _ in 1..k {
        let mut next = std::collections::HashMap::<u32, bool>::new();
        for (&s, &p) in &parity {
            if !p {
                continue;
            }
            for &c in &members {
                *next.entry(s | c.bits()).or_default() ^= true;
            }
        }
        parity = next;
    }
    Ok(parity.get(&a.bits()).copied().unwrap_or(false))
}

impl fmt::Display for RingElem {
    /// Terms in decreasing index order; `x^∅` and `w^∅` print as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut support = self.support();
        if support.is_empty() {
            return f.write_str("0");
        }
        support.reverse();
        for (pos, a) in support.iter().enumerate() {
            if pos > 0 {
                f.write_str(" + ")?;
            }
            if a.is_empty() && self.basis != RingBasis::M {
                f.write_str("1")?;
            } else {
                write!(f, "{}{}", self.basis.letter(), a)?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct RingElemJson {
    n: usize,
    basis: RingBasis,
    support: Vec<Vec<usize>>,
}

impl Serialize for RingElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RingElemJson {
            n: self.n,
            basis: self.basis,
            support: self.support().into_iter().map(|a| a.indices()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RingElem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RingElemJson::deserialize(d)?;
        let support = raw
            .support
            .iter()
            .map(|s| SubsetMask::from_indices(s, raw.n))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        RingElem::from_support(raw.n, raw.basis, &support).map_err(serde::de::Error::custom)
    }
}

/// Every element of `P[n]` as an `m`-basis vector of length `2^n`, used by tests.
pub fn point_indicators(n: usize) -> impl Iterator<Item = (SubsetMask, RingElem)> {
    all_subsets(n).map(move |a| (a, RingElem::monomial(RingBasis::M, a, n).unwrap()))
}
