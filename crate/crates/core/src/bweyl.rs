//! Operators on Boolean functions as coefficient maps `(a, b) -> Z_2` over
//! one of six bases `L^a R^b`, with `L` in `{m, x, w}` and `R` in
//! `{y, s}` (`y_i = ∂_i`, `s_i` the shift).
//!
//! Every operator is also a `2^n x 2^n` matrix through [`OpCoeffs::to_matrix`];
//! the symbolic products here are checked against that matrix picture.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bits::BitVec;
use crate::diffops::{multiplication_matrix, right_factor_matrix};
use crate::error::{check_dim, same_dim, Error, Result};
use crate::exec::{fold_merge, Strategy};
use crate::gf2lin::Gf2Matrix;
use crate::ring::{convert_coeffs, superset_sum_in_place, RingBasis, RingElem};
use crate::subset::{chains, SubsetMask};

/// Right-hand generator family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RightKind {
    /// Boolean derivatives `y_i = ∂_i`.
    Y,
    /// Shifts `s_i = y_i + 1`.
    S,
}

impl RightKind {
    pub fn letter(self) -> char {
        match self {
            RightKind::Y => 'y',
            RightKind::S => 's',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OpBasis {
    MY,
    XY,
    WY,
    MS,
    XS,
    WS,
}

impl OpBasis {
    pub const ALL: [OpBasis; 6] = [
        OpBasis::MY,
        OpBasis::XY,
        OpBasis::WY,
        OpBasis::MS,
        OpBasis::XS,
        OpBasis::WS,
    ];

    pub fn from_parts(left: RingBasis, right: RightKind) -> OpBasis {
        match (left, right) {
            (RingBasis::M, RightKind::Y) => OpBasis::MY,
            (RingBasis::X, RightKind::Y) => OpBasis::XY,
            (RingBasis::W, RightKind::Y) => OpBasis::WY,
            (RingBasis::M, RightKind::S) => OpBasis::MS,
            (RingBasis::X, RightKind::S) => OpBasis::XS,
            (RingBasis::W, RightKind::S) => OpBasis::WS,
        }
    }

    pub fn left(self) -> RingBasis {
        match self {
            OpBasis::MY | OpBasis::MS => RingBasis::M,
            OpBasis::XY | OpBasis::XS => RingBasis::X,
            OpBasis::WY | OpBasis::WS => RingBasis::W,
        }
    }

    pub fn right(self) -> RightKind {
        match self {
            OpBasis::MY | OpBasis::XY | OpBasis::WY => RightKind::Y,
            _ => RightKind::S,
        }
    }
}

impl fmt::Display for OpBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

impl FromStr for OpBasis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "MY" => Ok(OpBasis::MY),
            "XY" => Ok(OpBasis::XY),
            "WY" => Ok(OpBasis::WY),
            "MS" => Ok(OpBasis::MS),
            "XS" => Ok(OpBasis::XS),
            "WS" => Ok(OpBasis::WS),
            _ => Err(Error::UnknownBasis(s.to_string())),
        }
    }
}

pub type Term = (SubsetMask, SubsetMask);

/// Sparse coefficient map: the stored pairs are exactly the coefficients
/// equal to 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OpCoeffs {
    n: usize,
    basis: OpBasis,
    terms: BTreeSet<Term>,
}

impl OpCoeffs {
    pub fn zero(n: usize, basis: OpBasis) -> Result<Self> {
        check_dim(n)?;
        Ok(OpCoeffs {
            n,
            basis,
            terms: BTreeSet::new(),
        })
    }

    /// Builds from a list of pairs; a pair listed twice cancels.
    pub fn from_terms(n: usize, basis: OpBasis, terms: impl IntoIterator<Item = Term>) -> Result<Self> {
        let mut out = Self::zero(n, basis)?;
        for (a, b) in terms {
            for m in [a, b] {
                if !m.fits(n) {
                    return Err(Error::BadMask { mask: m.bits(), n });
                }
            }
            out.toggle(a, b);
        }
        Ok(out)
    }

    pub fn monomial(n: usize, basis: OpBasis, a: SubsetMask, b: SubsetMask) -> Result<Self> {
        Self::from_terms(n, basis, [(a, b)])
    }

    /// The identity operator written in `basis`.
    pub fn identity(n: usize, basis: OpBasis) -> Result<Self> {
        let xy = Self::monomial(n, OpBasis::XY, SubsetMask::EMPTY, SubsetMask::EMPTY)?;
        Ok(xy.convert(basis))
    }

    /// Multiplication by `f`, as an operator with no right factors.
    pub fn from_function(f: &RingElem, basis: OpBasis) -> OpCoeffs {
        let left = f.convert(basis.left());
        let base = OpBasis::from_parts(basis.left(), RightKind::Y);
        let out = OpCoeffs {
            n: f.n(),
            basis: base,
            terms: left
                .support()
                .into_iter()
                .map(|a| (a, SubsetMask::EMPTY))
                .collect(),
        };
        out.convert(basis)
    }

    /// Reads coefficients off an operator matrix (acting on `m`-coordinates).
    ///
    /// `m^a s^b` is the matrix unit at `(a, a + b)`, so the `MS` coefficients
    /// are the matrix entries; other bases follow by conversion.
    pub fn from_matrix(m: &Gf2Matrix, basis: OpBasis) -> Result<Self> {
        let side = m.nrows();
        if !m.is_square() || !side.is_power_of_two() {
            return Err(Error::Shape(format!(
                "operator matrix must be square with power-of-two side, got {}x{}",
                side,
                m.ncols()
            )));
        }
        let n = side.trailing_zeros() as usize;
        let mut terms = BTreeSet::new();
        for a in 0..side {
            for d in m.row(a).iter_ones() {
                terms.insert((SubsetMask(a as u32), SubsetMask((a ^ d) as u32)));
            }
        }
        let ms = OpCoeffs {
            n,
            basis: OpBasis::MS,
            terms,
        };
        check_dim(n)?;
        Ok(ms.convert(basis))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> OpBasis {
        self.basis
    }

    pub fn terms(&self) -> &BTreeSet<Term> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn coeff(&self, a: SubsetMask, b: SubsetMask) -> bool {
        self.terms.contains(&(a, b))
    }

    pub(crate) fn toggle(&mut self, a: SubsetMask, b: SubsetMask) {
        if !self.terms.remove(&(a, b)) {
            self.terms.insert((a, b));
        }
    }

    pub fn add(&self, other: &OpCoeffs) -> Result<OpCoeffs> {
        same_dim(self.n, other.n)?;
        let rhs = other.convert(self.basis);
        Ok(OpCoeffs {
            n: self.n,
            basis: self.basis,
            terms: self.terms.symmetric_difference(&rhs.terms).copied().collect(),
        })
    }

    /// Dense table with rows indexed by the left set and columns by the
    /// right set.
    fn dense(&self) -> Gf2Matrix {
        let side = 1usize << self.n;
        let mut t = Gf2Matrix::zeros(side, side);
        for &(a, b) in &self.terms {
            t.set(a.index(), b.index(), true);
        }
        t
    }

    fn from_dense(n: usize, basis: OpBasis, t: &Gf2Matrix) -> OpCoeffs {
        let mut terms = BTreeSet::new();
        for a in 0..t.nrows() {
            for b in t.row(a).iter_ones() {
                terms.insert((SubsetMask(a as u32), SubsetMask(b as u32)));
            }
        }
        OpCoeffs { n, basis, terms }
    }

    /// Rewrites the coefficients in `target`.
    ///
    /// The left index is converted by the ring transforms with the right
    /// index held fixed; `y^b = sum_{a ⊆ b} s^a` and `s^b = sum_{a ⊆ b} y^a`
    /// make the right-index conversion a superset sum in either direction.
    pub fn convert(&self, target: OpBasis) -> OpCoeffs {
        if target == self.basis {
            return self.clone();
        }
        let n = self.n;
        let mut table = self.dense();
        if self.basis.right() != target.right() {
            let rows: Vec<BitVec> = table
                .rows()
                .iter()
                .map(|r| {
                    let mut r = r.clone();
                    superset_sum_in_place(&mut r, n);
                    r
                })
                .collect();
            table = Gf2Matrix::from_rows(1 << n, rows).expect("square");
        }
        if self.basis.left() != target.left() {
            let by_right = table.transpose();
            let rows: Vec<BitVec> = by_right
                .rows()
                .iter()
                .map(|r| convert_coeffs(r, n, self.basis.left(), target.left()))
                .collect();
            table = Gf2Matrix::from_rows(1 << n, rows).expect("square").transpose();
        }
        Self::from_dense(n, target, &table)
    }

    /// The operator's matrix on `m`-coordinates, summing
    /// `diag(L^a) * R_1 ... R_k` over the terms, where the `R_i` are
    /// derivative or shift generator matrices.
    pub fn to_matrix(&self) -> Gf2Matrix {
        self.to_matrix_with(Strategy::default())
    }

    pub fn to_matrix_with(&self, strategy: Strategy) -> Gf2Matrix {
        let n = self.n;
        let side = 1usize << n;
        let right = self.basis.right();
        let left = self.basis.left();
        // group terms by right set so each generator product is built once
        let mut by_right: std::collections::BTreeMap<SubsetMask, Vec<SubsetMask>> =
            Default::default();
        for &(a, b) in &self.terms {
            by_right.entry(b).or_default().push(a);
        }
        let groups: Vec<(SubsetMask, Vec<SubsetMask>)> = by_right.into_iter().collect();
        fold_merge(
            strategy,
            &groups,
            || Gf2Matrix::zeros(side, side),
            |acc, (b, lefts)| {
                let r = right_factor_matrix(right, *b, n);
                let mut mask = RingElem::zero(n, left).expect("valid n");
                for &a in lefts {
                    mask = mask
                        .add(&RingElem::monomial(left, a, n).expect("valid mask"))
                        .expect("same n");
                }
                let l = multiplication_matrix(&mask);
                acc.add_assign(&l.mul(&r).expect("square"));
            },
            |mut a, b| {
                a.add_assign(&b);
                a
            },
        )
    }

    /// Operator product `self * other` (apply `other` first), in the basis
    /// of `self`.
    pub fn mul(&self, other: &OpCoeffs) -> Result<OpCoeffs> {
        self.mul_with(other, Strategy::default())
    }

    /// Product by expanding every pair of terms with the monomial product
    /// rules:
    ///
    /// * `m^a y^b m^c y^d = sum_{d ⊆ e, e \ d ⊆ a + c ⊆ b} m^a y^e`
    /// * `x^a y^b x^c y^d = sum_{k1 ⊆ k2 ⊆ b ∩ c} x^{a ∪ (c \ k2)} y^{(b \ k1) ⊔ d}`
    ///   (vanishing when `b \ k1` meets `d`)
    /// * `m^a s^b m^c s^d = δ_{a, b+c} m^a s^{b+d}`
    /// * `x^a s^b x^c s^d = sum_{k ⊆ b ∩ c} x^{a ∪ (c \ k)} s^{b+d}`
    ///
    /// The `w` bases use the `x` rules verbatim: `x_i -> w_i` preserves every
    /// defining relation, so it carries products to products.
    pub fn mul_with(&self, other: &OpCoeffs, strategy: Strategy) -> Result<OpCoeffs> {
        same_dim(self.n, other.n)?;
        let rhs = other.convert(self.basis);
        let basis = self.basis;
        let lhs: Vec<Term> = self.terms.iter().copied().collect();
        let rhs: Vec<Term> = rhs.terms.into_iter().collect();
        let acc = fold_merge(
            strategy,
            &lhs,
            HashSet::<Term>::new,
            |acc, &(a, b)| {
                for &(c, d) in &rhs {
                    monomial_product(basis, (a, b), (c, d), |t| toggle_set(acc, t));
                }
            },
            |mut x, y| {
                for t in y {
                    toggle_set(&mut x, t);
                }
                x
            },
        );
        Ok(OpCoeffs {
            n: self.n,
            basis,
            terms: acc.into_iter().collect(),
        })
    }

    /// Product computed one output coefficient at a time from the
    /// coordinate formulas:
    ///
    /// * `MY`: `(fg)(a,e) = sum_{d ⊆ e, e \ d ⊆ a + c ⊆ b} f(a,b) g(c,d)`
    /// * `XY`: `(fg)(e,h) = sum_{a ⊆ e, d ⊆ h} c(a,b,c,d,e,h) f(a,b) g(c,d)`
    /// * `MS`: `(fg)(a,b) = sum_c f(a,c) g(a+c, b+c)`
    /// * `XS`: `(fg)(e,h) = sum_{a ⊆ e} O{k ⊆ b ∩ c | a ∪ (c \ k) = e} f(a,b) g(c, b+h)`
    ///
    /// Independent of [`OpCoeffs::mul_with`]; cost grows like `4^n` times the
    /// number of term pairs, so this is meant for small `n`.
    pub fn mul_gather(&self, other: &OpCoeffs, strategy: Strategy) -> Result<OpCoeffs> {
        same_dim(self.n, other.n)?;
        let n = self.n;
        let g = other.convert(self.basis);
        let f = self;
        let cells: Vec<Term> = crate::diffops::all_pairs(n).collect();
        let hits = crate::exec::map_vec(strategy, cells, |(e, h)| {
            let bit = match self.basis {
                OpBasis::MY => {
                    let mut acc = false;
                    for &(a, b) in f.terms.iter().filter(|t| t.0 == e) {
                        for &(c, d) in &g.terms {
                            let ac = a.sym_diff(c);
                            if d.is_subset_of(h) && h.minus(d).is_subset_of(ac) && ac.is_subset_of(b) {
                                acc ^= true;
                            }
                        }
                    }
                    acc
                }
                OpBasis::XY | OpBasis::WY => {
                    let mut acc = false;
                    for &(a, b) in f.terms.iter().filter(|t| t.0.is_subset_of(e)) {
                        for &(c, d) in g.terms.iter().filter(|t| t.1.is_subset_of(h)) {
                            acc ^= structural_coeff_c(a, b, c, d, e, h);
                        }
                    }
                    acc
                }
                OpBasis::MS => {
                    let mut acc = false;
                    for &(a, c) in f.terms.iter().filter(|t| t.0 == e) {
                        acc ^= g.coeff(a.sym_diff(c), h.sym_diff(c));
                    }
                    acc
                }
                OpBasis::XS | OpBasis::WS => {
                    let mut acc = false;
                    for &(a, b) in f.terms.iter().filter(|t| t.0.is_subset_of(e)) {
                        for &(c, d) in g.terms.iter().filter(|t| t.1 == b.sym_diff(h)) {
                            let _ = d;
                            let count = b
                                .intersect(c)
                                .subsets()
                                .filter(|&k| a.union(c.minus(k)) == e)
                                .count();
                            acc ^= count % 2 == 1;
                        }
                    }
                    acc
                }
            };
            ((e, h), bit)
        });
        Ok(OpCoeffs {
            n,
            basis: self.basis,
            terms: hits.into_iter().filter(|(_, b)| *b).map(|(t, _)| t).collect(),
        })
    }

    /// `self^k` by repeated squaring.
    pub fn power(&self, k: u64) -> Result<OpCoeffs> {
        if k == 0 {
            return Err(Error::ZeroPower);
        }
        let mut base = self.clone();
        let mut acc: Option<OpCoeffs> = None;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base)?,
                });
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc.expect("k >= 1"))
    }
}

fn toggle_set(set: &mut HashSet<Term>, t: Term) {
    if !set.remove(&t) {
        set.insert(t);
    }
}

/// Expands `(L^a R^b)(L^c R^d)` into basis monomials, reporting each one.
fn monomial_product(basis: OpBasis, (a, b): Term, (c, d): Term, mut emit: impl FnMut(Term)) {
    match basis {
        OpBasis::MY => {
            let ac = a.sym_diff(c);
            if ac.is_subset_of(b) {
                for t in ac.minus(d).subsets() {
                    emit((a, d.union(t)));
                }
            }
        }
        OpBasis::XY | OpBasis::WY => {
            for (k1, k2) in chains(b.intersect(c)) {
                let rb = b.minus(k1);
                if rb.intersect(d).is_empty() {
                    emit((a.union(c.minus(k2)), rb.union(d)));
                }
            }
        }
        OpBasis::MS => {
            if a == b.sym_diff(c) {
                emit((a, b.sym_diff(d)));
            }
        }
        OpBasis::XS | OpBasis::WS => {
            for k in b.intersect(c).subsets() {
                emit((a.union(c.minus(k)), b.sym_diff(d)));
            }
        }
    }
}

/// Structure constant of the `x^a y^b` basis: the parity of the number of
/// chains `k1 ⊆ k2 ⊆ b ∩ c` with `a ∪ (c \ k2) = e` and `b \ k1 = h \ d`.
///
/// The coefficient of `x^e y^h` in `x^a y^b x^c y^d` is this value when
/// `d ⊆ h`, and 0 otherwise.
pub fn structural_coeff_c(
    a: SubsetMask,
    b: SubsetMask,
    c: SubsetMask,
    d: SubsetMask,
    e: SubsetMask,
    h: SubsetMask,
) -> bool {
    chains(b.intersect(c))
        .filter(|&(k1, k2)| a.union(c.minus(k2)) == e && b.minus(k1) == h.minus(d))
        .count()
        % 2
        == 1
}

/// A letter of an operator word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    X(usize),
    W(usize),
    Y(usize),
    S(usize),
    /// A point indicator `m^c` used as a single letter.
    M(SubsetMask),
}

/// Brings a word into normal order: all function factors left of all
/// derivative (or shift) factors, as coefficients in `XY` (or `XS` when the
/// word uses shifts).
///
/// The word is read left to right; each new letter is pushed through the
/// right factors already present using
/// `y^b x^c = sum_{k1 ⊆ k2 ⊆ b ∩ c} x^{c \ k2} y^{b \ k1}` and
/// `s^b x^c = sum_{k ⊆ b ∩ c} x^{c \ k} s^b`; `x_i^2 = x_i`, `y_i^2 = 0`
/// and `s_i^2 = 1` fall out of the same rules.
pub fn normal_order(word: &[Letter], n: usize) -> Result<OpCoeffs> {
    check_dim(n)?;
    let has_y = word.iter().any(|l| matches!(l, Letter::Y(_)));
    let has_s = word.iter().any(|l| matches!(l, Letter::S(_)));
    if has_y && has_s {
        return Err(Error::MixedWord);
    }
    let right = if has_s { RightKind::S } else { RightKind::Y };
    for l in word {
        match *l {
            Letter::X(i) | Letter::W(i) | Letter::Y(i) | Letter::S(i) => {
                if i == 0 || i > n {
                    return Err(Error::IndexOutOfRange { index: i, n });
                }
            }
            Letter::M(c) => {
                if !c.fits(n) {
                    return Err(Error::BadMask { mask: c.bits(), n });
                }
            }
        }
    }
    let mut state: BTreeSet<Term> = BTreeSet::new();
    state.insert((SubsetMask::EMPTY, SubsetMask::EMPTY));
    for l in word {
        state = match *l {
            Letter::X(i) => push_x_monomial(&state, SubsetMask::singleton(i), right),
            Letter::W(i) => {
                let x = push_x_monomial(&state, SubsetMask::singleton(i), right);
                x.symmetric_difference(&state).copied().collect()
            }
            Letter::M(c) => {
                // m^c = sum_{c ⊆ e} x^e
                let mut acc = BTreeSet::new();
                for e in SubsetMask::full(n).minus(c).subsets() {
                    for t in push_x_monomial(&state, c.union(e), right) {
                        if !acc.remove(&t) {
                            acc.insert(t);
                        }
                    }
                }
                acc
            }
            Letter::Y(i) => {
                let bit = SubsetMask::singleton(i);
                state
                    .iter()
                    .filter(|(_, b)| b.intersect(bit).is_empty())
                    .map(|&(a, b)| (a, b.union(bit)))
                    .collect()
            }
            Letter::S(i) => {
                let bit = SubsetMask::singleton(i);
                state.iter().map(|&(a, b)| (a, b.sym_diff(bit))).collect()
            }
        };
    }
    Ok(OpCoeffs {
        n,
        basis: OpBasis::from_parts(RingBasis::X, right),
        terms: state,
    })
}

/// Right-multiplies every `x^a R^b` in `state` by `x^c`.
fn push_x_monomial(state: &BTreeSet<Term>, c: SubsetMask, right: RightKind) -> BTreeSet<Term> {
    let mut out = BTreeSet::new();
    let mut toggle = |t: Term| {
        if !out.remove(&t) {
            out.insert(t);
        }
    };
    for &(a, b) in state {
        match right {
            RightKind::Y => {
                for (k1, k2) in chains(b.intersect(c)) {
                    toggle((a.union(c.minus(k2)), b.minus(k1)));
                }
            }
            RightKind::S => {
                for k in b.intersect(c).subsets() {
                    toggle((a.union(c.minus(k)), b));
                }
            }
        }
    }
    out
}

impl fmt::Display for OpCoeffs {
    /// Sum of monomials like `x{1,2}y{1} + y{}`, terms in decreasing
    /// `(a, b)` order. The left factor is omitted when it is `x^∅` or `w^∅`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let l = self.basis.left();
        let r = self.basis.right().letter();
        for (pos, &(a, b)) in self.terms.iter().rev().enumerate() {
            if pos > 0 {
                f.write_str(" + ")?;
            }
            if !(a.is_empty() && l != RingBasis::M) {
                write!(f, "{}{}", l.letter(), a)?;
            }
            write!(f, "{r}{b}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct OpCoeffsJson {
    n: usize,
    basis: OpBasis,
    terms: Vec<(Vec<usize>, Vec<usize>)>,
}

impl Serialize for OpCoeffs {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OpCoeffsJson {
            n: self.n,
            basis: self.basis,
            terms: self
                .terms
                .iter()
                .map(|(a, b)| (a.indices(), b.indices()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OpCoeffs {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = OpCoeffsJson::deserialize(d)?;
        let terms = raw
            .terms
            .iter()
            .map(|(a, b)| {
                Ok((
                    SubsetMask::from_indices(a, raw.n)?,
                    SubsetMask::from_indices(b, raw.n)?,
                ))
            })
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        OpCoeffs::from_terms(raw.n, raw.basis, terms).map_err(serde::de::Error::custom)
    }
}
