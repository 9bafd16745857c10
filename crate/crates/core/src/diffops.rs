//! Boolean difference and shift operators as `2^n x 2^n` matrices acting on
//! `m`-coordinates (truth tables), plus the closed-form rules for monomial
//! operators and their action on functions.

use crate::bits::BitVec;
use crate::bweyl::{OpBasis, OpCoeffs, RightKind};
use crate::error::{check_dim, Error, Result};
use crate::gf2lin::Gf2Matrix;
use crate::ring::{RingBasis, RingElem};
use crate::subset::{all_subsets, SubsetMask};

fn check_index(i: usize, n: usize) -> Result<()> {
    check_dim(n)?;
    if i == 0 || i > n {
        Err(Error::IndexOutOfRange { index: i, n })
    } else {
        Ok(())
    }
}

/// `∂_i f(x) = f(x + e_i) + f(x)`.
pub fn derivative_matrix(i: usize, n: usize) -> Result<Gf2Matrix> {
    check_index(i, n)?;
    let e = 1usize << (i - 1);
    Ok(Gf2Matrix::from_fn(1 << n, 1 << n, |a, d| d == a || d == a ^ e))
}

/// `s_i f(x) = f(x + e_i)`.
pub fn shift_matrix(i: usize, n: usize) -> Result<Gf2Matrix> {
    check_index(i, n)?;
    let e = 1usize << (i - 1);
    Ok(Gf2Matrix::from_fn(1 << n, 1 << n, |a, d| d == a ^ e))
}

/// Multiplication by `f`: diagonal with the values of `f`.
pub fn multiplication_matrix(f: &RingElem) -> Gf2Matrix {
    let table = f.truth_table();
    let side = table.len();
    let mut m = Gf2Matrix::zeros(side, side);
    for a in table.iter_ones() {
        m.set(a, a, true);
    }
    m
}

/// Multiplication by the coordinate `x_i`.
pub fn coordinate_matrix(i: usize, n: usize) -> Result<Gf2Matrix> {
    Ok(multiplication_matrix(&RingElem::coordinate(i, n)?))
}

/// Matrix `P` with `P v = v'` where `v` holds coordinates in `from` and `v'`
/// the same function in `to`.
pub fn change_of_basis(from: RingBasis, to: RingBasis, n: usize) -> Result<Gf2Matrix> {
    check_dim(n)?;
    let side = 1usize << n;
    let cols: Vec<BitVec> = (0..side)
        .map(|a| {
            RingElem::monomial(from, SubsetMask(a as u32), n)
                .expect("valid mask")
                .convert(to)
                .coeffs()
                .clone()
        })
        .collect();
    Gf2Matrix::from_rows(side, cols).map(|m| m.transpose())
}

/// Matrix of a monomial operator in the matching function basis, by the
/// closed-form entry rules:
///
/// * `m^a ∂^b` on `m`-coordinates: `(c,d) = 1` iff `c = a` and `d + a ⊆ b`;
/// * `x^a ∂^b` on `x`-coordinates: `(c,d) = 1` iff `b ⊆ d` and `c = a ∪ (d \ b)`;
/// * `m^a s^b` on `m`-coordinates: `(c,d) = 1` iff `c = a` and `d = a + b`;
/// * `x^a s^b` on `x`-coordinates: `(c,d)` is the parity of
///   `#{e ⊆ b ∩ d : c = a ∪ (d \ e)}`.
///
/// A `w` left factor uses the `x` rule on `w`-coordinates.
pub fn rep_matrix(
    left: RingBasis,
    right: RightKind,
    a: SubsetMask,
    b: SubsetMask,
    n: usize,
) -> Result<Gf2Matrix> {
    check_dim(n)?;
    for m in [a, b] {
        if !m.fits(n) {
            return Err(Error::BadMask { mask: m.bits(), n });
        }
    }
    let side = 1usize << n;
    let entry = |c: SubsetMask, d: SubsetMask| -> bool {
        match (left, right) {
            (RingBasis::M, RightKind::Y) => c == a && d.sym_diff(a).is_subset_of(b),
            (RingBasis::M, RightKind::S) => c == a && d == a.sym_diff(b),
            (_, RightKind::Y) => b.is_subset_of(d) && c == a.union(d.minus(b)),
            (_, RightKind::S) => {
                b.intersect(d)
                    .subsets()
                    .filter(|&e| c == a.union(d.minus(e)))
                    .count()
                    % 2
                    == 1
            }
        }
    };
    Ok(Gf2Matrix::from_fn(side, side, |c, d| {
        entry(SubsetMask(c as u32), SubsetMask(d as u32))
    }))
}

/// `D f` by the coordinate formulas:
///
/// * `MY`: `Df(a) = sum_b D(a,b) sum_{e ⊆ b} f(a + e)`
/// * `XY`: `Df_x(e) = sum_{a ∪ (c \ b) = e, b ⊆ c} D(a,b) f_x(c)`
/// * `MS`: `Df(a) = sum_b D(a,b) f(a + b)`
/// * `XS`: `Df_x(d) = sum_{a ∪ (c \ e) = d, e ⊆ b ∩ c} D(a,b) f_x(c)`
///
/// `f` is first converted to the left basis of `D`. `WY` and `WS` reuse the
/// `x` formulas on `w`-coordinates, since `w_i` satisfies the same relations
/// as `x_i`. The result is in the left basis of `D`.
pub fn apply_coeffs(d: &OpCoeffs, f: &RingElem) -> Result<RingElem> {
    crate::error::same_dim(d.n(), f.n())?;
    let n = d.n();
    let left = d.basis().left();
    let fc = f.convert(left);
    let fv = fc.coeffs();
    let mut out = BitVec::zeros(1 << n);
    match d.basis() {
        OpBasis::MY => {
            for &(a, b) in d.terms() {
                let s = b.subsets().filter(|&e| fv.get(a.sym_diff(e).index())).count();
                if s % 2 == 1 {
                    out.flip(a.index());
                }
            }
        }
        OpBasis::MS => {
            for &(a, b) in d.terms() {
                if fv.get(a.sym_diff(b).index()) {
                    out.flip(a.index());
                }
            }
        }
        OpBasis::XY | OpBasis::WY => {
            for &(a, b) in d.terms() {
                for c in fv.iter_ones().map(|c| SubsetMask(c as u32)) {
                    if b.is_subset_of(c) {
                        out.flip(a.union(c.minus(b)).index());
                    }
                }
            }
        }
        OpBasis::XS | OpBasis::WS => {
            for &(a, b) in d.terms() {
                for c in fv.iter_ones().map(|c| SubsetMask(c as u32)) {
                    for e in b.intersect(c).subsets() {
                        out.flip(a.union(c.minus(e)).index());
                    }
                }
            }
        }
    }
    RingElem::from_coeffs(n, left, out)
}

/// `∂^b` or `s^b` as a product of generator matrices.
pub(crate) fn right_factor_matrix(right: RightKind, b: SubsetMask, n: usize) -> Gf2Matrix {
    let mut m = Gf2Matrix::identity(1 << n);
    for i in b.indices() {
        let g = match right {
            RightKind::Y => derivative_matrix(i, n),
            RightKind::S => shift_matrix(i, n),
        }
        .expect("index within n");
        m = m.mul(&g).expect("square");
    }
    m
}

/// Iterator over every `(a, b)` pair for `n`.
pub(crate) fn all_pairs(n: usize) -> impl Iterator<Item = (SubsetMask, SubsetMask)> {
    all_subsets(n).flat_map(move |a| all_subsets(n).map(move |b| (a, b)))
}
