//! Exact algebra of Boolean functions on `Z_2^n` and of the linear operators
//! acting on them.
//!
//! * [`ring`]: functions in the point-indicator (`m`), monomial (`x`) and
//!   co-monomial (`w`) bases, with the Möbius transforms between them.
//! * [`gf2lin`]: dense bit-packed matrices over GF(2), the reference model
//!   for every operator computation.
//! * [`diffops`]: Boolean derivatives, shifts and multiplication operators as
//!   matrices, plus the closed-form action of operators on functions.
//! * [`bweyl`]: operators as coefficient tables in six normal-ordered bases,
//!   with their products.
//! * [`setfam`]: the same algebra on families of subsets of `[n] ⊔ [ñ]`.
//! * [`lang`]: a small proposition/operator language with equivalence and
//!   entailment decisions.
//! * [`crosscheck`]: a seeded battery comparing all of the above.
//!
//! Subsets of `[n]` are [`SubsetMask`]s: element `i` is bit `i - 1`.

pub mod bits;
pub mod bweyl;
pub mod crosscheck;
pub mod diffops;
pub mod error;
pub mod exec;
pub mod gf2lin;
pub mod lang;
pub mod ring;
pub mod setfam;
pub mod subset;

pub use bits::BitVec;
pub use bweyl::{normal_order, structural_coeff_c, Letter, OpBasis, OpCoeffs, RightKind};
pub use error::{Error, Result, MAX_DIM};
pub use exec::Strategy;
pub use gf2lin::Gf2Matrix;
pub use ring::{RingBasis, RingElem};
pub use subset::SubsetMask;
