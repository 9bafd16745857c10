//! Propositions and operator words: parsing, valuation, equivalence,
//! entailment and normal forms.
//!
//! A plain variable denotes multiplication by its coordinate function and a
//! tilded variable `~a` the Boolean derivative along it. Classical
//! propositions are the tilde-free words; they evaluate to ring elements,
//! while every word evaluates to an operator.

mod lex;
mod parse;

pub use lex::{tokenize, LitKind, Tok, Token};
pub use parse::{parse, Expr};

use crate::bweyl::{OpBasis, OpCoeffs};
use crate::error::{check_dim, Error, Result};
use crate::gf2lin::Gf2Matrix;
use crate::ring::{RingBasis, RingElem};
use crate::subset::SubsetMask;

/// Assignment of variable names to positions `1..=n`.
///
/// Positions past the named ones are reachable only through literals such as
/// `x{3}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarContext {
    names: Vec<String>,
    n: usize,
}

impl VarContext {
    pub fn new(names: Vec<String>) -> Result<Self> {
        let n = names.len();
        Self::with_dim(names, n)
    }

    pub fn with_dim(names: Vec<String>, n: usize) -> Result<Self> {
        check_dim(n)?;
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::Format(format!("variable `{a}` listed twice")));
            }
        }
        if names.len() > n {
            return Err(Error::Format(format!(
                "{} variables do not fit n = {n}",
                names.len()
            )));
        }
        Ok(VarContext { names, n })
    }

    /// Names in first-occurrence order across `exprs`; `n` defaults to the
    /// smallest dimension covering every variable and literal index.
    pub fn infer(exprs: &[&Expr], n: Option<usize>) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut need = 1;
        for e in exprs {
            for v in e.variables() {
                if !names.contains(&v) {
                    names.push(v);
                }
            }
            need = need.max(e.max_literal_index());
        }
        need = need.max(names.len());
        match n {
            Some(n) if n < need => Err(Error::Format(format!(
                "expression needs n >= {need}, got n = {n}"
            ))),
            Some(n) => Self::with_dim(names, n),
            None => Self::with_dim(names, need),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// 1-based position of `name`.
    pub fn position(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|v| v == name)
            .map(|i| i + 1)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn name(&self, i: usize) -> Option<&str> {
        self.names.get(i.wrapping_sub(1)).map(String::as_str)
    }
}

fn literal_mask(m: SubsetMask, n: usize) -> Result<SubsetMask> {
    SubsetMask::new(m.bits(), n)
}

/// Truth function of a tilde-free expression, in `x`-coordinates.
pub fn eval_classical(e: &Expr, ctx: &VarContext) -> Result<RingElem> {
    let n = ctx.n;
    Ok(match e {
        Expr::Zero => RingElem::zero(n, RingBasis::X)?,
        Expr::One => RingElem::one(n)?,
        Expr::Var(v) => RingElem::coordinate(ctx.position(v)?, n)?,
        Expr::TildeVar(_) => return Err(Error::OperatorInClassical),
        Expr::Literal(k, m) => {
            let basis = match k {
                LitKind::M => RingBasis::M,
                LitKind::X => RingBasis::X,
                LitKind::W => RingBasis::W,
                LitKind::Y | LitKind::S => return Err(Error::OperatorInClassical),
            };
            RingElem::monomial(basis, literal_mask(*m, n)?, n)?.convert(RingBasis::X)
        }
        Expr::Sum(xs) => {
            let mut acc = RingElem::zero(n, RingBasis::X)?;
            for x in xs {
                acc = acc.add(&eval_classical(x, ctx)?)?;
            }
            acc
        }
        Expr::Prod(xs) => {
            let mut acc = RingElem::one(n)?;
            for x in xs {
                acc = acc.mul(&eval_classical(x, ctx)?)?;
            }
            acc
        }
    })
}

/// Operator denoted by an expression, as `x^a y^b` coefficients.
pub fn eval_quantum(e: &Expr, ctx: &VarContext) -> Result<OpCoeffs> {
    let n = ctx.n;
    let xy = OpBasis::XY;
    Ok(match e {
        Expr::Zero => OpCoeffs::zero(n, xy)?,
        Expr::One => OpCoeffs::identity(n, xy)?,
        Expr::Var(v) => {
            OpCoeffs::monomial(n, xy, SubsetMask::singleton(ctx.position(v)?), SubsetMask::EMPTY)?
        }
        Expr::TildeVar(v) => {
            OpCoeffs::monomial(n, xy, SubsetMask::EMPTY, SubsetMask::singleton(ctx.position(v)?))?
        }
        Expr::Literal(k, m) => {
            let m = literal_mask(*m, n)?;
            match k {
                LitKind::Y => OpCoeffs::monomial(n, xy, SubsetMask::EMPTY, m)?,
                LitKind::S => {
                    OpCoeffs::monomial(n, OpBasis::XS, SubsetMask::EMPTY, m)?.convert(xy)
                }
                LitKind::M | LitKind::X | LitKind::W => {
                    OpCoeffs::from_function(&eval_classical(e, ctx)?, xy)
                }
            }
        }
        Expr::Sum(xs) => {
            let mut acc = OpCoeffs::zero(n, xy)?;
            for x in xs {
                acc = acc.add(&eval_quantum(x, ctx)?)?;
            }
            acc
        }
        Expr::Prod(xs) => {
            let mut acc = OpCoeffs::identity(n, xy)?;
            for x in xs {
                acc = acc.mul(&eval_quantum(x, ctx)?)?;
            }
            acc
        }
    })
}

/// Whether `p` and `q` denote the same operator (matrix equality).
pub fn equivalent(p: &Expr, q: &Expr, ctx: &VarContext) -> Result<bool> {
    Ok(eval_quantum(p, ctx)?.to_matrix() == eval_quantum(q, ctx)?.to_matrix())
}

/// `p ⊢ q` for propositions: `p ≤ q` pointwise.
pub fn entails_classical(p: &Expr, q: &Expr, ctx: &VarContext) -> Result<bool> {
    let mut pt = eval_classical(p, ctx)?.truth_table();
    let qt = eval_classical(q, ctx)?.truth_table();
    let mut not_q = qt.clone();
    not_q.xor_assign(&crate::bits::BitVec::from_fn(qt.len(), |_| true));
    pt.and_assign(&not_q);
    Ok(pt.is_zero())
}

/// `R` with `p̂ = q̂ R`, both as a matrix and as an operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub matrix: Gf2Matrix,
    pub op: OpCoeffs,
}

/// `p ⊢ q` for operators: some `r` has `p̂ = q̂ r̂`.
pub fn entails_quantum(p: &Expr, q: &Expr, ctx: &VarContext) -> Result<bool> {
    Ok(entailment_witness(p, q, ctx)?.is_some())
}

/// A factor `r` with `p̂ = q̂ r̂`, if one exists.
///
/// Every matrix is the value of some operator word, so solving `S = T R`
/// over all matrices decides the question exactly.
pub fn entailment_witness(p: &Expr, q: &Expr, ctx: &VarContext) -> Result<Option<Witness>> {
    let s = eval_quantum(p, ctx)?.to_matrix();
    let t = eval_quantum(q, ctx)?.to_matrix();
    let Some(r) = t.solve_right(&s)? else {
        return Ok(None);
    };
    let op = OpCoeffs::from_matrix(&r, OpBasis::XY)?;
    Ok(Some(Witness { matrix: r, op }))
}

/// Sum of `x^a y^b` monomials written as words, terms in decreasing `(a, b)`
/// order. Positions without a name are written as literals.
pub fn normalize(e: &Expr, ctx: &VarContext) -> Result<Expr> {
    let op = eval_quantum(e, ctx)?;
    Ok(render_xy(&op, ctx))
}

/// Renders `x^a y^b` coefficients as an expression over `ctx`.
pub fn render_xy(op: &OpCoeffs, ctx: &VarContext) -> Expr {
    let op = op.convert(OpBasis::XY);
    let mut terms: Vec<Expr> = op
        .terms()
        .iter()
        .rev()
        .map(|&(a, b)| {
            let mut factors = Vec::new();
            for i in a.indices() {
                factors.push(match ctx.name(i) {
                    Some(v) => Expr::Var(v.to_string()),
                    None => Expr::Literal(LitKind::X, SubsetMask::singleton(i)),
                });
            }
            for i in b.indices() {
                factors.push(match ctx.name(i) {
                    Some(v) => Expr::TildeVar(v.to_string()),
                    None => Expr::Literal(LitKind::Y, SubsetMask::singleton(i)),
                });
            }
            match factors.len() {
                0 => Expr::One,
                1 => factors.pop().expect("one"),
                _ => Expr::Prod(factors),
            }
        })
        .collect();
    match terms.len() {
        0 => Expr::Zero,
        1 => terms.pop().expect("one"),
        _ => Expr::Sum(terms),
    }
}
