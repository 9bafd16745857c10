//! Families of subsets of `[n, ñ] = {1..n, ~1..~n}` with symmetric difference
//! and four products, each realized by counting the tuples of its defining
//! condition.
//!
//! A member `a = a1 ⊔ ã2` stands for the monomial `L^{a1} R^{a2}`:
//!
//! | product | basis    | acts on families read as |
//! |---------|----------|--------------------------|
//! | `∘`     | `m^a ∂^b` | `Σ m^a`                 |
//! | `•`     | `x^a ∂^b` | `Σ x^a`                 |
//! | `⋆`     | `m^a s^b` | `Σ m^a`                 |
//! | `∗`     | `x^a s^b` | `Σ x^a`                 |

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bweyl::{OpBasis, OpCoeffs};
use crate::error::{check_dim, same_dim, Error, Result};
use crate::ring::{RingBasis, RingElem};
use crate::subset::{all_subsets, chains, SubsetMask};

/// `a1 ⊔ ã2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairedMask {
    pub plain: SubsetMask,
    pub tilde: SubsetMask,
}

impl PairedMask {
    pub fn new(plain: SubsetMask, tilde: SubsetMask) -> Self {
        PairedMask { plain, tilde }
    }

    fn fits(self, n: usize) -> bool {
        self.plain.fits(n) && self.tilde.fits(n)
    }
}

impl fmt::Display for PairedMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self
            .plain
            .indices()
            .into_iter()
            .map(|i| i.to_string())
            .chain(self.tilde.indices().into_iter().map(|i| format!("~{i}")))
            .collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// Which of the four products, together with its coefficient basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Product {
    Circ,
    Bullet,
    Star,
    Ast,
}

impl Product {
    pub const ALL: [Product; 4] = [Product::Circ, Product::Bullet, Product::Star, Product::Ast];

    pub fn op_basis(self) -> OpBasis {
        match self {
            Product::Circ => OpBasis::MY,
            Product::Bullet => OpBasis::XY,
            Product::Star => OpBasis::MS,
            Product::Ast => OpBasis::XS,
        }
    }

    pub fn ring_basis(self) -> RingBasis {
        self.op_basis().left()
    }
}

/// Subset of `P[n, ñ]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Family {
    n: usize,
    members: BTreeSet<PairedMask>,
}

/// Subset of `P[n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FamilyN {
    n: usize,
    members: BTreeSet<SubsetMask>,
}

/// Collects odd-multiplicity keys.
struct OddCounter<K>(HashMap<K, bool>);

impl<K: std::hash::Hash + Eq + Ord + Copy> OddCounter<K> {
    fn new() -> Self {
        OddCounter(HashMap::new())
    }

    fn hit(&mut self, k: K) {
        *self.0.entry(k).or_insert(false) ^= true;
    }

    fn odd(self) -> BTreeSet<K> {
        self.0.into_iter().filter(|(_, v)| *v).map(|(k, _)| k).collect()
    }
}

impl Family {
    pub fn empty(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(Family {
            n,
            members: BTreeSet::new(),
        })
    }

    /// Builds a family; listing a member twice is an error-free no-op (sets
    /// have no multiplicity).
    pub fn new(n: usize, members: impl IntoIterator<Item = PairedMask>) -> Result<Self> {
        let mut out = Self::empty(n)?;
        for m in members {
            if !m.fits(n) {
                return Err(Error::BadMask {
                    mask: m.plain.bits() | m.tilde.bits(),
                    n,
                });
            }
            out.members.insert(m);
        }
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &BTreeSet<PairedMask> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, plain: SubsetMask, tilde: SubsetMask) -> bool {
        self.members.contains(&PairedMask { plain, tilde })
    }

    /// `Â = {a | a1 = a2 ∈ A}`.
    pub fn hat_diagonal(a: &FamilyN) -> Family {
        Family {
            n: a.n,
            members: a.members.iter().map(|&s| PairedMask::new(s, s)).collect(),
        }
    }

    /// `Ã = {a | complement(a1) = a2 ∈ A}`.
    pub fn tilde_antidiagonal(a: &FamilyN) -> Family {
        Family {
            n: a.n,
            members: a
                .members
                .iter()
                .map(|&s| PairedMask::new(s.complement(a.n), s))
                .collect(),
        }
    }

    /// `Σ_{a ∈ A} L^{a1} R^{a2}` in the basis of `product`.
    pub fn to_op(&self, product: Product) -> OpCoeffs {
        OpCoeffs::from_terms(
            self.n,
            product.op_basis(),
            self.members.iter().map(|m| (m.plain, m.tilde)),
        )
        .expect("members fit n")
    }

    /// Inverse of [`Family::to_op`]; `op` is converted first if needed.
    pub fn from_op(op: &OpCoeffs, product: Product) -> Family {
        let c = op.convert(product.op_basis());
        Family {
            n: c.n(),
            members: c.terms().iter().map(|&(a, b)| PairedMask::new(a, b)).collect(),
        }
    }

    /// Parses `{{1,2,~2,~3},{1}}`.
    pub fn parse(text: &str, n: usize) -> Result<Family> {
        let members = parse_nested(text)?
            .into_iter()
            .map(|items| {
                let mut plain = Vec::new();
                let mut tilde = Vec::new();
                for (is_tilde, i) in items {
                    if is_tilde {
                        tilde.push(i)
                    } else {
                        plain.push(i)
                    }
                }
                Ok(PairedMask::new(
                    SubsetMask::from_indices(&plain, n)?,
                    SubsetMask::from_indices(&tilde, n)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Family::new(n, members)
    }

    pub fn add(&self, other: &Family) -> Result<Family> {
        fam_add(self, other)
    }
}

impl FamilyN {
    pub fn empty(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(FamilyN {
            n,
            members: BTreeSet::new(),
        })
    }

    pub fn new(n: usize, members: impl IntoIterator<Item = SubsetMask>) -> Result<Self> {
        let mut out = Self::empty(n)?;
        for m in members {
            if !m.fits(n) {
                return Err(Error::BadMask { mask: m.bits(), n });
            }
            out.members.insert(m);
        }
        Ok(out)
    }

    /// All of `P[n]`.
    pub fn full(n: usize) -> Result<Self> {
        Self::new(n, all_subsets(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &BTreeSet<SubsetMask> {
        &self.members
    }

    pub fn contains(&self, a: SubsetMask) -> bool {
        self.members.contains(&a)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `Σ_{a ∈ F} L^a`.
    pub fn to_ring(&self, basis: RingBasis) -> RingElem {
        let support: Vec<SubsetMask> = self.members.iter().copied().collect();
        RingElem::from_support(self.n, basis, &support).expect("members fit n")
    }

    pub fn from_ring(f: &RingElem, basis: RingBasis) -> FamilyN {
        FamilyN {
            n: f.n(),
            members: f.convert(basis).support().into_iter().collect(),
        }
    }

    /// Parses `{{1,2},{}}`.
    pub fn parse(text: &str, n: usize) -> Result<FamilyN> {
        let members = parse_nested(text)?
            .into_iter()
            .map(|items| {
                if items.iter().any(|(t, _)| *t) {
                    return Err(Error::Format("tilde element in a family over [n]".into()));
                }
                let idx: Vec<usize> = items.into_iter().map(|(_, i)| i).collect();
                SubsetMask::from_indices(&idx, n)
            })
            .collect::<Result<Vec<_>>>()?;
        FamilyN::new(n, members)
    }
}

/// `A + B = (A ∪ B) \ (A ∩ B)`.
pub fn fam_add(a: &Family, b: &Family) -> Result<Family> {
    same_dim(a.n, b.n)?;
    Ok(Family {
        n: a.n,
        members: a.members.symmetric_difference(&b.members).copied().collect(),
    })
}

/// `a ∈ A ∘ B` iff odd `#{(b, c) : b ∈ P[n], c ∈ B, c2 ⊆ a2, a1 ⊔ b̃ ∈ A,
/// a2 \ c2 ⊆ a1 + c1 ⊆ b}`.
pub fn circ_prod(a: &Family, b: &Family) -> Result<Family> {
    same_dim(a.n, b.n)?;
    let n = a.n;
    let mut out = OddCounter::new();
    // a1 ⊔ b̃ ∈ A fixes (a1, b) to a member of A; a2 stays free
    for am in &a.members {
        let (a1, bb) = (am.plain, am.tilde);
        for c in &b.members {
            let (c1, c2) = (c.plain, c.tilde);
            for a2 in all_subsets(n) {
                let s = a1.sym_diff(c1);
                if c2.is_subset_of(a2) && a2.minus(c2).is_subset_of(s) && s.is_subset_of(bb) {
                    out.hit(PairedMask::new(a1, a2));
                }
            }
        }
    }
    Ok(Family {
        n,
        members: out.odd(),
    })
}

/// `a ∈ A ∘ F` iff odd `#{(b, c) : b ⊆ c, a ⊔ c̃ ∈ A, a + b ∈ F}`.
pub fn circ_act(a: &Family, f: &FamilyN) -> Result<FamilyN> {
    same_dim(a.n, f.n)?;
    let mut out = OddCounter::new();
    for am in &a.members {
        let (x, c) = (am.plain, am.tilde);
        for b in c.subsets() {
            if f.contains(x.sym_diff(b)) {
                out.hit(x);
            }
        }
    }
    Ok(FamilyN {
        n: a.n,
        members: out.odd(),
    })
}

/// `a ∈ A • B` iff odd `#{(b, c, k1, k2) : b ∈ A, c ∈ B, k1 ⊆ k2 ⊆ b2 ∩ c1,
/// b1 ⊆ a1, c2 ⊆ a2, b1 ∪ (c1 \ k2) = a1, b2 \ k1 = a2 \ c2}`.
pub fn bullet_prod(a: &Family, b: &Family) -> Result<Family> {
    same_dim(a.n, b.n)?;
    let n = a.n;
    let mut out = OddCounter::new();
    for bm in &a.members {
        let (b1, b2) = (bm.plain, bm.tilde);
        for cm in &b.members {
            let (c1, c2) = (cm.plain, cm.tilde);
            for (k1, k2) in chains(b2.intersect(c1)) {
                let a1 = b1.union(c1.minus(k2));
                for a2 in all_subsets(n) {
                    if c2.is_subset_of(a2) && b2.minus(k1) == a2.minus(c2) {
                        out.hit(PairedMask::new(a1, a2));
                    }
                }
            }
        }
    }
    Ok(Family {
        n,
        members: out.odd(),
    })
}

/// `a ∈ A • F` iff odd `#{(b, c) : b ∈ A, c ∈ F, b2 ⊆ c, b1 ∪ (c \ b2) = a}`.
pub fn bullet_act(a: &Family, f: &FamilyN) -> Result<FamilyN> {
    same_dim(a.n, f.n)?;
    let mut out = OddCounter::new();
    for bm in &a.members {
        for &c in &f.members {
            if bm.tilde.is_subset_of(c) {
                out.hit(bm.plain.union(c.minus(bm.tilde)));
            }
        }
    }
    Ok(FamilyN {
        n: a.n,
        members: out.odd(),
    })
}

/// `a ∈ A ⋆ B` iff odd `#{b : a1 ⊔ b̃ ∈ A, (a1 + b) ⊔ (a2 + b)~ ∈ B}`.
pub fn star_prod(a: &Family, b: &Family) -> Result<Family> {
    same_dim(a.n, b.n)?;
    let n = a.n;
    let mut out = OddCounter::new();
    for am in &a.members {
        let (a1, bb) = (am.plain, am.tilde);
        for a2 in all_subsets(n) {
            if b.contains(a1.sym_diff(bb), a2.sym_diff(bb)) {
                out.hit(PairedMask::new(a1, a2));
            }
        }
    }
    Ok(Family {
        n,
        members: out.odd(),
    })
}

/// `a ∈ A ⋆ F` iff odd `#{b : a ⊔ b̃ ∈ A, a + b ∈ F}`.
pub fn star_act(a: &Family, f: &FamilyN) -> Result<FamilyN> {
    same_dim(a.n, f.n)?;
    let mut out = OddCounter::new();
    for am in &a.members {
        if f.contains(am.plain.sym_diff(am.tilde)) {
            out.hit(am.plain);
        }
    }
    Ok(FamilyN {
        n: a.n,
        members: out.odd(),
    })
}

/// `a ∈ A ∗ B` iff odd `#{(b, c, d, e) : e ⊆ c ∩ d, b ∪ (d \ e) = a1,
/// b ⊔ c̃ ∈ A, d ⊔ (c + a2)~ ∈ B}`.
pub fn ast_prod(a: &Family, b: &Family) -> Result<Family> {
    same_dim(a.n, b.n)?;
    let n = a.n;
    let mut out = OddCounter::new();
    for am in &a.members {
        let (bb, c) = (am.plain, am.tilde);
        for d in all_subsets(n) {
            for a2 in all_subsets(n) {
                if !b.contains(d, c.sym_diff(a2)) {
                    continue;
                }
                for e in c.intersect(d).subsets() {
                    out.hit(PairedMask::new(bb.union(d.minus(e)), a2));
                }
            }
        }
    }
    Ok(Family {
        n,
        members: out.odd(),
    })
}

/// `a ∈ A ∗ F` iff odd `#{(b, c, d, e) : e ∈ F, c ⊆ d ∩ e, b ∪ (e \ c) = a,
/// b ⊔ d̃ ∈ A}`.
pub fn ast_act(a: &Family, f: &FamilyN) -> Result<FamilyN> {
    same_dim(a.n, f.n)?;
    let mut out = OddCounter::new();
    for am in &a.members {
        let (b, d) = (am.plain, am.tilde);
        for &e in &f.members {
            for c in d.intersect(e).subsets() {
                out.hit(b.union(e.minus(c)));
            }
        }
    }
    Ok(FamilyN {
        n: a.n,
        members: out.odd(),
    })
}

/// Dispatches to the product named by `p`.
pub fn product(p: Product, a: &Family, b: &Family) -> Result<Family> {
    match p {
        Product::Circ => circ_prod(a, b),
        Product::Bullet => bullet_prod(a, b),
        Product::Star => star_prod(a, b),
        Product::Ast => ast_prod(a, b),
    }
}

/// Dispatches to the action named by `p`.
pub fn action(p: Product, a: &Family, f: &FamilyN) -> Result<FamilyN> {
    match p {
        Product::Circ => circ_act(a, f),
        Product::Bullet => bullet_act(a, f),
        Product::Star => star_act(a, f),
        Product::Ast => ast_act(a, f),
    }
}

/// Parses `{{...},{...}}` into lists of `(is_tilde, index)`.
fn parse_nested(text: &str) -> Result<Vec<Vec<(bool, usize)>>> {
    let bad = |msg: &str| Error::Format(format!("family literal: {msg}"));
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = t
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| bad("expected outer braces"))?;
    let mut out = Vec::new();
    let mut rest = inner;
    while !rest.is_empty() {
        let body_end = rest.find('}').ok_or_else(|| bad("unclosed member"))?;
        let body = rest[..body_end]
            .strip_prefix('{')
            .ok_or_else(|| bad("expected '{'"))?;
        let mut items = Vec::new();
        for tok in body.split(',').filter(|s| !s.is_empty()) {
            let (tilde, num) = match tok.strip_prefix('~') {
                Some(r) => (true, r),
                None => (false, tok),
            };
            let i: usize = num.parse().map_err(|_| bad(&format!("bad element {tok:?}")))?;
            items.push((tilde, i));
        }
        out.push(items);
        rest = &rest[body_end + 1..];
        if let Some(r) = rest.strip_prefix(',') {
            if r.is_empty() {
                return Err(bad("trailing comma"));
            }
            rest = r;
        } else if !rest.is_empty() {
            return Err(bad("expected ','"));
        }
    }
    Ok(out)
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.members.iter().map(|m| m.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

impl fmt::Display for FamilyN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.members.iter().map(|m| m.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    n: usize,
    members: Vec<(Vec<usize>, Vec<usize>)>,
}

impl Serialize for Family {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FamilyJson {
            n: self.n,
            members: self
                .members
                .iter()
                .map(|m| (m.plain.indices(), m.tilde.indices()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = FamilyJson::deserialize(d)?;
        let members = raw
            .members
            .iter()
            .map(|(p, t)| {
                Ok(PairedMask::new(
                    SubsetMask::from_indices(p, raw.n)?,
                    SubsetMask::from_indices(t, raw.n)?,
                ))
            })
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Family::new(raw.n, members).map_err(serde::de::Error::custom)
    }
}
