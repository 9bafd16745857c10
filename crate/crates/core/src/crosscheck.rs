//! Seeded invariant battery comparing every symbolic computation with the
//! matrix picture.
//!
//! Each check draws from its own ChaCha stream derived from the seed and the
//! check's position, so a report depends only on the configuration and not
//! on how the checks are scheduled.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bits::BitVec;
use crate::bweyl::{OpBasis, OpCoeffs, RightKind};
use crate::diffops::{
    apply_coeffs, change_of_basis, coordinate_matrix, derivative_matrix, multiplication_matrix,
    rep_matrix, shift_matrix,
};
use crate::exec::{map_vec, Strategy};
use crate::gf2lin::Gf2Matrix;
use crate::lang::{self, Expr, LitKind, VarContext};
use crate::ring::{k_cover_parity, subset_sum_transform, superset_sum_transform, RingBasis, RingElem};
use crate::setfam::{action, product, Family, FamilyN, PairedMask, Product};
use crate::subset::{all_subsets, SubsetMask};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckConfig {
    /// Largest dimension exercised.
    pub n_max: usize,
    /// Random cases per dimension (and per basis where one applies).
    pub samples: usize,
    pub seed: u64,
    pub strategy: Strategy,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            n_max: 3,
            samples: 20,
            seed: 0,
            strategy: Strategy::Parallel,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub seed: u64,
    pub n_max: usize,
    pub outcomes: Vec<Outcome>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(Outcome::passed)
    }

    pub fn failed(&self) -> usize {
        self.outcomes.iter().filter(|o| !o.passed()).count()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            let tag = if o.passed() { "pass" } else { "FAIL" };
            writeln!(f, "{tag}  {:<44} {} cases, {} failures", o.name, o.cases, o.failures)?;
            if let Some(msg) = &o.first_failure {
                writeln!(f, "      first failure: {msg}")?;
            }
        }
        write!(
            f,
            "{} of {} checks passed (seed {}, n <= {})",
            self.outcomes.len() - self.failed(),
            self.outcomes.len(),
            self.seed,
            self.n_max
        )
    }
}

/// Tally for one check.
struct Tally {
    cases: usize,
    failures: usize,
    first: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            cases: 0,
            failures: 0,
            first: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(describe());
            }
        }
    }
}

type CheckFn = fn(&CheckConfig, &mut ChaCha8Rng, &mut Tally);

const CHECKS: &[(&str, CheckFn)] = &[
    ("operator product matches matrix product", check_mul_matrix),
    ("scatter and gather products agree", check_gather),
    ("basis conversions preserve the operator", check_conversions),
    ("generator relations", check_relations),
    ("monomial matrices follow the entry rules", check_rep_matrix),
    ("subset and superset sums are involutions", check_moebius),
    ("k-covering parity recovers the family", check_k_cover),
    ("coordinate action matches matrix action", check_apply),
    ("set products match operator products", check_set_products),
    ("classical and quantum entailment agree", check_entailment),
    ("rewrite rules preserve the valuation", check_rewrites),
    ("parse/format round trip and normal forms", check_parser),
];

/// Runs the whole battery.
pub fn run(config: &CheckConfig) -> Report {
    let jobs: Vec<usize> = (0..CHECKS.len()).collect();
    let outcomes = map_vec(config.strategy, jobs, |i| {
        let (name, check) = CHECKS[i];
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ i as u64);
        let mut tally = Tally::new();
        check(config, &mut rng, &mut tally);
        Outcome {
            name,
            cases: tally.cases,
            failures: tally.failures,
            first_failure: tally.first,
        }
    });
    Report {
        seed: config.seed,
        n_max: config.n_max,
        outcomes,
    }
}

pub fn random_subset(rng: &mut impl Rng, n: usize) -> SubsetMask {
    SubsetMask(rng.gen_range(0..1u32 << n))
}

/// Operator with up to `max_terms` random terms.
pub fn random_op(rng: &mut impl Rng, n: usize, basis: OpBasis, max_terms: usize) -> OpCoeffs {
    let k = rng.gen_range(0..=max_terms);
    let terms: Vec<_> = (0..k)
        .map(|_| (random_subset(rng, n), random_subset(rng, n)))
        .collect();
    OpCoeffs::from_terms(n, basis, terms).expect("masks fit n")
}

/// Uniformly random ring element.
pub fn random_ring(rng: &mut impl Rng, n: usize, basis: RingBasis) -> RingElem {
    let coeffs = BitVec::from_fn(1 << n, |_| rng.gen());
    RingElem::from_coeffs(n, basis, coeffs).expect("length 2^n")
}

pub fn random_family(rng: &mut impl Rng, n: usize, max_members: usize) -> Family {
    let k = rng.gen_range(0..=max_members);
    let members: Vec<_> = (0..k)
        .map(|_| PairedMask::new(random_subset(rng, n), random_subset(rng, n)))
        .collect();
    Family::new(n, members).expect("masks fit n")
}

pub fn random_family_n(rng: &mut impl Rng, n: usize) -> FamilyN {
    FamilyN::new(n, all_subsets(n).filter(|_| rng.gen())).expect("masks fit n")
}

/// Random expression tree over `vars`, shaped the way the parser builds
/// trees (sums and products with at least two children).
pub fn random_expr(rng: &mut impl Rng, vars: &[&str], n: usize, depth: usize, tilde: bool) -> Expr {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..10) {
            0 => Expr::Zero,
            1 => Expr::One,
            2 => {
                let kinds: &[LitKind] = if tilde {
                    &[LitKind::M, LitKind::X, LitKind::W, LitKind::Y, LitKind::S]
                } else {
                    &[LitKind::M, LitKind::X, LitKind::W]
                };
                Expr::Literal(*kinds.choose(rng).expect("nonempty"), random_subset(rng, n))
            }
            3..=5 if tilde => Expr::TildeVar(vars.choose(rng).expect("nonempty").to_string()),
            _ => Expr::Var(vars.choose(rng).expect("nonempty").to_string()),
        };
    }
    let k = rng.gen_range(2..=3);
    let kids: Vec<Expr> = (0..k)
        .map(|_| random_expr(rng, vars, n, depth - 1, tilde))
        .collect();
    if rng.gen() {
        Expr::Sum(kids)
    } else {
        Expr::Prod(kids)
    }
}

const VARS: [&str; 4] = ["a", "b", "c", "d"];

fn context(n: usize) -> VarContext {
    VarContext::new(VARS[..n].iter().map(|s| s.to_string()).collect()).expect("distinct names")
}

fn dims(config: &CheckConfig, cap: usize) -> std::ops::RangeInclusive<usize> {
    1..=config.n_max.min(cap)
}

fn check_mul_matrix(cfg: &CheckConfig, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for n in dims(cfg, 6) {
        for basis in OpBasis::ALL {
            for _ in 0..cfg.samples {
                let f = random_op(rng, n, basis, 6);
                let g = random_op(rng, n, basis, 6);
                let fg = f.mul_with(&g, cfg.strategy).expect("same n");
                let want = f.to_matrix().mul(&g.to_matrix()).expect("square");
                t.record(fg.to_matrix() == want, || format!("{basis}: ({f}) * ({g}) = {fg}"));
            }
        }
    }
}

fn check_gather(cfg: &CheckConfig, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for n in dims(cfg, 4) {
        for basis in OpBasis::ALL {
            for _ in 0..cfg.samples {
                let f = random_op(rng, n, basis, 5);
                let g = random_op(rng, n, basis, 5);
                let a = f.mul_with(&g, Strategy::Sequential).expect("same n");
                let b = f.mul_gather(&g, cfg.strategy).expect("same n");
                t.record(a == b, || format!("{basis}: ({f}) * ({g}): scatter {a}, gather {b}"));
            }
        }
    }
}

fn check_conversions(cfg: &CheckConfig, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for n in dims(cfg, 6) {
        for _ in 0..cfg.samples {
            let from = *OpBasis::ALL.choose(rng).expect("nonempty");
            let f = random_op(rng, n, from, 8);
            let m = f.to_matrix();
            for to in OpBasis::ALL {
                let g = f.convert(to);
                t.record(g.to_matrix() == m && g.convert(from) == f, || {
                    format!("{f} from {from} to {to}")
                });
            }
            let back = OpCoeffs::from_matrix(&m, from).expect("square");
            t.record(back == f, || format!("from_matrix({f})"));
            let r = random_ring(rng, n, RingBasis::X);
            for b in RingBasis::ALL {
                let c = r.convert(b);
                t.record(c.truth_table() == r.truth_table() && c.convert(RingBasis::X) == r, || {
                    format!("ring conversion of {r} to {b:?}")
                });
            }
        }
    }
}

fn check_relations(cfg: &CheckConfig, _rng: &mut ChaCha8Rng, t: &mut Tally) {
    for n in dims(cfg, 4) {
        let id = Gf2Matrix::identity(1 << n);
        let zero = Gf2Matrix::zeros(1 << n, 1 << n);
        let mul = |a: &Gf2Matrix, b: &Gf2Matrix| a.mul(b).expect("square");
        let add = |a: &Gf2Matrix, b: &Gf2Matrix| a.add(b).expect("square");
        for i in 1..=n {
            let x = coordinate_matrix(i, n).expect("i <= n");
            let d = derivative_matrix(i, n).expect("i <= n");
            let s = shift_matrix(i, n).expect("i <= n");
            let cases = [
                ("x^2 = x", mul(&x, &x) == x),
                ("d^2 = 0", mul(&d, &d) == zero),
                ("s^2 = 1", mul(&s, &s) == id),
                ("d = s + 1", d == add(&s, &id)),
                ("d s = s d = d", mul(&d, &s) == d && mul(&s, &d) == d),
                ("s = d + 1", s == add(&d, &id)),
                (
                    "s x = x s + s = (x + 1) s",
                    mul(&s, &x) == add(&mul(&x, &s), &s) && mul(&s, &x) == mul(&add(&x, &id), &s),
                ),
                (
                    "d x = x d + s = x d + d + 1",
                    mul(&d, &x) == add(&mul(&x, &d), &s)
                        && mul(&d, &x) == add(&add(&mul(&x, &d), &d), &id),
                ),
            ];
            for (name, ok) in cases {
                t.record(ok, || format!("{name} fails for i = {i}, n = {n}"));
            }
        }
    }
}

fn check_rep_matrix(cfg: &CheckConfig, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for n in dims(cfg, 5) {
        for _ in 0..cfg.samples {
            let (a, b) = (random_subset(rng, n), random_subset(rng, n));
            let left = *RingBasis::ALL.choose(rng).expect("nonempty");
            let right = if rng.gen() { RightKind::Y } else { RightKind::S };
            let basis = OpBasis::from_parts(left, right);
            let op = OpCoeffs::monomial(n, basis, a, b).expect("fits");
            let p = change_of_basis(RingBasis::M, left, n).expect("n ok");
            let p_inv = change_of_basis(left, RingBasis::M, n).expect("n ok");
            let want = p.mul(&op.to_matrix()).and_then(|m| m.mul(&p_inv)).expect("square");
            let got = rep_matrix(left, right, a, b, n).expect("fits");
            t.record(got == want, || format!("rep_matrix({basis}, {a}, {b}) at n = {n}"));
        }
    }
}

fn check_moebius(cfg: &CheckConfig, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for n in 0..=cfg.n_max.min(10) {
        for _ in 0..cfg.samples {
            let v = BitVec::from_fn(1 << n, |_| rng.gen());
            let twice = subset_sum_transform(&v).and_then(|w| subset_sum_transform(&w));
            let twice_sup = superset_sum_transform(&v).and_then(|w| superset_sum_transform(&w));
            t.record(twice.as_ref() == Ok(&v) && twice_sup.as_ref() == Ok(&v), || {
                format!("{v:?} at n = {n}")
            });
        }
    }
}

fn check_k_cover(cfg: &CheckConfig, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for n in dims(cfg, 4) {
        for _ in 0..cfg.samples {
            let cover: Vec<SubsetMask> = all_subsets(n).filter(|_| rng.gen()).collect();
            let k = rng.gen_range(1..=4);
            for a in all_subsets(n) {
                let got = k_cover_parity(&cover, a, k).expect("k >= 1");
                t.record(got == cover.contains(&a), || format!("cover {cover:?}, a = {a}, k = {k}"));
            }
        }
    }
}

fn check_apply(cfg: &CheckConfig, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for n in dims(cfg, 6) {
        for basis in OpBasis::ALL {
            for _ in 0..cfg.samples {
                let d = random_op(rng, n, basis, 6);
                let f = random_ring(rng, n, RingBasis::M);
                let got = apply_coeffs(&d, &f).expect("same n");
                let want = d.to_matrix().apply(&f.truth_table()).expect("square");
                t.record(got.truth_table() == want, || format!("{basis}: ({d}) applied to {f}"));
            }
        }
    }
}

fn check_set_products(cfg: &CheckConfig, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for n in dims(cfg, 3) {
        for p in Product::ALL {
            for _ in 0..cfg.samples {
                let a = random_family(rng, n, 6);
                let b = random_family(rng, n, 6);
                let got = product(p, &a, &b).expect("same n");
                let want = Family::from_op(&a.to_op(p).mul(&b.to_op(p)).expect("same n"), p);
                t.record(got == want, || format!("{p:?}: {a} * {b} gave {got}, algebra {want}"));
                let f = random_family_n(rng, n);
                let got = action(p, &a, &f).expect("same n");
                let applied = apply_coeffs(&a.to_op(p), &f.to_ring(p.ring_basis())).expect("same n");
                let want = FamilyN::from_ring(&applied, p.ring_basis());
                t.record(got == want, || format!("{p:?}: {a} acting on {f}"));
            }
        }
    }
}

fn check_entailment(cfg: &CheckConfig, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for n in dims(cfg, 4) {
        let ctx = context(n);
        let vars = &VARS[..n];
        for _ in 0..cfg.samples {
            let p = random_expr(rng, vars, n, 3, false);
            let q = random_expr(rng, vars, n, 3, false);
            let c = lang::entails_classical(&p, &q, &ctx).expect("valid");
            let qn = lang::entails_quantum(&p, &q, &ctx).expect("valid");
            t.record(c == qn, || format!("{p} |- {q}: classical {c}, quantum {qn}"));
            let fc = lang::eval_classical(&p, &ctx).expect("valid");
            let fq = lang::eval_quantum(&p, &ctx).expect("valid");
            t.record(multiplication_matrix(&fc) == fq.to_matrix(), || format!("embedding of {p}"));
            let r = random_expr(rng, vars, n, 2, true);
            let pq = random_expr(rng, vars, n, 2, true);
            t.record(lang::entails_quantum(&r, &r, &ctx).expect("valid"), || format!("{r} |- {r}"));
            let rp = lang::entails_quantum(&r, &pq, &ctx).expect("valid");
            let pr = lang::entails_quantum(&pq, &p, &ctx).expect("valid");
            if rp && pr {
                let rr = lang::entails_quantum(&r, &p, &ctx).expect("valid");
                t.record(rr, || format!("transitivity {r} |- {pq} |- {p}"));
            }
            if let Some(w) = lang::entailment_witness(&r, &pq, &ctx).expect("valid") {
                let q_mat = lang::eval_quantum(&pq, &ctx).expect("valid").to_matrix();
                let ok = q_mat.mul(&w.op.to_matrix()).ok() == Some(lang::eval_quantum(&r, &ctx).expect("valid").to_matrix());
                t.record(ok, || format!("witness for {r} |- {pq}"));
            }
        }
    }
}

/// `lhs ~ rhs` instances of the rewrite relations on random subterms.
pub fn rewrite_instances(rng: &mut impl Rng, n: usize) -> Vec<(&'static str, Expr, Expr)> {
    let vars = &VARS[..n.min(VARS.len())];
    let mut sub = || random_expr(rng, vars, n, 2, true);
    let (p, q, r) = (sub(), sub(), sub());
    let prod = |xs: Vec<Expr>| Expr::Prod(xs);
    let sum = |xs: Vec<Expr>| Expr::Sum(xs);
    let a = vars[0].to_string();
    let b = vars[vars.len() - 1].to_string();
    let (va, vb) = (Expr::Var(a.clone()), Expr::Var(b.clone()));
    let (ta, tb) = (Expr::TildeVar(a), Expr::TildeVar(b));
    let mut out = vec![
        ("p(qr) ~ (pq)r", prod(vec![p.clone(), prod(vec![q.clone(), r.clone()])]), prod(vec![prod(vec![p.clone(), q.clone()]), r.clone()])),
        ("(p+q)+r ~ p+(q+r)", sum(vec![sum(vec![p.clone(), q.clone()]), r.clone()]), sum(vec![p.clone(), sum(vec![q.clone(), r.clone()])])),
        ("p+q ~ q+p", sum(vec![p.clone(), q.clone()]), sum(vec![q.clone(), p.clone()])),
        ("p(q+r) ~ pq+pr", prod(vec![p.clone(), sum(vec![q.clone(), r.clone()])]), sum(vec![prod(vec![p.clone(), q.clone()]), prod(vec![p.clone(), r.clone()])])),
        ("0+p ~ p", sum(vec![Expr::Zero, p.clone()]), p.clone()),
        ("1p ~ p", prod(vec![Expr::One, p.clone()]), p.clone()),
        ("p+p ~ 0", sum(vec![p.clone(), p.clone()]), Expr::Zero),
        ("aa ~ a", prod(vec![va.clone(), va.clone()]), va.clone()),
        ("~a~a ~ 0", prod(vec![ta.clone(), ta.clone()]), Expr::Zero),
        ("ba ~ ab", prod(vec![vb.clone(), va.clone()]), prod(vec![va.clone(), vb.clone()])),
        ("~a~b ~ ~b~a", prod(vec![ta.clone(), tb.clone()]), prod(vec![tb.clone(), ta.clone()])),
        (
            "~a a ~ a~a + ~a + 1",
            prod(vec![ta.clone(), va.clone()]),
            sum(vec![prod(vec![va.clone(), ta.clone()]), ta.clone(), Expr::One]),
        ),
    ];
    if n >= 2 {
        out.push(("~b a ~ a~b", prod(vec![tb.clone(), va.clone()]), prod(vec![va, tb])));
    }
    out
}

fn check_rewrites(cfg: &CheckConfig, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for n in dims(cfg, 4) {
        let ctx = context(n);
        let vars = &VARS[..n];
        for _ in 0..cfg.samples {
            let instances = rewrite_instances(rng, n);
            // place both sides in the same random surrounding word
            let u = random_expr(rng, vars, n, 1, true);
            let v = random_expr(rng, vars, n, 1, true);
            let w = random_expr(rng, vars, n, 1, true);
            let wrap = |x: Expr| Expr::Sum(vec![Expr::Prod(vec![u.clone(), x, v.clone()]), w.clone()]);
            for (name, lhs, rhs) in instances {
                let ok = lang::equivalent(&wrap(lhs.clone()), &wrap(rhs.clone()), &ctx).expect("valid");
                t.record(ok, || format!("{name}: {lhs}  vs  {rhs}"));
            }
        }
    }
}

fn check_parser(cfg: &CheckConfig, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for n in dims(cfg, 4) {
        let ctx = context(n);
        let vars = &VARS[..n];
        for _ in 0..cfg.samples {
            let e = random_expr(rng, vars, n, 4, true);
            let text = e.to_string();
            let back = lang::parse(&text);
            t.record(back.as_ref() == Ok(&e), || format!("{text:?} parsed as {back:?}"));
            let norm = lang::normalize(&e, &ctx).expect("valid");
            let again = lang::parse(&norm.to_string())
                .and_then(|p| lang::normalize(&p, &ctx))
                .expect("normal form parses");
            t.record(again == norm, || format!("normalize not idempotent on {text}"));
            let same = lang::equivalent(&e, &norm, &ctx).expect("valid");
            t.record(same, || format!("normalize changed the value of {text}"));
        }
    }
}
