//! Tuples of shifted radicands `d, d+1, d+4, d+4p^2, ...` with
//! `d = 4(1 - 4k^n)^n`, and certification that `n` divides every member's
//! class number.
//!
//! Writing `l = U = V = 4k^n - 1`, the members are
//!
//! ```text
//! d        = 4 (1 - 4k^n)^n          same field as Q(sqrt(1 - 4k^n))
//! d + 1    = 1 - 4 U^n
//! d + 4    = 4 (1 - V^n)
//! d + 4p^2 = 4 (p^2 - l^n)
//! ```
//!
//! Construction only computes square-free parts and checks hypotheses;
//! [`verify_tuple`] does the class-number work.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{self, RhoBudget, DEFAULT_RHO_BUDGET};
use crate::classno;
use crate::error::{Error, Result};
use crate::lrn::{self, HypothesisCheck};

/// Schema tag written into every serialized tuple.
pub const TUPLE_SCHEMA: &str = "quadclass.tuple/1";

/// Members whose square-free part exceeds this in absolute value are left
/// unverified unless the caller raises the limit.
pub const DEFAULT_MAX_SQUAREFREE: u64 = 1_000_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TupleKind {
    Quadruple,
    Quintuple,
    PrimeTuple,
    Custom,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    Strict,
    Lenient,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MemberStatus {
    Pending,
    Verified,
    NotDivisible,
    UnverifiedBudget,
    Error,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TupleVerdict {
    Pending,
    Verified,
    Failed,
    Incomplete,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Member {
    #[serde(with = "crate::serde_bigint")]
    pub offset: BigInt,
    #[serde(with = "crate::serde_bigint")]
    pub radicand: BigInt,
    #[serde(with = "crate::serde_bigint::option")]
    pub squarefree_part: Option<BigInt>,
    #[serde(with = "crate::serde_bigint::option")]
    pub cofactor: Option<BigInt>,
    pub class_number: Option<u64>,
    pub divisible: Option<bool>,
    pub status: MemberStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Member {
    fn new(offset: BigInt, radicand: BigInt) -> Self {
        Member {
            offset,
            radicand,
            squarefree_part: None,
            cofactor: None,
            class_number: None,
            divisible: None,
            status: MemberStatus::Pending,
            note: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyTuple {
    pub schema: String,
    pub kind: TupleKind,
    pub n: u32,
    pub k: Option<u64>,
    /// Upper bound for the primes, prime tuples only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    pub p_list: Vec<u64>,
    #[serde(with = "crate::serde_bigint")]
    pub d: BigInt,
    #[serde(with = "crate::serde_bigint::option")]
    pub ell: Option<BigInt>,
    pub members: Vec<Member>,
    pub hypotheses: Vec<HypothesisCheck>,
    #[serde(default)]
    pub warnings: Vec<String>,
    pub verdict: TupleVerdict,
}

/// One exact identity of the construction, `lhs == rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    #[serde(with = "crate::serde_bigint")]
    pub lhs: BigInt,
    #[serde(with = "crate::serde_bigint")]
    pub rhs: BigInt,
    pub holds: bool,
}

impl IdentityCheck {
    fn new(name: String, lhs: BigInt, rhs: BigInt) -> Self {
        let holds = lhs == rhs;
        IdentityCheck {
            name,
            lhs,
            rhs,
            holds,
        }
    }
}

/// `d = 4(1 - 4k^n)^n`.
pub fn base_radicand(n: u32, k: u64) -> BigInt {
    let inner = BigInt::one() - BigInt::from(4) * num_traits::pow(BigInt::from(k), n as usize);
    num_traits::pow(inner, n as usize) * 4
}

/// `4k^n - 1`, which plays the roles of U, V and l.
pub fn shifted_base(n: u32, k: u64) -> BigInt {
    BigInt::from(4) * num_traits::pow(BigInt::from(k), n as usize) - 1
}

/// The identity chain linking `d + m` to the auxiliary families.
pub fn identity_chain(n: u32, k: u64, p_list: &[u64]) -> Vec<IdentityCheck> {
    let d = base_radicand(n, k);
    let u = shifted_base(n, k);
    let u_n = num_traits::pow(u, n as usize);
    let one = BigInt::one();
    let mut out = vec![
        IdentityCheck::new("d + 1 = 1 - 4U^n".into(), &d + 1, &one - &u_n * 4),
        IdentityCheck::new("d + 4 = 4(1 - V^n)".into(), &d + 4, (&one - &u_n) * 4),
    ];
    for &p in p_list {
        let p2 = BigInt::from(p) * p;
        out.push(IdentityCheck::new(
            format!("d + 4*{p}^2 = 4({p}^2 - l^n)"),
            &d + &p2 * 4,
            (&p2 - &u_n) * 4,
        ));
    }
    out
}

/// Construction and verification limits.
#[derive(Clone, Debug)]
pub struct FamilyOptions {
    pub mode: Mode,
    pub rho_budget: u64,
    pub max_squarefree: BigInt,
}

impl Default for FamilyOptions {
    fn default() -> Self {
        FamilyOptions {
            mode: Mode::Strict,
            rho_budget: DEFAULT_RHO_BUDGET,
            max_squarefree: BigInt::from(DEFAULT_MAX_SQUAREFREE),
        }
    }
}

fn check_n_k(n: u32, k: u64) -> Result<()> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::domain(format!(
            "n must be odd and at least 3, got {n}"
        )));
    }
    if k < 2 {
        return Err(Error::domain(format!("k must be at least 2, got {k}")));
    }
    Ok(())
}

fn base_hypotheses(n: u32, k: u64) -> Vec<HypothesisCheck> {
    let v = shifted_base(n, k);
    vec![
        HypothesisCheck {
            check: "U_ge_2".into(),
            holds: true,
            detail: format!("U = {v}"),
        },
        HypothesisCheck {
            check: "n_V_not_5_3".into(),
            holds: !(n == 5 && v == BigInt::from(3)),
            detail: format!("(n, V) = ({n}, {v})"),
        },
    ]
}

/// Runs the `p`-specific hypotheses; returns the named checks on success.
fn prime_hypotheses(
    n: u32,
    k: u64,
    p: u64,
    budget: &mut RhoBudget,
) -> Result<Vec<HypothesisCheck>> {
    let ell = shifted_base(n, k);
    let setup = lrn::theorem31_setup(&ell, n, &BigInt::from(p), budget)?;
    Ok(setup
        .hypotheses
        .into_iter()
        .map(|mut h| {
            h.check = format!("{}[p={p}]", h.check);
            h
        })
        .collect())
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    kind: TupleKind,
    n: u32,
    k: u64,
    m: Option<u64>,
    p_list: Vec<u64>,
    hypotheses: Vec<HypothesisCheck>,
    warnings: Vec<String>,
    budget: &mut RhoBudget,
) -> Result<FamilyTuple> {
    let d = base_radicand(n, k);
    let mut offsets = vec![BigInt::from(0), BigInt::from(1), BigInt::from(4)];
    offsets.extend(p_list.iter().map(|&p| BigInt::from(4) * p * p));
    let mut members = Vec::with_capacity(offsets.len());
    for offset in offsets {
        let radicand = &d + &offset;
        let mut member = Member::new(offset, radicand);
        let split = arith::squarefree_decompose_with_budget(&member.radicand, budget)?;
        member.squarefree_part = Some(split.s);
        member.cofactor = Some(split.f);
        members.push(member);
    }
    Ok(FamilyTuple {
        schema: TUPLE_SCHEMA.to_string(),
        kind,
        n,
        k: Some(k),
        m,
        p_list,
        d,
        ell: Some(shifted_base(n, k)),
        members,
        hypotheses,
        warnings,
        verdict: TupleVerdict::Pending,
    })
}

/// The quadruple `d, d+1, d+4, d+4p^2`.
pub fn quadruple(n: u32, p: u64, k: u64) -> Result<FamilyTuple> {
    quadruple_with(n, p, k, &FamilyOptions::default())
}

pub fn quadruple_with(n: u32, p: u64, k: u64, opts: &FamilyOptions) -> Result<FamilyTuple> {
    check_n_k(n, k)?;
    let mut budget = RhoBudget::new(opts.rho_budget);
    let mut hyps = base_hypotheses(n, k);
    hyps.extend(prime_hypotheses(n, k, p, &mut budget)?);
    assemble(
        TupleKind::Quadruple,
        n,
        k,
        None,
        vec![p],
        hyps,
        Vec::new(),
        &mut budget,
    )
}

/// The quintuple `d, d+1, d+4, d+36, d+100`.
pub fn quintuple(n: u32, k: u64) -> Result<FamilyTuple> {
    quintuple_with(n, k, &FamilyOptions::default())
}

pub fn quintuple_with(n: u32, k: u64, opts: &FamilyOptions) -> Result<FamilyTuple> {
    check_n_k(n, k)?;
    let ell = shifted_base(n, k);
    for p in [3u32, 5] {
        if (&ell % p).to_u32() == Some(0) {
            return Err(Error::hypothesis(
                "gcd_ell_p",
                format!("gcd(ℓ, p) ≠ 1: p = {p} divides ℓ = {ell}"),
            ));
        }
    }
    let mut budget = RhoBudget::new(opts.rho_budget);
    let mut hyps = base_hypotheses(n, k);
    for p in [3, 5] {
        hyps.extend(prime_hypotheses(n, k, p, &mut budget)?);
    }
    assemble(
        TupleKind::Quintuple,
        n,
        k,
        None,
        vec![3, 5],
        hyps,
        Vec::new(),
        &mut budget,
    )
}

/// The tuple `d, d+1, d+4` and `d+4p^2` for every odd prime `p <= m`.
///
/// In lenient mode a prime whose hypotheses fail is dropped with a warning
/// instead of rejecting the whole tuple.
pub fn pi_tuple(n: u32, m: u64, k: u64, opts: &FamilyOptions) -> Result<FamilyTuple> {
    check_n_k(n, k)?;
    if m < 2 {
        return Err(Error::domain(format!("m must be at least 2, got {m}")));
    }
    let mut budget = RhoBudget::new(opts.rho_budget);
    let mut hyps = base_hypotheses(n, k);
    let mut warnings = Vec::new();
    let mut p_list = Vec::new();
    for p in arith::primes_up_to(m)
        .primes
        .into_iter()
        .filter(|&p| p != 2)
    {
        match prime_hypotheses(n, k, p, &mut budget) {
            Ok(h) => {
                hyps.extend(h);
                p_list.push(p);
            }
            Err(e @ Error::Hypothesis { .. }) if opts.mode == Mode::Lenient => {
                warnings.push(format!("dropped p = {p}: {e}"));
            }
            Err(e) => return Err(e),
        }
    }
    assemble(
        TupleKind::PrimeTuple,
        n,
        k,
        Some(m),
        p_list,
        hyps,
        warnings,
        &mut budget,
    )
}

impl FamilyTuple {
    /// A tuple of arbitrary negative radicands, for spot checks.
    pub fn custom(n: u32, radicands: &[BigInt]) -> Result<Self> {
        let Some(d) = radicands.first().cloned() else {
            return Err(Error::domain("a custom tuple needs at least one radicand"));
        };
        let members = radicands
            .iter()
            .map(|r| Member::new(r - &d, r.clone()))
            .collect();
        Ok(FamilyTuple {
            schema: TUPLE_SCHEMA.to_string(),
            kind: TupleKind::Custom,
            n,
            k: None,
            m: None,
            p_list: Vec::new(),
            d,
            ell: None,
            members,
            hypotheses: Vec::new(),
            warnings: Vec::new(),
            verdict: TupleVerdict::Pending,
        })
    }

    /// Every exact identity the tuple is supposed to satisfy.
    pub fn identity_checks(&self) -> Vec<IdentityCheck> {
        let mut out: Vec<IdentityCheck> = self
            .members
            .iter()
            .map(|mem| {
                IdentityCheck::new(
                    format!("radicand = d + {}", mem.offset),
                    mem.radicand.clone(),
                    &self.d + &mem.offset,
                )
            })
            .collect();
        for mem in &self.members {
            if let (Some(s), Some(f)) = (&mem.squarefree_part, &mem.cofactor) {
                out.push(IdentityCheck::new(
                    format!("radicand {} = s f^2", mem.radicand),
                    mem.radicand.clone(),
                    s * f * f,
                ));
            }
        }
        if let Some(k) = self.k {
            out.push(IdentityCheck::new(
                "d = 4(1 - 4k^n)^n".into(),
                self.d.clone(),
                base_radicand(self.n, k),
            ));
            if let Some(ell) = &self.ell {
                out.push(IdentityCheck::new(
                    "l = 4k^n - 1".into(),
                    ell.clone(),
                    shifted_base(self.n, k),
                ));
            }
            out.extend(identity_chain(self.n, k, &self.p_list));
            let mut offsets = vec![BigInt::from(0), BigInt::from(1), BigInt::from(4)];
            offsets.extend(self.p_list.iter().map(|&p| BigInt::from(4) * p * p));
            let have: Vec<BigInt> = self.members.iter().map(|m| m.offset.clone()).collect();
            let holds = have == offsets;
            out.push(IdentityCheck {
                name: "offsets = {0, 1, 4} + {4p^2}".into(),
                lhs: BigInt::from(have.len()),
                rhs: BigInt::from(offsets.len()),
                holds,
            });
        }
        out
    }

    pub fn member_count(&self) -> usize {
        self.members.len()
    }
}

fn verify_member(member: &Member, n: u32, opts: &FamilyOptions) -> Member {
    let mut out = member.clone();
    let mut budget = RhoBudget::new(opts.rho_budget);
    let split = match (&member.squarefree_part, &member.cofactor) {
        (Some(s), Some(f)) => Ok((s.clone(), f.clone())),
        _ => arith::squarefree_decompose_with_budget(&member.radicand, &mut budget)
            .map(|sf| (sf.s, sf.f)),
    };
    let (s, f) = match split {
        Ok(v) => v,
        Err(e) => return failed(out, e),
    };
    out.squarefree_part = Some(s.clone());
    out.cofactor = Some(f);
    if !s.is_negative() {
        out.status = MemberStatus::Error;
        out.note = Some(format!("radicand {} is not negative", member.radicand));
        return out;
    }
    if s.abs() > opts.max_squarefree {
        out.status = MemberStatus::UnverifiedBudget;
        out.note = Some(format!(
            "|square-free part| exceeds {}",
            opts.max_squarefree
        ));
        return out;
    }
    match classno::field_class_number(&s) {
        Ok(res) => {
            let divisible = res.h % n as u64 == 0;
            out.class_number = Some(res.h);
            out.divisible = Some(divisible);
            out.status = if divisible {
                MemberStatus::Verified
            } else {
                MemberStatus::NotDivisible
            };
        }
        Err(e) => return failed(out, e),
    }
    out
}

fn failed(mut member: Member, e: Error) -> Member {
    member.status = match e {
        Error::Budget(_) | Error::OutOfRange(_) => MemberStatus::UnverifiedBudget,
        _ => MemberStatus::Error,
    };
    member.note = Some(e.to_string());
    member
}

/// Computes every member's class number and the overall verdict.
///
/// The exact identities are re-checked first; a broken identity is an error
/// and nothing expensive runs. Member failures (budget, range) are recorded
/// per member and the remaining members are still verified.
pub fn verify_tuple(t: &FamilyTuple) -> Result<FamilyTuple> {
    verify_tuple_with(t, &FamilyOptions::default())
}

pub fn verify_tuple_with(t: &FamilyTuple, opts: &FamilyOptions) -> Result<FamilyTuple> {
    if t.n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    if let Some(bad) = t.identity_checks().into_iter().find(|c| !c.holds) {
        return Err(Error::domain(format!(
            "identity `{}` fails: {} != {}",
            bad.name, bad.lhs, bad.rhs
        )));
    }
    let members: Vec<Member> = t
        .members
        .par_iter()
        .map(|m| verify_member(m, t.n, opts))
        .collect();
    let verdict = if members
        .iter()
        .any(|m| m.status == MemberStatus::NotDivisible)
    {
        TupleVerdict::Failed
    } else if members.iter().all(|m| m.status == MemberStatus::Verified) {
        TupleVerdict::Verified
    } else {
        TupleVerdict::Incomplete
    };
    Ok(FamilyTuple {
        members,
        verdict,
        ..t.clone()
    })
}

/// Membership of `k` in `{k : n | h(1 - 4k^n)}` with the numbers behind it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub n: u32,
    pub k: u64,
    #[serde(with = "crate::serde_bigint")]
    pub radicand: BigInt,
    #[serde(with = "crate::serde_bigint")]
    pub squarefree_part: BigInt,
    pub class_number: u64,
    pub member: bool,
    /// Non-membership contradicts the known divisibility for `k >= 2`.
    pub anomaly: bool,
}

pub fn n_membership(n: u32, k: u64) -> Result<bool> {
    Ok(n_membership_detail(n, k)?.member)
}

pub fn n_membership_detail(n: u32, k: u64) -> Result<Membership> {
    check_n_k(n, k)?;
    let radicand = BigInt::one() - BigInt::from(4) * num_traits::pow(BigInt::from(k), n as usize);
    let s = arith::squarefree_decompose(&radicand)?.s;
    let h = classno::field_class_number(&s)?.h;
    let member = h % n as u64 == 0;
    Ok(Membership {
        n,
        k,
        radicand,
        squarefree_part: s,
        class_number: h,
        member,
        anomaly: !member,
    })
}
