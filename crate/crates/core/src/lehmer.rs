//! Lehmer pairs, Lehmer numbers and primitive divisors.
//!
//! A pair is described by its parameters `(a, b) = ((alpha+beta)^2, (alpha-beta)^2)`,
//! so `alpha = (sqrt(a) + sqrt(b))/2`, `beta = (sqrt(a) - sqrt(b))/2` and
//! `q = alpha*beta = (a - b)/4`. The Lehmer numbers obey the same-parity recurrence
//!
//! ```text
//! L(n+2) = ((a+b)/2) L(n) - q^2 L(n-2)
//! ```
//!
//! seeded with `L(1) = 1, L(3) = a - q` on odd indices and `L(2) = 1,
//! L(4) = (a+b)/2` on even ones, which stays inside the integers.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, RhoBudget};
use crate::error::{Error, Result};

/// The exceptional-pair data file shipped with the crate.
pub const EXCEPTION_TABLE_JSON: &str = include_str!("../data/lehmer_exceptions.json");

/// Orders below this are checked for `L(n) = 0` when validating a pair; a root
/// of unity `alpha/beta` of degree at most 4 over Q has order at most 12.
const ROOT_OF_UNITY_ORDER_BOUND: u32 = 12;

/// Validated Lehmer parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LehmerParams {
    #[serde(with = "crate::serde_bigint")]
    a: BigInt,
    #[serde(with = "crate::serde_bigint")]
    b: BigInt,
    #[serde(with = "crate::serde_bigint")]
    q: BigInt,
}

impl LehmerParams {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Result<Self> {
        let (a, b) = (a.into(), b.into());
        if a.is_zero() || b.is_zero() {
            return Err(Error::domain(format!(
                "Lehmer parameters must be nonzero, got ({a}, {b})"
            )));
        }
        if a == b {
            return Err(Error::domain("Lehmer parameters need a != b"));
        }
        let diff = &a - &b;
        if !diff.is_multiple_of(&BigInt::from(4)) {
            return Err(Error::domain(format!(
                "a - b = {diff} is not divisible by 4"
            )));
        }
        let q = diff / 4;
        if !a.gcd(&q).is_one() {
            return Err(Error::domain(format!(
                "(alpha+beta)^2 = {a} and alpha*beta = {q} are not coprime"
            )));
        }
        let seq = raw_sequence(&a, &b, &q, ROOT_OF_UNITY_ORDER_BOUND);
        if let Some(n) = seq.iter().position(Zero::is_zero) {
            return Err(Error::domain(format!(
                "alpha/beta is a root of unity for ({a}, {b}): L({}) = 0",
                n + 1
            )));
        }
        Ok(LehmerParams { a, b, q })
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    /// `alpha * beta`.
    pub fn q(&self) -> &BigInt {
        &self.q
    }

    /// The parameters of the pair `(i alpha, i beta)`.
    pub fn negated(&self) -> Self {
        LehmerParams {
            a: -&self.a,
            b: -&self.b,
            q: -&self.q,
        }
    }
}

/// `L(1), ..., L(n)` without validating the pair.
fn raw_sequence(a: &BigInt, b: &BigInt, q: &BigInt, n: u32) -> Vec<BigInt> {
    let n = n as usize;
    let s: BigInt = (a + b) / 2;
    let q2 = q * q;
    let mut out: Vec<BigInt> = Vec::with_capacity(n);
    for i in 1..=n {
        let v = match i {
            1 | 2 => BigInt::one(),
            3 => a - q,
            4 => s.clone(),
            _ => &s * &out[i - 3] - &q2 * &out[i - 5],
        };
        out.push(v);
    }
    out
}

/// `L(1), ..., L(n)`.
pub fn lehmer_numbers(p: &LehmerParams, n: u32) -> Vec<BigInt> {
    raw_sequence(&p.a, &p.b, &p.q, n)
}

/// The Lehmer number `L(n)`, `n >= 1`.
pub fn lehmer_number(p: &LehmerParams, n: u32) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::domain("Lehmer numbers are indexed from 1"));
    }
    Ok(lehmer_numbers(p, n).pop().expect("n >= 1"))
}

/// The largest divisor of `|L(n)|` coprime to `a * b * L(1) * ... * L(n-1)`.
///
/// Its prime factors are exactly the primitive divisors of `L(n)`, so a value
/// above 1 proves that a primitive divisor exists without factoring anything.
pub fn primitive_part(p: &LehmerParams, n: u32) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::domain("Lehmer numbers are indexed from 1"));
    }
    let seq = lehmer_numbers(p, n);
    let mut part = seq[n as usize - 1].abs();
    let earlier = seq[..n as usize - 1].iter();
    for g in [&p.a, &p.b].into_iter().chain(earlier) {
        if part.is_one() {
            break;
        }
        loop {
            let common = part.gcd(g);
            if common.is_one() {
                break;
            }
            part /= common;
        }
    }
    Ok(part)
}

/// The primitive prime divisors of `L(n)`, ascending.
pub fn primitive_divisors(p: &LehmerParams, n: u32) -> Result<Vec<BigInt>> {
    primitive_divisors_with_budget(p, n, &mut RhoBudget::default())
}

pub fn primitive_divisors_with_budget(
    p: &LehmerParams,
    n: u32,
    budget: &mut RhoBudget,
) -> Result<Vec<BigInt>> {
    let part = primitive_part(p, n)?;
    if part.is_one() {
        return Ok(Vec::new());
    }
    let fac = arith::factorize_with_budget(&part, budget)?;
    Ok(fac.primes().cloned().collect())
}

pub fn has_primitive_divisor(p: &LehmerParams, n: u32) -> Result<bool> {
    Ok(!primitive_part(p, n)?.is_one())
}

/// Equivalence of pairs, seen on parameters: the multipliers `+-1` fix
/// `(a, b)` and `+-i` send it to `(-a, -b)`.
pub fn equivalent_params(p1: &LehmerParams, p2: &LehmerParams) -> bool {
    (p1.a == p2.a && p1.b == p2.b) || (p1.a == -&p2.a && p1.b == -&p2.b)
}

// ---------------------------------------------------------------------------
// Fibonacci and Lucas numbers

pub fn fibonacci(k: u32) -> BigInt {
    fib_lucas(k).0
}

pub fn lucas(k: u32) -> BigInt {
    fib_lucas(k).1
}

fn fib_lucas(k: u32) -> (BigInt, BigInt) {
    let (mut f, mut f_next) = (BigInt::zero(), BigInt::one());
    let (mut l, mut l_next) = (BigInt::from(2), BigInt::one());
    for _ in 0..k {
        let f2 = &f + &f_next;
        f = std::mem::replace(&mut f_next, f2);
        let l2 = &l + &l_next;
        l = std::mem::replace(&mut l_next, l2);
    }
    (f, l)
}

/// `F(j)` extended to negative `j` by `F(-j) = (-1)^(j+1) F(j)`.
pub fn fibonacci_signed(j: i64) -> BigInt {
    let v = fibonacci(j.unsigned_abs() as u32);
    if j < 0 && j % 2 == 0 {
        -v
    } else {
        v
    }
}

/// `L(j)` extended to negative `j` by `L(-j) = (-1)^j L(j)`.
pub fn lucas_signed(j: i64) -> BigInt {
    let v = lucas(j.unsigned_abs() as u32);
    if j < 0 && j % 2 != 0 {
        -v
    } else {
        v
    }
}

// ---------------------------------------------------------------------------
// exceptional pairs

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SporadicEntry {
    pub t: u32,
    pub a: i64,
    pub b: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDescriptor {
    pub id: String,
    pub t: u32,
    pub a: String,
    pub b: String,
    pub constraints: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionTable {
    pub schema: String,
    pub version: u32,
    pub description: String,
    pub sporadic: Vec<SporadicEntry>,
    pub families: Vec<FamilyDescriptor>,
}

/// The parsed exceptions data file.
pub fn exception_table() -> &'static ExceptionTable {
    static TABLE: OnceLock<ExceptionTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        serde_json::from_str(EXCEPTION_TABLE_JSON).expect("embedded exception table is valid")
    })
}

/// Search limits for the infinite parametrized families at `t = 3, 5`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilySearchBounds {
    pub max_abs_u: u64,
    pub max_k: u32,
}

impl Default for FamilySearchBounds {
    fn default() -> Self {
        FamilySearchBounds {
            max_abs_u: 10_000,
            max_k: 60,
        }
    }
}

/// Which table entry a pair matched. `negated` is set when the match was
/// found for `(-a, -b)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExceptionMatch {
    Sporadic {
        t: u32,
        a: i64,
        b: i64,
        negated: bool,
    },
    Family {
        id: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        k: Option<u32>,
        #[serde(skip_serializing_if = "Option::is_none")]
        u: Option<i64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        e: Option<i8>,
        negated: bool,
    },
}

pub fn exceptional_table_lookup(t: u32, p: &LehmerParams) -> Result<bool> {
    Ok(exceptional_match(t, p, FamilySearchBounds::default())?.is_some())
}

/// Finds the table entry (up to equivalence) that lists `p` as having no
/// primitive divisor at index `t`.
pub fn exceptional_match(
    t: u32,
    p: &LehmerParams,
    bounds: FamilySearchBounds,
) -> Result<Option<ExceptionMatch>> {
    if t.is_multiple_of(2) || t < 3 {
        return Err(Error::domain(format!(
            "exception tables are indexed by odd t >= 3, got {t}"
        )));
    }
    for (a, b, negated) in [(p.a.clone(), p.b.clone(), false), (-&p.a, -&p.b, true)] {
        let found = match t {
            3 => match_t3(&a, &b, negated, bounds),
            5 => match_t5(&a, &b, negated, bounds),
            _ => exception_table()
                .sporadic
                .iter()
                .find(|e| e.t == t && BigInt::from(e.a) == a && BigInt::from(e.b) == b)
                .map(|e| ExceptionMatch::Sporadic {
                    t,
                    a: e.a,
                    b: e.b,
                    negated,
                }),
        };
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

fn small(v: &BigInt, bound: u64) -> Option<i64> {
    use num_traits::ToPrimitive;
    v.to_i64().filter(|x| x.unsigned_abs() <= bound)
}

fn match_t3(
    a: &BigInt,
    b: &BigInt,
    negated: bool,
    bounds: FamilySearchBounds,
) -> Option<ExceptionMatch> {
    // (1 + u, 1 - 3u), u != 0, 1
    if let Some(u) = small(&(a - 1), bounds.max_abs_u) {
        if u != 0 && u != 1 && *b == BigInt::from(1 - 3 * u) {
            return Some(ExceptionMatch::Family {
                id: "t3-linear".into(),
                k: None,
                u: Some(u),
                e: None,
                negated,
            });
        }
    }
    // (3^k + u, 3^k - 3u), u != 0 mod 3, (k, u) != (1, 1)
    let mut pk = BigInt::one();
    for k in 0..=bounds.max_k {
        if let Some(u) = small(&(a - &pk), bounds.max_abs_u) {
            if u != 0 && u % 3 != 0 && (k, u) != (1, 1) && *b == &pk - 3 * u {
                return Some(ExceptionMatch::Family {
                    id: "t3-power".into(),
                    k: Some(k),
                    u: Some(u),
                    e: None,
                    negated,
                });
            }
        }
        pk *= 3;
    }
    None
}

fn match_t5(
    a: &BigInt,
    b: &BigInt,
    negated: bool,
    bounds: FamilySearchBounds,
) -> Option<ExceptionMatch> {
    for k in 0..=bounds.max_k {
        for e in [1i8, -1] {
            let j = k as i64 - 2 * e as i64;
            if k >= 3 {
                let fj = fibonacci_signed(j);
                if *a == fj && *b == &fj - 4 * fibonacci(k) {
                    return Some(ExceptionMatch::Family {
                        id: "t5-fibonacci".into(),
                        k: Some(k),
                        u: None,
                        e: Some(e),
                        negated,
                    });
                }
            }
            if k != 1 {
                let lj = lucas_signed(j);
                if *a == lj && *b == &lj - 4 * lucas(k) {
                    return Some(ExceptionMatch::Family {
                        id: "t5-lucas".into(),
                        k: Some(k),
                        u: None,
                        e: Some(e),
                        negated,
                    });
                }
            }
        }
    }
    None
}
