//! Exact integer utilities: primality, factorization, square-free
//! decomposition, the Kronecker symbol and prime enumeration.
//!
//! Everything here works on [`BigInt`]. Inputs that fit in a machine word
//! take a `u64` fast path internally; the answers are identical either way.
//!
//! Primality is deterministic Miller-Rabin. With the first thirteen primes as
//! witnesses the test is proven correct for every `n < 3_317_044_064_679_887_385_961_981`
//! (about 3.3e24). Larger inputs are refused with [`Error::OutOfRange`]
//! instead of receiving a probabilistic answer.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound (exclusive) of the deterministic primality range.
pub const PRIMALITY_LIMIT: &str = "3317044064679887385961981";

/// Default number of Pollard-rho iterations a single factorization may spend.
pub const DEFAULT_RHO_BUDGET: u64 = 100_000_000;

const WITNESSES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

// Trial division covers every prime below this bound before rho starts.
const TRIAL_BOUND: u64 = 1 << 12;

fn primality_limit() -> BigInt {
    PRIMALITY_LIMIT.parse().expect("valid literal")
}

/// One prime power `prime^exponent` of a factorization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePower {
    #[serde(with = "crate::serde_bigint")]
    pub prime: BigInt,
    pub exponent: u32,
}

/// Complete factorization of an integer `>= 2`, primes strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    #[serde(with = "crate::serde_bigint")]
    pub input: BigInt,
    pub factors: Vec<PrimePower>,
}

impl Factorization {
    /// Multiplies the prime powers back together.
    pub fn product(&self) -> BigInt {
        self.factors.iter().fold(BigInt::one(), |acc, pp| {
            acc * num_traits::pow(pp.prime.clone(), pp.exponent as usize)
        })
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.factors.iter().map(|pp| &pp.prime)
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<BigInt> {
        let mut divs = vec![BigInt::one()];
        for pp in &self.factors {
            let mut next = Vec::with_capacity(divs.len() * (pp.exponent as usize + 1));
            for d in &divs {
                let mut m = d.clone();
                next.push(m.clone());
                for _ in 0..pp.exponent {
                    m *= &pp.prime;
                    next.push(m.clone());
                }
            }
            divs = next;
        }
        divs.sort();
        divs
    }
}

/// `input = s * f^2` with `s` square-free, `f > 0` and `sign(s) = sign(input)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquarefreeDecomposition {
    #[serde(with = "crate::serde_bigint")]
    pub input: BigInt,
    #[serde(with = "crate::serde_bigint")]
    pub s: BigInt,
    #[serde(with = "crate::serde_bigint")]
    pub f: BigInt,
}

/// Primes up to some bound, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeList {
    pub bound: u64,
    pub primes: Vec<u64>,
}

impl PrimeList {
    /// The prime-counting function at `bound`.
    pub fn pi(&self) -> usize {
        self.primes.len()
    }

    /// Largest prime `<= bound`, if any.
    pub fn largest(&self) -> Option<u64> {
        self.primes.last().copied()
    }
}

/// Iteration allowance shared by every rho attempt of one factorization.
#[derive(Debug, Clone, Copy)]
pub struct RhoBudget {
    remaining: u64,
    initial: u64,
}

impl RhoBudget {
    pub fn new(iterations: u64) -> Self {
        RhoBudget {
            remaining: iterations,
            initial: iterations,
        }
    }

    fn spend(&mut self, n: u64) -> Result<()> {
        if self.remaining < n {
            self.remaining = 0;
            return Err(Error::Budget(format!(
                "Pollard rho exceeded {} iterations",
                self.initial
            )));
        }
        self.remaining -= n;
        Ok(())
    }
}

impl Default for RhoBudget {
    fn default() -> Self {
        RhoBudget::new(DEFAULT_RHO_BUDGET)
    }
}

// ---------------------------------------------------------------------------
// word-size arithmetic

#[inline]
pub(crate) fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn strong_probable_prime_u64(n: u64, base: u64) -> bool {
    let a = base % n;
    if a == 0 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let mut x = pow_mod_u64(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod_u64(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic primality for machine words.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    if n < 41 * 41 {
        return true;
    }
    // The first twelve prime bases are sufficient below 2^64.
    WITNESSES[..12]
        .iter()
        .all(|&b| strong_probable_prime_u64(n, b))
}

fn strong_probable_prime_big(n: &BigInt, base: u64) -> bool {
    let one = BigInt::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = BigInt::from(base).modpow(&d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// True iff `m` is prime.
///
/// Negative numbers, 0 and 1 are not prime. Inputs at or above
/// [`PRIMALITY_LIMIT`] are rejected with [`Error::OutOfRange`].
pub fn is_prime(m: &BigInt) -> Result<bool> {
    if let Some(small) = m.to_u64() {
        return Ok(is_prime_u64(small));
    }
    if m.is_negative() {
        return Ok(false);
    }
    if *m >= primality_limit() {
        return Err(Error::OutOfRange(format!(
            "primality of a {}-bit integer is not decided deterministically (limit {})",
            m.bits(),
            PRIMALITY_LIMIT
        )));
    }
    for &p in &WITNESSES {
        if (m % p).is_zero() {
            return Ok(false);
        }
    }
    Ok(WITNESSES.iter().all(|&b| strong_probable_prime_big(m, b)))
}

// ---------------------------------------------------------------------------
// factorization

fn small_primes(bound: u64) -> Vec<u64> {
    primes_up_to(bound).primes
}

/// Brent's variant of Pollard rho on a word-size composite.
fn rho_u64(n: u64, budget: &mut RhoBudget) -> Result<u64> {
    if n.is_multiple_of(2) {
        return Ok(2);
    }
    const BATCH: u64 = 128;
    for c in 1u64.. {
        let f = |x: u64| (mul_mod_u64(x, x, n) + c) % n;
        let mut y = 2u64;
        let mut x = y;
        let mut ys = y;
        let mut g = 1u64;
        let mut q = 1u64;
        let mut r = 1u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let steps = BATCH.min(r - k);
                budget.spend(steps)?;
                for _ in 0..steps {
                    y = f(y);
                    q = mul_mod_u64(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += steps;
            }
            r *= 2;
        }
        if g == n {
            // Batched product hit zero; replay one step at a time.
            loop {
                budget.spend(1)?;
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Ok(g);
        }
    }
    unreachable!()
}

fn rho_big(n: &BigInt, budget: &mut RhoBudget) -> Result<BigInt> {
    if n.is_even() {
        return Ok(BigInt::from(2));
    }
    const BATCH: u64 = 128;
    for c in 1u64.. {
        let c = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut y = BigInt::from(2);
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut g = BigInt::one();
        let mut q = BigInt::one();
        let mut r = 1u64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let steps = BATCH.min(r - k);
                budget.spend(steps)?;
                for _ in 0..steps {
                    y = f(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += steps;
            }
            r *= 2;
        }
        if g == *n {
            loop {
                budget.spend(1)?;
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if g != *n {
            return Ok(g);
        }
    }
    unreachable!()
}

fn split(n: &BigInt, budget: &mut RhoBudget) -> Result<BigInt> {
    match n.to_u64() {
        Some(w) => rho_u64(w, budget).map(BigInt::from),
        None => rho_big(n, budget),
    }
}

/// Factors `m >= 2` with the default rho budget.
pub fn factorize(m: &BigInt) -> Result<Factorization> {
    factorize_with_budget(m, &mut RhoBudget::default())
}

/// Factors `m >= 2`: trial division by the primes below 4096, then Brent-Pollard
/// rho with polynomials `x^2 + c`, `c = 1, 2, ...` on whatever remains.
pub fn factorize_with_budget(m: &BigInt, budget: &mut RhoBudget) -> Result<Factorization> {
    if *m < BigInt::from(2) {
        return Err(Error::domain(format!("factorize requires m >= 2, got {m}")));
    }
    let mut found: BTreeMap<BigInt, u32> = BTreeMap::new();
    let mut rest = m.clone();
    for p in small_primes(TRIAL_BOUND) {
        if BigInt::from(p * p) > rest {
            break;
        }
        let pb = BigInt::from(p);
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            *found.entry(pb.clone()).or_insert(0) += 1;
        }
    }
    let mut stack = Vec::new();
    if !rest.is_one() {
        stack.push((rest, 1u32));
    }
    while let Some((n, mult)) = stack.pop() {
        let primality = if n < BigInt::from(TRIAL_BOUND * TRIAL_BOUND) {
            // Trial division already removed every prime below the bound.
            Ok(true)
        } else {
            is_prime(&n)
        };
        match primality {
            Ok(true) => {
                *found.entry(n).or_insert(0) += mult;
                continue;
            }
            Ok(false) => {}
            Err(Error::OutOfRange(_)) => {}
            Err(e) => return Err(e),
        }
        let root = n.sqrt();
        if &root * &root == n {
            stack.push((root, mult * 2));
            continue;
        }
        let g = match split(&n, budget) {
            Ok(g) => g,
            Err(e) => {
                return Err(match primality {
                    Err(range) => range,
                    Ok(_) => e,
                })
            }
        };
        let h = &n / &g;
        stack.push((g, mult));
        stack.push((h, mult));
    }
    let factors = found
        .into_iter()
        .map(|(prime, exponent)| PrimePower { prime, exponent })
        .collect();
    Ok(Factorization {
        input: m.clone(),
        factors,
    })
}

/// Splits `m != 0` into its square-free part and square cofactor.
pub fn squarefree_decompose(m: &BigInt) -> Result<SquarefreeDecomposition> {
    squarefree_decompose_with_budget(m, &mut RhoBudget::default())
}

pub fn squarefree_decompose_with_budget(
    m: &BigInt,
    budget: &mut RhoBudget,
) -> Result<SquarefreeDecomposition> {
    if m.is_zero() {
        return Err(Error::domain("square-free decomposition of 0 is undefined"));
    }
    let sign = if m.is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    let magnitude = m.abs();
    if magnitude.is_one() {
        return Ok(SquarefreeDecomposition {
            input: m.clone(),
            s: sign,
            f: BigInt::one(),
        });
    }
    let fac = factorize_with_budget(&magnitude, budget)?;
    let mut s = sign;
    let mut f = BigInt::one();
    for pp in &fac.factors {
        if pp.exponent % 2 == 1 {
            s *= &pp.prime;
        }
        f *= num_traits::pow(pp.prime.clone(), (pp.exponent / 2) as usize);
    }
    Ok(SquarefreeDecomposition {
        input: m.clone(),
        s,
        f,
    })
}

/// True iff no prime square divides `m` (for `m != 0`).
pub fn is_squarefree(m: &BigInt) -> Result<bool> {
    Ok(squarefree_decompose(m)?.f.is_one())
}

// ---------------------------------------------------------------------------
// Kronecker symbol

const TAB2: [i8; 8] = [0, 1, 0, -1, 0, -1, 0, 1];

/// The Kronecker symbol `(a/n)`.
pub fn kronecker(a: &BigInt, n: &BigInt) -> i8 {
    if n.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    if a.is_even() && n.is_even() {
        return 0;
    }
    let mut a = a.clone();
    let mut b = n.clone();
    let v = b.trailing_zeros().unwrap_or(0);
    b >>= v;
    let mut k: i8 = if v.is_multiple_of(2) {
        1
    } else {
        TAB2[a.mod_floor(&BigInt::from(8)).to_usize().unwrap()]
    };
    if b.is_negative() {
        b = -b;
        if a.is_negative() {
            k = -k;
        }
    }
    let four = BigInt::from(4);
    let eight = BigInt::from(8);
    loop {
        if a.is_zero() {
            return if b.is_one() { k } else { 0 };
        }
        let v = a.trailing_zeros().unwrap_or(0);
        a >>= v;
        if v % 2 == 1 {
            k *= TAB2[b.mod_floor(&eight).to_usize().unwrap()];
        }
        if a.mod_floor(&four) == BigInt::from(3) && b.mod_floor(&four) == BigInt::from(3) {
            k = -k;
        }
        let r = a.abs();
        a = b.mod_floor(&r);
        b = r;
    }
}

/// Word-size Kronecker symbol, same conventions as [`kronecker`].
pub fn kronecker_i64(a: i64, n: i64) -> i8 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut a = a as i128;
    let mut b = n as i128;
    let v = b.trailing_zeros();
    b >>= v;
    let mut k: i8 = if v.is_multiple_of(2) {
        1
    } else {
        TAB2[a.rem_euclid(8) as usize]
    };
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    loop {
        if a == 0 {
            return if b == 1 { k } else { 0 };
        }
        let v = a.trailing_zeros();
        a >>= v;
        if v % 2 == 1 {
            k *= TAB2[b.rem_euclid(8) as usize];
        }
        if a.rem_euclid(4) == 3 && b.rem_euclid(4) == 3 {
            k = -k;
        }
        let r = a.abs();
        a = b.rem_euclid(r);
        b = r;
    }
}

// ---------------------------------------------------------------------------
// primes

/// Sieve of Eratosthenes up to and including `m`.
pub fn primes_up_to(m: u64) -> PrimeList {
    let n = m as usize;
    let mut primes = Vec::new();
    if n >= 2 {
        let mut composite = vec![false; n + 1];
        for i in 2..=n {
            if composite[i] {
                continue;
            }
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    PrimeList { bound: m, primes }
}

/// Smallest-prime-factor table for `0..=n`; entries 0 and 1 are 0.
pub(crate) fn spf_table(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] != 0 {
            continue;
        }
        spf[i] = i as u32;
        let mut j = i.saturating_mul(i);
        while j <= n {
            if spf[j] == 0 {
                spf[j] = i as u32;
            }
            j += i;
        }
    }
    spf
}

/// Exact integer square root test.
pub fn perfect_square_root(m: &BigInt) -> Option<BigInt> {
    if m.is_negative() {
        return None;
    }
    let r = m.sqrt();
    (&r * &r == *m).then_some(r)
}
