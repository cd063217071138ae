//! Class numbers of negative discriminants.
//!
//! [`class_number_forms`] counts reduced primitive positive-definite forms
//! `(a, b, c)` with `b^2 - 4ac = D`. The outer loop runs over
//! `1 <= a <= sqrt(|D|/3)`; for each `a` the admissible middle coefficients
//! are the square roots of `D` modulo `4a`, found prime power by prime power
//! from a smallest-prime-factor sieve and glued with the CRT. The `a` range
//! is split into chunks that rayon may evaluate in parallel; chunk results
//! are merged in order, so the output never depends on the thread count.
//!
//! [`class_number_dirichlet`] is the independent check: the finite
//! character sum `h = w/(2|D|) * |sum chi_D(a) a|` for fundamental `D`.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{self, kronecker_i64, mul_mod_u64, pow_mod_u64};
use crate::error::{Error, Result};

/// Form counting runs on `i64` internally; `|D|` must stay below this.
pub const MAX_FORM_COUNT_ABS_DISCRIMINANT: u64 = 1 << 62;

/// The character-sum oracle is O(|D|) and refused above this size.
pub const MAX_DIRICHLET_ABS_DISCRIMINANT: u64 = 1_000_000;

const CHUNK: u64 = 2048;

type Triple = (i64, i64, i64);

/// The binary quadratic form `a x^2 + b xy + c y^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadForm {
    #[serde(with = "crate::serde_bigint")]
    pub a: BigInt,
    #[serde(with = "crate::serde_bigint")]
    pub b: BigInt,
    #[serde(with = "crate::serde_bigint")]
    pub c: BigInt,
}

impl QuadForm {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        QuadForm {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    /// `|b| <= a <= c`, and `b >= 0` when `|b| = a` or `a = c`.
    pub fn is_reduced(&self) -> bool {
        let abs_b = self.b.abs();
        if abs_b > self.a || self.a > self.c {
            return false;
        }
        if (abs_b == self.a || self.a == self.c) && self.b.is_negative() {
            return false;
        }
        true
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == BigInt::from(1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassNumberMethod {
    FormCount,
    Dirichlet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassNumberResult {
    #[serde(with = "crate::serde_bigint")]
    pub discriminant: BigInt,
    pub h: u64,
    pub method: ClassNumberMethod,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced_forms: Option<Vec<QuadForm>>,
}

/// Knobs for [`class_number_forms_with`].
#[derive(Clone, Copy, Debug, Default)]
pub struct ClassNumberOptions {
    /// Keep the list of reduced forms (memory grows with `h`).
    pub collect_forms: bool,
}

fn negative_definite_check(disc: &BigInt) -> Result<()> {
    if !disc.is_negative() {
        return Err(Error::domain(format!(
            "discriminant must be negative, got {disc}"
        )));
    }
    Ok(())
}

/// Returns the unique reduced form properly equivalent to `f`.
pub fn reduce_form(f: &QuadForm) -> Result<QuadForm> {
    let disc = f.discriminant();
    negative_definite_check(&disc)?;
    if !f.a.is_positive() {
        return Err(Error::domain(
            "reduce_form expects a positive definite form (a > 0)",
        ));
    }
    let four = BigInt::from(4);
    let (mut a, mut b, mut c) = (f.a.clone(), f.b.clone(), f.c.clone());
    loop {
        // bring b into (-a, a]
        let two_a = &a * 2;
        let mut r = b.mod_floor(&two_a);
        if r > a {
            r -= &two_a;
        }
        if r != b {
            b = r;
            c = (&b * &b - &disc) / (&four * &a);
        }
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        if a == c && b.is_negative() {
            b = -b;
        }
        break;
    }
    Ok(QuadForm { a, b, c })
}

fn validate_discriminant(disc: &BigInt) -> Result<u64> {
    negative_definite_check(disc)?;
    let r = disc.mod_floor(&BigInt::from(4));
    if !(r.is_zero() || r == BigInt::from(1)) {
        return Err(Error::domain(format!(
            "discriminant {disc} is not 0 or 1 mod 4"
        )));
    }
    let abs = disc.abs();
    match abs.to_u64() {
        Some(v) if v < MAX_FORM_COUNT_ABS_DISCRIMINANT => Ok(v),
        _ => Err(Error::OutOfRange(format!(
            "|D| = {abs} exceeds the form-count limit 2^62"
        ))),
    }
}

/// `h*(D)`, the number of classes of primitive positive-definite forms of
/// discriminant `D < 0`.
pub fn class_number_forms(disc: &BigInt) -> Result<ClassNumberResult> {
    class_number_forms_with(disc, ClassNumberOptions::default())
}

pub fn class_number_forms_with(
    disc: &BigInt,
    opts: ClassNumberOptions,
) -> Result<ClassNumberResult> {
    let abs_d = validate_discriminant(disc)?;
    let d = -(abs_d as i64);
    let a_max = (abs_d / 3).sqrt();
    let spf = arith::spf_table(a_max as usize);
    let chunks = a_max.div_ceil(CHUNK);
    let parts: Vec<(u64, Vec<Triple>)> = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let lo = i * CHUNK + 1;
            let hi = ((i + 1) * CHUNK).min(a_max);
            let mut count = 0u64;
            let mut forms = Vec::new();
            for a in lo..=hi {
                reduced_forms_with_leading(d, a, &spf, |b, c| {
                    count += 1;
                    if opts.collect_forms {
                        forms.push((a as i64, b, c));
                    }
                });
            }
            (count, forms)
        })
        .collect();
    let h = parts.iter().map(|(c, _)| c).sum();
    let reduced_forms = opts.collect_forms.then(|| {
        parts
            .into_iter()
            .flat_map(|(_, forms)| forms)
            .map(|(a, b, c)| QuadForm::new(a, b, c))
            .collect()
    });
    Ok(ClassNumberResult {
        discriminant: disc.clone(),
        h,
        method: ClassNumberMethod::FormCount,
        reduced_forms,
    })
}

/// Calls `emit(b, c)` for every reduced primitive form `(a, b, c)` of
/// discriminant `d`, in increasing `b`.
fn reduced_forms_with_leading(d: i64, a: u64, spf: &[u32], mut emit: impl FnMut(i64, i64)) {
    let modulus = 4 * a;
    let roots = sqrt_mod_4a(d, a, spf);
    let two_a = 2 * a as i64;
    let ai = a as i64;
    let mut bs: Vec<i64> = roots
        .into_iter()
        .map(|r| {
            let b = (r % (2 * a)) as i64;
            if b > ai {
                b - two_a
            } else {
                b
            }
        })
        .collect();
    bs.sort_unstable();
    bs.dedup();
    for b in bs {
        let num = (b as i128) * (b as i128) - d as i128;
        debug_assert_eq!(num % modulus as i128, 0);
        let c = (num / modulus as i128) as i64;
        if c < ai || (c == ai && b < 0) {
            continue;
        }
        if ai.gcd(&b).gcd(&c) != 1 {
            continue;
        }
        emit(b, c);
    }
}

/// All `x` in `[0, 4a)` with `x^2 = d (mod 4a)`.
fn sqrt_mod_4a(d: i64, a: u64, spf: &[u32]) -> Vec<u64> {
    let mut two_exp = 2u32;
    let mut rest = a;
    let mut pieces: Vec<(Vec<u64>, u64)> = Vec::new();
    while rest > 1 {
        let p = spf[rest as usize] as u64;
        let mut e = 0u32;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if p == 2 {
            two_exp += e;
        } else {
            let roots = sqrt_mod_prime_power(d, p, e);
            if roots.is_empty() {
                return roots;
            }
            pieces.push((roots, p.pow(e)));
        }
    }
    let roots = sqrt_mod_prime_power(d, 2, two_exp);
    if roots.is_empty() {
        return roots;
    }
    let mut acc = roots;
    let mut modulus = 1u64 << two_exp;
    for (roots, m) in pieces {
        let inv = mod_inverse(modulus % m, m);
        let mut next = Vec::with_capacity(acc.len() * roots.len());
        for &x in &acc {
            for &y in &roots {
                // x + modulus * ((y - x) * modulus^{-1} mod m)
                let diff = (y + m - x % m) % m;
                let t = mul_mod_u64(diff, inv, m);
                next.push(x + modulus * t);
            }
        }
        acc = next;
        modulus *= m;
    }
    acc
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(m as i128) as u64
}

/// All `x` in `[0, p^e)` with `x^2 = d (mod p^e)`, `e >= 1`.
fn sqrt_mod_prime_power(d: i64, p: u64, e: u32) -> Vec<u64> {
    let dp = d.rem_euclid(p as i64) as u64;
    let mut roots: Vec<u64> = if p == 2 {
        vec![dp]
    } else if dp == 0 {
        vec![0]
    } else {
        match tonelli_shanks(dp, p) {
            Some(r) => {
                if r == p - r {
                    vec![r]
                } else {
                    vec![r, p - r]
                }
            }
            None => return Vec::new(),
        }
    };
    let mut m = p;
    for _ in 1..e {
        let next_m = m * p;
        let target = d.rem_euclid(next_m as i64) as u64;
        let mut next = Vec::new();
        if p != 2 && dp != 0 {
            // unit case: Hensel lifting is unique
            for &x in &roots {
                let fx = (mul_mod_u64(x, x, next_m) + next_m - target) % next_m;
                let inv = mod_inverse((2 * x) % next_m, next_m);
                let y = (x + next_m - mul_mod_u64(fx, inv, next_m)) % next_m;
                next.push(y);
            }
        } else {
            for &x in &roots {
                for j in 0..p {
                    let y = x + j * m;
                    if mul_mod_u64(y, y, next_m) == target {
                        next.push(y);
                    }
                }
            }
        }
        roots = next;
        m = next_m;
        if roots.is_empty() {
            break;
        }
    }
    roots
}

/// Square root of a nonzero quadratic residue modulo an odd prime.
fn tonelli_shanks(n: u64, p: u64) -> Option<u64> {
    if pow_mod_u64(n, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod_u64(n, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2u64;
    while pow_mod_u64(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod_u64(z, q, p);
    let mut t = pow_mod_u64(n, q, p);
    let mut r = pow_mod_u64(n, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod_u64(tt, tt, p);
            i += 1;
        }
        let b = pow_mod_u64(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod_u64(b, b, p);
        t = mul_mod_u64(t, c, p);
        r = mul_mod_u64(r, b, p);
    }
    Some(r)
}

/// True iff `disc` is the discriminant of a quadratic field.
pub fn is_fundamental_discriminant(disc: &BigInt) -> Result<bool> {
    let four = BigInt::from(4);
    let r = disc.mod_floor(&four);
    if r == BigInt::from(1) {
        return Ok(*disc != BigInt::from(1) && arith::is_squarefree(disc)?);
    }
    if r.is_zero() {
        let m = disc / &four;
        let rm = m.mod_floor(&four);
        if rm == BigInt::from(2) || rm == BigInt::from(3) {
            return arith::is_squarefree(&m);
        }
    }
    Ok(false)
}

/// Class number through the Dirichlet class-number formula.
pub fn class_number_dirichlet(disc: &BigInt) -> Result<ClassNumberResult> {
    negative_definite_check(disc)?;
    let abs = disc.abs();
    match abs.to_u64() {
        Some(v) if v <= MAX_DIRICHLET_ABS_DISCRIMINANT => {}
        _ => {
            return Err(Error::OutOfRange(format!(
                "Dirichlet oracle is limited to |D| <= {MAX_DIRICHLET_ABS_DISCRIMINANT}"
            )))
        }
    }
    if !is_fundamental_discriminant(disc)? {
        return Err(Error::domain(format!(
            "{disc} is not a fundamental discriminant"
        )));
    }
    let d = disc.to_i64().unwrap();
    let n = (-d) as usize;
    let chi = character_table(d, n);
    let sum: i64 = chi
        .iter()
        .enumerate()
        .skip(1)
        .map(|(a, &x)| x as i64 * a as i64)
        .sum();
    let w: i64 = match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    };
    let num = w * sum.abs();
    let den = 2 * n as i64;
    if num % den != 0 {
        return Err(Error::domain(format!(
            "character sum {sum} is not compatible with D = {d}"
        )));
    }
    Ok(ClassNumberResult {
        discriminant: disc.clone(),
        h: (num / den) as u64,
        method: ClassNumberMethod::Dirichlet,
        reduced_forms: None,
    })
}

/// `chi_D(a)` for `0 <= a < n`, through complete multiplicativity: the
/// symbol is only evaluated directly at primes.
fn character_table(d: i64, n: usize) -> Vec<i8> {
    let mut chi = vec![0i8; n.max(2)];
    let mut is_composite = vec![false; n.max(2)];
    let mut primes: Vec<usize> = Vec::new();
    chi[1] = 1;
    for i in 2..n {
        if !is_composite[i] {
            primes.push(i);
            chi[i] = kronecker_i64(d, i as i64);
        }
        for &p in &primes {
            let j = p * i;
            if j >= n {
                break;
            }
            is_composite[j] = true;
            chi[j] = chi[p] * chi[i];
            if i % p == 0 {
                break;
            }
        }
    }
    chi.truncate(n);
    chi
}

/// `d` if `d = 1 (mod 4)`, else `4d`, for square-free `d != 0, 1`.
pub fn fundamental_discriminant(d: &BigInt) -> Result<BigInt> {
    if d.is_zero() || *d == BigInt::from(1) {
        return Err(Error::domain("fundamental discriminant needs d != 0, 1"));
    }
    if !arith::is_squarefree(d)? {
        return Err(Error::domain(format!(
            "{d} is not square-free; decompose it first"
        )));
    }
    if d.mod_floor(&BigInt::from(4)) == BigInt::from(1) {
        Ok(d.clone())
    } else {
        Ok(d * 4)
    }
}

/// Class number of `Q(sqrt(d))` for square-free `d < 0`.
pub fn field_class_number(d: &BigInt) -> Result<ClassNumberResult> {
    field_class_number_with(d, ClassNumberOptions::default())
}

pub fn field_class_number_with(d: &BigInt, opts: ClassNumberOptions) -> Result<ClassNumberResult> {
    if !d.is_negative() {
        return Err(Error::domain(format!(
            "field_class_number handles imaginary fields only, got d = {d}"
        )));
    }
    let disc = fundamental_discriminant(d)?;
    class_number_forms_with(&disc, opts)
}
