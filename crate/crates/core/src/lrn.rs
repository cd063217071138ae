//! The equation `x^2 + d y^2 = l^z` with `gcd(x, y) = 1`.
//!
//! [`solve_brute`] scans every candidate; [`solve_structured`] rebuilds the
//! solution set from the base representations `a^2 + d b^2 = l^s` with
//! `s | h*(-4d)` and their powers `x + y sqrt(-d) = e (a + m b sqrt(-d))^t`.
//! The two are meant to be compared against each other.
//!
//! [`theorem31_verify`] certifies that `n` divides the class number of
//! `Q(sqrt(p^2 - l^n))` for `l = 3 (mod 4)`, recording the finite checks that
//! rule out the exponents `t = 3` and `t = 5` along the way.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, RhoBudget};
use crate::classno;
use crate::error::{Error, Result};
use crate::lehmer;

/// Default `k` range scanned when ruling out `t = 5`.
pub const T5_SCAN_BOUND: u32 = 90;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LrnInstance {
    #[serde(with = "crate::serde_bigint")]
    d: BigInt,
    #[serde(with = "crate::serde_bigint")]
    ell: BigInt,
    z_max: u32,
}

impl LrnInstance {
    /// `d >= 2`, `l > 1`, `gcd(l, 2d) = 1`, `z_max >= 1`.
    pub fn new(d: impl Into<BigInt>, ell: impl Into<BigInt>, z_max: u32) -> Result<Self> {
        let (d, ell) = (d.into(), ell.into());
        if d < BigInt::from(2) {
            return Err(Error::domain(format!("d must be at least 2, got {d}")));
        }
        if ell <= BigInt::one() {
            return Err(Error::domain(format!("l must exceed 1, got {ell}")));
        }
        if !ell.gcd(&(&d * 2)).is_one() {
            return Err(Error::domain(format!(
                "gcd(l, 2d) != 1 for l = {ell}, d = {d}"
            )));
        }
        if z_max == 0 {
            return Err(Error::domain("z_max must be positive"));
        }
        Ok(LrnInstance { d, ell, z_max })
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn ell(&self) -> &BigInt {
        &self.ell
    }

    pub fn z_max(&self) -> u32 {
        self.z_max
    }
}

/// `x + y sqrt(-d) = eps (a + mu b sqrt(-d))^t`, `a^2 + d b^2 = l^s`, `z = s t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub eps: i8,
    pub mu: i8,
    #[serde(with = "crate::serde_bigint")]
    pub a: BigInt,
    #[serde(with = "crate::serde_bigint")]
    pub b: BigInt,
    pub s: u32,
    pub t: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LrnSolution {
    #[serde(with = "crate::serde_bigint")]
    pub x: BigInt,
    #[serde(with = "crate::serde_bigint")]
    pub y: BigInt,
    pub z: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<Decomposition>,
}

impl LrnSolution {
    pub fn key(&self) -> (u32, BigInt, BigInt) {
        (self.z, self.x.clone(), self.y.clone())
    }
}

/// `re + im sqrt(-d)` in `Z[sqrt(-d)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImagQuadInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl ImagQuadInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        ImagQuadInt {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn mul(&self, other: &Self, d: &BigInt) -> Self {
        ImagQuadInt {
            re: &self.re * &other.re - d * &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn pow(&self, t: u32, d: &BigInt) -> Self {
        let mut acc = ImagQuadInt::new(1, 0);
        for _ in 0..t {
            acc = acc.mul(self, d);
        }
        acc
    }

    pub fn norm(&self, d: &BigInt) -> BigInt {
        &self.re * &self.re + d * &self.im * &self.im
    }
}

/// True iff the recorded decomposition reproduces `(x, y, z)` exactly and
/// satisfies its own side conditions.
pub fn check_decomposition(sol: &LrnSolution, d: &BigInt, ell: &BigInt) -> bool {
    let Some(dec) = &sol.decomposition else {
        return false;
    };
    if dec.s * dec.t != sol.z || !dec.a.gcd(&dec.b).is_one() {
        return false;
    }
    let base = ImagQuadInt::new(dec.a.clone(), &dec.b * dec.mu);
    if base.norm(d) != num_traits::pow(ell.clone(), dec.s as usize) {
        return false;
    }
    let p = base.pow(dec.t, d);
    p.re * dec.eps == sol.x && p.im * dec.eps == sol.y
}

/// Positive coprime `(a, b)` with `a^2 + d b^2 = n`, ascending in `a`.
fn coprime_representations(d: &BigInt, n: &BigInt) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::new();
    let mut b = BigInt::one();
    loop {
        let rest = n - d * &b * &b;
        if !rest.is_positive() {
            break;
        }
        if let Some(a) = arith::perfect_square_root(&rest) {
            if a.is_positive() && a.gcd(&b).is_one() {
                out.push((a, b.clone()));
            }
        }
        b += 1;
    }
    out.sort();
    out
}

/// Every solution with `z <= z_max`, by exhaustive scan over `y`.
pub fn solve_brute(inst: &LrnInstance) -> Vec<LrnSolution> {
    let mut out = Vec::new();
    let mut power = BigInt::one();
    for z in 1..=inst.z_max {
        power *= &inst.ell;
        for (x, y) in coprime_representations(&inst.d, &power) {
            out.push(LrnSolution {
                x,
                y,
                z,
                decomposition: None,
            });
        }
    }
    out.sort_by_key(LrnSolution::key);
    out
}

/// Every solution with `z <= z_max`, generated from base representations with
/// `s | h*(-4d)`, each carrying its decomposition.
pub fn solve_structured(inst: &LrnInstance) -> Result<Vec<LrnSolution>> {
    let d = &inst.d;
    let h = classno::class_number_forms(&(d * -4))?.h;
    let mut seen: BTreeSet<(u32, BigInt, BigInt)> = BTreeSet::new();
    let mut out = Vec::new();
    for s in (1..=h).filter(|s| h % s == 0) {
        let s = match u32::try_from(s) {
            Ok(s) if s <= inst.z_max => s,
            _ => break,
        };
        let ell_s = num_traits::pow(inst.ell.clone(), s as usize);
        for (a, b) in coprime_representations(d, &ell_s) {
            let base = ImagQuadInt::new(a.clone(), b.clone());
            for t in 1..=inst.z_max / s {
                let p = base.pow(t, d);
                if p.re.is_zero() || p.im.is_zero() {
                    continue;
                }
                let (x, y) = (p.re.abs(), p.im.abs());
                if !x.gcd(&y).is_one() {
                    continue;
                }
                let eps: i8 = if p.re.is_positive() { 1 } else { -1 };
                let mu: i8 = if p.im.is_positive() { eps } else { -eps };
                let z = s * t;
                if seen.insert((z, x.clone(), y.clone())) {
                    out.push(LrnSolution {
                        x,
                        y,
                        z,
                        decomposition: Some(Decomposition {
                            eps,
                            mu,
                            a: a.clone(),
                            b: b.clone(),
                            s,
                            t,
                        }),
                    });
                }
            }
        }
    }
    out.sort_by_key(LrnSolution::key);
    Ok(out)
}

// ---------------------------------------------------------------------------
// Q(sqrt(p^2 - l^n))

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub check: String,
    pub holds: bool,
    pub detail: String,
}

impl HypothesisCheck {
    fn new(check: &str, holds: bool, detail: String) -> Self {
        HypothesisCheck {
            check: check.to_string(),
            holds,
            detail,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem31Branch {
    /// `p != +-1 (mod d)` holds.
    General,
    /// `p` is 3 or 5 and `(l, n) != (3, 3)`; the congruence is not required.
    SmallPrime,
}

/// Hypotheses and the square-free split of `l^n - p^2 = d r^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem31Setup {
    #[serde(with = "crate::serde_bigint")]
    pub ell: BigInt,
    pub n: u32,
    #[serde(with = "crate::serde_bigint")]
    pub p: BigInt,
    #[serde(with = "crate::serde_bigint")]
    pub d: BigInt,
    #[serde(with = "crate::serde_bigint")]
    pub r: BigInt,
    pub hypotheses: Vec<HypothesisCheck>,
    pub branch: Theorem31Branch,
}

/// Outcome of the `t = 3` check: `p^2 - 3 d b^2 = +-1` has no solution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct T3Elimination {
    pub d_mod_4: u32,
    pub p_squared_mod_3: u32,
    pub plus_one_solvable: bool,
    pub minus_one_solvable: bool,
    pub eliminated: bool,
}

/// Outcome of the `t = 5` check: no member of the Fibonacci or Lucas
/// families equals `(-4 d b^2, 4 p^2)` or its negative for `k <= k_bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct T5Elimination {
    pub k_bound: u32,
    pub matches: Vec<String>,
    pub eliminated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationTrace {
    /// Odd divisors `t > 1` of `n` and why each is impossible.
    pub excluded_t: Vec<(u32, String)>,
    pub t3: T3Elimination,
    pub t5: T5Elimination,
    /// Decompositions of `p + r sqrt(-d)` actually present, found by search.
    pub observed: Vec<Decomposition>,
    /// `a | p` for every observed decomposition.
    pub a_divides_p: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem31Report {
    #[serde(flatten)]
    pub setup: Theorem31Setup,
    pub trace: EliminationTrace,
    #[serde(with = "crate::serde_bigint")]
    pub discriminant: BigInt,
    pub class_number: u64,
    pub verdict: bool,
}

/// Checks the hypotheses for `Q(sqrt(p^2 - l^n))` and splits `l^n - p^2`.
/// The first failing check becomes an [`Error::Hypothesis`].
pub fn theorem31_setup(
    ell: &BigInt,
    n: u32,
    p: &BigInt,
    budget: &mut RhoBudget,
) -> Result<Theorem31Setup> {
    let mut hyps = Vec::new();
    let require = |hyps: &mut Vec<HypothesisCheck>, name: &str, ok: bool, detail: String| {
        hyps.push(HypothesisCheck::new(name, ok, detail.clone()));
        if ok {
            Ok(())
        } else {
            Err(Error::hypothesis(name, detail))
        }
    };
    require(
        &mut hyps,
        "ell_odd_gt_1",
        ell.is_odd() && *ell > BigInt::one(),
        format!("l = {ell}"),
    )?;
    require(
        &mut hyps,
        "n_odd_gt_1",
        n % 2 == 1 && n > 1,
        format!("n = {n}"),
    )?;
    require(
        &mut hyps,
        "p_odd_prime",
        p.is_odd() && arith::is_prime(p)?,
        format!("p = {p}"),
    )?;
    let ell_mod_4 = ell.mod_floor(&BigInt::from(4));
    require(
        &mut hyps,
        "ell_3_mod_4",
        ell_mod_4 == BigInt::from(3),
        format!("l mod 4 = {ell_mod_4}"),
    )?;
    let g = ell.gcd(p);
    require(
        &mut hyps,
        "gcd_ell_p",
        g.is_one(),
        if g.is_one() {
            "gcd(ℓ, p) = 1".to_string()
        } else {
            format!("gcd(ℓ, p) ≠ 1: gcd({ell}, {p}) = {g}")
        },
    )?;
    let ell_n = num_traits::pow(ell.clone(), n as usize);
    let p2 = p * p;
    require(
        &mut hyps,
        "p_sq_lt_ell_pow_n",
        p2 < ell_n,
        format!("p^2 = {p2}, l^n = {ell_n}"),
    )?;
    let split = arith::squarefree_decompose_with_budget(&(&ell_n - &p2), budget)?;
    let (d, r) = (split.s, split.f);
    let p_mod_d = p.mod_floor(&d);
    let congruence_ok = !(p_mod_d.is_one() || p_mod_d == &d - 1u32);
    let small_prime = *p == BigInt::from(3) || *p == BigInt::from(5);
    let branch = if small_prime {
        hyps.push(HypothesisCheck::new(
            "p_not_pm1_mod_d",
            congruence_ok,
            format!("p mod d = {p_mod_d} (d = {d}); waived for p in {{3, 5}}"),
        ));
        let excluded = *ell == BigInt::from(3) && n == 3;
        require(
            &mut hyps,
            "ell_n_not_3_3",
            !excluded,
            format!("(l, n) = ({ell}, {n})"),
        )?;
        Theorem31Branch::SmallPrime
    } else {
        require(
            &mut hyps,
            "p_not_pm1_mod_d",
            congruence_ok,
            format!("p mod d = {p_mod_d} (d = {d})"),
        )?;
        Theorem31Branch::General
    };
    Ok(Theorem31Setup {
        ell: ell.clone(),
        n,
        p: p.clone(),
        d,
        r,
        hypotheses: hyps,
        branch,
    })
}

fn eliminate_t3(p: &BigInt, d: &BigInt) -> T3Elimination {
    let p2 = p * p;
    let three_d = d * 3;
    let solvable = |target: BigInt| -> bool {
        if !target.is_positive() || !target.is_multiple_of(&three_d) {
            return false;
        }
        arith::perfect_square_root(&(target / &three_d)).is_some_and(|b| b.is_positive())
    };
    // p^2 - 3db^2 = 1  <=>  3db^2 = p^2 - 1
    let plus_one_solvable = solvable(&p2 - 1u32);
    let minus_one_solvable = solvable(&p2 + 1u32);
    T3Elimination {
        d_mod_4: d.mod_floor(&BigInt::from(4)).to_u32().unwrap(),
        p_squared_mod_3: p2.mod_floor(&BigInt::from(3)).to_u32().unwrap(),
        plus_one_solvable,
        minus_one_solvable,
        eliminated: !plus_one_solvable && !minus_one_solvable,
    }
}

/// Does `(first, second)` have the shape `(-4 d b^2, 4 p^2)` for some `b >= 1`?
fn has_pair_shape(first: &BigInt, second: &BigInt, d: &BigInt, p2: &BigInt) -> bool {
    let four_d = d * 4;
    let four_p2 = p2 * 4;
    let direct = *second == four_p2
        && first.is_negative()
        && first.is_multiple_of(&four_d)
        && arith::perfect_square_root(&(-first / &four_d)).is_some();
    let negated = *second == -&four_p2
        && first.is_positive()
        && first.is_multiple_of(&four_d)
        && arith::perfect_square_root(&(first / &four_d)).is_some();
    direct || negated
}

fn eliminate_t5(p: &BigInt, d: &BigInt, k_bound: u32) -> T5Elimination {
    let p2 = p * p;
    let mut matches = Vec::new();
    for k in 0..=k_bound {
        for e in [1i64, -1] {
            let j = k as i64 - 2 * e;
            if k >= 3 {
                let fj = lehmer::fibonacci_signed(j);
                let second = &fj - lehmer::fibonacci(k) * 4;
                if has_pair_shape(&fj, &second, d, &p2) {
                    matches.push(format!("t5-fibonacci k={k} e={e}"));
                }
            }
            if k != 1 {
                let lj = lehmer::lucas_signed(j);
                let second = &lj - lehmer::lucas(k) * 4;
                if has_pair_shape(&lj, &second, d, &p2) {
                    matches.push(format!("t5-lucas k={k} e={e}"));
                }
            }
        }
    }
    T5Elimination {
        k_bound,
        eliminated: matches.is_empty(),
        matches,
    }
}

fn excluded_exponents(n: u32, d: &BigInt, p: &BigInt) -> Vec<(u32, String)> {
    let p2 = p * p;
    let mut out = Vec::new();
    for t in (3..=n).step_by(2).filter(|t| n.is_multiple_of(*t)) {
        let reason = if t > 30 {
            "index above 30: a primitive divisor always exists".to_string()
        } else if t == 3 || t == 5 {
            format!("see the t{t} record")
        } else {
            let hit = lehmer::exception_table().sporadic.iter().any(|e| {
                e.t == t && has_pair_shape(&BigInt::from(e.a), &BigInt::from(e.b), d, &p2)
            });
            if hit {
                format!("exception table has a pair of shape (-4db^2, 4p^2) at t = {t}")
            } else {
                format!("no exceptional pair of shape (-4db^2, 4p^2) at t = {t}")
            }
        };
        out.push((t, reason));
    }
    out
}

/// Decompositions of `p + r sqrt(-d)` as `e (a + m b sqrt(-d))^t` with `s t = n`.
fn observed_decompositions(setup: &Theorem31Setup) -> Vec<Decomposition> {
    let Theorem31Setup {
        ell, n, p, d, r, ..
    } = setup;
    let mut out = Vec::new();
    for s in (1..=*n).filter(|s| n % s == 0) {
        let t = n / s;
        let ell_s = num_traits::pow(ell.clone(), s as usize);
        for (a, b) in coprime_representations(d, &ell_s) {
            let w = ImagQuadInt::new(a.clone(), b.clone()).pow(t, d);
            if w.re.abs() == *p && w.im.abs() == *r {
                let eps: i8 = if w.re.is_positive() { 1 } else { -1 };
                let mu: i8 = if w.im.is_positive() { eps } else { -eps };
                out.push(Decomposition {
                    eps,
                    mu,
                    a,
                    b,
                    s,
                    t,
                });
            }
        }
    }
    out
}

/// Certifies `n | h(Q(sqrt(p^2 - l^n)))`, or rejects the inputs.
pub fn theorem31_verify(ell: &BigInt, n: u32, p: &BigInt) -> Result<Theorem31Report> {
    theorem31_verify_with(ell, n, p, &mut RhoBudget::default(), T5_SCAN_BOUND)
}

pub fn theorem31_verify_with(
    ell: &BigInt,
    n: u32,
    p: &BigInt,
    budget: &mut RhoBudget,
    t5_bound: u32,
) -> Result<Theorem31Report> {
    let setup = theorem31_setup(ell, n, p, budget)?;
    let observed = observed_decompositions(&setup);
    let a_divides_p = observed.iter().all(|dec| (p % &dec.a).is_zero());
    let trace = EliminationTrace {
        excluded_t: excluded_exponents(n, &setup.d, p),
        t3: eliminate_t3(p, &setup.d),
        t5: eliminate_t5(p, &setup.d, t5_bound),
        observed,
        a_divides_p,
    };
    // d = 2 (mod 4), so -4d is the field discriminant of Q(sqrt(-d))
    let discriminant = &setup.d * -4;
    let h = classno::class_number_forms(&discriminant)?.h;
    Ok(Theorem31Report {
        verdict: h % n as u64 == 0,
        setup,
        trace,
        discriminant,
        class_number: h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn triples(sols: &[LrnSolution]) -> Vec<(i64, i64, u32)> {
        sols.iter()
            .map(|s| (s.x.to_i64().unwrap(), s.y.to_i64().unwrap(), s.z))
            .collect()
    }

    #[test]
    fn brute_examples() {
        let inst = LrnInstance::new(2, 3, 5).unwrap();
        assert_eq!(
            triples(&solve_brute(&inst)),
            vec![(1, 1, 1), (1, 2, 2), (5, 1, 3), (7, 4, 4), (1, 11, 5)]
        );
        let inst = LrnInstance::new(5, 3, 3).unwrap();
        assert_eq!(triples(&solve_brute(&inst)), vec![(2, 1, 2)]);
        let inst = LrnInstance::new(318, 7, 3).unwrap();
        assert!(triples(&solve_brute(&inst)).contains(&(5, 1, 3)));
    }

    #[test]
    fn structured_examples() {
        let inst = LrnInstance::new(2, 3, 5).unwrap();
        let sols = solve_structured(&inst).unwrap();
        assert_eq!(triples(&sols), triples(&solve_brute(&inst)));
        for s in &sols {
            let dec = s.decomposition.as_ref().unwrap();
            assert_eq!((dec.a.clone(), dec.b.clone(), dec.s), (big(1), big(1), 1));
            assert!(check_decomposition(s, inst.d(), inst.ell()));
        }
        let ts: Vec<u32> = sols
            .iter()
            .map(|s| s.decomposition.as_ref().unwrap().t)
            .collect();
        assert_eq!(ts, vec![1, 2, 3, 4, 5]);

        let inst = LrnInstance::new(318, 7, 3).unwrap();
        let sols = solve_structured(&inst).unwrap();
        let s = sols.iter().find(|s| s.x == big(5) && s.z == 3).unwrap();
        let dec = s.decomposition.as_ref().unwrap();
        assert_eq!(dec.s * dec.t, 3);
        assert_eq!(triples(&sols), triples(&solve_brute(&inst)));

        let inst = LrnInstance::new(7, 11, 2).unwrap();
        assert_eq!(
            triples(&solve_structured(&inst).unwrap()),
            triples(&solve_brute(&inst))
        );
    }

    #[test]
    fn instance_validation() {
        assert!(LrnInstance::new(1, 3, 3).is_err());
        assert!(LrnInstance::new(6, 3, 3).is_err());
        assert!(LrnInstance::new(5, 5, 3).is_err());
        assert!(LrnInstance::new(5, 1, 3).is_err());
        assert!(LrnInstance::new(5, 3, 0).is_err());
    }

    #[test]
    fn decomposition_check_detects_tampering() {
        let inst = LrnInstance::new(2, 3, 5).unwrap();
        let mut sol = solve_structured(&inst).unwrap().pop().unwrap();
        assert!(check_decomposition(&sol, inst.d(), inst.ell()));
        sol.decomposition.as_mut().unwrap().eps *= -1;
        assert!(!check_decomposition(&sol, inst.d(), inst.ell()));
    }

    #[test]
    fn theorem31_examples() {
        let rep = theorem31_verify(&big(7), 3, &big(5)).unwrap();
        assert_eq!(rep.setup.d, big(318));
        assert_eq!(rep.setup.branch, Theorem31Branch::SmallPrime);
        assert!(rep.verdict);
        assert_eq!(rep.class_number % 3, 0);

        let rep = theorem31_verify(&big(31), 3, &big(3)).unwrap();
        assert_eq!(rep.setup.d, big(29782));
        assert_eq!(rep.setup.r, big(1));
        assert!(rep.verdict);
        assert!(rep.trace.t3.eliminated && rep.trace.t5.eliminated);
        assert_eq!(rep.trace.observed.len(), 1);
        assert_eq!(rep.trace.observed[0].t, 1);
        assert!(rep.trace.a_divides_p);
    }

    #[test]
    fn theorem31_rejections() {
        let err = theorem31_verify(&big(3), 3, &big(3)).unwrap_err();
        assert!(matches!(err, Error::Hypothesis { ref check, .. } if check == "gcd_ell_p"));
        let err = theorem31_verify(&big(5), 3, &big(3)).unwrap_err();
        assert!(matches!(err, Error::Hypothesis { ref check, .. } if check == "ell_3_mod_4"));
        let err = theorem31_verify(&big(7), 3, &big(9)).unwrap_err();
        assert!(matches!(err, Error::Hypothesis { ref check, .. } if check == "p_odd_prime"));
        let err = theorem31_verify(&big(7), 1, &big(3)).unwrap_err();
        assert!(matches!(err, Error::Hypothesis { ref check, .. } if check == "n_odd_gt_1"));
        let err = theorem31_verify(&big(7), 3, &big(19)).unwrap_err();
        assert!(matches!(err, Error::Hypothesis { ref check, .. } if check == "p_sq_lt_ell_pow_n"));
    }

    #[test]
    fn general_branch_congruence() {
        // 7^3 - 13^2 = 174 = 2 * 3 * 29, and 13 is neither 1 nor -1 mod 174
        let rep = theorem31_verify(&big(7), 3, &big(13)).unwrap();
        assert_eq!(rep.setup.branch, Theorem31Branch::General);
        assert_eq!(rep.setup.d, big(174));
        // 11^3 - 7^2 = 1282 = 2 * 641 and 7 is fine; 3^5 - 11^2 = 122 = 2 * 61
        let rep = theorem31_verify(&big(3), 5, &big(11)).unwrap();
        assert_eq!(rep.setup.d, big(122));
        assert!(rep.verdict);
    }

    #[test]
    fn imag_quad_arithmetic() {
        let d = big(2);
        let w = ImagQuadInt::new(1, 1).pow(3, &d);
        assert_eq!(w, ImagQuadInt::new(-5, 1));
        assert_eq!(w.norm(&d), big(27));
    }
}
