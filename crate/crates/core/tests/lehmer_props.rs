use std::ops::{Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use quadclass::lehmer::{
    exception_table, exceptional_table_lookup, fibonacci, fibonacci_signed, has_primitive_divisor,
    lehmer_number, lehmer_numbers, lucas, lucas_signed, LehmerParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `c0 + cx X + cy Y + cxy XY` in `Q[X, Y] / (X^2 - a, Y^2 - b)`.
#[derive(Clone, Debug, PartialEq)]
struct Elem {
    c: [BigRational; 4],
    a: BigRational,
    b: BigRational,
}

impl Elem {
    fn new(c: [i64; 4], a: i64, b: i64) -> Self {
        Elem {
            c: c.map(|v| BigRational::from_integer(v.into())),
            a: BigRational::from_integer(a.into()),
            b: BigRational::from_integer(b.into()),
        }
    }

    fn scale(&self, k: &BigRational) -> Self {
        Elem {
            c: self.c.clone().map(|v| v * k),
            ..self.clone()
        }
    }

    fn as_scalar(&self) -> Option<BigRational> {
        self.c[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.c[0].clone())
    }
}

impl Mul for &Elem {
    type Output = Elem;
    fn mul(self, o: &Elem) -> Elem {
        let [p0, px, py, pxy] = &self.c;
        let [q0, qx, qy, qxy] = &o.c;
        let (a, b) = (&self.a, &self.b);
        let ab = a * b;
        Elem {
            c: [
                p0 * q0 + a * px * qx + b * py * qy + ab * pxy * qxy,
                p0 * qx + px * q0 + b * (py * qxy + pxy * qy),
                p0 * qy + py * q0 + a * (px * qxy + pxy * qx),
                p0 * qxy + pxy * q0 + px * qy + py * qx,
            ],
            a: a.clone(),
            b: b.clone(),
        }
    }
}

impl Sub for &Elem {
    type Output = Elem;
    fn sub(self, o: &Elem) -> Elem {
        Elem {
            c: [0, 1, 2, 3].map(|i| &self.c[i] - &o.c[i]),
            ..self.clone()
        }
    }
}

/// `L_1..=L_n` from `alpha = (X + Y) / 2`, `beta = (X - Y) / 2` by exact
/// symbolic expansion.
fn symbolic_lehmer(a: i64, b: i64, n: u32) -> Vec<BigRational> {
    let half = BigRational::new(1.into(), 2.into());
    let alpha = Elem::new([0, 1, 1, 0], a, b).scale(&half);
    let beta = Elem::new([0, 1, -1, 0], a, b).scale(&half);
    // 1 / (alpha - beta) = Y / b,  1 / (alpha^2 - beta^2) = XY / (ab)
    let inv_odd = Elem::new([0, 0, 1, 0], a, b).scale(&BigRational::new(1.into(), b.into()));
    let inv_even = Elem::new([0, 0, 0, 1], a, b).scale(&BigRational::new(1.into(), (a * b).into()));
    let (mut pa, mut pb) = (alpha.clone(), beta.clone());
    let mut out = Vec::new();
    for k in 1..=n {
        let diff = &pa - &pb;
        let q = if k % 2 == 1 {
            &diff * &inv_odd
        } else {
            &diff * &inv_even
        };
        out.push(q.as_scalar().expect("L_n is a rational number"));
        pa = &pa * &alpha;
        pb = &pb * &beta;
    }
    out
}

fn valid_pairs(bound: i64) -> Vec<(i64, i64, LehmerParams)> {
    let mut out = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            if let Ok(p) = LehmerParams::new(a, b) {
                out.push((a, b, p));
            }
        }
    }
    out
}

#[test]
fn lehmer_numbers_match_symbolic_expansion() {
    let pairs = valid_pairs(50);
    assert!(pairs.len() > 1000);
    for (a, b, p) in pairs {
        let symbolic = symbolic_lehmer(a, b, 30);
        let computed = lehmer_numbers(&p, 30);
        for (i, (s, c)) in symbolic.iter().zip(&computed).enumerate() {
            assert!(
                s.is_integer(),
                "L_{} ({a}, {b}) = {s} is not an integer",
                i + 1
            );
            assert_eq!(&s.to_integer(), c, "L_{} ({a}, {b})", i + 1);
        }
    }
}

#[test]
fn lehmer_numbers_form_a_divisibility_sequence() {
    for (a, b, p) in valid_pairs(30) {
        let seq = lehmer_numbers(&p, 24);
        for n in 1..=24usize {
            for m in (1..=n).filter(|m| n % m == 0) {
                let (lm, ln) = (&seq[m - 1], &seq[n - 1]);
                assert!(!lm.is_zero(), "L_{m} ({a}, {b}) = 0");
                assert!(
                    ln.is_multiple_of(lm),
                    "L_{m} does not divide L_{n} for ({a}, {b})"
                );
            }
        }
    }
}

#[test]
fn sporadic_table_entries_lack_primitive_divisors() {
    let table = exception_table();
    assert_eq!(table.sporadic.len(), 12);
    for e in &table.sporadic {
        let p = LehmerParams::new(e.a, e.b).unwrap();
        assert!(
            !has_primitive_divisor(&p, e.t).unwrap(),
            "({}, {}) at t = {}",
            e.a,
            e.b,
            e.t
        );
        assert!(!has_primitive_divisor(&p.negated(), e.t).unwrap());
        assert!(exceptional_table_lookup(e.t, &p).unwrap());
    }
}

#[test]
fn family_members_lack_primitive_divisors() {
    let mut checked = 0;
    let mut check = |a: BigInt, b: BigInt, t: u32| {
        if let Ok(p) = LehmerParams::new(a.clone(), b.clone()) {
            assert!(
                !has_primitive_divisor(&p, t).unwrap(),
                "({a}, {b}) at t = {t}"
            );
            assert!(
                exceptional_table_lookup(t, &p).unwrap(),
                "lookup ({a}, {b}) at t = {t}"
            );
            checked += 1;
        }
    };
    for u in -200i64..=200 {
        if u != 1 {
            check(BigInt::from(1 + u), BigInt::from(1 - 3 * u), 3);
        }
    }
    let mut pk = BigInt::one();
    for k in 0..12u32 {
        for u in -200i64..=200 {
            if u % 3 != 0 && (k, u) != (1, 1) {
                check(&pk + u, &pk - 3 * u, 3);
            }
        }
        pk *= 3;
    }
    for k in 0..40u32 {
        for e in [-1i64, 1] {
            let j = k as i64 - 2 * e;
            if k >= 3 {
                let f = fibonacci_signed(j);
                check(f.clone(), &f - 4 * fibonacci(k), 5);
            }
            if k != 1 {
                let l = lucas_signed(j);
                check(l.clone(), &l - 4 * lucas(k), 5);
            }
        }
    }
    assert!(checked > 500, "only {checked} valid family members");
}

#[test]
fn t13_exceptions_are_exactly_the_listed_pair() {
    let mut found = Vec::new();
    for (a, b, p) in valid_pairs(40) {
        if !has_primitive_divisor(&p, 13).unwrap() {
            found.push((a, b));
        }
    }
    assert_eq!(found, vec![(-1, 7), (1, -7)]);
}

#[test]
fn small_t_exceptions_outside_the_tables() {
    let mut missing = Vec::new();
    for t in [3u32, 5, 7, 9, 11, 13, 15, 17] {
        for (a, b, p) in valid_pairs(30) {
            if !has_primitive_divisor(&p, t).unwrap() && !exceptional_table_lookup(t, &p).unwrap() {
                missing.push((t, a, b));
            }
        }
    }
    // the Lucas member at k = 1, e = 1 is (L(-1), L(-1) - 4 L(1)) = (-1, -5); it is
    // defective at t = 5 (L_5 = 5 divides ab) but the family excludes k = 1
    assert_eq!(missing, vec![(5, -1, -5), (5, 1, 5)]);
}

#[test]
fn large_index_always_has_primitive_divisor() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut tested = 0;
    while tested < 200 {
        let a: i64 = rng.gen_range(-100..=100);
        let b: i64 = rng.gen_range(-100..=100);
        let Ok(p) = LehmerParams::new(a, b) else {
            continue;
        };
        assert!(has_primitive_divisor(&p, 31).unwrap(), "({a}, {b})");
        tested += 1;
    }
}

#[test]
fn fibonacci_and_lucas_extend_to_negative_indices() {
    for j in 0..60i64 {
        let sign = if j % 2 == 0 { 1 } else { -1 };
        assert_eq!(fibonacci_signed(-j), fibonacci_signed(j) * -sign);
        assert_eq!(lucas_signed(-j), lucas_signed(j) * sign);
        assert_eq!(
            fibonacci_signed(j + 2),
            fibonacci_signed(j + 1) + fibonacci_signed(j)
        );
    }
    assert_eq!(fibonacci(0), BigInt::zero());
    assert_eq!(lucas(0), BigInt::from(2));
}

fn pair_strategy() -> impl Strategy<Value = LehmerParams> {
    (-100i64..=100, -100i64..=100)
        .prop_filter_map("valid Lehmer pair", |(a, b)| LehmerParams::new(a, b).ok())
}

proptest! {
    #[test]
    fn primitive_divisor_is_invariant_under_negation(p in pair_strategy(), t in 1u32..=40) {
        prop_assert_eq!(
            has_primitive_divisor(&p, t).unwrap(),
            has_primitive_divisor(&p.negated(), t).unwrap()
        );
        prop_assert_eq!(
            lehmer_number(&p, t).unwrap().abs(),
            lehmer_number(&p.negated(), t).unwrap().abs()
        );
    }
}
