use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use quadclass::error::Error;
use quadclass::families::{
    base_radicand, identity_chain, n_membership, n_membership_detail, pi_tuple, quadruple,
    quintuple, shifted_base, verify_tuple, FamilyOptions, FamilyTuple, MemberStatus, Mode,
    TupleVerdict, TUPLE_SCHEMA,
};

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

#[test]
fn identity_chain_holds_for_small_parameters() {
    for n in [3u32, 5, 7, 9] {
        for k in 2u64..=6 {
            let u = big(4) * num_traits::pow(big(k as i64), n as usize) - 1;
            assert_eq!(shifted_base(n, k), u);
            let d = base_radicand(n, k);
            assert!(d.is_negative());
            assert_eq!(
                d,
                big(4)
                    * num_traits::pow(
                        BigInt::one() - big(4) * num_traits::pow(big(k as i64), n as usize),
                        n as usize
                    )
            );
            let u_n = num_traits::pow(u.clone(), n as usize);
            assert_eq!(&d + 1, BigInt::one() - &u_n * 4);
            assert_eq!(&d + 4, (BigInt::one() - &u_n) * 4);
            for p in [3i64, 5, 7, 11, 13] {
                assert_eq!(&d + big(4 * p * p), (big(p * p) - &u_n) * 4);
            }
            for c in identity_chain(n, k, &[3, 5, 7, 11, 13]) {
                assert!(c.holds, "n = {n}, k = {k}: {}", c.name);
            }
        }
    }
}

#[test]
fn constructed_members_split_as_s_f_squared() {
    for k in 2u64..=6 {
        let t = match quadruple(3, 3, k) {
            Ok(t) => t,
            Err(Error::Hypothesis { .. }) => continue,
            Err(e) => panic!("{e}"),
        };
        for c in t.identity_checks() {
            assert!(c.holds, "k = {k}: {}", c.name);
        }
        for (i, m) in t.members.iter().enumerate() {
            let s = m.squarefree_part.as_ref().unwrap();
            let f = m.cofactor.as_ref().unwrap();
            assert_eq!(&m.radicand, &(s * f * f));
            // d, d + 4 and d + 4p^2 are 4 times an integer, so the cofactor is even
            if i != 1 {
                assert!(f.is_even(), "k = {k}, offset {}", m.offset);
            }
        }
    }
}

#[test]
fn quadruples_with_p3_verify_for_small_k() {
    for k in [2u64, 3, 5, 6] {
        let t = quadruple(3, 3, k).unwrap();
        let v = verify_tuple(&t).unwrap();
        assert_eq!(v.verdict, TupleVerdict::Verified, "k = {k}: {v:?}");
        for m in &v.members {
            assert_eq!(m.status, MemberStatus::Verified);
            assert_eq!(m.class_number.unwrap() % 3, 0);
        }
    }
}

#[test]
fn membership_matches_offset_zero_member() {
    for (n, k) in [(3u32, 2u64), (3, 3), (3, 5), (3, 6), (5, 2), (5, 3), (7, 2)] {
        let m = n_membership_detail(n, k).unwrap();
        assert!(m.member && !m.anomaly, "n = {n}, k = {k}");
        let p = if n == 5 && k == 3 { 5 } else { 3 };
        let t = match quadruple(n, p, k) {
            Ok(t) => t,
            Err(Error::Hypothesis { .. }) => continue,
            Err(e) => panic!("{e}"),
        };
        let v = verify_tuple(&t).unwrap();
        let zero = &v.members[0];
        assert_eq!(zero.squarefree_part.as_ref(), Some(&m.squarefree_part));
        if zero.status != MemberStatus::UnverifiedBudget {
            assert_eq!(zero.divisible, Some(n_membership(n, k).unwrap()));
        }
    }
}

#[test]
fn quintuple_is_the_union_of_two_quadruples() {
    let q5 = quintuple(3, 2).unwrap();
    let offsets: Vec<BigInt> = q5.members.iter().map(|m| m.offset.clone()).collect();
    assert_eq!(offsets, [0, 1, 4, 36, 100].map(big).to_vec());
    let q3 = quadruple(3, 3, 2).unwrap();
    let q5p = quadruple(3, 5, 2).unwrap();
    for m in q3.members.iter().chain(&q5p.members) {
        assert!(q5.members.contains(m));
    }
    let v = verify_tuple(&quintuple(3, 3).unwrap()).unwrap();
    assert_eq!(v.verdict, TupleVerdict::Verified);
    assert_eq!(v.d, big(4) * num_traits::pow(big(-107), 3));
}

#[test]
fn prime_tuple_verifies_and_counts_members() {
    let t = pi_tuple(3, 30, 2, &FamilyOptions::default());
    let t = match t {
        Ok(t) => t,
        Err(Error::Hypothesis { check, detail }) => {
            // strict mode stops at the first prime failing the congruence
            assert!(check.starts_with("p_not_pm1_mod_d"), "{check}: {detail}");
            let lenient = FamilyOptions {
                mode: Mode::Lenient,
                ..FamilyOptions::default()
            };
            pi_tuple(3, 30, 2, &lenient).unwrap()
        }
        Err(e) => panic!("{e}"),
    };
    assert_eq!(t.member_count(), 3 + t.p_list.len());
    let v = verify_tuple(&t).unwrap();
    assert_eq!(v.verdict, TupleVerdict::Verified);
}

#[test]
fn tuples_roundtrip_through_json() {
    let t = verify_tuple(&quintuple(3, 2).unwrap()).unwrap();
    let line = serde_json::to_string(&t).unwrap();
    assert!(!line.contains('\n'));
    assert!(line.contains(TUPLE_SCHEMA));
    assert!(line.contains("\"-119164\""));
    let back: FamilyTuple = serde_json::from_str(&line).unwrap();
    assert_eq!(back, t);
    assert_eq!(verify_tuple(&back).unwrap(), t);
}

#[test]
fn verification_is_deterministic() {
    let t = pi_tuple(3, 6, 3, &FamilyOptions::default()).unwrap();
    let a = serde_json::to_string(&verify_tuple(&t).unwrap()).unwrap();
    let b = serde_json::to_string(&verify_tuple(&t).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn hand_built_tuple_reports_non_divisibility() {
    let t = FamilyTuple::custom(3, &[big(-15), big(-31), big(-23)]).unwrap();
    let v = verify_tuple(&t).unwrap();
    let hs: Vec<Option<u64>> = v.members.iter().map(|m| m.class_number).collect();
    assert_eq!(hs, vec![Some(2), Some(3), Some(3)]);
    assert_eq!(v.verdict, TupleVerdict::Failed);
}

#[test]
fn invalid_parameters_are_domain_errors() {
    assert!(matches!(quadruple(4, 3, 2), Err(Error::Domain(_))));
    assert!(matches!(quadruple(3, 3, 1), Err(Error::Domain(_))));
    assert!(matches!(quadruple(3, 9, 2), Err(Error::Hypothesis { .. })));
    assert!(matches!(
        pi_tuple(3, 1, 2, &FamilyOptions::default()),
        Err(Error::Domain(_))
    ));
    assert!(matches!(n_membership(2, 2), Err(Error::Domain(_))));
}
