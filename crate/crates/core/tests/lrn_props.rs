use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use proptest::prelude::*;
use quadclass::error::Error;
use quadclass::lrn::{
    check_decomposition, solve_brute, solve_structured, theorem31_verify, ImagQuadInt, LrnInstance,
    LrnSolution, Theorem31Branch,
};

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn grid() -> impl Iterator<Item = LrnInstance> {
    (4i64..=60).flat_map(|d| {
        [3i64, 5, 7, 11, 13]
            .into_iter()
            .filter_map(move |ell| LrnInstance::new(d, ell, 6).ok())
    })
}

fn keys(sols: &[LrnSolution]) -> Vec<(u32, BigInt, BigInt)> {
    sols.iter().map(LrnSolution::key).collect()
}

/// Independent scan over `x` for fixed `z`, checking `y` by square root.
fn scan_by_x(d: i64, ell: i64, z_max: u32) -> Vec<(u32, BigInt, BigInt)> {
    let mut out = Vec::new();
    let mut lz = BigInt::one();
    for z in 1..=z_max {
        lz *= ell;
        let mut x = BigInt::one();
        while &x * &x < lz {
            let rest = &lz - &x * &x;
            if rest.is_multiple_of(&big(d)) {
                let y2 = rest / d;
                let y = y2.sqrt();
                if &y * &y == y2 && y.is_positive() && x.gcd(&y).is_one() {
                    out.push((z, x.clone(), y));
                }
            }
            x += 1;
        }
    }
    out.sort();
    out
}

#[test]
fn structured_and_brute_solvers_agree_on_the_grid() {
    let mut instances = 0;
    let mut solutions = 0;
    for inst in grid() {
        let brute = solve_brute(&inst);
        let structured = solve_structured(&inst).unwrap();
        assert_eq!(
            keys(&brute),
            keys(&structured),
            "d = {}, l = {}",
            inst.d(),
            inst.ell()
        );
        instances += 1;
        solutions += brute.len();
    }
    assert!(instances > 150);
    assert!(solutions > 50);
}

#[test]
fn brute_solver_matches_scan_over_x() {
    for inst in grid().step_by(7) {
        let d = i64::try_from(inst.d()).unwrap();
        let ell = i64::try_from(inst.ell()).unwrap();
        let mut got = keys(&solve_brute(&inst));
        got.sort();
        assert_eq!(got, scan_by_x(d, ell, 6), "d = {d}, l = {ell}");
    }
}

#[test]
fn structured_decompositions_reexpand_exactly() {
    for inst in grid() {
        for sol in solve_structured(&inst).unwrap() {
            let dec = sol
                .decomposition
                .as_ref()
                .expect("structured solutions carry decompositions");
            assert!(check_decomposition(&sol, inst.d(), inst.ell()));
            let base = ImagQuadInt::new(dec.a.clone(), &dec.b * dec.mu);
            let power = base.pow(dec.t, inst.d());
            assert_eq!(power.re * dec.eps, sol.x);
            assert_eq!(power.im * dec.eps, sol.y);
            assert_eq!(dec.s * dec.t, sol.z);
            assert_eq!(
                &dec.a * &dec.a + inst.d() * &dec.b * &dec.b,
                num_traits::pow(inst.ell().clone(), dec.s as usize)
            );
            if dec.t % 2 == 1 {
                assert!(
                    sol.x.is_multiple_of(&dec.a),
                    "a = {} does not divide x = {}",
                    dec.a,
                    sol.x
                );
            }
        }
    }
}

#[test]
fn theorem31_sweep_has_no_false_verdicts() {
    let mut checked = 0;
    for ell in [7i64, 11, 19, 23, 31] {
        for n in [3u32, 5] {
            for p in [3i64, 5] {
                match theorem31_verify(&big(ell), n, &big(p)) {
                    Ok(report) => {
                        assert!(
                            report.verdict,
                            "({ell}, {n}, {p}) h = {}",
                            report.class_number
                        );
                        assert_eq!(report.setup.branch, Theorem31Branch::SmallPrime);
                        assert!(report.trace.t3.eliminated);
                        assert!(report.trace.t5.eliminated);
                        assert!(report.trace.a_divides_p);
                        checked += 1;
                    }
                    Err(Error::Hypothesis { .. }) => {}
                    Err(e) => panic!("({ell}, {n}, {p}): {e}"),
                }
            }
        }
    }
    assert_eq!(checked, 20);
}

#[test]
fn theorem31_general_branch_verdicts() {
    // primes p > 5 where the congruence holds
    let mut accepted = 0;
    for ell in [7i64, 11, 19, 23] {
        for n in [3u32, 5] {
            for p in [7i64, 11, 13, 17, 19, 23, 29, 31] {
                if let Ok(report) = theorem31_verify(&big(ell), n, &big(p)) {
                    assert_eq!(report.setup.branch, Theorem31Branch::General);
                    assert!(report.verdict, "({ell}, {n}, {p})");
                    accepted += 1;
                }
            }
        }
    }
    assert!(accepted > 10, "{accepted}");
}

proptest! {
    #[test]
    fn norm_is_multiplicative(
        a in -1000i64..1000, b in -1000i64..1000,
        c in -1000i64..1000, e in -1000i64..1000,
        d in 2i64..500,
    ) {
        let (x, y) = (ImagQuadInt::new(a, b), ImagQuadInt::new(c, e));
        let d = big(d);
        prop_assert_eq!(x.mul(&y, &d).norm(&d), x.norm(&d) * y.norm(&d));
    }

    #[test]
    fn brute_solutions_satisfy_the_equation(d in 4i64..200, ell_idx in 0usize..6, z in 1u32..6) {
        let ell = [3i64, 5, 7, 11, 13, 17][ell_idx];
        prop_assume!(ell.gcd(&(2 * d)) == 1);
        let inst = LrnInstance::new(d, ell, z).unwrap();
        for s in solve_brute(&inst) {
            prop_assert_eq!(
                &s.x * &s.x + big(d) * &s.y * &s.y,
                num_traits::pow(big(ell), s.z as usize)
            );
            prop_assert!(s.x.gcd(&s.y).is_one());
        }
    }
}
