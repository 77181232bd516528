use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use qlambert::arith::{int_rat, parse_rat, pow_int, pow_rat, rat, Rat};
use qlambert::qseries::{eval_f, eval_h, moment, partial_h, q_pochhammer};
use qlambert::{QParams, Sign};

// Reference values from 70-digit mpmath nsum.
const ERDOS_BORWEIN: &str = "1.60669515241529176378330152319092458048057967150575643577808";
const H_PLUS_HALF: &str = "0.764499780348444209191319747255498482557696998857525626566238";
const H_MINUS_TWO_THIRDS: &str = "2.876643261218519889995151669248928971822";
const H_PLUS_TWO_THIRDS: &str = "1.638324840111104612671876018871646800235";
const H_MINUS_P3_R2_R3: &str = "0.1292905326070390706576773665825211384262";
const F_MINUS_ONE_TWO_THIRDS: &str = "-2.138324840111104612671876018871646800235";

fn half() -> QParams {
    QParams::new(rat(1, 2), BigInt::from(2)).unwrap()
}

fn two_thirds() -> QParams {
    QParams::new(rat(2, 3), BigInt::from(2)).unwrap()
}

fn decimal(s: &str) -> Rat {
    let (int, frac) = s.split_once('.').unwrap();
    let neg = int.starts_with('-');
    let digits = format!("{}{}", int.trim_start_matches('-'), frac);
    let v = Rat::new(digits.parse().unwrap(), pow_int(&BigInt::from(10), frac.len() as u64));
    if neg {
        -v
    } else {
        v
    }
}

/// The ball must contain the reference up to its last printed digit.
fn assert_matches_reference(ball: &qlambert::BallReal, reference: &str) {
    let frac = reference.split_once('.').unwrap().1.len() as i64;
    let r = decimal(reference);
    let ulp = pow_rat(&rat(1, 10), frac);
    let lo = ball.lower().to_rational();
    let hi = ball.upper().to_rational();
    assert!(
        lo <= &r + &ulp && &r - &ulp <= hi,
        "{reference} outside [{}, {}]",
        ball.lower().to_f64(),
        ball.upper().to_f64()
    );
}

#[test]
fn erdos_borwein_constant() {
    let v = eval_h(&half(), Sign::Minus, 200).unwrap().value;
    assert_matches_reference(&v, ERDOS_BORWEIN);
    assert_eq!(v.certified_decimal(20).unwrap(), "1.6066951524152917637");
}

#[test]
fn reference_values() {
    let cases: [(QParams, Sign, &str); 4] = [
        (half(), Sign::Plus, H_PLUS_HALF),
        (two_thirds(), Sign::Minus, H_MINUS_TWO_THIRDS),
        (two_thirds(), Sign::Plus, H_PLUS_TWO_THIRDS),
        (
            QParams::special(BigInt::from(3), 2, 3).unwrap(),
            Sign::Minus,
            H_MINUS_P3_R2_R3,
        ),
    ];
    for (p, s, reference) in cases {
        let v = eval_h(&p, s, 160).unwrap().value;
        assert_matches_reference(&v, reference);
    }
}

#[test]
fn f_reference_values() {
    // with q1 = q2 the shift k -> k+1 turns f(2) into h-
    let v = eval_f(&half(), &rat(2, 1), 200).unwrap();
    assert_matches_reference(&v, ERDOS_BORWEIN);
    let v = eval_f(&two_thirds(), &rat(-1, 1), 160).unwrap();
    assert_matches_reference(&v, F_MINUS_ONE_TWO_THIRDS);
}

#[test]
fn f_refines_at_minus_one() {
    let coarse = eval_f(&two_thirds(), &rat(-1, 1), 32).unwrap();
    let fine = eval_f(&two_thirds(), &rat(-1, 1), 96).unwrap();
    assert!(coarse.overlaps(&fine));
    assert!(fine.rad() < coarse.rad());
}

#[test]
fn moments_against_truncated_integral() {
    for p in [half(), two_thirds(), QParams::special(BigInt::from(3), 2, 3).unwrap()] {
        let q1 = p.q1();
        let tail = pow_rat(&q1, 51) / (Rat::one() - &q1);
        for m in 0..6usize {
            let q2m = pow_rat(&p.q2(), m as i64);
            let mut sum = Rat::zero();
            let mut w = Rat::one();
            for _ in 0..=50 {
                sum += &w;
                w *= &q1 * &q2m;
            }
            let gap = moment(&p, m) - sum;
            assert!(gap > Rat::zero() && gap <= tail, "m = {m}");
        }
    }
}

#[test]
fn shifted_identity_through_f() {
    for p in [half(), two_thirds()] {
        for sign in Sign::BOTH {
            let h = eval_h(&p, sign, 200).unwrap().value;
            for n in 1..=8usize {
                let z = sign.eval_point(&p, n);
                let scale = pow_rat(&(p.q1() * p.p2_rat()), n as i64) * int_rat(&BigInt::from(-sign.pm()));
                let f = eval_f(&p, &z, 200).unwrap();
                let rhs = f
                    .mul(&qlambert::BallReal::from_rational(&scale, 200))
                    .add(&qlambert::BallReal::from_rational(&partial_h(&p, sign, n), 200));
                assert!(h.overlaps(&rhs), "{p} {sign} n = {n}");
            }
        }
    }
}

#[test]
fn pochhammer_splits() {
    let a = rat(3, 7);
    let q = rat(2, 5);
    let whole = q_pochhammer(&a, &q, 7);
    let head = q_pochhammer(&a, &q, 3);
    let tail = q_pochhammer(&(&a * pow_rat(&q, 3)), &q, 4);
    assert_eq!(whole, head * tail);
}

fn arb_params() -> impl Strategy<Value = QParams> {
    (1i64..6, 2i64..9, 2i64..6)
        .prop_filter("q1 < 1", |(s, t, _)| s < t)
        .prop_map(|(s, t, p2)| QParams::new(rat(s, t), BigInt::from(p2)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn minus_exceeds_plus(p in arb_params()) {
        let m = eval_h(&p, Sign::Minus, 64).unwrap().value;
        let pl = eval_h(&p, Sign::Plus, 64).unwrap().value;
        prop_assert!(pl.upper() < m.lower());
    }

    #[test]
    fn doubling_precision_halves_radius(p in arb_params(), bits in 16u64..120, sign in prop_oneof![Just(Sign::Minus), Just(Sign::Plus)]) {
        let a = eval_h(&p, sign, bits).unwrap();
        let b = eval_h(&p, sign, 2 * bits).unwrap();
        prop_assert!(b.value.rad().shl(1) <= *a.value.rad());
        prop_assert!(a.value.overlaps(&b.value));
        prop_assert!(a.value.rad_log2() <= -(bits as f64));
        prop_assert!(a.tail_bound <= *a.value.rad());
    }

    #[test]
    fn f_encloses_partial_sums(p in arb_params(), zn in 2i64..40) {
        // f(z) for z > 1 is a sum of positive terms bounded by q1^k/(z-1)
        let z = rat(zn, 1);
        let v = eval_f(&p, &z, 80).unwrap();
        let lower: Rat = (0..6).map(|k| pow_rat(&p.q1(), k) / (&z - pow_rat(&p.q2(), k))).sum();
        prop_assert!(v.upper().to_rational() >= lower);
        let upper = (Rat::one() - p.q1()).recip() / (&z - Rat::one());
        prop_assert!(v.lower().to_rational() <= upper);
    }

    #[test]
    fn parse_round_trip(n in -1000i64..1000, d in 1i64..1000) {
        let r = rat(n, d);
        prop_assert_eq!(parse_rat(&r.to_string()), Some(r));
    }
}
