//! The mirror statement on the template family C = (y - x^l)^m + y^(lm+1)
//! against B = {y = x^l}, in the plane and after moving the frame.

use hypertan::localgeo::PointType;
use hypertan::projplane::{PlaneCurve, ProjectivePoint, Projectivity};
use hypertan::tangency::mirror_check;
use hypertan::{Budget, GeomError, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

fn base(l: u32) -> PlaneCurve {
    PlaneCurve::parse(&format!("y*z^{} - x^{l}", l - 1)).unwrap()
}

fn template(l: u32, m: u32) -> PlaneCurve {
    PlaneCurve::parse(&format!("(y*z^{} - x^{l})^{m}*z + y^{}", l - 1, l * m + 1)).unwrap()
}

fn expect(l: u32, m: u32, t: &Projectivity) {
    let (c, b) = (t.apply_curve(&template(l, m)), t.apply_curve(&base(l)));
    let q = t.apply_point(&ProjectivePoint::rational(0, 0, 1));
    let r = mirror_check(&c, &b, &q, &Budget::default());
    if l.gcd(&m) == 1 {
        let r = r.unwrap();
        assert!(r.pass, "l = {l}, m = {m}: {r}");
        assert_eq!((r.l, r.m), (l, m));
        assert_eq!(r.observed_type, PointType::new(m, l * m));
        let n = (l * (l * m + 1)) as i64;
        let bound = Rational::new(BigInt::from((m as i64 - 1) * (n - m as i64)), BigInt::from(2));
        assert_eq!(r.delta_bound, bound);
    } else {
        match r {
            Err(GeomError::Precondition(msg)) => assert!(msg.contains("not unibranched on C"), "{msg}"),
            other => panic!("l = {l}, m = {m}: expected a precondition error, got {other:?}"),
        }
    }
}

#[test]
fn template_family_in_standard_position() {
    for l in 2..=3 {
        for m in 1..=3 {
            expect(l, m, &Projectivity::identity());
        }
    }
}

#[test]
fn parabola_example_bound() {
    let r = mirror_check(&template(2, 3), &base(2), &ProjectivePoint::rational(0, 0, 1), &Budget::default()).unwrap();
    assert_eq!(r.delta_bound, Rational::from_integer(BigInt::from(11)));
    assert_eq!(r.delta_observed, 13);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn template_family_in_a_moved_frame(
        l in 2u32..=3,
        m in 1u32..=3,
        entries in proptest::array::uniform9(-2i64..=2),
    ) {
        let rows = [
            [entries[0], entries[1], entries[2]],
            [entries[3], entries[4], entries[5]],
            [entries[6], entries[7], entries[8]],
        ];
        let Ok(t) = Projectivity::from_i64(rows) else { return Ok(()) };
        expect(l, m, &t);
    }
}
