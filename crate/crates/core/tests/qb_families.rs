//! The C_t and R_t families against Q_b : z^(b-1) y = x^b.
//!
//! Expected values for R_t come from its parametrization (s : t s^b : 1):
//! substituting into Q_b gives (t - 1) s^b, so R_t meets Q_b at q0 = (0:0:1)
//! with multiplicity b and the remaining b(b - 1) lie at q_inf = (0:1:0).

use hypertan::localgeo::PointType;
use hypertan::projplane::ProjectivePoint;
use hypertan::search3c::{c_t, q_b, r_t, verify_qb_families};
use hypertan::tangency::tangency_report;
use hypertan::{Budget, Rational};
use num_bigint::BigInt;

fn ts() -> Vec<Rational> {
    [2, 3, -1].iter().map(|&t| Rational::from_integer(BigInt::from(t))).collect()
}

#[test]
fn c_t_is_hypertangent_at_q0() {
    let budget = Budget::default();
    for b in [4u32, 5] {
        for d in [b, b + 1] {
            let rep = verify_qb_families(b, d, &ts(), &budget).unwrap();
            for e in &rep.entries {
                let ct = e.ct.as_ref().unwrap();
                assert!(ct.integral && ct.hypertangent_at_q0, "b = {b}, d = {d}, t = {}", e.t);
                // a smooth plane curve of degree d
                assert!(ct.smooth);
                assert_eq!(ct.genus as u32, (d - 1) * (d - 2) / 2);
            }
        }
    }
}

#[test]
fn r_t_is_a_rational_hyper_bitangent() {
    let budget = Budget::default();
    let q0 = ProjectivePoint::rational(0, 0, 1);
    let qi = ProjectivePoint::rational(0, 1, 0);
    for b in [4u32, 5] {
        let rep = verify_qb_families(b, b, &ts(), &budget).unwrap();
        for e in &rep.entries {
            assert!(e.rt_pass(b), "b = {b}, t = {}", e.t);
            let r = e.rt.as_ref().unwrap();
            assert_eq!(r.genus, 0);
            assert_eq!(r.singular, vec![(qi.clone(), Some(PointType::new(b - 1, b)))]);
            let mut split = r.split.clone();
            split.sort_by_key(|s| s.1);
            assert_eq!(split, vec![(q0.clone(), b as u64), (qi.clone(), (b * (b - 1)) as u64)]);
        }
    }
}

#[test]
fn hypertangency_is_at_a_single_branch() {
    let budget = Budget::default();
    let t = Rational::from_integer(BigInt::from(2));
    let rep = tangency_report(&c_t(4, 5, &t).unwrap(), &q_b(4), &budget).unwrap();
    assert_eq!(rep.contacts.len(), 1);
    assert_eq!(rep.bezout_total, 20);
    let rep = tangency_report(&r_t(4, &t).unwrap(), &q_b(4), &budget).unwrap();
    assert!(!rep.hypertangent && rep.hyper_bitangent);
}
