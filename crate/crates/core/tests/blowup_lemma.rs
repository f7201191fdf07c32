//! One blow-up of a unibranched (m, n) germ: the strict transform's point
//! type and tangencies against the trichotomy n < 2m, n > 2m, n = 2m.

mod support;

use hypertan::localgeo::LocalGerm;
use hypertan::projplane::{PlaneCurve, ProjectivePoint, Projectivity};
use hypertan::{Budget, KPoly, Poly};
use support::germs::{case, check, germ, germs};

#[test]
fn strict_transform_follows_the_trichotomy() {
    let budget = Budget::default();
    let all = germs();
    assert!(all.len() >= 50);
    let mut cases = [0usize; 3];
    for (m, n, k, c) in all {
        check(&germ(m, n, k, c), m, n, &budget).unwrap();
        cases[case(m, n)] += 1;
    }
    assert!(cases.iter().all(|&k| k >= 3), "case coverage {cases:?}");
}

/// The same germs placed at a general point of the plane by a projectivity.
#[test]
fn trichotomy_in_a_moved_frame() {
    let budget = Budget::default();
    let t = Projectivity::from_i64([[1, 2, 1], [0, 1, -3], [2, 1, 1]]).unwrap();
    let p = t.apply_point(&ProjectivePoint::rational(0, 0, 1));
    for (m, n, k, c) in germs().into_iter().filter(|g| g.1 <= 8).step_by(2) {
        let f = germ(m, n, k, c).f;
        let d = f.degree().unwrap();
        let form: KPoly = Poly::from_terms(3, f.terms().map(|(e, a)| ([e[0], e[1], d - e[0] - e[1]], a.clone())));
        let curve = t.apply_curve(&PlaneCurve::new(form).unwrap());
        let moved = LocalGerm::at(&curve, &p).unwrap();
        check(&moved, m, n, &budget).unwrap();
    }
}
