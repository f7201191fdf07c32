//! Projective invariance of the local invariants, and the normalizing frame.

use hypertan::localgeo::{branch_count, delta_invariant, local_intersection_multiplicity, multiplicity_at, point_type};
use hypertan::projplane::{
    frame_normalize, frame_normalize_scaled, line_through, FrameScales, PlaneCurve, ProjectivePoint, Projectivity,
};
use hypertan::{Budget, FieldElement, GeomError, Scalar};
use proptest::prelude::*;

const GERMS: &[(&str, (i64, i64, i64))] = &[
    ("y^2*z - x^3", (0, 0, 1)),
    ("y^2*z - x^3 - x^2*z", (0, 0, 1)),
    ("(y*z - x^2)^3*z + y^7", (0, 0, 1)),
    ("z^3*y - x^4", (0, 1, 0)),
    ("x^2*y^2 + y^2*z^2 + z^2*x^2", (0, 0, 1)),
    ("(y^2*z - x^3)*(y - x)*z^2 + x^6", (0, 0, 1)),
];

fn matrix(e: [i64; 9]) -> Option<Projectivity> {
    Projectivity::from_i64([[e[0], e[1], e[2]], [e[3], e[4], e[5]], [e[6], e[7], e[8]]]).ok()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn local_invariants_are_projective(which in 0usize..GERMS.len(), e in proptest::array::uniform9(-3i64..=3)) {
        let Some(t) = matrix(e) else { return Ok(()) };
        let b = Budget::default();
        let (src, (x, y, z)) = GERMS[which];
        let c = PlaneCurve::parse(src).unwrap();
        let p = ProjectivePoint::rational(x, y, z);
        let (tc, tp) = (t.apply_curve(&c), t.apply_point(&p));
        prop_assert!(tc.contains(&tp));
        prop_assert_eq!(multiplicity_at(&c, &p).unwrap(), multiplicity_at(&tc, &tp).unwrap());
        prop_assert_eq!(delta_invariant(&c, &p, &b).unwrap(), delta_invariant(&tc, &tp, &b).unwrap());
        let branches = branch_count(&c, &p, &b).unwrap();
        prop_assert_eq!(branches, branch_count(&tc, &tp, &b).unwrap());
        if branches == 1 {
            prop_assert_eq!(point_type(&c, &p, &b).unwrap(), point_type(&tc, &tp, &b).unwrap());
        }
        let probe = PlaneCurve::parse("y*z - x^2 - 3*x*y").unwrap();
        prop_assert_eq!(
            local_intersection_multiplicity(&c, &probe, &p, &b).unwrap(),
            local_intersection_multiplicity(&tc, &t.apply_curve(&probe), &tp, &b).unwrap()
        );
    }

    #[test]
    fn frame_sends_flags_to_the_reference_flags(
        coords in proptest::array::uniform12(-4i64..=4),
        sp in 1i64..=5,
        sq in -5i64..=-1,
    ) {
        let pt = |i: usize| ProjectivePoint::new(
            FieldElement::from_i64(coords[i]),
            FieldElement::from_i64(coords[i + 1]),
            FieldElement::from_i64(coords[i + 2]),
        );
        let (Ok(p), Ok(p2), Ok(q), Ok(q2)) = (pt(0), pt(3), pt(6), pt(9)) else { return Ok(()) };
        let (Ok(lp), Ok(lq)) = (line_through(&p, &p2), line_through(&q, &q2)) else { return Ok(()) };
        let scales = FrameScales { p: FieldElement::from_i64(sp), q: FieldElement::from_i64(sq) };
        for t in [frame_normalize(&p, &lp, &q, &lq), frame_normalize_scaled(&p, &lp, &q, &lq, &scales)] {
            let t = match t {
                Ok(t) => t,
                Err(GeomError::Degenerate(_)) => return Ok(()),
                Err(e) => panic!("{e}"),
            };
            prop_assert_eq!(t.apply_point(&p), ProjectivePoint::rational(0, 1, 0));
            prop_assert_eq!(t.apply_point(&q), ProjectivePoint::rational(0, 0, 1));
            prop_assert_eq!(t.apply_curve(&lp), PlaneCurve::parse("z").unwrap());
            prop_assert_eq!(t.apply_curve(&lq), PlaneCurve::parse("y").unwrap());
        }
    }
}

#[test]
fn frame_rejects_each_degeneracy_separately() {
    let p = ProjectivePoint::rational(0, 1, 0);
    let q = ProjectivePoint::rational(0, 0, 1);
    let z = PlaneCurve::parse("z").unwrap();
    let y = PlaneCurve::parse("y").unwrap();
    let x = PlaneCurve::parse("x").unwrap();
    assert!(matches!(frame_normalize(&p, &x, &q, &y), Err(GeomError::Degenerate(m)) if m.contains("q lies on Lp")));
    assert!(matches!(frame_normalize(&p, &z, &q, &x), Err(GeomError::Degenerate(m)) if m.contains("p lies on Lq")));
    assert!(matches!(frame_normalize(&p, &y, &q, &y), Err(GeomError::Precondition(_))));
    assert!(matches!(frame_normalize(&p, &z, &p, &y), Err(GeomError::Degenerate(_))));
}
