use num_integer::Integer;
use proptest::prelude::*;

use super::*;
use crate::exactalg::parse_poly_in;

fn curve(s: &str) -> PlaneCurve {
    PlaneCurve::parse(s).unwrap()
}

fn pt(x: i64, y: i64, z: i64) -> ProjectivePoint {
    ProjectivePoint::rational(x, y, z)
}

fn germ(s: &str) -> LocalGerm {
    let f = parse_poly_in(s, &["x", "y"]).unwrap();
    LocalGerm::new(f.map(|c| FieldElement::rational(c.clone()))).unwrap()
}

fn q(b: u32) -> PlaneCurve {
    curve(&format!("z^{}*y - x^{b}", b - 1))
}

fn b() -> Budget {
    Budget::default()
}

#[test]
fn multiplicities() {
    assert_eq!(multiplicity_at(&curve("z*y - x^2"), &pt(0, 0, 1)).unwrap(), 1);
    assert_eq!(multiplicity_at(&curve("z^3*y - x^4"), &pt(0, 1, 0)).unwrap(), 3);
    assert_eq!(multiplicity_at(&curve("(y*z - x^2)^3*z + y^7"), &pt(0, 0, 1)).unwrap(), 3);
    assert!(multiplicity_at(&curve("z*y - x^2"), &pt(1, 0, 1)).is_err());
}

#[test]
fn cusp_blows_up_to_smooth_tangent_to_exceptional() {
    let g = germ("y^2 - x^3");
    assert_eq!(g.tangent_directions(&b()).unwrap().len(), 1);
    let obs = observe_blowup(&g, &b()).unwrap();
    assert_eq!(obs.child, PointType::new(1, 2));
    assert!(obs.tangent_to_exceptional);
    let t = germ_tree(&g, &b()).unwrap();
    assert_eq!(t.delta(), 1);
    assert_eq!(t.branch_count(), 1);
}

#[test]
fn node_has_two_branches() {
    let g = germ("y^2 - x^2 - x^3");
    assert_eq!(g.tangent_directions(&b()).unwrap().len(), 2);
    let t = germ_tree(&g, &b()).unwrap();
    assert_eq!(t.branch_count(), 2);
    assert_eq!(t.delta(), 1);
    let c = curve("y^2*z - x^2*z - x^3");
    assert!(!is_unibranched(&c, &pt(0, 0, 1), &b()).unwrap());
}

#[test]
fn conjugate_tangents_count_twice() {
    let t = germ_tree(&germ("y^2 + x^2 + x^3"), &b()).unwrap();
    assert_eq!(t.branch_count(), 2);
    assert_eq!(t.delta(), 1);
}

#[test]
fn blow_up_rejects_non_tangent() {
    assert!(germ("y^2 - x^3").blow_up(&ResolvedDirection::Vertical).is_err());
}

#[test]
fn case_c_transverse() {
    let obs = observe_blowup(&germ("(y - x^2)^3 + y^7"), &b()).unwrap();
    assert_eq!(obs.child.m, 3);
    assert!(!obs.tangent_to_exceptional);
    assert!(!obs.tangent_to_line);
}

#[test]
fn classify() {
    assert_eq!(classify_blowup(PointType::new(2, 3)).unwrap(), BlowupCase::A { child: PointType::new(1, 2) });
    assert_eq!(classify_blowup(PointType::new(2, 5)).unwrap(), BlowupCase::B { child: PointType::new(2, 3) });
    assert_eq!(classify_blowup(PointType::new(3, 6)).unwrap(), BlowupCase::C { multiplicity: 3 });
    assert!(classify_blowup(PointType { m: 2, n: Contact::Infinite }).is_err());
}

#[test]
fn point_types() {
    let o = pt(0, 0, 1);
    assert_eq!(point_type(&curve("y*z - x^2"), &o, &b()).unwrap(), PointType::new(1, 2));
    // three smooth branches w = -zeta x^9 with w = y - x^3
    let c39 = curve("(y*z^2 - x^3)^3 + y^9");
    assert!(matches!(point_type(&c39, &o, &b()), Err(GeomError::NotUnibranched(_))));
    assert_eq!(branch_count(&c39, &o, &b()).unwrap(), 3);
    assert_eq!(line_contact(&LocalGerm::at(&c39, &o).unwrap().f, &FieldElement::zero(), &FieldElement::one()), Some(9));
    assert_eq!(point_type(&curve("(y*z - x^2)^3*z + y^7"), &o, &b()).unwrap(), PointType::new(3, 6));
    assert_eq!(point_type(&q(4), &pt(0, 1, 0), &b()).unwrap(), PointType::new(3, 4));
    assert!(point_type(&curve("y^2*z - x^2*z - x^3"), &o, &b()).is_err());
}

#[test]
fn infinite_contact() {
    let t = germ_point_type(&germ("y"), &b()).unwrap().0;
    assert_eq!(t.n, Contact::Infinite);
}

#[test]
fn tangent_lines() {
    assert_eq!(tangent_line(&curve("y*z - x^2"), &pt(1, 1, 1), &b()).unwrap(), curve("2*x - y - z"));
    assert_eq!(tangent_line(&q(4), &pt(0, 1, 0), &b()).unwrap(), curve("z"));
    assert_eq!(tangent_line(&curve("y^2*z - x^3"), &pt(0, 0, 1), &b()).unwrap(), curve("y"));
}

#[test]
fn local_intersections() {
    let o = pt(0, 0, 1);
    assert_eq!(local_intersection_multiplicity(&curve("y*z - x^2"), &curve("y"), &o, &b()).unwrap(), 2);
    let r2 = curve("z^3*y - 2*x^4");
    assert_eq!(local_intersection_multiplicity(&r2, &q(4), &o, &b()).unwrap(), 4);
    assert_eq!(local_intersection_multiplicity(&r2, &q(4), &pt(0, 1, 0), &b()).unwrap(), 12);
    assert_eq!(local_intersection_multiplicity(&r2, &q(4), &pt(1, 1, 1), &b()).unwrap(), 0);
    let c = curve("y*(y*z - x^2)");
    assert!(matches!(local_intersection_multiplicity(&c, &curve("y"), &o, &b()), Err(GeomError::CommonComponent)));
}

#[test]
fn intersection_point_lists() {
    let ps = intersection_points(&curve("y"), &curve("z*y - x^2"), &b()).unwrap();
    assert_eq!(ps.len(), 1);
    assert_eq!(ps[0].point, pt(0, 0, 1));
    assert_eq!(ps[0].multiplicity, 2);
    let ps = intersection_points(&q(4), &curve("z"), &b()).unwrap();
    assert_eq!(ps.len(), 1);
    assert_eq!(ps[0].point, pt(0, 1, 0));
    assert_eq!(ps[0].multiplicity, 4);
    let ps = intersection_points(&curve("x"), &curve("y"), &b()).unwrap();
    assert_eq!((ps.len(), ps[0].multiplicity), (1, 1));
    let r2 = curve("z^3*y - 2*x^4");
    let split: Vec<_> =
        intersection_points(&r2, &q(4), &b()).unwrap().into_iter().map(|p| (p.point, p.multiplicity)).collect();
    assert_eq!(split, vec![(pt(0, 1, 0), 12), (pt(0, 0, 1), 4)]);
}

#[test]
fn conjugate_intersections() {
    let (c, l) = (curve("x^2 + y^2 - z^2"), curve("x^2 - 2*y^2"));
    let ps = intersection_points(&c, &l, &b()).unwrap();
    let total: u64 = ps.iter().map(|p| p.multiplicity * p.conjugates as u64).sum();
    assert_eq!(total, 4);
    assert!(ps.iter().all(|p| !p.point.is_rational()));
    assert_eq!(distinct_intersection_count(&c, &l).unwrap(), 4);
    assert_eq!(distinct_intersection_count(&q(4), &curve("z")).unwrap(), 1);
}

#[test]
fn deltas_and_trees() {
    let t = infinitely_near_tree(&q(4), &pt(0, 1, 0), &b()).unwrap();
    assert_eq!(t.multiplicities()[0], 3);
    assert_eq!(t.delta(), 3);
    assert_eq!(delta_invariant(&curve("y^2*z - x^2*z - x^3"), &pt(0, 0, 1), &b()).unwrap(), 1);
    assert_eq!(delta_invariant(&curve("y^2*z - x^3"), &pt(0, 0, 1), &b()).unwrap(), 1);
    assert_eq!(delta_invariant(&curve("y*z - x^2"), &pt(0, 0, 1), &b()).unwrap(), 0);
}

#[test]
fn genus_and_singular_points() {
    assert_eq!(geometric_genus(&curve("y*z - x^2"), &b()).unwrap(), 0);
    assert!(singular_points(&curve("y*z - x^2"), &b()).unwrap().is_empty());
    let s = singular_points(&q(5), &b()).unwrap();
    assert_eq!(s.len(), 1);
    assert_eq!(s[0].point, pt(0, 1, 0));
    assert_eq!(s[0].multiplicity, 4);
    assert_eq!(geometric_genus(&q(5), &b()).unwrap(), 0);
    assert_eq!(geometric_genus(&curve("x^4 + y^4 + z^4"), &b()).unwrap(), 3);
    assert_eq!(geometric_genus(&curve("y^2*z - x^3 - x*z^2"), &b()).unwrap(), 1);
    assert_eq!(geometric_genus(&curve("y^2*z - x^3 + x^2*z"), &b()).unwrap(), 0);
}

#[test]
fn singular_points_over_extension() {
    let c = curve("(x^2 - 2*z^2)^2 + y^2*z^2");
    let s = singular_points(&c, &b()).unwrap();
    assert!(s.iter().any(|p| p.conjugates == 2 && p.multiplicity == 2));
    let c = curve("x^2*y^2 + y^2*z^2 + z^2*x^2");
    assert_eq!(singular_points(&c, &b()).unwrap().len(), 3);
    assert_eq!(geometric_genus(&c, &b()).unwrap(), 0);
}

/// Exponent after `n` with `gcd(m, n, k) = 1`.
fn coprime_tail(m: u32, n: u32) -> u32 {
    let g = m.gcd(&n);
    (n + 1..).find(|k| g.gcd(k) == 1).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn blow_up_matches_classification(m in 2u32..=4, dn in 1u32..=7, c in 1i64..=3) {
        let n = m + dn;
        prop_assume!(n <= 9);
        let k = coprime_tail(m, n);
        let one = crate::Rational::from_integer(1.into());
        let phi = vec![(n, one), (k, crate::Rational::from_integer(c.into()))];
        let g = germ_from_parametrization(m, &phi).unwrap();
        let (ty, _) = germ_point_type(&g, &b()).unwrap();
        prop_assert_eq!(ty, PointType::new(m, n));
        let obs = observe_blowup(&g, &b()).unwrap();
        match classify_blowup(ty).unwrap() {
            BlowupCase::A { child } => {
                prop_assert_eq!(obs.child, child);
                prop_assert!(obs.tangent_to_exceptional);
            }
            BlowupCase::B { child } => {
                prop_assert_eq!(obs.child, child);
                prop_assert!(obs.tangent_to_line);
            }
            BlowupCase::C { multiplicity } => {
                prop_assert_eq!(obs.child.m, multiplicity);
                prop_assert!(!obs.tangent_to_exceptional && !obs.tangent_to_line);
            }
        }
    }
}
