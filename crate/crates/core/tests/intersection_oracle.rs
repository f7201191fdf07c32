//! Noether-recursion intersection multiplicities against the
//! sheared-resultant oracle in `support::oracle`.

mod support;

use support::oracle::{compare, oracle, Affine};

#[test]
fn noether_matches_sheared_resultant_oracle() {
    let started = std::time::Instant::now();
    let c = compare(120, 20240611).unwrap();
    assert!(c.high >= 10, "only {} pairs with multiplicity >= 3", c.high);
    assert!(started.elapsed().as_secs() < 60, "took {:?}", started.elapsed());
}

#[test]
fn oracle_on_known_pairs() {
    // y - x^2 against y: contact 2; y^2 - x^3 against y: 3; against x: 2
    let parabola: Affine = vec![((0, 1), 1), ((2, 0), -1)];
    let axis: Affine = vec![((0, 1), 1)];
    let cusp: Affine = vec![((0, 2), 1), ((3, 0), -1)];
    let other_axis: Affine = vec![((1, 0), 1)];
    assert_eq!(oracle(&parabola, &axis), Some(2));
    assert_eq!(oracle(&cusp, &axis), Some(3));
    assert_eq!(oracle(&cusp, &other_axis), Some(2));
    assert_eq!(oracle(&parabola, &parabola), None);
}
