//! Adjoining roots: builds absolute simple extensions with a registered
//! embedding of the base field.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use super::factor::{coefficient_field, squarefree_norm};
use num_traits::{One, Zero};

use super::{factor_over, factor_small, solve_linear, AlgebraError, Budget, FieldElement, Matrix, NumberField, Rational, Scalar, UniPoly};

/// A field together with a distinguished root of the adjoined polynomial.
#[derive(Clone, Debug)]
pub struct Extension {
    /// `None` is Q.
    pub field: Option<Arc<NumberField>>,
    pub root: FieldElement,
}

impl Extension {
    pub fn degree(&self) -> usize {
        self.field.as_ref().map_or(1, |k| k.degree())
    }
}

static COUNTER: AtomicUsize = AtomicUsize::new(0);

fn fresh_name() -> String {
    format!("a{}", COUNTER.fetch_add(1, Ordering::Relaxed))
}

/// Adjoins a root of `p` (irreducible over `base`) to `base`.
///
/// Degree one collapses to the base field. Otherwise the result is an
/// absolute extension of Q whose power basis generator is a primitive
/// element; `base` embeds into it.
pub fn adjoin_root(
    base: Option<&Arc<NumberField>>,
    p: &UniPoly<FieldElement>,
    budget: &Budget,
) -> Result<Extension, AlgebraError> {
    let d = p.degree().ok_or_else(|| AlgebraError::ZeroPolynomial("adjoin_root".into()))?;
    if d == 0 {
        return Err(AlgebraError::Invalid("cannot adjoin a root of a constant".into()));
    }
    let base = base.filter(|k| k.degree() > 1).cloned().or_else(|| coefficient_field(p));
    if d == 1 {
        let root = -(p.coeff(0) / p.coeff(1));
        return Ok(Extension { field: base, root });
    }
    let base_deg = base.as_ref().map_or(1, |k| k.degree());
    let Some(k) = base else {
        let facs = factor_over(None, p, budget)?;
        if facs.len() != 1 || facs[0].1 != 1 {
            return Err(AlgebraError::Reducible(format!("{} factors", facs.len())));
        }
        budget.check_field(d)?;
        let m = p.map(|c| c.as_rational().expect("rational coefficients")).monic();
        let field = NumberField::new_unchecked(fresh_name(), m, vec![]);
        return Ok(Extension { root: FieldElement::generator(&field), field: Some(field) });
    };
    let p = p.monic();
    if !p.is_squarefree() {
        return Err(AlgebraError::Reducible("repeated factor".into()));
    }
    // p is irreducible over k iff its squarefree shifted norm is over Q
    let (s, norm) = squarefree_norm(&p, &k);
    let nf = factor_small(&norm, budget)?;
    if nf.len() != 1 {
        return Err(AlgebraError::Reducible(format!("{} factors", nf.len())));
    }
    budget.check_field(base_deg * d)?;
    let img = base_generator_image(&k, &p, s);
    let field = NumberField::new_unchecked(fresh_name(), norm, vec![(k.clone(), img.clone())]);
    let alpha = FieldElement::from_coords(&field, img);
    let root = FieldElement::generator(&field) - alpha * FieldElement::from_i64(s);
    Ok(Extension { field: Some(field), root })
}

/// Coordinates of the base generator `a` in powers of `g = b + s a`, where
/// `b` is a root of `p`. Works in the basis `a^i b^j` of `k[b]/(p)`.
fn base_generator_image(k: &Arc<NumberField>, p: &UniPoly<FieldElement>, s: i64) -> Vec<Rational> {
    let e = k.degree();
    let d = p.degree().unwrap();
    let n = e * d;
    let reduce = |v: UniPoly<FieldElement>| -> Vec<FieldElement> {
        let r = v.rem(p);
        (0..d).map(|j| r.coeff(j)).collect()
    };
    let flatten = |v: &[FieldElement]| -> Vec<Rational> {
        let mut out = Vec::with_capacity(n);
        for c in v {
            let mut cs = if c.is_rational() {
                vec![c.as_rational().unwrap()]
            } else {
                c.lift_to(k).expect("coefficient in base field").coords().to_vec()
            };
            cs.resize(e, Rational::zero());
            out.extend(cs);
        }
        out
    };
    let a = FieldElement::generator(k);
    let g = UniPoly::new(vec![a.clone() * FieldElement::from_i64(s), FieldElement::one()]);
    let mut pw = UniPoly::one();
    let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(n);
    for _ in 0..n {
        let v = reduce(pw.clone());
        cols.push(flatten(&v));
        pw = &UniPoly::new(v) * &g;
    }
    let mut target = vec![FieldElement::zero(); d];
    target[0] = a;
    let rhs = flatten(&target);
    let m = Matrix::from_rows((0..n).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect());
    solve_linear(&m, &rhs).particular.expect("g generates the extension")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, Matrix};
    use num_traits::{One, Zero};

    fn qpoly(v: &[i64]) -> UniPoly<FieldElement> {
        UniPoly::new(v.iter().map(|&c| FieldElement::from_i64(c)).collect())
    }

    #[test]
    fn sqrt_two() {
        let e = adjoin_root(None, &qpoly(&[-2, 0, 1]), &Budget::default()).unwrap();
        assert_eq!(e.degree(), 2);
        assert_eq!(e.root.clone() * e.root.clone(), FieldElement::from_i64(2));
    }

    #[test]
    fn linear_collapses() {
        let e = adjoin_root(None, &qpoly(&[-5, 1]), &Budget::default()).unwrap();
        assert!(e.field.is_none());
        assert_eq!(e.root, FieldElement::from_i64(5));
    }

    #[test]
    fn reducible_is_rejected() {
        let err = adjoin_root(None, &qpoly(&[-1, 0, 1]), &Budget::default()).unwrap_err();
        assert!(matches!(err, AlgebraError::Reducible(_)));
    }

    #[test]
    fn tower_over_quadratic_has_degree_four() {
        let k = adjoin_root(None, &qpoly(&[-2, 0, 1]), &Budget::default()).unwrap();
        let a = k.root.clone();
        // t^2 - a
        let p = UniPoly::new(vec![-a.clone(), FieldElement::zero(), FieldElement::one()]);
        let e = adjoin_root(k.field.as_ref(), &p, &Budget::default()).unwrap();
        assert_eq!(e.degree(), 4);
        let b = e.root.clone();
        assert_eq!(b.clone() * b.clone(), a.clone());
        assert_eq!(a.clone() * a, FieldElement::from_i64(2));
        // independent check: 1, b, b^2, b^3 are linearly independent over Q,
        // and b^4 = 2 in the power basis
        let mut rows = Vec::new();
        let mut pw = FieldElement::one();
        for _ in 0..4 {
            let mut c = pw.lift_to(e.field.as_ref().unwrap()).unwrap().coords().to_vec();
            c.resize(4, rat(0));
            rows.push(c);
            pw = pw * b.clone();
        }
        assert_eq!(Matrix::from_rows(rows).rank(), 4);
        assert_eq!(pw, FieldElement::from_i64(2));
    }

    #[test]
    fn budget_is_enforced() {
        let p = qpoly(&[-2, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
        let err = adjoin_root(None, &p, &Budget::default()).unwrap_err();
        assert!(matches!(err, AlgebraError::BudgetExceeded(_)));
    }
}
