//! Small-degree factorization over Q and over simple extensions.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::zassenhaus::factor_squarefree_integer;
use super::{resultant, AlgebraError, Budget, FieldElement, NumberField, Poly, Rational, Scalar, UniPoly};

/// Complete factorization over Q into monic irreducibles with exponents.
/// The product of the factors equals the input up to a nonzero constant.
pub fn factor_small(f: &UniPoly<Rational>, budget: &Budget) -> Result<Vec<(UniPoly<Rational>, u32)>, AlgebraError> {
    if f.is_zero() {
        return Err(AlgebraError::ZeroPolynomial("factor_small".into()));
    }
    let mut out = Vec::new();
    for (g, e) in f.squarefree_decomposition() {
        for h in factor_squarefree_rational(&g, budget)? {
            out.push((h, e));
        }
    }
    out.sort_by(|a, b| cmp_poly(&a.0, &b.0));
    Ok(out)
}

fn cmp_poly(a: &UniPoly<Rational>, b: &UniPoly<Rational>) -> std::cmp::Ordering {
    a.degree().cmp(&b.degree()).then_with(|| a.coeffs().cmp(b.coeffs()))
}

fn factor_squarefree_rational(g: &UniPoly<Rational>, budget: &Budget) -> Result<Vec<UniPoly<Rational>>, AlgebraError> {
    let n = match g.degree() {
        None | Some(0) => return Ok(vec![]),
        Some(n) => n,
    };
    let mut out = Vec::new();
    let mut g = g.clone();
    if g.coeff(0).is_zero() {
        out.push(UniPoly::new(vec![Rational::zero(), Rational::one()]));
        g = g.div_exact(&out[0]).unwrap();
        if g.is_constant() {
            return Ok(out);
        }
    }
    if n == 1 || g.degree() == Some(1) {
        out.push(g.monic());
        return Ok(out);
    }
    budget.check_factor(g.degree().unwrap())?;
    let den = super::common_denominator(g.coeffs());
    let mut z: Vec<BigInt> = g.coeffs().iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
    let content = z.iter().fold(BigInt::zero(), |a, c| a.gcd(c));
    let sign = if z.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
    for c in z.iter_mut() {
        *c = &*c / &content * &sign;
    }
    for h in factor_squarefree_integer(&z) {
        out.push(UniPoly::new(h.into_iter().map(Rational::from_integer).collect()).monic());
    }
    Ok(out)
}

/// Coordinates of `c` in `field`'s power basis, padded to the field degree.
fn coords_in(c: &FieldElement, field: &Arc<NumberField>) -> Vec<Rational> {
    let lifted = c.lift_to(field).unwrap_or_else(|| panic!("coefficient {c} is not in {field:?}"));
    let mut v = lifted.coords().to_vec();
    v.resize(field.degree(), Rational::zero());
    v
}

/// `Norm_{K/Q}(f(t - s*a))` as a polynomial over Q, via the resultant with the
/// minimal polynomial.
pub(crate) fn shifted_norm(f: &UniPoly<FieldElement>, field: &Arc<NumberField>, s: i64) -> UniPoly<Rational> {
    // bivariate G(t, y): y stands for the generator
    let t = Poly::<Rational>::var(2, 0);
    let y = Poly::<Rational>::var(2, 1);
    let shift = &t - &y.scale(&Rational::from_integer(BigInt::from(s)));
    let mut g = Poly::zero(2);
    let mut pw = Poly::one(2);
    for c in f.coeffs() {
        let cy = Poly::from_univariate(2, 1, &UniPoly::new(coords_in(c, field)));
        g = &g + &(&cy * &pw);
        pw = &pw * &shift;
    }
    let m = Poly::from_univariate(2, 1, field.minpoly());
    let r = resultant(&m, &g, 1).expect("nonzero inputs");
    r.to_univariate(0).expect("resultant is univariate in t")
}

/// The field of a polynomial's coefficients, if any is irrational.
pub(crate) fn coefficient_field(f: &UniPoly<FieldElement>) -> Option<Arc<NumberField>> {
    let mut best: Option<Arc<NumberField>> = None;
    for c in f.coeffs() {
        if c.is_rational() {
            continue;
        }
        let k = c.field().unwrap();
        match &best {
            None => best = Some(k.clone()),
            Some(b) if k.degree() > b.degree() => best = Some(k.clone()),
            _ => {}
        }
    }
    best
}

/// Monic irreducible factorization of `f` over the field `field`
/// (`None` means Q). Uses Trager's norm method for proper extensions.
pub fn factor_over(
    field: Option<&Arc<NumberField>>,
    f: &UniPoly<FieldElement>,
    budget: &Budget,
) -> Result<Vec<(UniPoly<FieldElement>, u32)>, AlgebraError> {
    if f.is_zero() {
        return Err(AlgebraError::ZeroPolynomial("factor_over".into()));
    }
    let k = match field {
        Some(k) if k.degree() > 1 => k.clone(),
        _ => {
            let q = f.map(|c| c.as_rational().expect("coefficient outside the rationals"));
            return Ok(factor_small(&q, budget)?
                .into_iter()
                .map(|(g, e)| (g.map(|c| FieldElement::rational(c.clone())), e))
                .collect());
        }
    };
    let mut out = Vec::new();
    for (g, e) in f.squarefree_decomposition() {
        for h in factor_squarefree_over(&k, &g.monic(), budget)? {
            out.push((h, e));
        }
    }
    Ok(out)
}

/// Smallest shift `s` in 0, 1, -1, 2, ... with a squarefree norm.
pub(crate) fn squarefree_norm(f: &UniPoly<FieldElement>, k: &Arc<NumberField>) -> (i64, UniPoly<Rational>) {
    for step in 0..64 {
        let s = if step % 2 == 0 { step / 2 } else { -(step + 1) / 2 };
        let n = shifted_norm(f, k, s);
        if n.is_squarefree() {
            return (s, n);
        }
    }
    panic!("no squarefree norm found among 64 shifts");
}

fn factor_squarefree_over(
    k: &Arc<NumberField>,
    g: &UniPoly<FieldElement>,
    budget: &Budget,
) -> Result<Vec<UniPoly<FieldElement>>, AlgebraError> {
    let d = match g.degree() {
        None | Some(0) => return Ok(vec![]),
        Some(d) => d,
    };
    if d == 1 {
        return Ok(vec![g.clone()]);
    }
    let (s, norm) = squarefree_norm(g, k);
    let nf = factor_small(&norm, budget)?;
    if nf.len() == 1 {
        return Ok(vec![g.clone()]);
    }
    let alpha = FieldElement::generator(k);
    let sa = alpha.clone() * FieldElement::from_i64(s);
    // g(t - s a)
    let back = UniPoly::new(vec![-sa.clone(), FieldElement::one()]);
    let fwd = UniPoly::new(vec![sa, FieldElement::one()]);
    let gs = g.compose(&back);
    let mut out = Vec::new();
    for (ni, _) in nf {
        let nk = ni.map(|c| FieldElement::rational(c.clone()));
        let h = nk.gcd(&gs);
        if h.degree().unwrap_or(0) >= 1 {
            out.push(h.compose(&fwd).monic());
        }
    }
    Ok(out)
}

/// True when `f` has no nontrivial factorization over the field.
pub fn is_irreducible_over(
    field: Option<&Arc<NumberField>>,
    f: &UniPoly<FieldElement>,
    budget: &Budget,
) -> Result<bool, AlgebraError> {
    let facs = factor_over(field, f, budget)?;
    Ok(facs.len() == 1 && facs[0].1 == 1)
}
