//! Local intersection multiplicity by blowing up common tangent directions:
//! `I_p(f, g) = m_p(f) m_p(g) + sum over shared infinitely near points`.

use std::sync::Arc;

use num_traits::{One, Zero};

use super::{blow_up_slope, blow_up_vertical, LocalGerm};
use crate::error::{GeomError, GeomResult};
use crate::exactalg::{adjoin_root, factor_over, gcd_forms, Budget, FieldElement, NumberField};
use crate::projplane::{field_of, PlaneCurve, ProjectivePoint};
use crate::KPoly;

const MAX_DEPTH: usize = 400;

/// Intersection multiplicity at the origin of two bivariate polynomials
/// without a common component through the origin.
pub fn germ_intersection(f: &KPoly, g: &KPoly, field: Option<&Arc<NumberField>>, budget: &Budget) -> GeomResult<u64> {
    rec(f, g, field.cloned(), budget, 0)
}

fn rec(f: &KPoly, g: &KPoly, field: Option<Arc<NumberField>>, budget: &Budget, depth: usize) -> GeomResult<u64> {
    if !f.coeff(&[0, 0, 0]).is_zero() || !g.coeff(&[0, 0, 0]).is_zero() {
        return Ok(0);
    }
    if depth > MAX_DEPTH {
        return Err(GeomError::Internal("intersection recursion did not terminate".into()));
    }
    let mf = f.order().unwrap();
    let mg = g.order().unwrap();
    let mut total = mf as u64 * mg as u64;
    // fast path: a smooth germ with nonvanishing y-derivative meets the
    // other curve with multiplicity given by substitution of its expansion;
    // we use the cheaper test below only for lines
    let cf = f.homogeneous_part(mf);
    let cg = g.homogeneous_part(mg);
    if cf.valuation_in(0).unwrap() > 0 && cg.valuation_in(0).unwrap() > 0 {
        total += rec(&blow_up_vertical(f, mf), &blow_up_vertical(g, mg), field.clone(), budget, depth + 1)?;
    }
    let uf = cf.to_univariate_at(0, &FieldElement::one());
    let ug = cg.to_univariate_at(0, &FieldElement::one());
    if uf.degree().unwrap_or(0) >= 1 && ug.degree().unwrap_or(0) >= 1 {
        let h = uf.gcd(&ug);
        if h.degree().unwrap_or(0) >= 1 {
            for (p, _) in factor_over(field.as_ref(), &h, budget)? {
                let k = p.degree().unwrap() as u64;
                let ext = adjoin_root(field.as_ref(), &p, budget)?;
                let l = ext.root;
                let f1 = blow_up_slope(f, mf, &l);
                let g1 = blow_up_slope(g, mg, &l);
                let sub = ext.field.clone().or_else(|| field.clone());
                total += k * rec(&f1, &g1, sub, budget, depth + 1)?;
            }
        }
    }
    Ok(total)
}

/// `(C . B)_p`; zero when `p` is off either curve.
pub fn local_intersection_multiplicity(
    c: &PlaneCurve,
    b: &PlaneCurve,
    p: &ProjectivePoint,
    budget: &Budget,
) -> GeomResult<u64> {
    if !c.contains(p) || !b.contains(p) {
        return Ok(0);
    }
    let common = gcd_forms(c.form(), b.form());
    if common.degree().unwrap_or(0) > 0 && common.eval(p.coords()).is_zero() {
        return Err(GeomError::CommonComponent);
    }
    let gc = LocalGerm::at(c, p)?;
    let gb = LocalGerm::at(b, p)?;
    let field = field_of(gc.f.terms().chain(gb.f.terms()).map(|(_, c)| c).chain(p.coords().iter()));
    germ_intersection(&gc.f, &gb.f, field.as_ref(), budget)
}
