//! Global computations built on local ones: intersection points with
//! multiplicities, singular points and the geometric genus.

use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{delta_invariant, local_intersection_multiplicity, LocalGerm};
use crate::error::{GeomError, GeomResult};
use crate::exactalg::{adjoin_root, factor_over, gcd_forms, resultant, Budget, FieldElement, Matrix, NumberField, UniPoly};
use crate::projplane::{field_of, poly_field, substitute_linear, PlaneCurve, ProjectivePoint};
use crate::exactalg::Scalar;
use crate::KPoly;

const ATTEMPTS: u64 = 24;

/// An intersection point (a representative of a Galois orbit).
#[derive(Clone, Debug)]
pub struct IntersectionPoint {
    pub point: ProjectivePoint,
    pub multiplicity: u64,
    /// Size of the Galois orbit over the curves' field.
    pub conjugates: usize,
}

/// A singular point (a representative of a Galois orbit).
#[derive(Clone, Debug)]
pub struct SingularPoint {
    pub point: ProjectivePoint,
    pub multiplicity: u32,
    pub conjugates: usize,
}

/// Seeded projectivity used to put the curves in general position.
fn generic_matrix(attempt: u64) -> Matrix<FieldElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE ^ attempt.wrapping_mul(0x9E37_79B9));
    let span = 2 + attempt as i64 / 4;
    loop {
        let rows: Vec<Vec<FieldElement>> =
            (0..3).map(|_| (0..3).map(|_| FieldElement::from_i64(rng.gen_range(-span..=span))).collect()).collect();
        let m = Matrix::from_rows(rows);
        if !m.determinant().is_zero() {
            return m;
        }
    }
}

fn common_field(fs: &[&KPoly]) -> Option<Arc<NumberField>> {
    field_of(fs.iter().flat_map(|f| f.terms().map(|(_, c)| c)))
}

/// Univariate in `z` after fixing `(x, y)`.
fn fibre(f: &KPoly, x: &FieldElement, y: &FieldElement) -> UniPoly<FieldElement> {
    f.specialize(0, x).specialize(1, y).to_univariate(2).expect("only z remains")
}

/// `Res_z` of the `y = 1` dehomogenizations, as a polynomial in `x`.
fn affine_resultant(f: &KPoly, g: &KPoly) -> GeomResult<UniPoly<FieldElement>> {
    let r = resultant(&f.dehomogenize(1), &g.dehomogenize(1), 1)?;
    Ok(r.to_univariate(0).expect("univariate in x"))
}

/// Points lying over a root of `r` (or over `(1:0)`), in the transformed frame.
enum Fibre {
    Point(ProjectivePoint),
    Empty,
    Several,
}

fn solve_fibre(polys: &[&KPoly], x: &FieldElement, y: &FieldElement) -> GeomResult<Fibre> {
    let mut g: Option<UniPoly<FieldElement>> = None;
    for f in polys {
        let u = fibre(f, x, y);
        g = Some(match g {
            None => u,
            Some(h) => h.gcd(&u),
        });
    }
    let g = g.unwrap();
    if g.is_zero() {
        return Ok(Fibre::Several);
    }
    let g = g.squarefree_part();
    Ok(match g.degree() {
        Some(0) | None => Fibre::Empty,
        Some(1) => {
            let z = -(g.coeff(0) / g.coeff(1));
            Fibre::Point(ProjectivePoint::new(x.clone(), y.clone(), z)?)
        }
        _ => Fibre::Several,
    })
}

fn cross(a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    vec![
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

/// Restricts `other` to the line `s p + q` and factors.
fn line_support(
    line: &PlaneCurve,
    other: &PlaneCurve,
    field: Option<&Arc<NumberField>>,
    budget: &Budget,
) -> GeomResult<Vec<(ProjectivePoint, usize)>> {
    let l = line.line_coeffs().expect("a line");
    let basis = |i: usize| (0..3).map(|k| if k == i { FieldElement::one() } else { FieldElement::zero() }).collect::<Vec<_>>();
    let pts: Vec<Vec<FieldElement>> =
        (0..3).map(|i| cross(&l, &basis(i))).filter(|v| v.iter().any(|x| !x.is_zero())).collect();
    let (p, q) = pts
        .iter()
        .enumerate()
        .flat_map(|(i, p)| pts[i + 1..].iter().map(move |q| (p, q)))
        .find(|(p, q)| cross(p, q).iter().any(|x| !x.is_zero()))
        .map(|(p, q)| (p.clone(), q.clone()))
        .ok_or_else(|| GeomError::Internal("line without two points".into()))?;
    let s = KPoly::var(3, 0);
    let images: Vec<KPoly> = (0..3).map(|k| &s.scale(&p[k]) + &KPoly::constant(3, q[k].clone())).collect();
    let u = other.form().compose(&images).to_univariate(0).expect("univariate in s");
    let mut out = Vec::new();
    for (h, _) in factor_over(field, &u, budget)? {
        if h.degree().unwrap_or(0) == 0 {
            continue;
        }
        let root = adjoin_root(field, &h, budget)?.root;
        let v: Vec<FieldElement> = (0..3).map(|k| root.clone() * p[k].clone() + q[k].clone()).collect();
        out.push((ProjectivePoint::from_vec(v)?, h.degree().unwrap()));
    }
    if (u.degree().unwrap_or(0) as u32) < other.degree() {
        out.push((ProjectivePoint::from_vec(p)?, 1));
    }
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    Ok(out)
}

/// Distinct points of `C` and `B`, one representative per Galois orbit with
/// the orbit size.
pub fn intersection_support(c: &PlaneCurve, b: &PlaneCurve, budget: &Budget) -> GeomResult<Vec<(ProjectivePoint, usize)>> {
    if gcd_forms(c.form(), b.form()).degree().unwrap_or(0) > 0 {
        return Err(GeomError::CommonComponent);
    }
    let field = common_field(&[c.form(), b.form()]);
    if c.degree() == 1 {
        return line_support(c, b, field.as_ref(), budget);
    }
    if b.degree() == 1 {
        return line_support(b, c, field.as_ref(), budget);
    }
    let total = c.degree() as u64 * b.degree() as u64;
    'attempt: for attempt in 0..ATTEMPTS {
        let m = generic_matrix(attempt);
        let f = substitute_linear(c.form(), &m);
        let g = substitute_linear(b.form(), &m);
        let o = [FieldElement::zero(), FieldElement::zero(), FieldElement::one()];
        if f.eval(&o).is_zero() || g.eval(&o).is_zero() {
            continue;
        }
        let r = affine_resultant(&f, &g)?;
        let mut found: Vec<(ProjectivePoint, usize)> = Vec::new();
        for (h, _) in factor_over(field.as_ref(), &r, budget)? {
            let ext = adjoin_root(field.as_ref(), &h, budget)?;
            match solve_fibre(&[&f, &g], &ext.root, &FieldElement::one())? {
                Fibre::Point(p) => found.push((p, h.degree().unwrap())),
                _ => continue 'attempt,
            }
        }
        if (r.degree().unwrap_or(0) as u64) < total {
            match solve_fibre(&[&f, &g], &FieldElement::one(), &FieldElement::zero())? {
                Fibre::Point(p) => found.push((p, 1)),
                _ => continue 'attempt,
            }
        }
        let mut out = Vec::new();
        for (p, k) in found {
            out.push((ProjectivePoint::from_vec(m.mul_vec(p.coords()))?, k));
        }
        out.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        return Ok(out);
    }
    Err(GeomError::Internal("no generic projection found for intersection".into()))
}

/// All points of `C` and `B` with local multiplicities; the Bezout sum is
/// checked.
pub fn intersection_points(c: &PlaneCurve, b: &PlaneCurve, budget: &Budget) -> GeomResult<Vec<IntersectionPoint>> {
    let total = c.degree() as u64 * b.degree() as u64;
    let mut out = Vec::new();
    for (point, conjugates) in intersection_support(c, b, budget)? {
        let multiplicity = local_intersection_multiplicity(c, b, &point, budget)?;
        out.push(IntersectionPoint { point, multiplicity, conjugates });
    }
    let sum: u64 = out.iter().map(|p| p.multiplicity * p.conjugates as u64).sum();
    if sum != total {
        return Err(GeomError::Internal(format!("Bezout check failed: {sum} != {total}")));
    }
    Ok(out)
}

/// Number of distinct points of `C` and `B` over the algebraic closure,
/// without factoring; exact for a generic projection, never an overcount.
pub fn distinct_intersection_count(c: &PlaneCurve, b: &PlaneCurve) -> GeomResult<u64> {
    if gcd_forms(c.form(), b.form()).degree().unwrap_or(0) > 0 {
        return Err(GeomError::CommonComponent);
    }
    let total = c.degree() as u64 * b.degree() as u64;
    for attempt in 0..ATTEMPTS {
        let m = generic_matrix(attempt);
        let f = substitute_linear(c.form(), &m);
        let g = substitute_linear(b.form(), &m);
        let o = [FieldElement::zero(), FieldElement::zero(), FieldElement::one()];
        if f.eval(&o).is_zero() || g.eval(&o).is_zero() {
            continue;
        }
        let r = affine_resultant(&f, &g)?;
        let deg = r.degree().unwrap_or(0) as u64;
        let at_inf = u64::from(deg < total);
        return Ok(r.squarefree_part().degree().unwrap_or(0) as u64 + at_inf);
    }
    Err(GeomError::Internal("no generic projection found".into()))
}

/// Singular points of a reduced curve.
pub fn singular_points(c: &PlaneCurve, budget: &Budget) -> GeomResult<Vec<SingularPoint>> {
    if !c.is_squarefree() {
        return Err(GeomError::NotSquarefree);
    }
    if c.degree() == 1 {
        return Ok(vec![]);
    }
    let field = poly_field(c.form());
    'attempt: for attempt in 0..ATTEMPTS {
        let m = generic_matrix(attempt);
        let f = substitute_linear(c.form(), &m);
        let o = [FieldElement::zero(), FieldElement::zero(), FieldElement::one()];
        if f.eval(&o).is_zero() {
            continue;
        }
        let parts: Vec<KPoly> = (0..3).map(|i| f.derivative(i)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(attempt + 17);
        let combos: Vec<KPoly> = (0..3)
            .map(|_| {
                let a = FieldElement::from_i64(rng.gen_range(1..=7));
                let b = FieldElement::from_i64(rng.gen_range(-7..=7));
                &(&parts[0] + &parts[1].scale(&a)) + &parts[2].scale(&b)
            })
            .collect();
        let pairs = [(&f, &combos[0]), (&combos[0], &combos[1]), (&combos[1], &combos[2])];
        let mut g: Option<UniPoly<FieldElement>> = None;
        for (a, b) in pairs {
            if a.is_zero() || b.is_zero() || a.degree_in(2).unwrap_or(0) == 0 || b.degree_in(2).unwrap_or(0) == 0 {
                continue 'attempt;
            }
            let r = affine_resultant(a, b)?;
            if r.is_zero() {
                continue 'attempt;
            }
            g = Some(match g {
                None => r,
                Some(h) => h.gcd(&r),
            });
        }
        let g = g.unwrap();
        let all: Vec<&KPoly> = std::iter::once(&f).chain(parts.iter()).collect();
        let mut found: Vec<(ProjectivePoint, usize)> = Vec::new();
        if g.degree().unwrap_or(0) >= 1 {
            for (h, _) in factor_over(field.as_ref(), &g, budget)? {
                let ext = adjoin_root(field.as_ref(), &h, budget)?;
                match solve_fibre(&all, &ext.root, &FieldElement::one())? {
                    Fibre::Point(p) => found.push((p, h.degree().unwrap())),
                    Fibre::Empty => {}
                    Fibre::Several => continue 'attempt,
                }
            }
        }
        match solve_fibre(&all, &FieldElement::one(), &FieldElement::zero())? {
            Fibre::Point(p) => found.push((p, 1)),
            Fibre::Empty => {}
            Fibre::Several => continue 'attempt,
        }
        let mut out = Vec::new();
        for (p, k) in found {
            let point = ProjectivePoint::from_vec(m.mul_vec(p.coords()))?;
            let multiplicity = LocalGerm::at(c, &point)?.multiplicity();
            if multiplicity < 2 {
                return Err(GeomError::Internal(format!("spurious singular point {point}")));
            }
            out.push(SingularPoint { point, multiplicity, conjugates: k });
        }
        out.sort_by(|a, b| a.point.canonical_cmp(&b.point));
        return Ok(out);
    }
    Err(GeomError::Internal("no generic projection found for singular points".into()))
}

/// Geometric genus `(d-1)(d-2)/2 - sum delta` of an integral curve.
pub fn geometric_genus(c: &PlaneCurve, budget: &Budget) -> GeomResult<u64> {
    let d = c.degree() as i64;
    let pa = (d - 1) * (d - 2) / 2;
    let mut total = 0i64;
    for s in singular_points(c, budget)? {
        total += s.conjugates as i64 * delta_invariant(c, &s.point, budget)? as i64;
    }
    if total > pa {
        return Err(GeomError::Precondition(format!("delta sum {total} exceeds arithmetic genus {pa}: curve is not integral")));
    }
    Ok((pa - total) as u64)
}
