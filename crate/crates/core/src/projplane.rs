//! Points, lines, curves and projectivities of the projective plane over a
//! number field, plus the frame normalization used by the degree >= 2 search.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};

use crate::error::{GeomError, GeomResult};
use crate::exactalg::{
    bareiss_det, cmp_forms, factor_form_rational, is_squarefree_form, squarefree_part_form, parse_poly, AlgebraError, Budget, FieldElement, Matrix,
    NumberField, Poly, Rational, Scalar,
};
use crate::KPoly;

/// A point `(x:y:z)` kept in canonical form (last nonzero coordinate is 1).
#[derive(Clone, Debug)]
pub struct ProjectivePoint {
    coords: [FieldElement; 3],
}

impl ProjectivePoint {
    pub fn new(x: FieldElement, y: FieldElement, z: FieldElement) -> GeomResult<Self> {
        let mut c = [x, y, z];
        let Some(k) = (0..3).rev().find(|&i| !c[i].is_zero()) else {
            return Err(GeomError::Invalid("the zero vector is not a projective point".into()));
        };
        let inv = c[k].inv();
        for v in c.iter_mut() {
            *v = v.clone() * inv.clone();
        }
        c[k] = FieldElement::one();
        Ok(ProjectivePoint { coords: c })
    }

    pub fn from_vec(v: Vec<FieldElement>) -> GeomResult<Self> {
        let [x, y, z]: [FieldElement; 3] =
            v.try_into().map_err(|_| GeomError::Invalid("a point needs three coordinates".into()))?;
        Self::new(x, y, z)
    }

    pub fn rational(x: i64, y: i64, z: i64) -> Self {
        Self::new(FieldElement::from_i64(x), FieldElement::from_i64(y), FieldElement::from_i64(z))
            .expect("nonzero point")
    }

    /// Parses `"a:b:c"` with exact rational entries.
    pub fn parse(s: &str) -> GeomResult<Self> {
        let parts: Vec<&str> = s.trim().trim_start_matches('(').trim_end_matches(')').split(':').collect();
        if parts.len() != 3 {
            return Err(GeomError::Invalid(format!("expected x:y:z, got {s:?}")));
        }
        let mut v = Vec::new();
        for p in parts {
            v.push(FieldElement::rational(crate::exactalg::parse_rational(p)?));
        }
        Self::from_vec(v)
    }

    pub fn coords(&self) -> &[FieldElement; 3] {
        &self.coords
    }

    /// The largest field among the coordinates (`None` for rational points).
    pub fn field(&self) -> Option<Arc<NumberField>> {
        field_of(self.coords.iter())
    }

    pub fn is_rational(&self) -> bool {
        self.coords.iter().all(FieldElement::is_rational)
    }

    /// Index of the coordinate normalized to 1.
    pub fn chart(&self) -> usize {
        (0..3).rev().find(|&i| !self.coords[i].is_zero()).unwrap()
    }

    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        for i in (0..3).rev() {
            let o = self.coords[i].canonical_cmp(&other.coords[i]);
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    }
}

impl PartialEq for ProjectivePoint {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{}:{})", self.coords[0], self.coords[1], self.coords[2])
    }
}

/// The largest field among some elements.
pub fn field_of<'a>(xs: impl IntoIterator<Item = &'a FieldElement>) -> Option<Arc<NumberField>> {
    let mut best: Option<Arc<NumberField>> = None;
    for x in xs {
        if x.is_rational() {
            continue;
        }
        let k = x.field().unwrap();
        if best.as_ref().map_or(true, |b| k.degree() > b.degree()) {
            best = Some(k.clone());
        }
    }
    best
}

/// Field of the coefficients of a polynomial.
pub fn poly_field(f: &KPoly) -> Option<Arc<NumberField>> {
    field_of(f.terms().map(|(_, c)| c))
}

/// Absolute degree of an optional field.
pub fn field_degree(k: Option<&Arc<NumberField>>) -> usize {
    k.map_or(1, |k| k.degree())
}

/// A projective plane curve given by a nonzero homogeneous form.
#[derive(Clone, Debug)]
pub struct PlaneCurve {
    form: KPoly,
    degree: u32,
    /// Computed on first use.
    squarefree: OnceLock<bool>,
}

impl PlaneCurve {
    pub fn new(form: KPoly) -> GeomResult<Self> {
        if form.nvars() != 3 {
            return Err(GeomError::Invalid("a curve form needs three variables".into()));
        }
        if form.is_zero() {
            return Err(GeomError::Invalid("the zero form defines no curve".into()));
        }
        if !form.is_homogeneous() {
            return Err(GeomError::Invalid(format!("form {form} is not homogeneous")));
        }
        let degree = form.degree().unwrap();
        if degree == 0 {
            return Err(GeomError::Invalid("a nonzero constant defines no curve".into()));
        }
        let form = form.normalized();
        Ok(PlaneCurve { form, degree, squarefree: OnceLock::new() })
    }

    pub fn from_rational(form: &Poly<Rational>) -> GeomResult<Self> {
        Self::new(form.map(|c| FieldElement::rational(c.clone())))
    }

    /// Reads a form written in `x, y, z`.
    pub fn parse(s: &str) -> GeomResult<Self> {
        Self::from_rational(&parse_poly(s)?)
    }

    /// The line `a x + b y + c z = 0`.
    pub fn line(a: FieldElement, b: FieldElement, c: FieldElement) -> GeomResult<Self> {
        let form = Poly::from_terms(3, [([1, 0, 0], a), ([0, 1, 0], b), ([0, 0, 1], c)]);
        Self::new(form)
    }

    pub fn form(&self) -> &KPoly {
        &self.form
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_squarefree(&self) -> bool {
        *self.squarefree.get_or_init(|| is_squarefree_form(&self.form))
    }

    pub fn field(&self) -> Option<Arc<NumberField>> {
        poly_field(&self.form)
    }

    pub fn is_rational(&self) -> bool {
        self.field().is_none()
    }

    /// The form with rational coefficients, if it has them.
    pub fn rational_form(&self) -> Option<Poly<Rational>> {
        if !self.is_rational() {
            return None;
        }
        Some(self.form.map(|c| c.as_rational().unwrap()))
    }

    pub fn contains(&self, p: &ProjectivePoint) -> bool {
        self.form.eval(p.coords()).is_zero()
    }

    /// Coefficients `(a, b, c)` of a line.
    pub fn line_coeffs(&self) -> Option<[FieldElement; 3]> {
        if self.degree != 1 {
            return None;
        }
        Some([self.form.coeff(&[1, 0, 0]), self.form.coeff(&[0, 1, 0]), self.form.coeff(&[0, 0, 1])])
    }

    pub fn gradient_at(&self, p: &ProjectivePoint) -> [FieldElement; 3] {
        [0, 1, 2].map(|i| self.form.derivative(i).eval(p.coords()))
    }

    /// Irreducible components over the working field, with exponents.
    /// Supported for rational forms.
    pub fn components(&self, budget: &Budget) -> GeomResult<Vec<(PlaneCurve, u32)>> {
        let Some(q) = self.rational_form() else {
            if self.degree == 1 {
                return Ok(vec![(self.clone(), 1)]);
            }
            return Err(AlgebraError::Unsupported("component factorization over a number field".into()).into());
        };
        factor_form_rational(&q, budget)?
            .into_iter()
            .map(|(f, e)| Ok((PlaneCurve::from_rational(&f)?, e)))
            .collect()
    }

    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        cmp_forms(&self.form, &other.form)
    }

    /// Stable textual key of the normalized form.
    pub fn key(&self) -> String {
        self.form.to_string()
    }

    /// Serializable terms `(i, j, k, coefficient coordinates)`.
    pub fn terms(&self) -> Vec<([u32; 3], FieldElement)> {
        self.form.terms().rev().map(|(e, c)| (*e, c.clone())).collect()
    }
}

impl PartialEq for PlaneCurve {
    fn eq(&self, other: &Self) -> bool {
        self.form == other.form
    }
}

impl fmt::Display for PlaneCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.form)
    }
}

fn cross(a: &[FieldElement; 3], b: &[FieldElement; 3]) -> [FieldElement; 3] {
    [
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

/// The unique line through two distinct points.
pub fn line_through(p: &ProjectivePoint, q: &ProjectivePoint) -> GeomResult<PlaneCurve> {
    if p == q {
        return Err(GeomError::Degenerate("line through a point and itself".into()));
    }
    let [a, b, c] = cross(p.coords(), q.coords());
    PlaneCurve::line(a, b, c)
}

/// Intersection point of two distinct lines.
pub fn line_meet(l: &PlaneCurve, m: &PlaneCurve) -> GeomResult<ProjectivePoint> {
    let (Some(a), Some(b)) = (l.line_coeffs(), m.line_coeffs()) else {
        return Err(GeomError::Invalid("line_meet expects two lines".into()));
    };
    let [x, y, z] = cross(&a, &b);
    ProjectivePoint::new(x, y, z).map_err(|_| GeomError::Degenerate("the lines coincide".into()))
}

/// Result of the integrality test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Integrality {
    pub integral: bool,
    /// True when absolute irreducibility is certified, not just assumed.
    pub absolute: bool,
    pub reason: String,
}

/// Decides whether a curve is integral (reduced and irreducible).
///
/// Irreducibility is decided over the working field; absolute
/// irreducibility is certified for lines, smooth conics, smooth curves and
/// curves with a unibranched point of multiplicity `deg - 1`, and otherwise
/// recorded as assumed.
pub fn is_integral(c: &PlaneCurve, budget: &Budget) -> GeomResult<Integrality> {
    let out = |integral, absolute, reason: &str| Ok(Integrality { integral, absolute, reason: reason.into() });
    if !c.is_squarefree() {
        return out(false, true, "not reduced");
    }
    match c.degree() {
        1 => return out(true, true, "line"),
        2 => {
            let det = conic_matrix(c).determinant();
            return if det.is_zero() {
                out(false, true, "singular conic: a line pair over the algebraic closure")
            } else {
                out(true, true, "smooth conic")
            };
        }
        _ => {}
    }
    if c.is_rational() {
        let comps = c.components(budget)?;
        if comps.len() > 1 {
            return out(false, true, "reducible over the rationals");
        }
    }
    match crate::localgeo::singular_points(c, budget) {
        Ok(sing) => {
            if sing.is_empty() {
                return out(true, true, "smooth plane curve");
            }
            for s in &sing {
                if s.multiplicity + 1 == c.degree() && crate::localgeo::branch_count(c, &s.point, budget)? == 1 {
                    return out(true, true, "unibranched point of multiplicity deg - 1");
                }
            }
        }
        Err(e) if e.is_budget() => {}
        Err(e) => return Err(e),
    }
    if c.is_rational() {
        out(true, false, "irreducible over working field, absolute irreducibility assumed")
    } else {
        Err(AlgebraError::Unsupported("irreducibility test for a singular curve over a number field".into()).into())
    }
}

/// Symmetric matrix of a conic (scaled by 2 to stay integral).
pub fn conic_matrix(c: &PlaneCurve) -> Matrix<FieldElement> {
    let f = c.form();
    let two = FieldElement::from_i64(2);
    let g = |e: [u32; 3]| f.coeff(&e);
    Matrix::from_rows(vec![
        vec![g([2, 0, 0]) * two.clone(), g([1, 1, 0]), g([1, 0, 1])],
        vec![g([1, 1, 0]), g([0, 2, 0]) * two.clone(), g([0, 1, 1])],
        vec![g([1, 0, 1]), g([0, 1, 1]), g([0, 0, 2]) * two],
    ])
}

/// An invertible linear change of homogeneous coordinates.
#[derive(Clone, Debug)]
pub struct Projectivity {
    m: Matrix<FieldElement>,
    inv: Matrix<FieldElement>,
}

impl Projectivity {
    pub fn new(m: Matrix<FieldElement>) -> GeomResult<Self> {
        if m.nrows() != 3 || m.ncols() != 3 {
            return Err(GeomError::Invalid("a projectivity is a 3x3 matrix".into()));
        }
        let inv = m.inverse().ok_or_else(|| GeomError::Degenerate("singular matrix".into()))?;
        Ok(Projectivity { m, inv })
    }

    pub fn from_i64(rows: [[i64; 3]; 3]) -> GeomResult<Self> {
        Self::new(Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| FieldElement::from_i64(v)).collect()).collect()))
    }

    pub fn identity() -> Self {
        Projectivity { m: Matrix::identity(3), inv: Matrix::identity(3) }
    }

    pub fn matrix(&self) -> &Matrix<FieldElement> {
        &self.m
    }

    pub fn inverse(&self) -> Self {
        Projectivity { m: self.inv.clone(), inv: self.m.clone() }
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Self) -> Self {
        Projectivity { m: self.m.mul(&other.m), inv: other.inv.mul(&self.inv) }
    }

    pub fn apply_point(&self, p: &ProjectivePoint) -> ProjectivePoint {
        ProjectivePoint::from_vec(self.m.mul_vec(p.coords())).expect("invertible map")
    }

    /// Image curve `{T p : p in C}`, whose form is `F(T^-1 X)`.
    pub fn apply_curve(&self, c: &PlaneCurve) -> PlaneCurve {
        let out = PlaneCurve::new(substitute_linear(c.form(), &self.inv)).expect("invertible map preserves curves");
        if let Some(&sf) = c.squarefree.get() {
            let _ = out.squarefree.set(sf);
        }
        out
    }

    /// `F(M X)` for a form `F`.
    pub fn pull_back_form(&self, f: &KPoly) -> KPoly {
        substitute_linear(f, &self.m)
    }
}

/// `F(M X)`.
pub fn substitute_linear(f: &KPoly, m: &Matrix<FieldElement>) -> KPoly {
    let images: Vec<KPoly> = (0..3)
        .map(|i| Poly::from_terms(3, (0..3).map(|j| {
            let mut e = [0; 3];
            e[j] = 1;
            (e, m[(i, j)].clone())
        })))
        .collect();
    f.compose(&images)
}

/// Scalings for the two free columns of a normalizing frame.
#[derive(Clone, Debug)]
pub struct FrameScales {
    pub p: FieldElement,
    pub q: FieldElement,
}

impl Default for FrameScales {
    fn default() -> Self {
        FrameScales { p: FieldElement::one(), q: FieldElement::one() }
    }
}

/// A projectivity `T` with `T(p) = (0:1:0)`, `T(Lp) = {z = 0}`,
/// `T(q) = (0:0:1)` and `T(Lq) = {y = 0}`; both free scalings set to 1.
pub fn frame_normalize(
    p: &ProjectivePoint,
    lp: &PlaneCurve,
    q: &ProjectivePoint,
    lq: &PlaneCurve,
) -> GeomResult<Projectivity> {
    frame_normalize_scaled(p, lp, q, lq, &FrameScales::default())
}

/// [`frame_normalize`] with explicit scalings of the `p` and `q` columns.
pub fn frame_normalize_scaled(
    p: &ProjectivePoint,
    lp: &PlaneCurve,
    q: &ProjectivePoint,
    lq: &PlaneCurve,
    scales: &FrameScales,
) -> GeomResult<Projectivity> {
    if lp.degree() != 1 || lq.degree() != 1 {
        return Err(GeomError::Invalid("frame lines must be lines".into()));
    }
    if p == q {
        return Err(GeomError::Degenerate("p = q".into()));
    }
    if !lp.contains(p) {
        return Err(GeomError::Precondition("p is not on Lp".into()));
    }
    if !lq.contains(q) {
        return Err(GeomError::Precondition("q is not on Lq".into()));
    }
    if lp.contains(q) {
        return Err(GeomError::Degenerate("q lies on Lp".into()));
    }
    if lq.contains(p) {
        return Err(GeomError::Degenerate("p lies on Lq".into()));
    }
    let r = line_meet(lp, lq)?;
    let cols = [r.coords().clone(), p.coords().clone().map(|c| c * scales.p.clone()), q.coords().clone().map(|c| c * scales.q.clone())];
    let m = Matrix::from_rows((0..3).map(|i| (0..3).map(|j| cols[j][i].clone()).collect()).collect());
    Ok(Projectivity::new(m)?.inverse())
}

/// Union of the Galois conjugates of a curve, as a rational form, with the
/// number of conjugates.
pub fn orbit_form(c: &PlaneCurve) -> (Poly<Rational>, usize) {
    if let Some(f) = c.rational_form() {
        return (f, 1);
    }
    let field = c.field().expect("non-rational curve has a field");
    let n = field.degree();
    let theta = FieldElement::generator(&field);
    let mut powers = vec![FieldElement::one()];
    for _ in 1..n {
        let last = powers.last().unwrap().clone();
        powers.push(last * theta.clone());
    }
    // norm of the form: determinant of the multiplication matrix
    let mut m = vec![vec![Poly::<Rational>::zero(3); n]; n];
    for (e, a) in c.form().terms() {
        let a = a.lift_to(&field).expect("coefficients lie in the curve's field");
        let mono = Poly::<Rational>::monomial(3, *e, Rational::one());
        for (j, pw) in powers.iter().enumerate() {
            let col = (a.clone() * pw.clone()).lift_to(&field).expect("same field");
            for (i, v) in col.coords().iter().enumerate() {
                if !v.is_zero() {
                    m[i][j] = &m[i][j] + &mono.scale(v);
                }
            }
        }
    }
    let norm = squarefree_part_form(&bareiss_det(m)).normalized();
    let k = (norm.degree().unwrap_or(0) / c.degree().max(1)) as usize;
    (norm, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64, z: i64) -> ProjectivePoint {
        ProjectivePoint::rational(x, y, z)
    }

    #[test]
    fn canonical_points() {
        let p = ProjectivePoint::new(FieldElement::from_i64(2), FieldElement::from_i64(4), FieldElement::from_i64(2)).unwrap();
        assert_eq!(p, pt(1, 2, 1));
        assert_eq!(p.to_string(), "(1:2:1)");
        assert_eq!(ProjectivePoint::parse("0:1:0").unwrap(), pt(0, 1, 0));
        assert!(ProjectivePoint::parse("0:0:0").is_err());
    }

    #[test]
    fn contains_point_at_infinity() {
        let c = PlaneCurve::parse("z^3*y - x^4").unwrap();
        assert!(c.contains(&pt(0, 1, 0)));
    }

    #[test]
    fn line_through_two_points() {
        let l = line_through(&pt(0, 0, 1), &pt(0, 1, 0)).unwrap();
        assert_eq!(l, PlaneCurve::parse("x").unwrap());
        assert!(line_through(&pt(1, 1, 1), &pt(2, 2, 2)).is_err());
    }

    #[test]
    fn visibly_reducible_is_not_integral() {
        let c = PlaneCurve::parse("(y*z - x^2)*y").unwrap();
        assert!(!is_integral(&c, &Budget::default()).unwrap().integral);
        let q = PlaneCurve::parse("y*z - x^2").unwrap();
        assert!(is_integral(&q, &Budget::default()).unwrap().integral);
    }

    #[test]
    fn swap_and_round_trip() {
        let t = Projectivity::from_i64([[0, 1, 0], [1, 0, 0], [0, 0, 1]]).unwrap();
        let c = PlaneCurve::parse("y*z - x^2").unwrap();
        assert_eq!(t.apply_curve(&c), PlaneCurve::parse("x*z - y^2").unwrap());
        let s = Projectivity::from_i64([[1, 2, 0], [0, 1, 3], [1, 0, 1]]).unwrap();
        assert_eq!(s.apply_curve(&s.inverse().apply_curve(&c)), c);
        assert_eq!(Projectivity::identity().apply_curve(&c), c);
    }

    #[test]
    fn incidence_is_preserved() {
        let s = Projectivity::from_i64([[1, 2, 0], [0, 1, 3], [1, 0, 1]]).unwrap();
        let c = PlaneCurve::parse("y*z - x^2").unwrap();
        let p = pt(2, 4, 1);
        assert!(c.contains(&p));
        assert!(s.apply_curve(&c).contains(&s.apply_point(&p)));
    }

    #[test]
    fn frame_of_normalized_input_is_diagonal() {
        let t = frame_normalize(&pt(0, 1, 0), &PlaneCurve::parse("z").unwrap(), &pt(0, 0, 1), &PlaneCurve::parse("y").unwrap())
            .unwrap();
        let m = t.matrix();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!(m[(i, j)].is_zero());
                }
            }
        }
    }

    #[test]
    fn frame_rejects_coincident_points() {
        let l = PlaneCurve::parse("x").unwrap();
        assert!(frame_normalize(&pt(0, 1, 0), &l, &pt(0, 1, 0), &PlaneCurve::parse("z").unwrap()).is_err());
    }
}
