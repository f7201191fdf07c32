//! Global tangency predicates, flexes and the mirror check for
//! hypertangent pairs.

use std::fmt;


use crate::error::{GeomError, GeomResult};
use crate::exactalg::Budget;
use crate::localgeo::{
    branch_count, delta_invariant, intersection_points, intersection_support, multiplicity_at, point_type, tangent_line,
    Contact, PointType,
};
use crate::projplane::{PlaneCurve, ProjectivePoint};
use crate::{KPoly, Rational};

/// One Galois orbit of points of `C ∩ B`.
#[derive(Clone, Debug)]
pub struct ContactPoint {
    pub point: ProjectivePoint,
    pub conjugates: usize,
    /// `(C . B)` at the representative.
    pub multiplicity: u64,
    /// Branches of the subject through the representative.
    pub branches: u64,
    pub subject_type: Option<PointType>,
    pub base_type: Option<PointType>,
}

#[derive(Clone, Debug)]
pub struct TangencyReport {
    pub subject: PlaneCurve,
    pub base: PlaneCurve,
    pub contacts: Vec<ContactPoint>,
    pub hypertangent: bool,
    pub hyper_bitangent: bool,
    /// Sum of multiplicities over all conjugates, equal to `deg C * deg B`.
    pub bezout_total: u64,
}

impl TangencyReport {
    /// `|nu_C^{-1}(C ∩ B)|` over the algebraic closure.
    pub fn branch_total(&self) -> u64 {
        self.contacts.iter().map(|c| c.branches * c.conjugates as u64).sum()
    }
}

impl fmt::Display for TangencyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "subject: {}", self.subject)?;
        writeln!(f, "base: {}", self.base)?;
        for c in &self.contacts {
            write!(f, "  {} x{}: I = {}, branches = {}", c.point, c.conjugates, c.multiplicity, c.branches)?;
            if let Some(t) = c.subject_type {
                write!(f, ", subject type {t}")?;
            }
            if let Some(t) = c.base_type {
                write!(f, ", base type {t}")?;
            }
            writeln!(f)?;
        }
        write!(f, "hypertangent: {}, hyper-bitangent: {}, total {}", self.hypertangent, self.hyper_bitangent, self.bezout_total)
    }
}

fn unibranched_type(c: &PlaneCurve, p: &ProjectivePoint, branches: u64, budget: &Budget) -> GeomResult<Option<PointType>> {
    if branches != 1 {
        return Ok(None);
    }
    if c.degree() == 1 {
        return Ok(Some(PointType { m: 1, n: Contact::Infinite }));
    }
    point_type(c, p, budget).map(Some)
}

/// Full contact analysis of `C` against `B`.
pub fn tangency_report(c: &PlaneCurve, b: &PlaneCurve, budget: &Budget) -> GeomResult<TangencyReport> {
    if !c.is_squarefree() || !b.is_squarefree() {
        return Err(GeomError::NotSquarefree);
    }
    let mut contacts = Vec::new();
    for ip in intersection_points(c, b, budget)? {
        let branches = branch_count(c, &ip.point, budget)?;
        let base_branches = branch_count(b, &ip.point, budget)?;
        contacts.push(ContactPoint {
            subject_type: unibranched_type(c, &ip.point, branches, budget)?,
            base_type: unibranched_type(b, &ip.point, base_branches, budget)?,
            point: ip.point,
            conjugates: ip.conjugates,
            multiplicity: ip.multiplicity,
            branches,
        });
    }
    let bezout_total = contacts.iter().map(|c| c.multiplicity * c.conjugates as u64).sum();
    let mut r = TangencyReport {
        subject: c.clone(),
        base: b.clone(),
        contacts,
        hypertangent: false,
        hyper_bitangent: false,
        bezout_total,
    };
    let total = r.branch_total();
    r.hypertangent = total == 1;
    r.hyper_bitangent = total <= 2;
    Ok(r)
}

pub fn is_hypertangent(c: &PlaneCurve, b: &PlaneCurve, budget: &Budget) -> GeomResult<TangencyReport> {
    tangency_report(c, b, budget)
}

pub fn is_hyper_bitangent(c: &PlaneCurve, b: &PlaneCurve, budget: &Budget) -> GeomResult<TangencyReport> {
    tangency_report(c, b, budget)
}

/// Outcome of checking the mirror statement at a hypertangency point.
#[derive(Clone, Debug)]
pub struct MirrorRecord {
    pub l: u32,
    pub m: u32,
    pub predicted_type: PointType,
    pub observed_type: PointType,
    /// `(m - 1)(deg B deg C - m) / 2`.
    pub delta_bound: Rational,
    pub delta_observed: u64,
    pub pass: bool,
}

impl fmt::Display for MirrorRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "l = {}, m = {}, predicted {}, observed {}, delta {} >= {}: {}",
            self.l,
            self.m,
            self.predicted_type,
            self.observed_type,
            self.delta_observed,
            self.delta_bound,
            if self.pass { "pass" } else { "FAIL" }
        )
    }
}

/// Checks that a `(1, l)` point of `B` meeting `C` only there is an
/// `(m, lm)` point of `C` with `delta_C(q) >= (m-1)(deg B deg C - m)/2`.
pub fn mirror_check(c: &PlaneCurve, b: &PlaneCurve, q: &ProjectivePoint, budget: &Budget) -> GeomResult<MirrorRecord> {
    let pre = |s: String| Err(GeomError::Precondition(s));
    if b.degree() < 2 {
        return pre(format!("deg B = {} < 2", b.degree()));
    }
    if c.degree() < 2 {
        return pre(format!("deg C = {} < 2", c.degree()));
    }
    if !b.contains(q) || !c.contains(q) {
        return pre(format!("{q} is not on both curves"));
    }
    let support = intersection_support(c, b, budget)?;
    if support.len() != 1 || support[0].1 != 1 || support[0].0 != *q {
        let n: usize = support.iter().map(|s| s.1).sum();
        return pre(format!("B and C meet in {n} points, not only in {q}"));
    }
    if branch_count(b, q, budget)? != 1 {
        return pre(format!("{q} is not unibranched on B"));
    }
    if branch_count(c, q, budget)? != 1 {
        return pre(format!("{q} is not unibranched on C"));
    }
    if multiplicity_at(b, q)? != 1 {
        return pre(format!("{q} is singular on B"));
    }
    let l = match point_type(b, q, budget)?.n {
        Contact::Finite(n) => n,
        Contact::Infinite => return pre("B contains its tangent line at q".into()),
    };
    let observed_type = point_type(c, q, budget)?;
    let m = observed_type.m;
    let predicted_type = PointType::new(m, l * m);
    let delta_observed = delta_invariant(c, q, budget)?;
    let n = (b.degree() * c.degree()) as i64;
    let delta_bound = Rational::new(((m as i64 - 1) * (n - m as i64)).into(), 2.into());
    let pass = observed_type == predicted_type && Rational::from_integer((delta_observed as i64).into()) >= delta_bound;
    Ok(MirrorRecord { l, m, predicted_type, observed_type, delta_bound, delta_observed, pass })
}

/// Determinant of the matrix of second partial derivatives.
pub fn hessian(c: &PlaneCurve) -> KPoly {
    let f = c.form();
    let h: Vec<Vec<KPoly>> = (0..3).map(|i| (0..3).map(|j| f.derivative(i).derivative(j)).collect()).collect();
    let minor = |a: usize, b: usize, c: usize, d: usize| &(&h[1][a] * &h[2][b]) - &(&h[1][c] * &h[2][d]);
    let t0 = &h[0][0] * &minor(1, 2, 2, 1);
    let t1 = &h[0][1] * &minor(0, 2, 2, 0);
    let t2 = &h[0][2] * &minor(0, 1, 1, 0);
    &(&t0 - &t1) + &t2
}

/// A flex: smooth point with tangent contact `l >= 3`.
#[derive(Clone, Debug)]
pub struct Flex {
    pub point: ProjectivePoint,
    pub conjugates: usize,
    pub contact: u32,
    pub tangent: PlaneCurve,
}

/// Flexes of a curve of degree at least 3; conics and lines have none.
pub fn flexes(c: &PlaneCurve, budget: &Budget) -> GeomResult<Vec<Flex>> {
    if c.degree() < 3 {
        return Ok(vec![]);
    }
    let h = hessian(c);
    if h.is_zero() {
        return Err(GeomError::Precondition("Hessian vanishes identically: curve is a union of lines".into()));
    }
    let hc = PlaneCurve::new(h)?;
    let mut out = Vec::new();
    for (point, conjugates) in intersection_support(c, &hc, budget)? {
        if multiplicity_at(c, &point)? != 1 {
            continue;
        }
        let contact = match point_type(c, &point, budget)?.n {
            Contact::Finite(n) => n,
            Contact::Infinite => continue,
        };
        if contact >= 3 {
            out.push(Flex { tangent: tangent_line(c, &point, budget)?, point, conjugates, contact });
        }
    }
    let count: usize = out.iter().map(|f| f.conjugates).sum();
    let d = c.degree() as usize;
    if count > 3 * d * (d - 2) {
        return Err(GeomError::Internal(format!("{count} flexes exceed 3d(d-2)")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(s: &str) -> PlaneCurve {
        PlaneCurve::parse(s).unwrap()
    }

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn hypertangent_examples() {
        let q4 = curve("z^3*y - x^4");
        let r = is_hypertangent(&curve("y"), &q4, &b()).unwrap();
        assert!(r.hypertangent);
        assert_eq!(r.contacts[0].point, ProjectivePoint::rational(0, 0, 1));
        let ct = curve("y*z^4 - x^4*z + y^5");
        let r = is_hypertangent(&ct, &q4, &b()).unwrap();
        assert!(r.hypertangent);
        assert_eq!(r.bezout_total, 20);
        let r = is_hypertangent(&curve("x - 2*z"), &curve("y*z - x^2 + z^2"), &b()).unwrap();
        assert!(!r.hypertangent);
        assert!(r.hyper_bitangent);
    }

    #[test]
    fn hyper_bitangent_examples() {
        let r = is_hyper_bitangent(&curve("z^3*y - 2*x^4"), &curve("z^3*y - x^4"), &b()).unwrap();
        assert!(r.hyper_bitangent && !r.hypertangent);
        let pts: Vec<_> = r.contacts.iter().map(|c| c.point.clone()).collect();
        assert_eq!(pts, vec![ProjectivePoint::rational(0, 1, 0), ProjectivePoint::rational(0, 0, 1)]);
        let b3 = curve("z*y - x^2 + y^2");
        let config = curve("x*z*(z*y - x^2 + y^2)");
        assert!(matches!(is_hyper_bitangent(&b3, &config, &b()), Err(GeomError::CommonComponent)));
        let r = is_hyper_bitangent(&curve("z*y - x^2"), &config, &b()).unwrap();
        assert!(r.hyper_bitangent);
        assert_eq!(r.contacts.len(), 2);
    }

    #[test]
    fn mirror_examples() {
        let r = mirror_check(&curve("(y*z - x^2)^3*z + y^7"), &curve("y*z - x^2"), &ProjectivePoint::rational(0, 0, 1), &b())
            .unwrap();
        assert_eq!((r.l, r.m), (2, 3));
        assert_eq!(r.observed_type, PointType::new(3, 6));
        assert_eq!(r.delta_bound, Rational::from_integer(11.into()));
        assert!(r.delta_observed >= 11);
        assert!(r.pass);
        let e = mirror_check(&curve("y*z - 2*x^2 + z^2"), &curve("y*z - x^2"), &ProjectivePoint::rational(1, 1, 1), &b());
        assert!(matches!(e, Err(GeomError::Precondition(_))));
    }

    #[test]
    fn hessian_of_fermat() {
        let h = hessian(&curve("x^3 + y^3 + z^3"));
        assert_eq!(PlaneCurve::new(h).unwrap(), curve("x*y*z"));
    }

    #[test]
    fn flex_examples() {
        let f = flexes(&curve("x^3 + y^3 + z^3"), &b()).unwrap();
        assert_eq!(f.iter().map(|f| f.conjugates).sum::<usize>(), 9);
        assert!(f.iter().all(|f| f.contact == 3));
        assert!(flexes(&curve("y*z - x^2"), &b()).unwrap().is_empty());
        let f = flexes(&curve("y^2*z - x^3"), &b()).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].point, ProjectivePoint::rational(0, 1, 0));
        assert_eq!(f[0].contact, 3);
        let f = flexes(&curve("y*z^3 - x^4"), &b()).unwrap();
        assert!(f.iter().any(|f| f.contact == 4));
    }
}
