//! Positive-dimensional families: the pencil for a triangle of lines and
//! the `Q_b` families.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Configuration, HypCertificate};
use crate::error::{GeomError, GeomResult};
use crate::exactalg::{solve_linear, Budget, FieldElement, Matrix, Poly, Scalar};
use crate::localgeo::{geometric_genus, intersection_points, point_type, singular_points, PointType};
use crate::projplane::{is_integral, line_meet, PlaneCurve, ProjectivePoint};
use crate::tangency::tangency_report;
use crate::{KPoly, Rational};

/// One sampled member of a family.
#[derive(Clone, Debug)]
pub struct FamilyCheck {
    pub curve: PlaneCurve,
    pub integral: bool,
    pub verified: bool,
}

/// Degree-`d` curves with a `(d-1, d)`-point at `B1 ∩ B2` tangent to `B2`
/// and meeting `B3` only at `B1 ∩ B3`.
#[derive(Clone, Debug)]
pub struct TrianglePencil {
    pub degree: u32,
    pub basis: Vec<KPoly>,
    pub conditions: usize,
    pub projective_dim: usize,
    pub samples: Vec<FamilyCheck>,
}

impl TrianglePencil {
    pub fn verified(&self) -> usize {
        self.samples.iter().filter(|s| s.verified).count()
    }
}

fn monomials(d: u32) -> Vec<[u32; 3]> {
    let mut v = Vec::new();
    for i in (0..=d).rev() {
        for j in (0..=d - i).rev() {
            v.push([i, j, d - i - j]);
        }
    }
    v
}

/// Builds the linear system, solves it and samples `samples` verified
/// integral members.
pub fn triangle_pencil(cfg: &Configuration, d: u32, samples: usize, budget: &Budget) -> GeomResult<TrianglePencil> {
    if cfg.components.len() != 3 || cfg.degrees() != vec![1, 1, 1] {
        return Err(GeomError::Precondition("a triangle of three lines is required".into()));
    }
    if d == 0 {
        return Err(GeomError::Invalid("degree must be positive".into()));
    }
    let [b1, b2, b3] = [&cfg.components[0], &cfg.components[1], &cfg.components[2]];
    let p = line_meet(b1, b2)?;
    let q = line_meet(b1, b3)?;
    let r = line_meet(b2, b3)?;
    if b3.contains(&p) {
        return Err(GeomError::Degenerate("concurrent lines".into()));
    }
    // frame: r -> (1:0:0), q -> (0:1:0), p -> (0:0:1); B2 becomes y = 0 and B3 becomes z = 0
    let cols = [r.coords().clone(), q.coords().clone(), p.coords().clone()];
    let m = Matrix::from_rows((0..3).map(|i| (0..3).map(|j| cols[j][i].clone()).collect()).collect());
    let basis = monomials(d);
    let images: Vec<KPoly> = basis.iter().map(|e| crate::projplane::substitute_linear(&Poly::monomial(3, *e, FieldElement::one()), &m)).collect();
    // coefficients that must vanish in the frame
    let vanishing: Vec<[u32; 3]> = monomials(d)
        .into_iter()
        .filter(|&[i, _, k]| k >= 2 || (k == 1 && i != 0) || (k == 0 && i < d))
        .collect();
    let rows: Vec<Vec<FieldElement>> = vanishing.iter().map(|e| images.iter().map(|f| f.coeff(e)).collect()).collect();
    let a = Matrix::from_rows(rows);
    let sol = solve_linear(&a, &vec![FieldElement::zero(); vanishing.len()]);
    let kernel = sol.kernel;
    if kernel.len() < 2 {
        return Err(GeomError::Internal(format!("family has affine dimension {}", kernel.len())));
    }
    let to_form = |v: &[FieldElement]| -> KPoly {
        Poly::from_terms(3, basis.iter().zip(v).filter(|(_, c)| !c.is_zero()).map(|(e, c)| (*e, c.clone())))
    };
    let forms: Vec<KPoly> = kernel.iter().map(|v| to_form(v)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7219 + d as u64);
    let mut out = Vec::new();
    for _ in 0..60 {
        if out.iter().filter(|s: &&FamilyCheck| s.verified).count() >= samples {
            break;
        }
        let mut f = KPoly::zero(3);
        for g in &forms {
            let c: i64 = rng.gen_range(-4..=4);
            f = &f + &g.scale(&FieldElement::from_i64(c));
        }
        if f.is_zero() {
            continue;
        }
        let curve = PlaneCurve::new(f)?;
        if out.iter().any(|s: &FamilyCheck| s.curve == curve) {
            continue;
        }
        let integral = curve.is_squarefree() && is_integral(&curve, budget)?.integral;
        let verified = integral && HypCertificate::verify(&curve, cfg, "triangle pencil", budget)?.is_some();
        if integral {
            out.push(FamilyCheck { curve, integral, verified });
        }
    }
    Ok(TrianglePencil { degree: d, conditions: vanishing.len(), projective_dim: kernel.len() - 1, basis: forms, samples: out })
}

/// `Q_b : z^{b-1} y = x^b`.
pub fn q_b(b: u32) -> PlaneCurve {
    PlaneCurve::new(&Poly::monomial(3, [0, 1, b - 1], FieldElement::one()) - &Poly::monomial(3, [b, 0, 0], FieldElement::one()))
        .expect("nonzero form")
}

/// `C_t : y z^{d-1} - x^b z^{d-b} + t y^d`.
pub fn c_t(b: u32, d: u32, t: &Rational) -> GeomResult<PlaneCurve> {
    if d < b {
        return Err(GeomError::Invalid(format!("d = {d} < b = {b}")));
    }
    let f = &(&Poly::monomial(3, [0, 1, d - 1], FieldElement::one()) - &Poly::monomial(3, [b, 0, d - b], FieldElement::one()))
        + &Poly::monomial(3, [0, d, 0], FieldElement::rational(t.clone()));
    PlaneCurve::new(f)
}

/// `R_t : z^{b-1} y = t x^b`; `t = 0` is not integral and `t = 1` is `Q_b`.
pub fn r_t(b: u32, t: &Rational) -> GeomResult<PlaneCurve> {
    if t.is_zero() {
        return Err(GeomError::Invalid("R_0 is not integral".into()));
    }
    if t.is_one() {
        return Err(GeomError::Invalid("R_1 is Q_b itself".into()));
    }
    PlaneCurve::new(
        &Poly::monomial(3, [0, 1, b - 1], FieldElement::one())
            - &Poly::monomial(3, [b, 0, 0], FieldElement::rational(t.clone())),
    )
}

#[derive(Clone, Debug)]
pub struct CtCheck {
    pub curve: PlaneCurve,
    pub integral: bool,
    pub smooth: bool,
    pub genus: u64,
    pub hypertangent_at_q0: bool,
}

#[derive(Clone, Debug)]
pub struct RtCheck {
    pub curve: PlaneCurve,
    pub integral: bool,
    pub genus: u64,
    pub singular: Vec<(ProjectivePoint, Option<PointType>)>,
    pub split: Vec<(ProjectivePoint, u64)>,
    pub hyper_bitangent: bool,
}

#[derive(Clone, Debug)]
pub struct QbEntry {
    pub t: Rational,
    pub ct: Result<CtCheck, String>,
    pub rt: Result<RtCheck, String>,
}

#[derive(Clone, Debug)]
pub struct QbReport {
    pub b: u32,
    pub d: u32,
    pub entries: Vec<QbEntry>,
}

impl QbEntry {
    pub fn ct_pass(&self) -> bool {
        matches!(&self.ct, Ok(c) if c.integral && c.smooth && c.hypertangent_at_q0)
    }

    pub fn rt_pass(&self, b: u32) -> bool {
        let q0 = ProjectivePoint::rational(0, 0, 1);
        let qi = ProjectivePoint::rational(0, 1, 0);
        match &self.rt {
            Ok(r) => {
                r.integral
                    && r.genus == 0
                    && r.hyper_bitangent
                    && r.singular == vec![(qi.clone(), Some(PointType::new(b - 1, b)))]
                    && {
                        let mut s = r.split.clone();
                        s.sort_by(|a, b| a.1.cmp(&b.1));
                        s == vec![(q0, b as u64), (qi, (b * (b - 1)) as u64)]
                    }
            }
            Err(_) => false,
        }
    }
}

fn check_ct(b: u32, d: u32, t: &Rational, budget: &Budget) -> GeomResult<CtCheck> {
    let q = q_b(b);
    let c = c_t(b, d, t)?;
    let integral = is_integral(&c, budget)?.integral;
    let smooth = singular_points(&c, budget)?.is_empty();
    let genus = geometric_genus(&c, budget)?;
    let rep = tangency_report(&c, &q, budget)?;
    let hypertangent_at_q0 = rep.hypertangent && rep.contacts[0].point == ProjectivePoint::rational(0, 0, 1);
    Ok(CtCheck { curve: c, integral, smooth, genus, hypertangent_at_q0 })
}

fn check_rt(b: u32, t: &Rational, budget: &Budget) -> GeomResult<RtCheck> {
    let q = q_b(b);
    let r = r_t(b, t)?;
    let integral = is_integral(&r, budget)?.integral;
    let genus = geometric_genus(&r, budget)?;
    let mut singular = Vec::new();
    for s in singular_points(&r, budget)? {
        let ty = point_type(&r, &s.point, budget).ok();
        singular.push((s.point, ty));
    }
    let split = intersection_points(&r, &q, budget)?.into_iter().map(|p| (p.point, p.multiplicity)).collect();
    let hyper_bitangent = tangency_report(&r, &q, budget)?.hyper_bitangent;
    Ok(RtCheck { curve: r, integral, genus, singular, split, hyper_bitangent })
}

/// Checks the `C_t` and `R_t` families against `Q_b` for the sampled `t`.
pub fn verify_qb_families(b: u32, d: u32, ts: &[Rational], budget: &Budget) -> GeomResult<QbReport> {
    if b < 4 {
        return Err(GeomError::Invalid(format!("b = {b} < 4")));
    }
    if d < b {
        return Err(GeomError::Invalid(format!("d = {d} < b = {b}")));
    }
    let mut entries = Vec::new();
    for t in ts {
        let ct = if t.is_zero() { Err("t = 0 is excluded".to_string()) } else { check_ct(b, d, t, budget).map_err(|e| e.to_string()) };
        let rt = check_rt(b, t, budget).map_err(|e| e.to_string());
        entries.push(QbEntry { t: t.clone(), ct, rt });
    }
    Ok(QbReport { b, d, entries })
}
