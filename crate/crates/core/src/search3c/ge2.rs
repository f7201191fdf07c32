//! Curves of degree at least two hyper-bitangent to a three-component
//! configuration with `b1 = 1`, `b2 <= 2`. Each candidate has a
//! `(d-1, d)`-point at a node `p` of `B1 ∩ B2` and is the curve
//! `Y Z^{d-1} = c X^d` in a frame adapted to `p` and a node `q` on `B3`.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{sort_certificates, Configuration, HypCertificate, Node};
use crate::error::{GeomError, GeomResult};
use crate::exactalg::{adjoin_root, factor_over, Budget, FieldElement, Poly, Scalar};
use crate::localgeo::{multiplicity_at, point_type, tangent_line, Contact, PointType};
use crate::projplane::{frame_normalize_scaled, orbit_form, FrameScales, PlaneCurve, ProjectivePoint};
use crate::KPoly;

#[derive(Clone, Debug, Default)]
pub struct Ge2Search {
    pub certificates: Vec<HypCertificate>,
    /// Candidates built and rejected by verification.
    pub refuted: Vec<PlaneCurve>,
    /// Nodes of `B3` skipped because `B3` is singular there.
    pub skipped_singular: Vec<ProjectivePoint>,
    /// Pairs for which no candidate could be formed, with the reason.
    pub notes: Vec<String>,
    pub bound: usize,
}

/// `(p, q)` pairs over a common field, one per Galois orbit of pairs.
fn pair_orbits(p: &Node, q: &Node, budget: &Budget) -> GeomResult<Vec<(ProjectivePoint, ProjectivePoint)>> {
    let (fp, fq) = (p.point.field(), q.point.field());
    let Some(fq) = fq else { return Ok(vec![(p.point.clone(), q.point.clone())]) };
    let Some(fp) = fp else { return Ok(vec![(p.point.clone(), q.point.clone())]) };
    let mq = fq.minpoly().map(|c| FieldElement::rational(c.clone()));
    let mut out = Vec::new();
    for (h, _) in factor_over(Some(&fp), &mq, budget)? {
        let ext = adjoin_root(Some(&fp), &h, budget)?;
        let target = ext.field.clone().unwrap_or_else(|| fp.clone());
        let qc: Vec<FieldElement> = q.point.coords().iter().map(|c| c.evaluate_at(&ext.root)).collect();
        let pc: Vec<FieldElement> = p
            .point
            .coords()
            .iter()
            .map(|c| c.lift_to(&target).ok_or_else(|| GeomError::Internal("field embedding lost".into())))
            .collect::<GeomResult<_>>()?;
        out.push((ProjectivePoint::from_vec(pc)?, ProjectivePoint::from_vec(qc)?));
    }
    Ok(out)
}

/// Coefficients of `f = y + sum a_ij x^i y^j`, normalized at the origin.
fn normalized_affine(f: &KPoly) -> GeomResult<KPoly> {
    let a01 = f.coeff(&[0, 1, 0]);
    if a01.is_zero() || !f.coeff(&[1, 0, 0]).is_zero() {
        return Err(GeomError::Internal("frame does not put the tangent on y = 0".into()));
    }
    Ok(f.scale(&a01.inv()))
}

fn random_scales(rng: &mut ChaCha8Rng) -> FrameScales {
    let mut pick = || loop {
        let v: i64 = rng.gen_range(-6..=6);
        if v != 0 {
            return FieldElement::from_i64(v);
        }
    };
    FrameScales { p: pick(), q: pick() }
}

/// The curve through the `(p, q)` frame, or why there is none.
fn candidate(
    b3: &PlaneCurve,
    p: &ProjectivePoint,
    lp: &PlaneCurve,
    q: &ProjectivePoint,
    scales: &FrameScales,
    max_d: Option<u32>,
    budget: &Budget,
) -> GeomResult<Result<(PlaneCurve, u32), String>> {
    let lq = tangent_line(b3, q, budget)?;
    let l = match point_type(b3, q, budget)?.n {
        Contact::Finite(n) => n,
        Contact::Infinite => return Ok(Err("B3 contains its tangent line".into())),
    };
    if max_d.is_some_and(|m| l > m) {
        return Ok(Err(format!("contact order {l} exceeds the admissible degree")));
    }
    let t = match frame_normalize_scaled(p, lp, q, &lq, scales) {
        Ok(t) => t,
        Err(GeomError::Degenerate(s)) | Err(GeomError::Precondition(s)) => return Ok(Err(s)),
        Err(e) => return Err(e),
    };
    let f = normalized_affine(&t.apply_curve(b3).form().dehomogenize(2))?;
    let a = |i: u32, j: u32| f.coeff(&[i, j, 0]);
    let (d, c) = if l >= 3 {
        (l, -a(l, 0))
    } else {
        if a(3, 0) != a(1, 1) * a(2, 0) {
            return Ok(Err("a30 != a11 a20".into()));
        }
        (2, -a(2, 0))
    };
    if c.is_zero() {
        return Ok(Err("c_d = 0".into()));
    }
    // Y Z^{d-1} - c X^d in the frame, pulled back
    let g = &Poly::monomial(3, [0, 1, d - 1], FieldElement::one()) - &Poly::monomial(3, [d, 0, 0], c);
    let curve = t.inverse().apply_curve(&PlaneCurve::new(g)?);
    Ok(Ok((curve, d)))
}

/// Checks the point structure of a certified candidate.
fn structure_ok(c: &PlaneCurve, p: &ProjectivePoint, q: &ProjectivePoint, d: u32, budget: &Budget) -> GeomResult<bool> {
    if multiplicity_at(c, p)? + multiplicity_at(c, q)? != d {
        return Ok(false);
    }
    Ok(point_type(c, p, budget)? == PointType::new(d - 1, d) && point_type(c, q, budget)? == PointType::new(1, d))
}

/// Enumerates `Hyp_{>=2}(B, 2)`; `seed` drives the frame scalings, which do
/// not affect the result.
pub fn hyp_ge2_search(cfg: &Configuration, seed: u64, budget: &Budget) -> GeomResult<Ge2Search> {
    let deg = cfg.degrees();
    if cfg.components.len() != 3 || deg[0] != 1 || deg[1] > 2 || deg[2] < 2 {
        return Err(GeomError::Precondition(format!("degrees {deg:?} are outside (1, <=2, >=2)")));
    }
    let b3 = &cfg.components[2];
    let max_d = if deg[1] == 2 { Some(2) } else { None };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Ge2Search { bound: if deg[1] == 1 { 2 * deg[2] as usize } else { deg[2] as usize }, ..Default::default() };
    let mut seen = BTreeSet::new();
    for pn in cfg.nodes_between(0, 1) {
        for qn in cfg.nodes.iter().filter(|n| n.components.1 == 2) {
            if multiplicity_at(b3, &qn.point)? != 1 {
                out.skipped_singular.push(qn.point.clone());
                continue;
            }
            for (p, q) in pair_orbits(pn, qn, budget)? {
                for k in 0..2 {
                    let lp = tangent_line(&cfg.components[k], &p, budget)?;
                    let scales = random_scales(&mut rng);
                    let (curve, d) = match candidate(b3, &p, &lp, &q, &scales, max_d, budget)? {
                        Ok(x) => x,
                        Err(why) => {
                            out.notes.push(format!("p = {p}, tangent B{}, q = {q}: {why}", k + 1));
                            continue;
                        }
                    };
                    let (orbit, _) = orbit_form(&curve);
                    if !seen.insert(orbit.to_string()) {
                        continue;
                    }
                    let origin = format!("({}, {d})-point at p tangent to B{}, (1, {d})-point at q", d - 1, k + 1);
                    match HypCertificate::verify(&curve, cfg, &origin, budget)? {
                        Some(c) if structure_ok(&curve, &p, &q, d, budget)? => out.certificates.push(c),
                        _ => out.refuted.push(curve),
                    }
                }
            }
        }
    }
    sort_certificates(&mut out.certificates);
    out.refuted.sort_by(|a, b| a.canonical_cmp(b));
    let count: usize = out.certificates.iter().map(|c| c.orbit_size).sum();
    if count > out.bound {
        return Err(GeomError::Internal(format!("{count} curves exceed the bound {}", out.bound)));
    }
    for c in &out.certificates {
        if c.genus != Some(0) {
            return Err(GeomError::Internal(format!("certified curve {} is not rational", c.curve)));
        }
    }
    Ok(out)
}
