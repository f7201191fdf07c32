//! Hyper-bitangent lines by the pencil method: every such line passes
//! through a node, so for each node we parametrize the lines through it and
//! ask that the remaining intersection collapses to one point.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use super::{sort_certificates, Configuration, HypCertificate};
use crate::error::{GeomError, GeomResult};
use crate::exactalg::{adjoin_root, factor_over, Budget, FieldElement, Matrix, Scalar, UniPoly};
use crate::localgeo::local_intersection_multiplicity;
use crate::projplane::{field_of, line_through, orbit_form, ProjectivePoint};
use crate::KPoly;

/// Structural class of a hyper-bitangent line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineClass {
    /// Joins two nodes.
    TwoNodes,
    /// Passes through a node and is tangent to component `component`
    /// (0-based) at its other point.
    NodeTangent { component: usize },
    /// Tangent to component `component` at a node.
    TangentAtNode { component: usize },
    Other,
}

impl LineClass {
    pub fn describe(&self) -> String {
        match self {
            LineClass::TwoNodes => "line through two nodes".into(),
            LineClass::NodeTangent { component } => format!("tangent to B{} through a node", component + 1),
            LineClass::TangentAtNode { component } => format!("tangent to B{} at a node", component + 1),
            LineClass::Other => "other".into(),
        }
    }
}

/// All lines through a node meet the rest of the curve in one point.
#[derive(Clone, Debug)]
pub struct LineFamily {
    pub node: ProjectivePoint,
}

#[derive(Clone, Debug, Default)]
pub struct LineSearch {
    pub certificates: Vec<HypCertificate>,
    /// Parallel to `certificates`.
    pub classes: Vec<LineClass>,
    pub families: Vec<LineFamily>,
    /// Nodes whose pencil could not be solved within the budget.
    pub incomplete: Vec<String>,
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

/// Parameters `t` of the special lines through `x` (toward `a + t b`),
/// or `None` if every line of the pencil qualifies.
fn pencil_conditions(union: &KPoly, x: &ProjectivePoint, a: &[FieldElement; 3], b: &[FieldElement; 3]) -> Option<Vec<UniPoly<FieldElement>>> {
    let (s, r, t) = (KPoly::var(3, 0), KPoly::var(3, 1), KPoly::var(3, 2));
    let images: Vec<KPoly> = (0..3)
        .map(|j| {
            let dir = &KPoly::constant(3, a[j].clone()) + &t.scale(&b[j]);
            &s.scale(&x.coords()[j]) + &(&r * &dir)
        })
        .collect();
    let p = union.compose(&images);
    let deg = union.degree().unwrap() as usize;
    let mut coeffs = vec![UniPoly::<FieldElement>::zero(); deg + 1];
    for (e, c) in p.terms() {
        let mono = UniPoly::monomial(c.clone(), e[2] as usize);
        coeffs[e[1] as usize] = &coeffs[e[1] as usize] + &mono;
    }
    let k0 = coeffs.iter().position(|c| !c.is_zero()).expect("nonzero restriction");
    let q: Vec<UniPoly<FieldElement>> = coeffs[k0..].to_vec();
    let e = q.len() - 1;
    if e <= 1 {
        return None;
    }
    // pure power test: the scaled coefficients form a geometric sequence
    let pcoef: Vec<UniPoly<FieldElement>> =
        q.iter().enumerate().map(|(i, c)| c.scale(&FieldElement::from_i64(binomial(e, i)).inv())).collect();
    let mut g: UniPoly<FieldElement> = UniPoly::zero();
    for i in 0..e {
        for j in i + 1..e {
            let minor = &(&pcoef[i] * &pcoef[j + 1]) - &(&pcoef[i + 1] * &pcoef[j]);
            g = g.gcd(&minor);
        }
    }
    if g.is_zero() {
        return None;
    }
    Some(vec![g, q[0].clone()])
}

/// Number of distinct points in which the line through `x` toward `w`
/// meets the curve, or `None` if the line is a component.
fn points_on_line(union: &KPoly, x: &ProjectivePoint, w: &[FieldElement]) -> Option<usize> {
    let s = KPoly::var(3, 0);
    let images: Vec<KPoly> =
        (0..3).map(|j| &s.scale(&x.coords()[j]) + &KPoly::constant(3, w[j].clone())).collect();
    let u = union.compose(&images).to_univariate(0).expect("univariate restriction");
    let deg = u.degree()?;
    let at_x = deg < union.degree().unwrap() as usize;
    Some(u.squarefree_part().degree().unwrap() + at_x as usize)
}

fn classify(cert: &HypCertificate, cfg: &Configuration, budget: &Budget) -> GeomResult<LineClass> {
    let on = |p: &ProjectivePoint| cfg.components.iter().filter(|c| c.contains(p)).count();
    let contacts = &cert.report.contacts;
    let nodes = contacts.iter().filter(|c| on(&c.point) >= 2).count();
    if nodes == 2 || (nodes == 1 && contacts.len() == 1 && contacts[0].conjugates == 2) {
        return Ok(LineClass::TwoNodes);
    }
    if nodes == 1 {
        if let Some(other) = contacts.iter().find(|c| on(&c.point) == 1) {
            let k = cfg.components.iter().position(|c| c.contains(&other.point)).unwrap();
            if local_intersection_multiplicity(&cert.curve, &cfg.components[k], &other.point, budget)? >= 2 {
                return Ok(LineClass::NodeTangent { component: k });
            }
        }
        let node = contacts.iter().find(|c| on(&c.point) >= 2).unwrap();
        for (k, comp) in cfg.components.iter().enumerate() {
            if comp.contains(&node.point) && local_intersection_multiplicity(&cert.curve, comp, &node.point, budget)? >= 2 {
                return Ok(LineClass::TangentAtNode { component: k });
            }
        }
    }
    Ok(LineClass::Other)
}

/// Complete list of hyper-bitangent lines to a configuration.
pub fn hyp1_lines(cfg: &Configuration, budget: &Budget) -> GeomResult<LineSearch> {
    let mut out = LineSearch::default();
    let mut seen = BTreeSet::new();
    let e = |i: usize| {
        let mut v = [FieldElement::zero(), FieldElement::zero(), FieldElement::zero()];
        v[i] = FieldElement::one();
        v
    };
    for node in &cfg.nodes {
        let x = &node.point;
        let (a, b) = [(0, 1), (0, 2), (1, 2)]
            .into_iter()
            .map(|(i, j)| (e(i), e(j)))
            .find(|(a, b)| {
                let m = Matrix::from_rows(vec![x.coords().to_vec(), a.to_vec(), b.to_vec()]);
                !m.determinant().is_zero()
            })
            .expect("a point and two basis vectors span");
        let Some(conds) = pencil_conditions(cfg.union.form(), x, &a, &b) else {
            out.families.push(LineFamily { node: x.clone() });
            continue;
        };
        let field = field_of(x.coords().iter());
        let mut directions = vec![b.to_vec()];
        let mut failed = None;
        for g in conds {
            if g.degree().unwrap_or(0) == 0 {
                continue;
            }
            let factors = match factor_over(field.as_ref(), &g, budget) {
                Ok(f) => f,
                Err(e) => {
                    failed = Some(e.to_string());
                    break;
                }
            };
            for (h, _) in factors {
                let root = match adjoin_root(field.as_ref(), &h, budget) {
                    Ok(ext) => ext.root,
                    Err(e) => {
                        failed = Some(e.to_string());
                        break;
                    }
                };
                directions.push((0..3).map(|j| a[j].clone() + root.clone() * b[j].clone()).collect());
            }
        }
        if let Some(msg) = failed {
            out.incomplete.push(format!("pencil at {x}: {msg}"));
        }
        for w in directions {
            if points_on_line(cfg.union.form(), x, &w).is_some_and(|n| n > 2) {
                continue;
            }
            let line = line_through(x, &ProjectivePoint::from_vec(w)?)?;
            let (orbit, _) = orbit_form(&line);
            if !seen.insert(orbit.to_string()) {
                continue;
            }
            match HypCertificate::verify(&line, cfg, "pencil through a node", budget) {
                Ok(Some(c)) => out.certificates.push(c),
                Ok(None) => {}
                Err(e) if e.is_budget() => out.incomplete.push(format!("verification of {line}: {e}")),
                Err(e) => return Err(e),
            }
        }
    }
    sort_certificates(&mut out.certificates);
    for c in out.certificates.iter_mut() {
        let class = classify(c, cfg, budget)?;
        c.origin = class.describe();
        out.classes.push(class);
    }
    if out.certificates.iter().any(|c| c.degree != 1) {
        return Err(GeomError::Internal("line search produced a non-line".into()));
    }
    Ok(out)
}
