//! Enumeration of hyper-bitangent curves to a configuration of three (or
//! more) nodal components.

mod families;
mod ge2;
mod lines;

use std::fmt;

use crate::error::{GeomError, GeomResult};
use crate::exactalg::{gcd_forms, Budget, Poly};
use crate::localgeo::{intersection_points, multiplicity_at};
use crate::projplane::{is_integral, orbit_form, PlaneCurve, ProjectivePoint};
use crate::tangency::{tangency_report, TangencyReport};
use crate::Rational;

pub use families::{c_t, q_b, r_t, triangle_pencil, verify_qb_families, CtCheck, FamilyCheck, QbEntry, QbReport, RtCheck, TrianglePencil};
pub use ge2::{hyp_ge2_search, Ge2Search};
pub use lines::{hyp1_lines, LineClass, LineSearch};

/// A point of `B_i ∩ B_j`, one representative per Galois orbit.
#[derive(Clone, Debug)]
pub struct Node {
    pub point: ProjectivePoint,
    pub conjugates: usize,
    pub components: (usize, usize),
}

/// Reduced curve whose components meet pairwise in nodes, with no triple
/// points. Components are sorted by degree.
#[derive(Clone, Debug)]
pub struct Configuration {
    pub components: Vec<PlaneCurve>,
    pub nodes: Vec<Node>,
    pub union: PlaneCurve,
}

/// A three-component configuration.
pub type ThreeCCurve = Configuration;

impl Configuration {
    pub fn degrees(&self) -> Vec<u32> {
        self.components.iter().map(|c| c.degree()).collect()
    }

    pub fn degree(&self) -> u32 {
        self.union.degree()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.iter().map(|n| n.conjugates).sum()
    }

    pub fn nodes_between(&self, i: usize, j: usize) -> impl Iterator<Item = &Node> {
        let key = (i.min(j), i.max(j));
        self.nodes.iter().filter(move |n| n.components == key)
    }
}

/// Checks that the components are integral and meet pairwise in nodes,
/// with no three through a point.
pub fn validate_configuration(components: &[PlaneCurve], budget: &Budget) -> GeomResult<Configuration> {
    if components.len() < 2 {
        return Err(GeomError::Invalid("a configuration needs at least two components".into()));
    }
    let mut comps = components.to_vec();
    comps.sort_by_key(|c| c.degree());
    for (i, c) in comps.iter().enumerate() {
        if !is_integral(c, budget)?.integral {
            return Err(GeomError::Invalid(format!("component B{} = {c} is not integral", i + 1)));
        }
    }
    let mut nodes = Vec::new();
    for i in 0..comps.len() {
        for j in i + 1..comps.len() {
            if gcd_forms(comps[i].form(), comps[j].form()).degree().unwrap_or(0) > 0 {
                return Err(GeomError::Invalid(format!("B{} and B{} share a component", i + 1, j + 1)));
            }
            for ip in intersection_points(&comps[i], &comps[j], budget)? {
                if ip.multiplicity != 1 {
                    return Err(GeomError::Invalid(format!(
                        "B{} and B{} meet non-transversally at {} (multiplicity {})",
                        i + 1,
                        j + 1,
                        ip.point,
                        ip.multiplicity
                    )));
                }
                for (k, other) in comps.iter().enumerate() {
                    if k != i && k != j && other.contains(&ip.point) {
                        return Err(GeomError::Invalid(format!("triple point at {}", ip.point)));
                    }
                }
                nodes.push(Node { point: ip.point, conjugates: ip.conjugates, components: (i, j) });
            }
        }
    }
    let mut form = Poly::one(3);
    for c in &comps {
        form = &form * c.form();
    }
    Ok(Configuration { components: comps, nodes, union: PlaneCurve::new(form)? })
}

pub fn validate_3c(b1: &PlaneCurve, b2: &PlaneCurve, b3: &PlaneCurve, budget: &Budget) -> GeomResult<ThreeCCurve> {
    validate_configuration(&[b1.clone(), b2.clone(), b3.clone()], budget)
}

/// Reasons for an empty answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum EmptinessReason {
    B1Degree,
    B2Degree,
    B2ConicHighD,
    ComponentsGe5,
    MultiCompHighD,
    SearchExhausted,
}

impl EmptinessReason {
    pub fn code(&self) -> &'static str {
        match self {
            EmptinessReason::B1Degree => "B1_DEGREE",
            EmptinessReason::B2Degree => "B2_DEGREE",
            EmptinessReason::B2ConicHighD => "B2_CONIC_HIGH_D",
            EmptinessReason::ComponentsGe5 => "COMPONENTS_GE_5",
            EmptinessReason::MultiCompHighD => "MULTI_COMP_HIGH_D",
            EmptinessReason::SearchExhausted => "SEARCH_EXHAUSTED",
        }
    }
}

impl fmt::Display for EmptinessReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Clone, Debug)]
pub struct EmptinessCertificate {
    pub reason: EmptinessReason,
    pub detail: String,
    /// Candidates constructed and refuted (only for `SearchExhausted`).
    pub refuted: Vec<PlaneCurve>,
}

impl EmptinessCertificate {
    fn new(reason: EmptinessReason, detail: impl Into<String>) -> Self {
        EmptinessCertificate { reason, detail: detail.into(), refuted: vec![] }
    }
}

#[derive(Clone, Debug)]
pub enum Structural {
    Empty(EmptinessCertificate),
    Proceed,
}

/// Degree obstructions for curves of degree `d >= 2` hyper-bitangent to a
/// three-component configuration.
pub fn structural_emptiness(b: &ThreeCCurve, d: u32) -> Structural {
    let deg = b.degrees();
    if b.components.len() != 3 {
        return Structural::Empty(EmptinessCertificate::new(EmptinessReason::MultiCompHighD, "not three components"));
    }
    if deg[0] > 1 {
        return Structural::Empty(EmptinessCertificate::new(EmptinessReason::B1Degree, format!("b1 = {} > 1", deg[0])));
    }
    if deg[1] > 2 {
        return Structural::Empty(EmptinessCertificate::new(EmptinessReason::B2Degree, format!("b2 = {} > 2", deg[1])));
    }
    if deg[1] == 2 && d >= 3 {
        return Structural::Empty(EmptinessCertificate::new(
            EmptinessReason::B2ConicHighD,
            format!("b2 = 2 and d = {d} >= 3"),
        ));
    }
    Structural::Proceed
}

/// Which set a certified curve belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Hyp1,
    HypD,
}

/// A verified hyper-bitangent curve (one representative per Galois orbit).
#[derive(Clone, Debug)]
pub struct HypCertificate {
    pub curve: PlaneCurve,
    pub degree: u32,
    /// Union of the conjugates of `curve`, over Q.
    pub orbit: Poly<Rational>,
    pub orbit_size: usize,
    pub class: Membership,
    /// How the curve arose, e.g. "line through two nodes".
    pub origin: String,
    pub report: TangencyReport,
    pub genus: Option<u64>,
    pub rational: bool,
}

impl HypCertificate {
    /// Builds and re-verifies a certificate; `None` if the curve is not
    /// hyper-bitangent.
    pub fn verify(curve: &PlaneCurve, b: &Configuration, origin: &str, budget: &Budget) -> GeomResult<Option<Self>> {
        let report = match tangency_report(curve, &b.union, budget) {
            Ok(r) => r,
            Err(GeomError::CommonComponent) => return Ok(None),
            Err(e) => return Err(e),
        };
        if !report.hyper_bitangent {
            return Ok(None);
        }
        let (orbit, orbit_size) = orbit_form(curve);
        let degree = curve.degree();
        let genus = if degree <= 2 { Some(0) } else { crate::localgeo::geometric_genus(curve, budget).ok() };
        Ok(Some(HypCertificate {
            curve: curve.clone(),
            degree,
            orbit,
            orbit_size,
            class: if degree == 1 { Membership::Hyp1 } else { Membership::HypD },
            origin: origin.to_string(),
            report,
            rational: genus == Some(0),
            genus,
        }))
    }

    /// Canonical text of the orbit, used for ordering and comparison.
    pub fn key(&self) -> String {
        format!("{}|{}", self.degree, self.orbit)
    }
}

pub(crate) fn sort_certificates(v: &mut Vec<HypCertificate>) {
    v.sort_by(|a, b| crate::exactalg::cmp_forms(&a.orbit, &b.orbit));
    v.dedup_by(|a, b| a.orbit == b.orbit);
}

/// Everything the search can say about a configuration.
#[derive(Clone, Debug, Default)]
pub struct SearchResult {
    pub lines: Option<LineSearch>,
    pub higher: Option<Ge2Search>,
    pub triangle: Vec<TrianglePencil>,
    pub emptiness: Vec<EmptinessCertificate>,
}

impl SearchResult {
    pub fn certificates(&self) -> Vec<&HypCertificate> {
        let mut v: Vec<&HypCertificate> = Vec::new();
        if let Some(l) = &self.lines {
            v.extend(l.certificates.iter());
        }
        if let Some(h) = &self.higher {
            v.extend(h.certificates.iter());
        }
        v
    }

    /// Number of curves over the algebraic closure.
    pub fn count(&self) -> usize {
        self.certificates().iter().map(|c| c.orbit_size).sum()
    }
}

/// Search options.
#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Restrict to one degree.
    pub degree: Option<u32>,
    /// Seed for the random frame scalings in the higher degree search.
    pub frame_seed: u64,
    pub budget: Budget,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { degree: None, frame_seed: 0, budget: Budget::default() }
    }
}

/// Runs every applicable part of the search on a configuration.
pub fn hyp_search(components: &[PlaneCurve], opts: &SearchOptions) -> GeomResult<SearchResult> {
    let budget = &opts.budget;
    let cfg = validate_configuration(components, budget)?;
    let mut out = SearchResult::default();
    let wants = |d: u32| opts.degree.map_or(true, |q| q == d);
    if cfg.components.len() >= 4 {
        let (lines, empt) = multi_component_check(&cfg, opts.degree, budget)?;
        out.lines = lines;
        out.emptiness = empt;
        return Ok(out);
    }
    if cfg.components.len() != 3 {
        return Err(GeomError::Invalid(format!("{} components; three or more are required", cfg.components.len())));
    }
    if cfg.degree() == 3 {
        for d in 1..=opts.degree.unwrap_or(4) {
            if wants(d) {
                out.triangle.push(triangle_pencil(&cfg, d, 3, budget)?);
            }
        }
        return Ok(out);
    }
    if wants(1) {
        out.lines = Some(hyp1_lines(&cfg, budget)?);
    }
    if opts.degree != Some(1) {
        let d = opts.degree.unwrap_or(2).max(2);
        match structural_emptiness(&cfg, d) {
            Structural::Empty(c) => out.emptiness.push(c),
            Structural::Proceed => {
                let s = hyp_ge2_search(&cfg, opts.frame_seed, budget)?;
                let mut s = s;
                if let Some(d) = opts.degree {
                    s.certificates.retain(|c| c.degree == d);
                }
                if s.certificates.is_empty() {
                    let mut c = EmptinessCertificate::new(
                        EmptinessReason::SearchExhausted,
                        format!(
                            "{} candidate(s) constructed and refuted, {} frame(s) without a candidate",
                            s.refuted.len(),
                            s.notes.len()
                        ),
                    );
                    c.refuted = s.refuted.clone();
                    out.emptiness.push(c);
                }
                out.higher = Some(s);
            }
        }
    }
    Ok(out)
}

/// Configurations with four or more components: no curves of degree at
/// least two, none at all with five or more components, finitely many
/// lines otherwise.
pub fn multi_component_check(
    cfg: &Configuration,
    degree: Option<u32>,
    budget: &Budget,
) -> GeomResult<(Option<LineSearch>, Vec<EmptinessCertificate>)> {
    let c = cfg.components.len();
    if c < 4 {
        return Err(GeomError::Precondition("multi_component_check needs at least four components".into()));
    }
    if c >= 5 {
        return Ok((None, vec![EmptinessCertificate::new(EmptinessReason::ComponentsGe5, format!("{c} components"))]));
    }
    let mut empt = Vec::new();
    if degree.map_or(true, |d| d >= 2) {
        empt.push(EmptinessCertificate::new(EmptinessReason::MultiCompHighD, "no curve of degree >= 2 with four components"));
    }
    let lines = if degree.map_or(true, |d| d == 1) { Some(hyp1_lines(cfg, budget)?) } else { None };
    Ok((lines, empt))
}

/// `mult_p(C) + mult_q(C) = d` for a candidate with contacts `p`, `q`.
pub fn multiplicity_balance(c: &PlaneCurve, p: &ProjectivePoint, q: &ProjectivePoint) -> GeomResult<bool> {
    Ok(multiplicity_at(c, p)? + multiplicity_at(c, q)? == c.degree())
}
