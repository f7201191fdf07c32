//! One function per subcommand. Each returns an [`Outcome`] that the
//! driver wraps into a report.

use hypertan::localgeo::{
    geometric_genus, infinitely_near_tree, intersection_points, local_intersection_multiplicity, multiplicity_at,
    point_type, singular_points, tangent_line, Contact, PointType, TreeNode,
};
use hypertan::projplane::PlaneCurve;
use hypertan::search3c::{
    hyp1_lines, hyp_search, multi_component_check, triangle_pencil, validate_configuration, Configuration,
    EmptinessCertificate, HypCertificate, LineSearch, Membership, SearchOptions, SearchResult, TrianglePencil,
};
use hypertan::tangency::{flexes, hessian, mirror_check, TangencyReport};
use hypertan::{Budget, GeomError, KPoly};
use serde_json::{json, Value};

use crate::config::{curve_arg, parse_point, Workspace};
use crate::error::{CliError, CliResult};
use crate::report::{pretty_rational, rational_form, Encoder};

pub struct Ctx {
    pub ws: Workspace,
    pub budget: Budget,
    pub seed: u64,
    pub enc: Encoder,
}

pub struct Outcome {
    pub negative: bool,
    pub summary: Vec<String>,
    pub result: Value,
}

impl Outcome {
    fn ok(summary: Vec<String>, result: Value) -> Self {
        Outcome { negative: false, summary, result }
    }
}

pub fn point_type_json(t: &PointType) -> Value {
    let n = match t.n {
        Contact::Finite(n) => json!(n),
        Contact::Infinite => json!("inf"),
    };
    json!({ "m": t.m, "n": n, "display": t.to_string() })
}

fn tree_json(n: &TreeNode) -> Value {
    json!({
        "multiplicity": n.multiplicity,
        "conjugates": n.conjugates,
        "children": n.children.iter().map(tree_json).collect::<Vec<_>>(),
    })
}

fn kpoly_json(enc: &mut Encoder, f: &KPoly) -> Value {
    let terms: Vec<Value> = f.terms().map(|(e, c)| json!([e[0], e[1], e[2], enc.element(c)])).collect();
    json!({ "terms": terms })
}

pub fn analyze_point(ctx: &mut Ctx, curve: &str, point: &str) -> CliResult<Outcome> {
    let c = curve_arg(&ctx.ws, curve)?;
    let p = parse_point(point, &ctx.ws)?;
    if !c.contains(&p) {
        return Err(GeomError::NotOnCurve(point.to_string()).into());
    }
    let m = multiplicity_at(&c, &p)?;
    let tree = infinitely_near_tree(&c, &p, &ctx.budget)?;
    let branches = tree.branch_count();
    let delta = tree.delta();
    let (ty, tangent) = if branches == 1 {
        (Some(point_type(&c, &p, &ctx.budget)?), Some(tangent_line(&c, &p, &ctx.budget)?))
    } else {
        (None, None)
    };
    let mut summary = vec![format!(
        "{} on {}: multiplicity {m}, {branches} branch(es), delta {delta}",
        ctx.enc.pretty_point(&p),
        ctx.enc.pretty_curve(&c)
    )];
    if let Some(t) = &ty {
        summary.push(format!("type {t}"));
    }
    let result = json!({
        "curve": ctx.enc.curve(&c),
        "point": ctx.enc.point(&p),
        "multiplicity": m,
        "smooth": m == 1,
        "branches": branches,
        "delta": delta,
        "tree": tree_json(&tree.root),
        "type": ty.as_ref().map(point_type_json),
        "tangent": tangent.as_ref().map(|l| ctx.enc.curve(l)),
    });
    Ok(Outcome::ok(summary, result))
}

pub fn intersect(ctx: &mut Ctx, curve: &str, with: &str, point: Option<&str>) -> CliResult<Outcome> {
    let c = curve_arg(&ctx.ws, curve)?;
    let b = curve_arg(&ctx.ws, with)?;
    if let Some(pt) = point {
        let p = parse_point(pt, &ctx.ws)?;
        let i = local_intersection_multiplicity(&c, &b, &p, &ctx.budget)?;
        let summary = vec![format!("I_p = {i} at {}", ctx.enc.pretty_point(&p))];
        let result = json!({ "point": ctx.enc.point(&p), "multiplicity": i });
        return Ok(Outcome::ok(summary, result));
    }
    let pts = intersection_points(&c, &b, &ctx.budget)?;
    let total: u64 = pts.iter().map(|p| p.multiplicity * p.conjugates as u64).sum();
    let mut summary = Vec::new();
    let mut list = Vec::new();
    for ip in &pts {
        summary.push(format!("{} x{}: multiplicity {}", ctx.enc.pretty_point(&ip.point), ip.conjugates, ip.multiplicity));
        list.push(json!({ "point": ctx.enc.point(&ip.point), "conjugates": ip.conjugates, "multiplicity": ip.multiplicity }));
    }
    summary.push(format!("total {total} = {} * {}", c.degree(), b.degree()));
    let result = json!({
        "curve": ctx.enc.curve(&c),
        "with": ctx.enc.curve(&b),
        "points": list,
        "distinct": pts.iter().map(|p| p.conjugates).sum::<usize>(),
        "total": total,
        "bezout": (c.degree() * b.degree()) as u64,
    });
    Ok(Outcome::ok(summary, result))
}

pub fn delta(ctx: &mut Ctx, curve: &str, point: &str) -> CliResult<Outcome> {
    let c = curve_arg(&ctx.ws, curve)?;
    let p = parse_point(point, &ctx.ws)?;
    if !c.contains(&p) {
        return Err(GeomError::NotOnCurve(point.to_string()).into());
    }
    let tree = infinitely_near_tree(&c, &p, &ctx.budget)?;
    let d = tree.delta();
    let result = json!({
        "curve": ctx.enc.curve(&c),
        "point": ctx.enc.point(&p),
        "delta": d,
        "multiplicities": tree.multiplicities(),
        "tree": tree_json(&tree.root),
    });
    Ok(Outcome::ok(vec![format!("delta = {d}")], result))
}

pub fn genus(ctx: &mut Ctx, curve: &str) -> CliResult<Outcome> {
    let c = curve_arg(&ctx.ws, curve)?;
    let d = c.degree() as u64;
    let pa = (d - 1) * (d.max(2) - 2) / 2;
    let mut sing = Vec::new();
    let mut summary = Vec::new();
    for s in singular_points(&c, &ctx.budget)? {
        let tree = infinitely_near_tree(&c, &s.point, &ctx.budget)?;
        summary.push(format!(
            "singular {} x{}: multiplicity {}, delta {}",
            ctx.enc.pretty_point(&s.point),
            s.conjugates,
            s.multiplicity,
            tree.delta()
        ));
        sing.push(json!({
            "point": ctx.enc.point(&s.point),
            "conjugates": s.conjugates,
            "multiplicity": s.multiplicity,
            "delta": tree.delta(),
            "branches": tree.branch_count(),
        }));
    }
    let g = geometric_genus(&c, &ctx.budget)?;
    summary.push(format!("arithmetic genus {pa}, geometric genus {g}"));
    let result = json!({
        "curve": ctx.enc.curve(&c),
        "arithmetic_genus": pa,
        "singular_points": sing,
        "genus": g,
        "rational": g == 0,
    });
    Ok(Outcome::ok(summary, result))
}

pub fn flexes_cmd(ctx: &mut Ctx, curve: &str) -> CliResult<Outcome> {
    let c = curve_arg(&ctx.ws, curve)?;
    let h = hessian(&c);
    let fl = flexes(&c, &ctx.budget)?;
    let mut list = Vec::new();
    let mut summary = Vec::new();
    let mut total = 0usize;
    for f in &fl {
        total += f.conjugates;
        summary.push(format!(
            "{} x{}: contact {}, tangent {}",
            ctx.enc.pretty_point(&f.point),
            f.conjugates,
            f.contact,
            ctx.enc.pretty_curve(&f.tangent)
        ));
        list.push(json!({
            "point": ctx.enc.point(&f.point),
            "conjugates": f.conjugates,
            "contact": f.contact,
            "hyperflex": f.contact > 3,
            "tangent": ctx.enc.curve(&f.tangent),
        }));
    }
    summary.push(format!("{total} flex(es) over the algebraic closure"));
    let result = json!({
        "curve": ctx.enc.curve(&c),
        "hessian": kpoly_json(&mut ctx.enc, &h),
        "flexes": list,
        "total": total,
    });
    Ok(Outcome::ok(summary, result))
}

pub fn mirror(ctx: &mut Ctx, curve: &str, base: &str, point: &str) -> CliResult<Outcome> {
    let c = curve_arg(&ctx.ws, curve)?;
    let b = curve_arg(&ctx.ws, base)?;
    let q = parse_point(point, &ctx.ws)?;
    let r = match mirror_check(&c, &b, &q, &ctx.budget) {
        Ok(r) => r,
        Err(GeomError::Precondition(msg)) => {
            let result = json!({
                "curve": ctx.enc.curve(&c),
                "base": ctx.enc.curve(&b),
                "point": ctx.enc.point(&q),
                "pass": false,
                "precondition": msg,
            });
            return Ok(Outcome { negative: true, summary: vec![format!("precondition fails: {msg}")], result });
        }
        Err(e) => return Err(e.into()),
    };
    let summary = vec![r.to_string()];
    let result = json!({
        "curve": ctx.enc.curve(&c),
        "base": ctx.enc.curve(&b),
        "point": ctx.enc.point(&q),
        "l": r.l,
        "m": r.m,
        "predicted_type": point_type_json(&r.predicted_type),
        "observed_type": point_type_json(&r.observed_type),
        "delta_bound": pretty_rational(&r.delta_bound),
        "delta": r.delta_observed,
        "pass": r.pass,
    });
    Ok(Outcome { negative: !r.pass, summary, result })
}

fn configuration_json(enc: &mut Encoder, cfg: &Configuration) -> Value {
    let comps: Vec<Value> = cfg.components.iter().map(|c| enc.curve(c)).collect();
    let nodes: Vec<Value> = cfg
        .nodes
        .iter()
        .map(|n| {
            json!({
                "point": enc.point(&n.point),
                "conjugates": n.conjugates,
                "components": [n.components.0 + 1, n.components.1 + 1],
            })
        })
        .collect();
    json!({
        "components": comps,
        "degrees": cfg.degrees(),
        "degree": cfg.degree(),
        "nodes": nodes,
        "node_count": cfg.node_count(),
    })
}

pub fn validate(ctx: &mut Ctx) -> CliResult<Outcome> {
    let comps = ctx.ws.component_curves()?;
    match validate_configuration(&comps, &ctx.budget) {
        Ok(cfg) => {
            let summary = vec![format!(
                "valid: {} components of degrees {:?}, {} nodes",
                cfg.components.len(),
                cfg.degrees(),
                cfg.node_count()
            )];
            let mut result = configuration_json(&mut ctx.enc, &cfg);
            result["valid"] = json!(true);
            Ok(Outcome::ok(summary, result))
        }
        Err(GeomError::Invalid(reason)) => Ok(Outcome {
            negative: true,
            summary: vec![format!("not a valid configuration: {reason}")],
            result: json!({ "valid": false, "reason": reason }),
        }),
        Err(e) => Err(e.into()),
    }
}

fn contacts_json(enc: &mut Encoder, r: &TangencyReport) -> Value {
    let v: Vec<Value> = r
        .contacts
        .iter()
        .map(|c| {
            json!({
                "point": enc.point(&c.point),
                "conjugates": c.conjugates,
                "multiplicity": c.multiplicity,
                "branches": c.branches,
                "subject_type": c.subject_type.as_ref().map(point_type_json),
                "base_type": c.base_type.as_ref().map(point_type_json),
            })
        })
        .collect();
    Value::Array(v)
}

pub fn certificate_json(enc: &mut Encoder, c: &HypCertificate, class: Option<String>) -> Value {
    json!({
        "curve": enc.curve(&c.curve),
        "degree": c.degree,
        "orbit": rational_form(&c.orbit),
        "orbit_size": c.orbit_size,
        "membership": match c.class { Membership::Hyp1 => "Hyp1", Membership::HypD => "HypD" },
        "class": class,
        "origin": c.origin,
        "genus": c.genus,
        "rational": c.rational,
        "hypertangent": c.report.hypertangent,
        "hyper_bitangent": c.report.hyper_bitangent,
        "branches": c.report.branch_total(),
        "contacts": contacts_json(enc, &c.report),
    })
}

fn emptiness_json(e: &EmptinessCertificate) -> Value {
    json!({ "reason": e.reason.code(), "detail": e.detail, "refuted": e.refuted.len() })
}

fn lines_json(enc: &mut Encoder, l: &LineSearch, summary: &mut Vec<String>) -> Value {
    let mut certs = Vec::new();
    for (c, class) in l.certificates.iter().zip(&l.classes) {
        summary.push(format!("line {} x{}: {}", enc.pretty_curve(&c.curve), c.orbit_size, class.describe()));
        certs.push(certificate_json(enc, c, Some(class.describe())));
    }
    let families: Vec<Value> = l.families.iter().map(|f| json!({ "node": enc.point(&f.node) })).collect();
    json!({
        "certificates": certs,
        "count": l.certificates.iter().map(|c| c.orbit_size).sum::<usize>(),
        "families": families,
        "incomplete": l.incomplete.len(),
    })
}

fn pencil_json(enc: &mut Encoder, p: &TrianglePencil) -> Value {
    let basis: Vec<Value> = p.basis.iter().map(|f| kpoly_json(enc, f)).collect();
    let samples: Vec<Value> = p
        .samples
        .iter()
        .map(|s| json!({ "curve": enc.curve(&s.curve), "integral": s.integral, "verified": s.verified }))
        .collect();
    json!({
        "degree": p.degree,
        "conditions": p.conditions,
        "projective_dim": p.projective_dim,
        "basis": basis,
        "samples": samples,
        "verified": p.verified(),
    })
}

/// Sorted certificate keys: the seed-independent content of a search.
fn canonical(certs: &[&HypCertificate]) -> Value {
    let mut v: Vec<String> =
        certs.iter().map(|c| format!("{}|{}", c.degree, crate::report::pretty_rational_form(&c.orbit))).collect();
    v.sort();
    json!(v)
}

fn search_json(ctx: &mut Ctx, cfg_comps: &[PlaneCurve], res: &SearchResult) -> (Vec<String>, Value) {
    let enc = &mut ctx.enc;
    let mut summary = Vec::new();
    let lines = res.lines.as_ref().map(|l| lines_json(enc, l, &mut summary));
    let higher = res.higher.as_ref().map(|h| {
        let mut certs = Vec::new();
        for c in &h.certificates {
            summary.push(format!("degree {} curve {} x{}", c.degree, enc.pretty_curve(&c.curve), c.orbit_size));
            certs.push(certificate_json(enc, c, None));
        }
        json!({
            "certificates": certs,
            "count": h.certificates.iter().map(|c| c.orbit_size).sum::<usize>(),
            "bound": h.bound,
            "refuted": h.refuted.len(),
            "skipped_singular": h.skipped_singular.iter().map(|p| enc.point(p)).collect::<Vec<_>>(),
            "frames_without_candidate": h.notes.len(),
        })
    });
    let triangle: Vec<Value> = res.triangle.iter().map(|p| pencil_json(enc, p)).collect();
    for p in &res.triangle {
        summary.push(format!(
            "degree {} pencil: projective dimension {}, {} of {} samples verified",
            p.degree,
            p.projective_dim,
            p.verified(),
            p.samples.len()
        ));
    }
    for e in &res.emptiness {
        summary.push(format!("emptiness {}: {}", e.reason.code(), e.detail));
    }
    let certs = res.certificates();
    let all: Vec<Value> = certs.iter().map(|c| certificate_json(enc, c, None)).collect();
    summary.push(format!("{} certificate(s), {} curve(s) counting conjugates", certs.len(), res.count()));
    let result = json!({
        "components": cfg_comps.iter().map(|c| enc.curve(c)).collect::<Vec<_>>(),
        "lines": lines,
        "higher": higher,
        "triangle": triangle,
        "emptiness": res.emptiness.iter().map(emptiness_json).collect::<Vec<_>>(),
        "certificates": all,
        "count": res.count(),
        "canonical": canonical(&certs),
    });
    (summary, result)
}

pub fn hyp_search_cmd(ctx: &mut Ctx, degree: Option<u32>) -> CliResult<Outcome> {
    let comps = ctx.ws.component_curves()?;
    let opts = SearchOptions { degree, frame_seed: ctx.seed, budget: ctx.budget.clone() };
    let res = hyp_search(&comps, &opts)?;
    let (summary, result) = search_json(ctx, &comps, &res);
    let negative = res.count() == 0 && res.triangle.is_empty() && !res.emptiness.is_empty();
    Ok(Outcome { negative, summary, result })
}

pub fn hyp_lines_cmd(ctx: &mut Ctx) -> CliResult<Outcome> {
    let comps = ctx.ws.component_curves()?;
    let cfg = validate_configuration(&comps, &ctx.budget)?;
    let l = hyp1_lines(&cfg, &ctx.budget)?;
    let mut summary = Vec::new();
    let mut result = lines_json(&mut ctx.enc, &l, &mut summary);
    let count = l.certificates.iter().map(|c| c.orbit_size).sum::<usize>();
    summary.push(format!("{count} hyper-bitangent line(s)"));
    let certs: Vec<&HypCertificate> = l.certificates.iter().collect();
    result["canonical"] = canonical(&certs);
    Ok(Outcome { negative: count == 0 && l.families.is_empty(), summary, result })
}

pub fn multi_check(ctx: &mut Ctx, degree: Option<u32>) -> CliResult<Outcome> {
    let comps = ctx.ws.component_curves()?;
    let cfg = validate_configuration(&comps, &ctx.budget)?;
    let (lines, empt) = multi_component_check(&cfg, degree, &ctx.budget)?;
    let mut summary = Vec::new();
    let lines_v = lines.as_ref().map(|l| lines_json(&mut ctx.enc, l, &mut summary));
    for e in &empt {
        summary.push(format!("emptiness {}: {}", e.reason.code(), e.detail));
    }
    let count = lines.as_ref().map_or(0, |l| l.certificates.iter().map(|c| c.orbit_size).sum::<usize>());
    if lines.is_some() {
        summary.push(format!("{count} hyper-bitangent line(s)"));
    }
    let result = json!({
        "components": cfg.components.len(),
        "lines": lines_v,
        "emptiness": empt.iter().map(emptiness_json).collect::<Vec<_>>(),
        "count": count,
    });
    Ok(Outcome { negative: count == 0, summary, result })
}

pub fn triangle_cmd(ctx: &mut Ctx, degree: u32, samples: usize) -> CliResult<Outcome> {
    if degree == 0 {
        return Err(CliError::input("degree must be at least 1"));
    }
    let comps = ctx.ws.component_curves()?;
    let cfg = validate_configuration(&comps, &ctx.budget)?;
    if cfg.components.len() != 3 || cfg.degree() != 3 {
        return Err(CliError::input("triangle-pencil needs three lines"));
    }
    let p = triangle_pencil(&cfg, degree, samples, &ctx.budget)?;
    let summary = vec![format!(
        "degree {degree}: projective dimension {}, {} of {} samples verified",
        p.projective_dim,
        p.verified(),
        p.samples.len()
    )];
    let negative = p.projective_dim < 1 || p.verified() < p.samples.len();
    Ok(Outcome { negative, summary, result: pencil_json(&mut ctx.enc, &p) })
}
