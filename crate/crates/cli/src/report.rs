//! Report files and the exact JSON encoding of points, curves and fields.
//!
//! Rationals are strings `"num/den"`. An element of a number field is
//! `{"field": "K1", "coords": ["c0", "c1", ...]}` in the power basis of the
//! field's generator. Fields are listed once per report in `fields`, named
//! `K1, K2, ...` in order of first use, together with their minimal
//! polynomials and the embeddings between them.

use std::collections::BTreeMap;
use std::sync::Arc;

use hypertan::exactalg::{format_rational, parse_rational};
use hypertan::projplane::{PlaneCurve, ProjectivePoint};
use hypertan::{Budget, FieldElement, NumberField, Poly, Rational, UniPoly};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    pub from: String,
    pub image: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldEntry {
    pub name: String,
    pub degree: usize,
    /// Coefficients from the constant term up.
    pub minpoly: Vec<String>,
    pub display: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub embeddings: Vec<Embedding>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema_version: u32,
    pub command: Vec<String>,
    pub status: String,
    pub exit_code: i32,
    pub summary: Vec<String>,
    pub fields: Vec<FieldEntry>,
    pub result: Value,
}

impl ReportFile {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        let r: ReportFile = serde_json::from_str(text)?;
        if r.schema_version != REPORT_SCHEMA {
            return Err(CliError::input(format!("unsupported report schema {}", r.schema_version)));
        }
        Ok(r)
    }

    pub fn error(command: Vec<String>, e: &CliError) -> Self {
        let status = match e {
            CliError::Input(_) => "input_error",
            CliError::Budget(_) => "budget_exceeded",
            CliError::Internal(_) => "internal_error",
        };
        ReportFile {
            schema_version: REPORT_SCHEMA,
            command,
            status: status.into(),
            exit_code: e.exit_code(),
            summary: vec![e.to_string()],
            fields: vec![],
            result: Value::Null,
        }
    }
}

/// Assigns report-local names to number fields.
#[derive(Default)]
pub struct Encoder {
    fields: Vec<(Arc<NumberField>, String)>,
}

impl Encoder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn field_name(&mut self, k: &Arc<NumberField>) -> String {
        if let Some((_, n)) = self.fields.iter().find(|(f, _)| NumberField::same_as(f, k)) {
            return n.clone();
        }
        for (src, _) in k.embeddings() {
            self.field_name(src);
        }
        let name = format!("K{}", self.fields.len() + 1);
        self.fields.push((k.clone(), name.clone()));
        name
    }

    fn lookup(&self, k: &Arc<NumberField>) -> String {
        self.fields
            .iter()
            .find(|(f, _)| NumberField::same_as(f, k))
            .map(|(_, n)| n.clone())
            .expect("field registered before display")
    }

    pub fn field_entries(&self) -> Vec<FieldEntry> {
        self.fields
            .iter()
            .map(|(k, n)| FieldEntry {
                name: n.clone(),
                degree: k.degree(),
                minpoly: k.minpoly().coeffs().iter().map(format_rational).collect(),
                display: format!("{} = 0", pretty_univariate(k.minpoly(), n)),
                embeddings: k
                    .embeddings()
                    .iter()
                    .map(|(src, img)| Embedding { from: self.lookup(src), image: img.iter().map(format_rational).collect() })
                    .collect(),
            })
            .collect()
    }

    pub fn element(&mut self, x: &FieldElement) -> Value {
        if let Some(q) = x.as_rational() {
            return Value::String(format_rational(&q));
        }
        let name = self.field_name(x.field().expect("irrational elements have a field"));
        json!({ "field": name, "coords": x.coords().iter().map(format_rational).collect::<Vec<_>>() })
    }

    pub fn pretty_element(&mut self, x: &FieldElement) -> String {
        if let Some(q) = x.as_rational() {
            return pretty_rational(&q);
        }
        let name = self.field_name(x.field().expect("irrational elements have a field"));
        let u = UniPoly::new(x.coords().to_vec());
        format!("({})", pretty_univariate(&u, &name))
    }

    pub fn point(&mut self, p: &ProjectivePoint) -> Value {
        let coords: Vec<Value> = p.coords().iter().map(|c| self.element(c)).collect();
        let field = p.field().map(|k| self.field_name(&k));
        json!({ "coords": coords, "field": field, "display": self.pretty_point(p) })
    }

    pub fn pretty_point(&mut self, p: &ProjectivePoint) -> String {
        let c: Vec<String> = p.coords().iter().map(|c| self.pretty_element(c)).collect();
        format!("({}:{}:{})", c[0], c[1], c[2])
    }

    pub fn curve(&mut self, c: &PlaneCurve) -> Value {
        let terms: Vec<Value> = c
            .terms()
            .iter()
            .map(|(e, v)| json!([e[0], e[1], e[2], self.element(v)]))
            .collect();
        let field = c.field().map(|k| self.field_name(&k));
        json!({ "degree": c.degree(), "field": field, "terms": terms, "equation": self.pretty_curve(c) })
    }

    pub fn pretty_curve(&mut self, c: &PlaneCurve) -> String {
        let terms: Vec<([u32; 3], String)> = c.terms().iter().map(|(e, v)| (*e, self.pretty_element(v))).collect();
        join_terms(terms)
    }
}

pub fn rational_form(p: &Poly<Rational>) -> Value {
    let terms: Vec<Value> =
        p.terms().map(|(e, c)| json!([e[0], e[1], e[2], format_rational(c)])).collect();
    json!({ "terms": terms, "equation": pretty_rational_form(p) })
}

pub fn pretty_rational_form(p: &Poly<Rational>) -> String {
    join_terms(p.terms().map(|(e, c)| (*e, pretty_rational(c))).collect())
}

pub fn pretty_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn pretty_univariate(u: &UniPoly<Rational>, var: &str) -> String {
    let mut parts = Vec::new();
    for (k, c) in u.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mon = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        parts.push(signed_term(c, &mon));
    }
    finish(parts)
}

fn signed_term(c: &Rational, mon: &str) -> (bool, String) {
    let neg = c.is_negative();
    let a = c.abs();
    let body = if mon.is_empty() {
        pretty_rational(&a)
    } else if a.is_one() {
        mon.to_string()
    } else {
        format!("{}*{mon}", pretty_rational(&a))
    };
    (neg, body)
}

fn finish(parts: Vec<(bool, String)>) -> String {
    if parts.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (neg, body)) in parts.into_iter().enumerate() {
        match (i, neg) {
            (0, false) => s.push_str(&body),
            (0, true) => {
                s.push('-');
                s.push_str(&body);
            }
            (_, false) => {
                s.push_str(" + ");
                s.push_str(&body);
            }
            (_, true) => {
                s.push_str(" - ");
                s.push_str(&body);
            }
        }
    }
    s
}

fn monomial(e: [u32; 3]) -> String {
    let mut v = Vec::new();
    for (name, k) in ["x", "y", "z"].iter().zip(e) {
        match k {
            0 => {}
            1 => v.push(name.to_string()),
            _ => v.push(format!("{name}^{k}")),
        }
    }
    v.join("*")
}

/// Terms in descending lexicographic order of exponents.
fn join_terms(mut terms: Vec<([u32; 3], String)>) -> String {
    terms.sort_by(|a, b| b.0.cmp(&a.0));
    let mut parts = Vec::new();
    for (e, c) in terms {
        let mon = monomial(e);
        let (neg, c) = match c.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, c),
        };
        let body = match (c.as_str(), mon.is_empty()) {
            (_, true) => c.clone(),
            ("1", false) => mon,
            _ => format!("{c}*{mon}"),
        };
        parts.push((neg, body));
    }
    finish(parts)
}

/// Rebuilds number fields and objects from a report.
pub struct Decoder {
    fields: BTreeMap<String, Arc<NumberField>>,
}

impl Decoder {
    pub fn new(entries: &[FieldEntry], budget: &Budget) -> CliResult<Self> {
        let mut fields = BTreeMap::new();
        for e in entries {
            let coeffs = e.minpoly.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>()?;
            let mut emb = Vec::new();
            for m in &e.embeddings {
                let src: &Arc<NumberField> = fields
                    .get(&m.from)
                    .ok_or_else(|| CliError::input(format!("field {} embeds unknown field {}", e.name, m.from)))?;
                let img = m.image.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>()?;
                emb.push((src.clone(), img));
            }
            let k = NumberField::with_embeddings(e.name.clone(), UniPoly::new(coeffs), emb, budget)?;
            fields.insert(e.name.clone(), k);
        }
        Ok(Decoder { fields })
    }

    pub fn element(&self, v: &Value) -> CliResult<FieldElement> {
        match v {
            Value::String(s) => Ok(FieldElement::rational(parse_rational(s)?)),
            Value::Object(m) => {
                let name = m.get("field").and_then(Value::as_str).ok_or_else(|| CliError::input("element without field"))?;
                let k = self.fields.get(name).ok_or_else(|| CliError::input(format!("unknown field {name}")))?;
                let coords = m
                    .get("coords")
                    .and_then(Value::as_array)
                    .ok_or_else(|| CliError::input("element without coords"))?
                    .iter()
                    .map(|c| c.as_str().ok_or_else(|| CliError::input("coordinate must be a string")).and_then(|s| Ok(parse_rational(s)?)))
                    .collect::<CliResult<Vec<_>>>()?;
                Ok(FieldElement::from_coords(k, coords))
            }
            _ => Err(CliError::input(format!("bad field element {v}"))),
        }
    }

    pub fn curve(&self, v: &Value) -> CliResult<PlaneCurve> {
        let terms = v.get("terms").and_then(Value::as_array).ok_or_else(|| CliError::input("curve without terms"))?;
        let mut form = Poly::zero(3);
        for t in terms {
            let t = t.as_array().filter(|t| t.len() == 4).ok_or_else(|| CliError::input("term must be [i, j, k, c]"))?;
            let mut e = [0u32; 3];
            for (slot, x) in e.iter_mut().zip(t) {
                *slot = x.as_u64().ok_or_else(|| CliError::input("exponent must be an integer"))? as u32;
            }
            form.add_term(e, self.element(&t[3])?);
        }
        Ok(PlaneCurve::new(form)?)
    }

    pub fn point(&self, v: &Value) -> CliResult<ProjectivePoint> {
        let c = v.get("coords").and_then(Value::as_array).ok_or_else(|| CliError::input("point without coords"))?;
        let v = c.iter().map(|x| self.element(x)).collect::<CliResult<Vec<_>>>()?;
        Ok(ProjectivePoint::from_vec(v)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hypertan::exactalg::adjoin_root;
    use hypertan::Scalar;

    #[test]
    fn rational_display() {
        let p = hypertan::exactalg::parse_poly("x^2 - 1/2*y*z + 3*z^2").unwrap();
        assert_eq!(pretty_rational_form(&p), "x^2 - 1/2*y*z + 3*z^2");
        let u = UniPoly::new(vec![Rational::from_i64(-2), Rational::from_i64(0), Rational::from_i64(1)]);
        assert_eq!(pretty_univariate(&u, "K1"), "K1^2 - 2");
    }

    #[test]
    fn elements_round_trip_through_decoder() {
        let budget = Budget::default();
        let m = UniPoly::new(vec![FieldElement::from_i64(-3), FieldElement::zero(), FieldElement::one()]);
        let ext = adjoin_root(None, &m, &budget).unwrap();
        let x = ext.root.clone() * FieldElement::from_i64(2) + FieldElement::from_i64(1);
        let mut enc = Encoder::new();
        let v = enc.element(&x);
        assert_eq!(v["field"], "K1");
        let dec = Decoder::new(&enc.field_entries(), &budget).unwrap();
        let back = dec.element(&v).unwrap();
        assert_eq!(back.coords(), x.coords());
        assert_eq!(enc.element(&FieldElement::from_i64(-4)), Value::String("-4/1".into()));
    }

    #[test]
    fn fields_are_named_in_order_of_use() {
        let budget = Budget::default();
        let m2 = UniPoly::new(vec![FieldElement::from_i64(-2), FieldElement::zero(), FieldElement::one()]);
        let m5 = UniPoly::new(vec![FieldElement::from_i64(-5), FieldElement::zero(), FieldElement::one()]);
        let a = adjoin_root(None, &m5, &budget).unwrap().root;
        let b = adjoin_root(None, &m2, &budget).unwrap().root;
        let mut enc = Encoder::new();
        assert_eq!(enc.element(&b)["field"], "K1");
        assert_eq!(enc.element(&a)["field"], "K2");
        assert_eq!(enc.element(&b)["field"], "K1");
        assert_eq!(enc.field_entries().len(), 2);
    }

    #[test]
    fn wrong_schema_is_rejected() {
        let r = ReportFile::error(vec![], &CliError::input("x"));
        let text = r.to_json().replace("\"schema_version\": 1", "\"schema_version\": 9");
        assert!(ReportFile::from_json(&text).is_err());
        assert_eq!(ReportFile::from_json(&r.to_json()).unwrap(), r);
    }
}
