//! Curve configuration files.
//!
//! ```json
//! {
//!   "schema": 1,
//!   "field": "rational",
//!   "curves": {
//!     "B1": [[1, 0, 0, "1"]],
//!     "B3": "y*z - x^2 + y^2"
//!   },
//!   "configuration": { "components": ["B1", "B2", "B3"] },
//!   "plot": { "chart": "y", "viewport": [-3, 3, -3, 3] }
//! }
//! ```
//!
//! Curves are either coefficient lists `[i, j, k, "c"]` for `c x^i y^j z^k`
//! or an equation string with rational coefficients. Over an extension field
//! `{"minpoly": "a^2 - 2", "generator": "a"}` coefficients are polynomials in
//! the generator.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use hypertan::exactalg::{parse_poly, parse_poly_in, parse_rational};
use hypertan::projplane::{PlaneCurve, ProjectivePoint};
use hypertan::{Budget, FieldElement, NumberField, Poly, Rational, UniPoly};
use num_traits::One;
use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{CliError, CliResult};

pub const CONFIG_SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Named(String),
    Extension { minpoly: String, generator: String },
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec::Named("rational".into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CurveSpec {
    Equation(String),
    Terms(Vec<(u32, u32, u32, String)>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigurationBlock {
    pub components: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotBlock {
    #[serde(default)]
    pub chart: Option<String>,
    #[serde(default)]
    pub viewport: Option<[f64; 4]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveConfigFile {
    #[serde(default = "default_schema")]
    pub schema: u32,
    #[serde(default)]
    pub description: Option<String>,
    #[serde(default)]
    pub field: FieldSpec,
    #[serde(deserialize_with = "unique_map")]
    pub curves: BTreeMap<String, CurveSpec>,
    #[serde(default)]
    pub configuration: Option<ConfigurationBlock>,
    #[serde(default)]
    pub plot: Option<PlotBlock>,
}

fn default_schema() -> u32 {
    CONFIG_SCHEMA
}

fn unique_map<'de, D>(d: D) -> Result<BTreeMap<String, CurveSpec>, D::Error>
where
    D: Deserializer<'de>,
{
    struct V;
    impl<'de> Visitor<'de> for V {
        type Value = BTreeMap<String, CurveSpec>;
        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a map of curve names to curves")
        }
        fn visit_map<A: MapAccess<'de>>(self, mut m: A) -> Result<Self::Value, A::Error> {
            let mut out = BTreeMap::new();
            while let Some((k, v)) = m.next_entry::<String, CurveSpec>()? {
                if out.contains_key(&k) {
                    return Err(serde::de::Error::custom(format!("duplicate curve name {k:?}")));
                }
                out.insert(k, v);
            }
            Ok(out)
        }
    }
    d.deserialize_map(V)
}

/// A parsed configuration: the working field and the named curves.
#[derive(Debug, Clone)]
pub struct Workspace {
    pub field: Option<Arc<NumberField>>,
    pub generator: Option<String>,
    pub curves: BTreeMap<String, PlaneCurve>,
    pub components: Option<Vec<String>>,
    pub plot: Option<PlotBlock>,
}

impl CurveConfigFile {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let cfg: CurveConfigFile = serde_json::from_str(text)?;
        if cfg.schema != CONFIG_SCHEMA {
            return Err(CliError::input(format!("unsupported config schema {}", cfg.schema)));
        }
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Parses every curve. `field_override` replaces the file's field.
    pub fn build(&self, field_override: Option<&FieldSpec>, budget: &Budget) -> CliResult<Workspace> {
        let spec = field_override.unwrap_or(&self.field);
        let (field, generator) = build_field(spec, budget)?;
        let mut curves = BTreeMap::new();
        for (name, c) in &self.curves {
            let curve = build_curve(c, field.as_ref(), generator.as_deref())
                .map_err(|e| CliError::input(format!("curve {name}: {e}")))?;
            curves.insert(name.clone(), curve);
        }
        if let Some(block) = &self.configuration {
            for n in &block.components {
                if !curves.contains_key(n) {
                    return Err(CliError::input(format!("unknown curve name {n:?} in configuration")));
                }
            }
        }
        Ok(Workspace {
            field,
            generator,
            curves,
            components: self.configuration.as_ref().map(|b| b.components.clone()),
            plot: self.plot.clone(),
        })
    }
}

/// Reads `--field` values: `rational` or `name=minpoly`.
pub fn parse_field_flag(s: &str) -> CliResult<FieldSpec> {
    let s = s.trim();
    if s == "rational" || s == "Q" {
        return Ok(FieldSpec::Named("rational".into()));
    }
    match s.split_once('=') {
        Some((g, m)) => Ok(FieldSpec::Extension { minpoly: m.trim().into(), generator: g.trim().into() }),
        None => Err(CliError::input(format!("--field expects `rational` or `name=minpoly`, got {s:?}"))),
    }
}

pub fn build_field(spec: &FieldSpec, budget: &Budget) -> CliResult<(Option<Arc<NumberField>>, Option<String>)> {
    match spec {
        FieldSpec::Named(n) if n == "rational" || n == "Q" => Ok((None, None)),
        FieldSpec::Named(n) => Err(CliError::input(format!("unknown field {n:?}"))),
        FieldSpec::Extension { minpoly, generator } => {
            if !is_identifier(generator) || ["x", "y", "z"].contains(&generator.as_str()) {
                return Err(CliError::input(format!("bad generator name {generator:?}")));
            }
            let p = parse_poly_in(minpoly, &[generator.as_str()])
                .map_err(|e| CliError::input(format!("minpoly: {e}")))?;
            let u = p.to_univariate(0).ok_or_else(|| CliError::input("minpoly must be univariate"))?;
            let k = NumberField::new(generator.clone(), u, budget)
                .map_err(|e| CliError::input(format!("minpoly: {e}")))?;
            Ok((Some(k), Some(generator.clone())))
        }
    }
}

fn is_identifier(s: &str) -> bool {
    let mut ch = s.chars();
    matches!(ch.next(), Some(c) if c.is_ascii_alphabetic()) && ch.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses a coefficient: an exact rational, or a polynomial in the generator.
pub fn parse_element(s: &str, field: Option<&Arc<NumberField>>, generator: Option<&str>) -> CliResult<FieldElement> {
    if let Ok(q) = parse_rational(s) {
        return Ok(FieldElement::rational(q));
    }
    let (k, g) = match (field, generator) {
        (Some(k), Some(g)) => (k, g),
        _ => return Err(CliError::input(format!("not an exact rational: {s:?}"))),
    };
    let p = parse_poly_in(s, &[g]).map_err(|e| CliError::input(format!("coefficient {s:?}: {e}")))?;
    let u: UniPoly<Rational> = p.to_univariate(0).unwrap_or_else(UniPoly::zero);
    let r = u.rem(k.minpoly());
    Ok(FieldElement::from_coords(k, r.coeffs().to_vec()))
}

/// Replaces every identifier token `name` in `s` by `with`.
fn substitute_identifier(s: &str, name: &str, with: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i + c.len_utf8();
            while let Some(&(k, d)) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    j = k + d.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            let tok = &s[i..j];
            out.push_str(if tok == name { with } else { tok });
        } else {
            out.push(c);
        }
    }
    out
}

/// An equation in `x, y, z` whose coefficients may use the generator `g`.
/// The form is recovered by interpolation in `g` from rational values.
pub fn parse_equation(s: &str, field: Option<&Arc<NumberField>>, generator: Option<&str>) -> CliResult<PlaneCurve> {
    let (k, g) = match (field, generator) {
        (Some(k), Some(g)) if substitute_identifier(s, g, "") != s => (k, g),
        _ => return Ok(PlaneCurve::parse(s)?),
    };
    let err = |e: hypertan::exactalg::AlgebraError| CliError::input(format!("equation {s:?}: {e}"));
    let mut deg = 0;
    for (x, y, z) in [("(2)", "(3)", "(5)"), ("(-7)", "(11)", "(13)")] {
        let t = substitute_identifier(&substitute_identifier(&substitute_identifier(s, "x", x), "y", y), "z", z);
        let u = parse_poly_in(&t, &[g]).map_err(err)?;
        deg = deg.max(u.degree().unwrap_or(0) as usize);
    }
    let nodes: Vec<Rational> = (0..=deg as i64).map(|r| Rational::from_integer(r.into())).collect();
    let mut samples = Vec::new();
    for r in &nodes {
        samples.push(parse_poly(&substitute_identifier(s, g, &format!("({r})"))).map_err(err)?);
    }
    // Lagrange basis polynomials in g, reduced into the field
    let mut form = Poly::zero(3);
    for (i, ri) in nodes.iter().enumerate() {
        let mut basis = UniPoly::constant(Rational::one());
        for (j, rj) in nodes.iter().enumerate() {
            if i != j {
                let inv = (ri - rj).recip();
                basis = &basis * &UniPoly::new(vec![-rj * &inv, inv]);
            }
        }
        let li = FieldElement::from_coords(k, basis.rem(k.minpoly()).coeffs().to_vec());
        for (e, c) in samples[i].terms() {
            form.add_term(*e, li.clone() * FieldElement::rational(c.clone()));
        }
    }
    Ok(PlaneCurve::new(form)?)
}

fn build_curve(c: &CurveSpec, field: Option<&Arc<NumberField>>, generator: Option<&str>) -> CliResult<PlaneCurve> {
    match c {
        CurveSpec::Equation(s) => parse_equation(s, field, generator),
        CurveSpec::Terms(ts) => {
            if ts.is_empty() {
                return Err(CliError::input("empty coefficient list"));
            }
            let d = ts[0].0 + ts[0].1 + ts[0].2;
            let mut form = Poly::zero(3);
            for (i, j, k, c) in ts {
                if i + j + k != d {
                    return Err(CliError::input(format!(
                        "non-homogeneous coefficients: x^{i} y^{j} z^{k} has degree {} but the first term has degree {d}",
                        i + j + k
                    )));
                }
                form.add_term([*i, *j, *k], parse_element(c, field, generator)?);
            }
            Ok(PlaneCurve::new(form)?)
        }
    }
}

/// Parses `"a:b:c"` with entries that may use the generator.
pub fn parse_point(s: &str, ws: &Workspace) -> CliResult<ProjectivePoint> {
    let parts: Vec<&str> = s.trim().trim_start_matches('(').trim_end_matches(')').split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::input(format!("expected a point x:y:z, got {s:?}")));
    }
    let mut v = Vec::new();
    for p in parts {
        v.push(parse_element(p, ws.field.as_ref(), ws.generator.as_deref())?);
    }
    Ok(ProjectivePoint::from_vec(v)?)
}

impl Workspace {
    pub fn curve(&self, name: &str) -> CliResult<&PlaneCurve> {
        self.curves
            .get(name)
            .ok_or_else(|| CliError::input(format!("unknown curve name {name:?}")))
    }

    /// The configuration components, defaulting to every curve in name order.
    pub fn component_curves(&self) -> CliResult<Vec<PlaneCurve>> {
        match &self.components {
            Some(names) => names.iter().map(|n| self.curve(n).cloned()).collect(),
            None => Ok(self.curves.values().cloned().collect()),
        }
    }
}

/// Reads a curve given either by name or as an inline rational equation.
pub fn curve_arg(ws: &Workspace, arg: &str) -> CliResult<PlaneCurve> {
    if let Some(c) = ws.curves.get(arg) {
        return Ok(c.clone());
    }
    if arg.chars().any(|c| "xyz".contains(c)) {
        if let Ok(c) = parse_equation(arg, ws.field.as_ref(), ws.generator.as_deref()) {
            return Ok(c);
        }
    }
    Err(CliError::input(format!("unknown curve name {arg:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> Workspace {
        CurveConfigFile::from_json(
            r#"{"schema": 1, "field": {"minpoly": "s^2 - 2", "generator": "s"}, "curves": {"L": "x - s*z"}}"#,
        )
        .unwrap()
        .build(None, &Budget::default())
        .unwrap()
    }

    #[test]
    fn identifiers_are_replaced_as_tokens() {
        assert_eq!(substitute_identifier("s*x + sx - s^2", "s", "(3)"), "(3)*x + sx - (3)^2");
    }

    #[test]
    fn equations_may_use_the_generator() {
        let ws = sqrt2();
        let l = ws.curve("L").unwrap();
        let p = parse_point("s:0:1", &ws).unwrap();
        assert!(l.contains(&p));
        let c = curve_arg(&ws, "x^2 - 2*z^2 + s*y*z").unwrap();
        assert!(c.contains(&p));
        assert_eq!(c.degree(), 2);
        assert!(!c.is_rational());
    }

    #[test]
    fn generator_powers_reduce() {
        let ws = sqrt2();
        let a = curve_arg(&ws, "s^3*x + y").unwrap();
        let b = curve_arg(&ws, "2*s*x + y").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn field_flags() {
        assert_eq!(parse_field_flag("rational").unwrap(), FieldSpec::Named("rational".into()));
        assert!(matches!(parse_field_flag("w = w^2 + w + 1").unwrap(), FieldSpec::Extension { .. }));
        assert!(parse_field_flag("w^2+1").is_err());
    }

    #[test]
    fn points_need_three_coordinates() {
        let ws = sqrt2();
        assert!(parse_point("1:2", &ws).is_err());
        assert!(parse_point("0:0:0", &ws).is_err());
        assert!(parse_point("(1/2:-3:1)", &ws).is_ok());
    }
}
