//! SVG rendering of real affine traces by marching squares.
//!
//! Floating point is used only here. Sample values come from the exact
//! rational forms converted to `f64`; nothing computed here is fed back.

use std::collections::BTreeMap;
use std::fmt::Write;

use hypertan::{Poly, Rational};
use num_traits::ToPrimitive;

use crate::error::{CliError, CliResult};

pub const MAX_RESOLUTION: usize = 2048;
pub const DEFAULT_VIEWPORT: [f64; 4] = [-3.0, 3.0, -3.0, 3.0];
const CANVAS: f64 = 600.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Viewport {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Viewport {
    pub fn new(v: [f64; 4]) -> CliResult<Self> {
        let [x0, x1, y0, y1] = v;
        if v.iter().any(|t| !t.is_finite()) {
            return Err(CliError::input("viewport bounds must be finite"));
        }
        if x1 <= x0 || y1 <= y0 {
            return Err(CliError::input(format!("viewport [{x0}, {x1}] x [{y0}, {y1}] has zero area")));
        }
        Ok(Viewport { x0, x1, y0, y1 })
    }

    /// Reads `x0,x1,y0,y1`.
    pub fn parse(s: &str) -> CliResult<Self> {
        let v: Vec<f64> = s
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| CliError::input(format!("viewport must be x0,x1,y0,y1, got {s:?}")))?;
        let v: [f64; 4] = v.try_into().map_err(|_| CliError::input("viewport needs four numbers"))?;
        Self::new(v)
    }
}

/// Which coordinate is set to 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    X,
    Y,
    Z,
}

impl Chart {
    pub fn parse(s: &str) -> CliResult<Self> {
        match s {
            "x" => Ok(Chart::X),
            "y" => Ok(Chart::Y),
            "z" => Ok(Chart::Z),
            _ => Err(CliError::input(format!("chart must be x, y or z, got {s:?}"))),
        }
    }

    fn axes(self) -> (&'static str, &'static str) {
        match self {
            Chart::X => ("y", "z"),
            Chart::Y => ("x", "z"),
            Chart::Z => ("x", "y"),
        }
    }

    fn lift(self, u: f64, v: f64) -> [f64; 3] {
        match self {
            Chart::X => [1.0, u, v],
            Chart::Y => [u, 1.0, v],
            Chart::Z => [u, v, 1.0],
        }
    }
}

#[derive(Clone, Debug)]
pub struct PlotCurve {
    pub name: String,
    /// `base` or `found`.
    pub class: &'static str,
    pub form: Poly<Rational>,
}

struct FloatForm(Vec<([i32; 3], f64)>);

impl FloatForm {
    fn new(p: &Poly<Rational>) -> Self {
        FloatForm(
            p.terms()
                .map(|(e, c)| ([e[0] as i32, e[1] as i32, e[2] as i32], c.to_f64().unwrap_or(f64::NAN)))
                .collect(),
        )
    }

    fn eval(&self, p: [f64; 3]) -> f64 {
        self.0.iter().map(|(e, c)| c * p[0].powi(e[0]) * p[1].powi(e[1]) * p[2].powi(e[2])).sum()
    }
}

/// Crossing on a grid edge: `(i, j, vertical)` names the edge leaving
/// sample `(i, j)` to the right or upward.
type EdgeKey = (usize, usize, bool);

/// Zero-set segments over the sample grid, chained into polylines.
fn trace(f: &FloatForm, chart: Chart, vp: &Viewport, n: usize) -> Vec<(Vec<(f64, f64)>, bool)> {
    let xs: Vec<f64> = (0..=n).map(|i| vp.x0 + (vp.x1 - vp.x0) * i as f64 / n as f64).collect();
    let ys: Vec<f64> = (0..=n).map(|j| vp.y0 + (vp.y1 - vp.y0) * j as f64 / n as f64).collect();
    let val: Vec<Vec<f64>> = xs.iter().map(|&x| ys.iter().map(|&y| f.eval(chart.lift(x, y))).collect()).collect();
    let pos = |i: usize, j: usize| val[i][j] >= 0.0;
    let mut points: BTreeMap<EdgeKey, (f64, f64)> = BTreeMap::new();
    let mut crossing = |k: EdgeKey| -> Option<EdgeKey> {
        let (i, j, vertical) = k;
        let (i2, j2) = if vertical { (i, j + 1) } else { (i + 1, j) };
        if pos(i, j) == pos(i2, j2) {
            return None;
        }
        let (a, b) = (val[i][j], val[i2][j2]);
        let t = if a == b { 0.5 } else { (a / (a - b)).clamp(0.0, 1.0) };
        let p = (xs[i] + t * (xs[i2] - xs[i]), ys[j] + t * (ys[j2] - ys[j]));
        points.insert(k, p);
        Some(k)
    };
    let mut adj: BTreeMap<EdgeKey, Vec<EdgeKey>> = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            // bottom, right, top, left
            let edges = [(i, j, false), (i + 1, j, true), (i, j + 1, false), (i, j, true)];
            let hits: Vec<EdgeKey> = edges.iter().filter_map(|&e| crossing(e)).collect();
            let pairs: Vec<(EdgeKey, EdgeKey)> = match hits.len() {
                2 => vec![(hits[0], hits[1])],
                4 => {
                    let centre = (val[i][j] + val[i + 1][j] + val[i + 1][j + 1] + val[i][j + 1]) / 4.0;
                    if (centre >= 0.0) == pos(i, j) {
                        vec![(hits[0], hits[1]), (hits[2], hits[3])]
                    } else {
                        vec![(hits[0], hits[3]), (hits[1], hits[2])]
                    }
                }
                _ => vec![],
            };
            for (a, b) in pairs {
                adj.entry(a).or_default().push(b);
                adj.entry(b).or_default().push(a);
            }
        }
    }
    let mut used: BTreeMap<(EdgeKey, EdgeKey), bool> = BTreeMap::new();
    let norm = |a: EdgeKey, b: EdgeKey| if a <= b { (a, b) } else { (b, a) };
    let mut chains = Vec::new();
    let starts: Vec<EdgeKey> = adj
        .iter()
        .filter(|(_, v)| v.len() == 1)
        .map(|(k, _)| *k)
        .chain(adj.keys().copied())
        .collect();
    for s in starts {
        let mut chain = vec![s];
        let mut cur = s;
        let mut closed = false;
        loop {
            let next = adj[&cur].iter().copied().find(|&m| !used.contains_key(&norm(cur, m)));
            match next {
                Some(m) => {
                    used.insert(norm(cur, m), true);
                    if m == s {
                        closed = true;
                        break;
                    }
                    chain.push(m);
                    cur = m;
                }
                None => break,
            }
        }
        if chain.len() > 1 {
            chains.push((chain.iter().map(|k| points[k]).collect(), closed));
        }
    }
    chains
}

/// Renders an SVG document. Returns the document and any warnings.
pub fn render(curves: &[PlotCurve], chart: Chart, vp: &Viewport, resolution: usize) -> CliResult<(String, Vec<String>)> {
    if !(2..=MAX_RESOLUTION).contains(&resolution) {
        return Err(CliError::input(format!("resolution must be between 2 and {MAX_RESOLUTION}")));
    }
    let w = CANVAS;
    let h = (CANVAS * (vp.y1 - vp.y0) / (vp.x1 - vp.x0)).clamp(50.0, 4.0 * CANVAS);
    let px = |(x, y): (f64, f64)| ((x - vp.x0) / (vp.x1 - vp.x0) * w, (vp.y1 - y) / (vp.y1 - vp.y0) * h);
    let (u, v) = chart.axes();
    let mut svg = String::new();
    let mut warnings = Vec::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#
    );
    let _ = writeln!(
        svg,
        "<desc>chart {}=1, {u} in [{}, {}], {v} in [{}, {}], grid {resolution}</desc>",
        match chart {
            Chart::X => "x",
            Chart::Y => "y",
            Chart::Z => "z",
        },
        vp.x0,
        vp.x1,
        vp.y0,
        vp.y1
    );
    let _ = writeln!(
        svg,
        "<style>path {{ fill: none; stroke-width: 1.5; }} .base {{ stroke: #000000; }} .found {{ stroke: #c0392b; stroke-dasharray: 6 3; }}</style>"
    );
    let _ = writeln!(svg, r##"<rect x="0" y="0" width="{w:.0}" height="{h:.0}" fill="#ffffff"/>"##);
    for c in curves {
        let f = FloatForm::new(&c.form);
        let chains = trace(&f, chart, vp, resolution);
        if chains.is_empty() {
            let msg = format!("curve {} has no real trace in the viewport", c.name);
            let _ = writeln!(svg, "<!-- warning: {msg} -->");
            warnings.push(msg);
            continue;
        }
        let mut d = String::new();
        for (chain, closed) in &chains {
            for (k, p) in chain.iter().enumerate() {
                let (x, y) = px(*p);
                let _ = write!(d, "{}{x:.2} {y:.2} ", if k == 0 { "M" } else { "L" });
            }
            if *closed {
                d.push_str("Z ");
            }
        }
        let _ = writeln!(svg, r#"<path class="{}" data-curve="{}" d="{}"/>"#, c.class, c.name, d.trim_end());
    }
    svg.push_str("</svg>\n");
    Ok((svg, warnings))
}
