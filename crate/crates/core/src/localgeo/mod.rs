//! Local analysis of a plane curve at a point: multiplicity, tangent cone,
//! blow-ups, infinitely near points, delta invariant, point types and
//! intersection multiplicities.

mod global;
mod noether;

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

pub use global::{
    distinct_intersection_count, geometric_genus, intersection_points, intersection_support, singular_points, IntersectionPoint,
    SingularPoint,
};
pub use noether::{germ_intersection, local_intersection_multiplicity};

use crate::error::{GeomError, GeomResult};
use crate::exactalg::{adjoin_root, factor_over, is_squarefree_bivariate, Budget, FieldElement, NumberField, Poly, Scalar, UniPoly};
use crate::projplane::{field_of, PlaneCurve, ProjectivePoint};
use crate::KPoly;

/// A curve germ at the origin of an affine chart.
#[derive(Clone, Debug)]
pub struct LocalGerm {
    /// Bivariate equation with `f(0, 0) = 0`.
    pub f: KPoly,
    /// Field containing the coefficients (`None` is Q).
    pub field: Option<Arc<NumberField>>,
    /// Chart steps from the original curve, outermost first.
    pub chart: Vec<String>,
    /// Local equation of the last exceptional divisor, if any.
    pub exceptional: Option<KPoly>,
}

/// Affine chart of the projective plane centred at a point.
#[derive(Clone, Debug)]
pub struct Chart {
    pub center: ProjectivePoint,
    /// The homogeneous coordinate set to 1.
    pub dropped: usize,
}

impl Chart {
    pub fn at(p: &ProjectivePoint) -> Self {
        Chart { center: p.clone(), dropped: p.chart() }
    }

    fn kept(&self) -> [usize; 2] {
        match self.dropped {
            0 => [1, 2],
            1 => [0, 2],
            _ => [0, 1],
        }
    }

    /// Bivariate equation of a form in this chart, centred at the point.
    pub fn localize(&self, f: &KPoly) -> KPoly {
        let [i0, i1] = self.kept();
        let c = self.center.coords();
        let mut images = vec![KPoly::zero(2); 3];
        images[i0] = &KPoly::var(2, 0) + &KPoly::constant(2, c[i0].clone());
        images[i1] = &KPoly::var(2, 1) + &KPoly::constant(2, c[i1].clone());
        images[self.dropped] = KPoly::one(2);
        f.compose(&images)
    }

    /// The projective line whose local equation is `a u + b v = 0`.
    pub fn line(&self, a: &FieldElement, b: &FieldElement) -> GeomResult<PlaneCurve> {
        let [i0, i1] = self.kept();
        let c = self.center.coords();
        let mut coeffs = [FieldElement::zero(), FieldElement::zero(), FieldElement::zero()];
        coeffs[i0] = a.clone();
        coeffs[i1] = b.clone();
        coeffs[self.dropped] = -(a.clone() * c[i0].clone() + b.clone() * c[i1].clone());
        let [x, y, z] = coeffs;
        PlaneCurve::line(x, y, z)
    }

    pub fn describe(&self) -> String {
        format!("chart {}=1 at {}", ["x", "y", "z"][self.dropped], self.center)
    }
}

impl LocalGerm {
    pub fn new(f: KPoly) -> GeomResult<Self> {
        if f.nvars() != 2 {
            return Err(GeomError::Invalid("a germ is a bivariate polynomial".into()));
        }
        if f.is_zero() || !f.coeff(&[0, 0, 0]).is_zero() {
            return Err(GeomError::Invalid("germ must vanish at the origin and be nonzero".into()));
        }
        let field = field_of(f.terms().map(|(_, c)| c));
        Ok(LocalGerm { f, field, chart: vec![], exceptional: None })
    }

    /// Germ of `C` at `p`.
    pub fn at(c: &PlaneCurve, p: &ProjectivePoint) -> GeomResult<Self> {
        if !c.contains(p) {
            return Err(GeomError::NotOnCurve(p.to_string()));
        }
        let chart = Chart::at(p);
        let f = chart.localize(c.form());
        let field = field_of(f.terms().map(|(_, c)| c).chain(p.coords().iter()));
        Ok(LocalGerm { f, field, chart: vec![chart.describe()], exceptional: None })
    }

    pub fn multiplicity(&self) -> u32 {
        self.f.order().unwrap_or(0)
    }

    pub fn tangent_cone(&self) -> KPoly {
        self.f.homogeneous_part(self.multiplicity())
    }

    pub fn is_squarefree(&self) -> bool {
        is_squarefree_bivariate(&self.f)
    }

    pub fn tangent_directions(&self, budget: &Budget) -> GeomResult<Vec<Direction>> {
        directions_of_cone(&self.tangent_cone(), self.field.as_ref(), budget)
    }

    /// Strict transform at the infinitely near point in a resolved direction.
    pub fn blow_up(&self, dir: &ResolvedDirection) -> GeomResult<LocalGerm> {
        let m = self.multiplicity();
        if !dir.is_tangent(&self.tangent_cone()) {
            return Err(GeomError::Precondition("direction is not a tangent direction".into()));
        }
        let (f, e, step) = match dir {
            ResolvedDirection::Slope(l) => (blow_up_slope(&self.f, m, l), KPoly::var(2, 0), format!("blow-up y = x(v + {l})")),
            ResolvedDirection::Vertical => (blow_up_vertical(&self.f, m), KPoly::var(2, 1), "blow-up x = y u".to_string()),
        };
        let field = field_of(f.terms().map(|(_, c)| c)).or_else(|| dir.field()).or_else(|| self.field.clone());
        let mut chart = self.chart.clone();
        chart.push(step);
        Ok(LocalGerm { f, field, chart, exceptional: Some(e) })
    }
}

/// `f(x, x (v + l)) / x^m`.
pub(crate) fn blow_up_slope(f: &KPoly, m: u32, l: &FieldElement) -> KPoly {
    let x = KPoly::var(2, 0);
    let y = KPoly::var(2, 1);
    let img = &(&x * &y) + &x.scale(l);
    f.compose(&[x, img]).div_var_power(0, m)
}

/// `f(y u, y) / y^m`, in variables `(u, y)`.
pub(crate) fn blow_up_vertical(f: &KPoly, m: u32) -> KPoly {
    let x = KPoly::var(2, 0);
    let y = KPoly::var(2, 1);
    f.compose(&[&x * &y, y]).div_var_power(1, m)
}

/// A Galois orbit of tangent directions.
#[derive(Clone, Debug)]
pub enum DirectionKind {
    /// The direction `(0:1)`, i.e. the line `x = 0`.
    Vertical,
    /// Directions `(1:l)` with `g(l) = 0`, `g` irreducible over the field.
    Slope(UniPoly<FieldElement>),
}

#[derive(Clone, Debug)]
pub struct Direction {
    pub kind: DirectionKind,
    /// Multiplicity of the direction as a factor of the tangent cone.
    pub multiplicity: u32,
}

impl Direction {
    /// Number of conjugate directions in the orbit.
    pub fn conjugates(&self) -> usize {
        match &self.kind {
            DirectionKind::Vertical => 1,
            DirectionKind::Slope(g) => g.degree().unwrap(),
        }
    }

    /// Picks a representative direction, adjoining a root when needed.
    pub fn resolve(&self, field: Option<&Arc<NumberField>>, budget: &Budget) -> GeomResult<ResolvedDirection> {
        match &self.kind {
            DirectionKind::Vertical => Ok(ResolvedDirection::Vertical),
            DirectionKind::Slope(g) => Ok(ResolvedDirection::Slope(adjoin_root(field, g, budget)?.root)),
        }
    }
}

/// One concrete tangent direction.
#[derive(Clone, Debug)]
pub enum ResolvedDirection {
    Vertical,
    Slope(FieldElement),
}

impl ResolvedDirection {
    fn field(&self) -> Option<Arc<NumberField>> {
        match self {
            ResolvedDirection::Vertical => None,
            ResolvedDirection::Slope(l) => l.field().cloned().filter(|_| !l.is_rational()),
        }
    }

    fn is_tangent(&self, cone: &KPoly) -> bool {
        let pt = match self {
            ResolvedDirection::Vertical => [FieldElement::zero(), FieldElement::one()],
            ResolvedDirection::Slope(l) => [FieldElement::one(), l.clone()],
        };
        cone.eval(&pt).is_zero()
    }

    /// Local linear form `a u + b v` of the tangent line in this direction.
    pub fn line_coeffs(&self) -> (FieldElement, FieldElement) {
        match self {
            ResolvedDirection::Vertical => (FieldElement::one(), FieldElement::zero()),
            ResolvedDirection::Slope(l) => (-l.clone(), FieldElement::one()),
        }
    }
}

/// Splits a binary form into Galois orbits of linear factors.
pub fn directions_of_cone(cone: &KPoly, field: Option<&Arc<NumberField>>, budget: &Budget) -> GeomResult<Vec<Direction>> {
    let m = cone.degree().ok_or_else(|| GeomError::Invalid("empty tangent cone".into()))?;
    let mut out = Vec::new();
    // (0:1) is a direction iff the y^m coefficient vanishes; its multiplicity
    // is the x-adic valuation of the cone
    let vx = cone.valuation_in(0).unwrap();
    if vx > 0 {
        out.push(Direction { kind: DirectionKind::Vertical, multiplicity: vx });
    }
    let u = cone.to_univariate_at(0, &FieldElement::one());
    if u.degree().unwrap_or(0) >= 1 {
        for (g, e) in factor_over(field, &u, budget)? {
            out.push(Direction { kind: DirectionKind::Slope(g), multiplicity: e });
        }
    }
    debug_assert_eq!(out.iter().map(|d| d.multiplicity as usize * d.conjugates()).sum::<usize>(), m as usize);
    Ok(out)
}

/// A node of the infinitely near tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeNode {
    pub multiplicity: u32,
    /// Number of conjugate copies of this node over the base field.
    pub conjugates: usize,
    pub children: Vec<TreeNode>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfinitelyNearTree {
    pub root: TreeNode,
}

impl InfinitelyNearTree {
    /// `sum m (m - 1) / 2` over all nodes, conjugates included.
    pub fn delta(&self) -> u64 {
        fn rec(n: &TreeNode) -> u64 {
            let m = n.multiplicity as u64;
            n.conjugates as u64 * m * (m.saturating_sub(1)) / 2 + n.children.iter().map(rec).sum::<u64>()
        }
        rec(&self.root)
    }

    /// Number of branches (leaves, counted with conjugates).
    pub fn branch_count(&self) -> u64 {
        fn rec(n: &TreeNode) -> u64 {
            if n.children.is_empty() {
                n.conjugates as u64
            } else {
                n.children.iter().map(rec).sum()
            }
        }
        rec(&self.root)
    }

    /// Multiplicity sequence in depth-first order.
    pub fn multiplicities(&self) -> Vec<u32> {
        fn rec(n: &TreeNode, out: &mut Vec<u32>) {
            out.push(n.multiplicity);
            n.children.iter().for_each(|c| rec(c, out));
        }
        let mut v = Vec::new();
        rec(&self.root, &mut v);
        v
    }
}

impl fmt::Display for InfinitelyNearTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn rec(n: &TreeNode, depth: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            writeln!(f, "{}m={} x{}", "  ".repeat(depth), n.multiplicity, n.conjugates)?;
            n.children.iter().try_for_each(|c| rec(c, depth + 1, f))
        }
        rec(&self.root, 0, f)
    }
}

/// Depth cap for blow-up recursion on a germ of the given degree.
fn depth_cap(degree: u32) -> usize {
    let d = degree.max(1) as usize;
    2 + (d - 1) * (d.saturating_sub(2)) / 2
}

/// Builds the tree of infinitely near points of a germ.
pub fn germ_tree(germ: &LocalGerm, budget: &Budget) -> GeomResult<InfinitelyNearTree> {
    let cap = depth_cap(germ.f.degree().unwrap_or(1));
    Ok(InfinitelyNearTree { root: tree_node(germ, 1, 0, cap, budget)? })
}

fn tree_node(germ: &LocalGerm, conj: usize, depth: usize, cap: usize, budget: &Budget) -> GeomResult<TreeNode> {
    let m = germ.multiplicity();
    if m == 0 {
        return Err(GeomError::Internal("tree node off the curve".into()));
    }
    let mut node = TreeNode { multiplicity: m, conjugates: conj, children: vec![] };
    if m == 1 {
        return Ok(node);
    }
    if depth >= cap {
        return Err(GeomError::Internal(format!("blow-up depth exceeded {cap}: non-reduced germ")));
    }
    for dir in germ.tangent_directions(budget)? {
        let k = dir.conjugates();
        let r = dir.resolve(germ.field.as_ref(), budget)?;
        let child = germ.blow_up(&r)?;
        node.children.push(tree_node(&child, conj * k, depth + 1, cap, budget)?);
    }
    Ok(node)
}

/// Tree of infinitely near points of `C` at `p`, with the curve-degree cap.
pub fn infinitely_near_tree(c: &PlaneCurve, p: &ProjectivePoint, budget: &Budget) -> GeomResult<InfinitelyNearTree> {
    if !c.is_squarefree() {
        return Err(GeomError::NotSquarefree);
    }
    let germ = LocalGerm::at(c, p)?;
    let cap = depth_cap(c.degree()).max(depth_cap(germ.f.degree().unwrap_or(1)));
    Ok(InfinitelyNearTree { root: tree_node(&germ, 1, 0, cap, budget)? })
}

pub fn multiplicity_at(c: &PlaneCurve, p: &ProjectivePoint) -> GeomResult<u32> {
    Ok(LocalGerm::at(c, p)?.multiplicity())
}

pub fn delta_invariant(c: &PlaneCurve, p: &ProjectivePoint, budget: &Budget) -> GeomResult<u64> {
    Ok(infinitely_near_tree(c, p, budget)?.delta())
}

pub fn branch_count(c: &PlaneCurve, p: &ProjectivePoint, budget: &Budget) -> GeomResult<u64> {
    Ok(infinitely_near_tree(c, p, budget)?.branch_count())
}

pub fn is_unibranched(c: &PlaneCurve, p: &ProjectivePoint, budget: &Budget) -> GeomResult<bool> {
    Ok(branch_count(c, p, budget)? == 1)
}

/// Contact order `n` of a point type; infinite when the tangent line is a
/// component of the curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Contact {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Contact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Contact::Finite(n) => write!(f, "{n}"),
            Contact::Infinite => write!(f, "inf"),
        }
    }
}

/// `(m, n)`: multiplicity and contact order with the tangent line at a
/// unibranched point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointType {
    pub m: u32,
    pub n: Contact,
}

impl PointType {
    pub fn new(m: u32, n: u32) -> Self {
        PointType { m, n: Contact::Finite(n) }
    }
}

impl fmt::Display for PointType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

/// Order of vanishing of `f` along the line `a u + b v = 0` through the
/// origin (`None` when the line is a component).
pub fn line_contact(f: &KPoly, a: &FieldElement, b: &FieldElement) -> Option<u32> {
    // parametrize the line as t * (-b, a)
    let t = UniPoly::new(vec![FieldElement::zero(), FieldElement::one()]);
    let mut acc: UniPoly<FieldElement> = UniPoly::zero();
    for (e, c) in f.terms() {
        let term = t.pow(e[0] + e[1]).scale(&(c.clone() * (-b.clone()).pow(e[0]) * a.clone().pow(e[1])));
        acc = &acc + &term;
    }
    acc.valuation().map(|v| v as u32)
}

/// Point type of a unibranched germ, with its tangent direction.
pub fn germ_point_type(germ: &LocalGerm, budget: &Budget) -> GeomResult<(PointType, ResolvedDirection)> {
    let tree = germ_tree(germ, budget)?;
    if tree.branch_count() != 1 {
        return Err(GeomError::NotUnibranched(format!("{} branches", tree.branch_count())));
    }
    let dirs = germ.tangent_directions(budget)?;
    if dirs.len() != 1 || dirs[0].conjugates() != 1 {
        return Err(GeomError::Internal("unibranched germ with several tangent directions".into()));
    }
    let r = dirs[0].resolve(germ.field.as_ref(), budget)?;
    let (a, b) = r.line_coeffs();
    let n = match line_contact(&germ.f, &a, &b) {
        Some(n) => Contact::Finite(n),
        None => Contact::Infinite,
    };
    Ok((PointType { m: germ.multiplicity(), n }, r))
}

/// `(m, n)` type of `C` at a unibranched point.
pub fn point_type(c: &PlaneCurve, p: &ProjectivePoint, budget: &Budget) -> GeomResult<PointType> {
    if !c.is_squarefree() {
        return Err(GeomError::NotSquarefree);
    }
    Ok(germ_point_type(&LocalGerm::at(c, p)?, budget)?.0)
}

/// Tangent line of `C` at a unibranched point, from the unique factor of the
/// tangent cone.
pub fn tangent_line(c: &PlaneCurve, p: &ProjectivePoint, budget: &Budget) -> GeomResult<PlaneCurve> {
    let germ = LocalGerm::at(c, p)?;
    if germ.multiplicity() == 1 {
        let g = c.gradient_at(p);
        let [a, b, cc] = g;
        return PlaneCurve::line(a, b, cc);
    }
    let (_, dir) = germ_point_type(&germ, budget)?;
    let (a, b) = dir.line_coeffs();
    Chart::at(p).line(&a, &b)
}

/// The three cases of a single blow-up of an `(m, n)` point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlowupCase {
    /// `n < 2m`: the child is an `(n - m, m)` point tangent to the exceptional divisor.
    A { child: PointType },
    /// `n > 2m`: the child is an `(m, n - m)` point tangent to the transformed tangent line.
    B { child: PointType },
    /// `n = 2m`: the child is an `m`-fold point transverse to both.
    C { multiplicity: u32 },
}

pub fn classify_blowup(pt: PointType) -> GeomResult<BlowupCase> {
    let Contact::Finite(n) = pt.n else {
        return Err(GeomError::Precondition("contact order is infinite".into()));
    };
    let m = pt.m;
    if m == 0 || n <= m {
        return Err(GeomError::Precondition(format!("({m},{n}) is not a point type")));
    }
    Ok(if n < 2 * m {
        BlowupCase::A { child: PointType::new(n - m, m) }
    } else if n > 2 * m {
        BlowupCase::B { child: PointType::new(m, n - m) }
    } else {
        BlowupCase::C { multiplicity: m }
    })
}

/// Observed behaviour of one blow-up of a unibranched germ along its
/// tangent: the child type and its tangency to the exceptional divisor and
/// to the strict transform of the tangent line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupObservation {
    pub child: PointType,
    pub tangent_to_exceptional: bool,
    pub tangent_to_line: bool,
}

pub fn observe_blowup(germ: &LocalGerm, budget: &Budget) -> GeomResult<BlowupObservation> {
    let (_, dir) = germ_point_type(germ, budget)?;
    let child = germ.blow_up(&dir)?;
    let (child_type, cdir) = germ_point_type(&child, budget)?;
    // chart of the child: slope blow-up has E = {x = 0} and the tangent line
    // transforms to {v = 0}; vertical blow-up has E = {y = 0}, line {u = 0}
    let (e_dir, l_dir) = match dir {
        ResolvedDirection::Slope(_) => (true, false),
        ResolvedDirection::Vertical => (false, true),
    };
    let is_vertical = matches!(cdir, ResolvedDirection::Vertical);
    let is_horizontal = matches!(&cdir, ResolvedDirection::Slope(l) if l.is_zero());
    let along = |vertical: bool| if vertical { is_vertical } else { is_horizontal };
    Ok(BlowupObservation { child: child_type, tangent_to_exceptional: along(e_dir), tangent_to_line: along(l_dir) })
}

/// Germ of an `(m, n)` point: the norm of `y - phi(t)` over `t^m = x`.
pub fn germ_from_parametrization(m: u32, phi: &[(u32, crate::Rational)]) -> GeomResult<LocalGerm> {
    use crate::exactalg::{resultant, Rational};
    // variables (x, y, t)
    let x = Poly::<Rational>::var(3, 0);
    let y = Poly::<Rational>::var(3, 1);
    let t = Poly::<Rational>::var(3, 2);
    let a = &t.pow(m) - &x;
    let mut b = y.clone();
    for (k, c) in phi {
        b = &b - &t.pow(*k).scale(c);
    }
    let r = resultant(&a, &b, 2)?;
    let f = Poly::from_terms(2, r.terms().map(|(e, c)| ([e[0], e[1], 0], FieldElement::rational(c.clone()))));
    LocalGerm::new(f.normalized())
}

#[cfg(test)]
mod tests;
