//! Simple algebraic extensions `Q(a) = Q[t]/(m(t))` and their elements.
//!
//! A [`FieldElement`] without a field is a plain rational and combines with
//! elements of any field. Elements of two different fields combine only when
//! one field is registered as embedded in the other; the embedding graph is
//! fixed when a field is constructed.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{format_rational, AlgebraError, Budget, Rational, Scalar, UniPoly};

pub struct NumberField {
    name: String,
    minpoly: UniPoly<Rational>,
    /// `(source, image of source generator in this field's power basis)`.
    embeddings: Vec<(Arc<NumberField>, Vec<Rational>)>,
    /// `t^(n+k) = rows[k] / den` in the power basis, for `k < n - 1`.
    reduction: OnceLock<(BigInt, Vec<Vec<BigInt>>)>,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q({}) / ({})", self.name, self.minpoly)
    }
}

impl NumberField {
    /// Builds `Q[t]/(m)`. `m` is made monic; irreducibility is the caller's
    /// contract here (see [`super::factor`] for the checked constructor).
    pub(crate) fn new_unchecked(
        name: impl Into<String>,
        minpoly: UniPoly<Rational>,
        embeddings: Vec<(Arc<NumberField>, Vec<Rational>)>,
    ) -> Arc<Self> {
        let minpoly = minpoly.monic();
        assert!(minpoly.degree().unwrap_or(0) >= 1, "minimal polynomial must have degree >= 1");
        Arc::new(NumberField { name: name.into(), minpoly, embeddings, reduction: OnceLock::new() })
    }

    /// Checked constructor: `m` must be irreducible over Q of degree at
    /// least 2.
    pub fn new(name: impl Into<String>, minpoly: UniPoly<Rational>, budget: &Budget) -> Result<Arc<Self>, AlgebraError> {
        if minpoly.degree().unwrap_or(0) < 2 {
            return Err(AlgebraError::Invalid("minimal polynomial must have degree at least 2".into()));
        }
        let lifted = minpoly.map(|c| FieldElement::rational(c.clone()));
        if !super::factor::is_irreducible_over(None, &lifted, budget)? {
            return Err(AlgebraError::Reducible(format!("{minpoly} is reducible over Q")));
        }
        Ok(Self::new_unchecked(name, minpoly, vec![]))
    }

    /// Checked constructor that also registers embeddings. Each image must
    /// be a root of the source's minimal polynomial.
    pub fn with_embeddings(
        name: impl Into<String>,
        minpoly: UniPoly<Rational>,
        embeddings: Vec<(Arc<NumberField>, Vec<Rational>)>,
        budget: &Budget,
    ) -> Result<Arc<Self>, AlgebraError> {
        let bare = Self::new(name, minpoly, budget)?;
        for (src, img) in &embeddings {
            let x = FieldElement::from_coords(&bare, img.clone());
            let v = src.minpoly.coeffs().iter().rev().fold(FieldElement::zero(), |acc, c| {
                acc * x.clone() + FieldElement::rational(c.clone())
            });
            if !v.is_zero() {
                return Err(AlgebraError::Invalid(format!("embedding image is not a root of ({})", src.minpoly)));
            }
        }
        Ok(Self::new_unchecked(bare.name.clone(), bare.minpoly.clone(), embeddings))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn minpoly(&self) -> &UniPoly<Rational> {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap()
    }

    pub fn embeddings(&self) -> &[(Arc<NumberField>, Vec<Rational>)] {
        &self.embeddings
    }

    /// Same ring: identical minimal polynomials and identical registered
    /// embeddings (conjugate embeddings of a subfield are kept apart).
    pub fn same_as(a: &Arc<NumberField>, b: &Arc<NumberField>) -> bool {
        Arc::ptr_eq(a, b)
            || (a.minpoly == b.minpoly
                && a.embeddings.len() == b.embeddings.len()
                && a.embeddings.iter().zip(&b.embeddings).all(|((ka, ia), (kb, ib))| ia == ib && Self::same_as(ka, kb)))
    }

    fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        let n = self.degree();
        let m = self.minpoly.coeffs();
        while v.len() > n {
            let c = v.pop().unwrap();
            if c.is_zero() {
                continue;
            }
            let base = v.len() - n;
            for (j, mj) in m.iter().take(n).enumerate() {
                v[base + j] -= &c * mj;
            }
        }
        v.resize(n, Rational::zero());
        v
    }

    fn reduction_table(&self) -> &(BigInt, Vec<Vec<BigInt>>) {
        self.reduction.get_or_init(|| {
            let n = self.degree();
            let mut rows: Vec<Vec<Rational>> = Vec::new();
            for k in 0..n.saturating_sub(1) {
                let mut v = vec![Rational::zero(); n + k + 1];
                v[n + k] = Rational::one();
                rows.push(self.reduce(v));
            }
            let den = rows.iter().flatten().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            let rows = rows
                .iter()
                .map(|r| r.iter().map(|q| q.numer() * (&den / q.denom())).collect())
                .collect();
            (den, rows)
        })
    }

    fn mul_coords(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let n = self.degree();
        if a.len() != n || b.len() != n || n < 2 {
            let mut v = vec![Rational::zero(); a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    v[i + j] += x * y;
                }
            }
            return self.reduce(v);
        }
        // integer convolution over common denominators, normalized once
        let (ia, da) = integral(a);
        let (ib, db) = integral(b);
        let mut prod = vec![BigInt::zero(); 2 * n - 1];
        for (i, x) in ia.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in ib.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let (den, rows) = self.reduction_table();
        let mut out: Vec<BigInt> = prod[..n].iter().map(|c| c * den).collect();
        for (k, c) in prod[n..].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(&rows[k]) {
                *o += c * r;
            }
        }
        let total = da * db * den;
        out.into_iter().map(|c| Rational::new(c, total.clone())).collect()
    }

    /// Image of `from`'s generator in `to`, following registered embeddings.
    fn generator_image(from: &Arc<NumberField>, to: &Arc<NumberField>) -> Option<FieldElement> {
        if Self::same_as(from, to) {
            return Some(FieldElement::generator(to));
        }
        for (src, img) in &to.embeddings {
            if let Some(mid) = Self::generator_image(from, src) {
                let img = FieldElement::from_coords(to, img.clone());
                return Some(mid.evaluate_at(&img));
            }
        }
        None
    }

    /// True when elements of `from` can be lifted into `to`.
    pub fn embeds_into(from: &Arc<NumberField>, to: &Arc<NumberField>) -> bool {
        Self::generator_image(from, to).is_some()
    }
}

#[derive(Clone)]
pub struct FieldElement {
    field: Option<Arc<NumberField>>,
    coords: Vec<Rational>,
}

impl FieldElement {
    pub fn rational(q: Rational) -> Self {
        FieldElement { field: None, coords: vec![q] }
    }

    pub fn generator(field: &Arc<NumberField>) -> Self {
        let mut v = vec![Rational::zero(); field.degree()];
        if v.len() == 1 {
            // degree one: the generator is the root of t - c
            v[0] = -field.minpoly.coeff(0);
        } else {
            v[1] = Rational::one();
        }
        FieldElement { field: Some(field.clone()), coords: v }
    }

    /// Element with the given power-basis coordinates (reduced if too long).
    pub fn from_coords(field: &Arc<NumberField>, coords: Vec<Rational>) -> Self {
        let coords = if coords.is_empty() { vec![Rational::zero()] } else { coords };
        FieldElement { field: Some(field.clone()), coords: field.reduce(coords) }
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        self.field.as_ref()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// The rational value, if the element lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coords[1..].iter().all(Zero::is_zero) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    /// Interprets `self` as a polynomial in its field's generator and
    /// evaluates it at `x`.
    pub fn evaluate_at(&self, x: &FieldElement) -> FieldElement {
        self.coords
            .iter()
            .rev()
            .fold(FieldElement::zero(), |acc, c| acc * x.clone() + FieldElement::rational(c.clone()))
    }

    /// Lifts into `target`, if `self`'s field embeds there.
    pub fn lift_to(&self, target: &Arc<NumberField>) -> Option<FieldElement> {
        match &self.field {
            None => {
                let mut v = vec![Rational::zero(); target.degree()];
                v[0] = self.coords[0].clone();
                Some(FieldElement { field: Some(target.clone()), coords: v })
            }
            Some(f) if NumberField::same_as(f, target) => {
                Some(FieldElement { field: Some(target.clone()), coords: self.coords.clone() })
            }
            Some(f) => {
                let img = NumberField::generator_image(f, target)?;
                Some(self.evaluate_at(&img))
            }
        }
    }

    /// Brings two elements into a common field.
    pub fn try_unify(a: &FieldElement, b: &FieldElement) -> Result<(FieldElement, FieldElement), AlgebraError> {
        match (&a.field, &b.field) {
            (None, None) => Ok((a.clone(), b.clone())),
            (Some(fa), Some(fb)) if NumberField::same_as(fa, fb) => Ok((a.clone(), b.clone())),
            (Some(fa), _) if b.lift_to(fa).is_some() => Ok((a.clone(), b.lift_to(fa).unwrap())),
            (_, Some(fb)) if a.lift_to(fb).is_some() => Ok((a.lift_to(fb).unwrap(), b.clone())),
            (Some(fa), Some(fb)) => Err(AlgebraError::FieldMismatch(format!("{fa:?} vs {fb:?}"))),
            _ => unreachable!(),
        }
    }

    fn unify(a: &FieldElement, b: &FieldElement) -> (FieldElement, FieldElement) {
        Self::try_unify(a, b).unwrap_or_else(|e| panic!("{e}"))
    }

    /// Norm down to Q.
    pub fn norm(&self) -> Rational {
        match &self.field {
            None => self.coords[0].clone(),
            Some(f) => {
                let n = f.degree();
                let mut rows = Vec::with_capacity(n);
                let mut basis = vec![Rational::zero(); n];
                for k in 0..n {
                    basis.iter_mut().for_each(|c| *c = Rational::zero());
                    basis[k] = Rational::one();
                    rows.push(f.mul_coords(&self.coords, &basis));
                }
                super::linalg::Matrix::from_rows(rows).determinant()
            }
        }
    }

    /// Lexicographic key on (field degree, coordinates) used for canonical
    /// ordering. Rational values compare as degree-one elements.
    pub fn canonical_cmp(&self, other: &FieldElement) -> Ordering {
        match (self.as_rational(), other.as_rational()) {
            (Some(a), Some(b)) => a.cmp(&b),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => self.coords.len().cmp(&other.coords.len()).then_with(|| self.coords.cmp(&other.coords)),
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        let name = self.field.as_ref().map(|k| k.name.as_str()).unwrap_or("a");
        let mut first = true;
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*{name}")?,
                _ => write!(f, "({c})*{name}^{k}")?,
            }
        }
        Ok(())
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        match (self.as_rational(), other.as_rational()) {
            (Some(a), Some(b)) => a == b,
            (Some(_), None) | (None, Some(_)) => false,
            (None, None) => match FieldElement::try_unify(self, other) {
                Ok((a, b)) => a.coords == b.coords,
                Err(_) => false,
            },
        }
    }
}

impl Zero for FieldElement {
    fn zero() -> Self {
        FieldElement::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

impl One for FieldElement {
    fn one() -> Self {
        FieldElement::rational(Rational::one())
    }
}

fn zip_coords(a: &[Rational], b: &[Rational], op: impl Fn(&Rational, &Rational) -> Rational) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let z = Rational::zero();
    (0..n).map(|k| op(a.get(k).unwrap_or(&z), b.get(k).unwrap_or(&z))).collect()
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        if self.field.is_none() && rhs.field.is_none() {
            return FieldElement::rational(&self.coords[0] + &rhs.coords[0]);
        }
        let field = self.field.clone().or_else(|| rhs.field.clone());
        if self.field.is_none() || rhs.field.is_none() {
            return FieldElement { field, coords: zip_coords(&self.coords, &rhs.coords, |x, y| x + y) };
        }
        let (a, b) = FieldElement::unify(&self, &rhs);
        FieldElement { coords: zip_coords(&a.coords, &b.coords, |x, y| x + y), field: a.field }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { field: self.field, coords: self.coords.into_iter().map(|c| -c).collect() }
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self + (-rhs)
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        match (&self.field, &rhs.field) {
            (None, None) => FieldElement::rational(&self.coords[0] * &rhs.coords[0]),
            (Some(_), None) => {
                let c = &rhs.coords[0];
                FieldElement { coords: self.coords.iter().map(|x| x * c).collect(), field: self.field }
            }
            (None, Some(_)) => rhs * self,
            _ => {
                let (a, b) = FieldElement::unify(&self, &rhs);
                let f = a.field.clone().unwrap();
                FieldElement { coords: f.mul_coords(&a.coords, &b.coords), field: a.field }
            }
        }
    }
}

impl Div for FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: FieldElement) -> FieldElement {
        self * rhs.inv()
    }
}

impl Scalar for FieldElement {
    fn from_rational(q: &Rational) -> Self {
        FieldElement::rational(q.clone())
    }

    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        match &self.field {
            None => FieldElement::rational(self.coords[0].recip()),
            Some(f) => {
                let a = UniPoly::new(self.coords.clone());
                let (g, s, _) = a.ext_gcd(&f.minpoly);
                assert!(g.degree() == Some(0), "element not invertible: minimal polynomial is reducible");
                let mut v = s.into_coeffs();
                v.resize(f.degree(), Rational::zero());
                FieldElement { field: self.field.clone(), coords: v }
            }
        }
    }
}

/// `v = w / d` with integer `w`.
fn integral(v: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let d = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    (v.iter().map(|q| q.numer() * (&d / q.denom())).collect(), d)
}

/// Renders a field element as `"num/den"` when rational, otherwise as the
/// list of its power-basis coordinates.
pub fn format_field_element(x: &FieldElement) -> Vec<String> {
    match x.as_rational() {
        Some(q) => vec![format_rational(&q)],
        None => x.coords.iter().map(format_rational).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, ratio};

    fn sqrt2() -> Arc<NumberField> {
        NumberField::new_unchecked("s", UniPoly::new(vec![rat(-2), rat(0), rat(1)]), vec![])
    }

    #[test]
    fn arithmetic_mod_minpoly() {
        let k = sqrt2();
        let a = FieldElement::generator(&k);
        assert_eq!(a.clone() * a.clone(), FieldElement::rational(rat(2)));
        let b = a.clone() + FieldElement::rational(rat(1));
        let inv = b.inv();
        assert_eq!(b * inv.clone(), FieldElement::one());
        // 1/(1+s) = s - 1
        assert_eq!(inv, a - FieldElement::one());
    }

    #[test]
    fn norms() {
        let k = sqrt2();
        let a = FieldElement::generator(&k) + FieldElement::rational(rat(3));
        assert_eq!(a.norm(), rat(7));
        assert_eq!(FieldElement::rational(ratio(1, 2)).norm(), ratio(1, 2));
    }

    #[test]
    fn rational_elements_compare_across_fields() {
        let k = sqrt2();
        let x = FieldElement::from_coords(&k, vec![rat(5), rat(0)]);
        assert_eq!(x, FieldElement::rational(rat(5)));
        assert!(x.is_rational());
    }
}
