//! Sparse polynomials in one to three variables.
//!
//! Exponent tuples always have three slots; slots beyond `nvars` are zero.
//! Variables are named `x`, `y`, `z` in that order.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{AlgebraError, Scalar, UniPoly};

pub type Exps = [u32; 3];

const NAMES: [char; 3] = ['x', 'y', 'z'];

#[derive(Clone, PartialEq, Debug)]
pub struct Poly<S> {
    nvars: usize,
    terms: BTreeMap<Exps, S>,
}

impl<S: Scalar> Poly<S> {
    pub fn zero(nvars: usize) -> Self {
        assert!((1..=3).contains(&nvars), "1 to 3 variables supported");
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        Self::monomial(nvars, [0, 0, 0], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, S::one())
    }

    pub fn monomial(nvars: usize, e: Exps, c: S) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(e, c);
        p
    }

    /// The variable with index `i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "no such variable");
        let mut e = [0; 3];
        e[i] = 1;
        Self::monomial(nvars, e, S::one())
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exps, S)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: Exps, c: S) {
        debug_assert!(e[self.nvars..].iter().all(|&k| k == 0), "exponent on a missing variable");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exps, &S)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &Exps) -> S {
        self.terms.get(e).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` stands in for the `-inf` of the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Smallest total degree of a term (the multiplicity at the origin).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match it.next() {
            None => true,
            Some(d) => it.all(|k| k == d),
        }
    }

    /// Sum of the terms of total degree `k`.
    pub fn homogeneous_part(&self, k: u32) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(e, _)| e.iter().sum::<u32>() == k).map(|(e, c)| (*e, c.clone())).collect(),
        }
    }

    /// Coefficient of the lexicographically largest monomial.
    pub fn leading_coeff(&self) -> S {
        self.terms.iter().next_back().map(|(_, c)| c.clone()).unwrap_or_else(S::zero)
    }

    /// Scales so that the lexicographically largest monomial has coefficient 1.
    pub fn normalized(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading_coeff().inv())
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, a)| (*e, a.clone() * c.clone())).collect() }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Poly<T> {
        Poly::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[S]) -> S {
        assert_eq!(point.len(), self.nvars, "point has the wrong number of coordinates");
        let mut powers: Vec<Vec<S>> = Vec::with_capacity(self.nvars);
        for (i, x) in point.iter().enumerate() {
            let d = self.degree_in(i).unwrap_or(0) as usize;
            let mut v = Vec::with_capacity(d + 1);
            v.push(S::one());
            for k in 1..=d {
                let next = v[k - 1].clone() * x.clone();
                v.push(next);
            }
            powers.push(v);
        }
        self.terms.iter().fold(S::zero(), |acc, (e, c)| {
            let mut t = c.clone();
            for i in 0..self.nvars {
                if e[i] > 0 {
                    t = t * powers[i][e[i] as usize].clone();
                }
            }
            acc + t
        })
    }

    /// Replaces variable `var` by `g` (same variable count).
    pub fn substitute(&self, var: usize, g: &Poly<S>) -> Self {
        assert!(var < self.nvars, "no such variable");
        assert_eq!(g.nvars, self.nvars, "variable count mismatch");
        let mut powers = vec![Self::one(self.nvars)];
        let d = self.degree_in(var).unwrap_or(0);
        for k in 1..=d as usize {
            let next = &powers[k - 1] * g;
            powers.push(next);
        }
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut rest = *e;
            rest[var] = 0;
            let term = Self::monomial(self.nvars, rest, c.clone());
            out = &out + &(&term * &powers[e[var] as usize]);
        }
        out
    }

    /// Simultaneous substitution of every variable (into polynomials with
    /// `target_nvars` variables).
    pub fn compose(&self, images: &[Poly<S>]) -> Poly<S> {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let nv = images[0].nvars;
        let mut pows: Vec<Vec<Poly<S>>> = Vec::new();
        for (i, g) in images.iter().enumerate() {
            let d = self.degree_in(i).unwrap_or(0) as usize;
            let mut v = vec![Poly::one(nv)];
            for k in 1..=d {
                let next = &v[k - 1] * g;
                v.push(next);
            }
            pows.push(v);
        }
        let mut out = Poly::zero(nv);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(nv, c.clone());
            for i in 0..self.nvars {
                if e[i] > 0 {
                    t = &t * &pows[i][e[i] as usize];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Shifts the origin: `f(v + a)`.
    pub fn translate(&self, shift: &[S]) -> Self {
        let images: Vec<Poly<S>> = (0..self.nvars)
            .map(|i| &Poly::var(self.nvars, i) + &Poly::constant(self.nvars, shift[i].clone()))
            .collect();
        self.compose(&images)
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut f = *e;
            f[var] -= 1;
            out.add_term(f, c.clone() * S::from_i64(e[var] as i64));
        }
        out
    }

    /// Adds a new last variable and homogenizes to total degree `d`.
    pub fn homogenize(&self, d: u32) -> Result<Self, AlgebraError> {
        if self.nvars >= 3 {
            return Err(AlgebraError::Invalid("cannot add a fourth variable".into()));
        }
        let deg = self.degree().unwrap_or(0);
        if d < deg {
            return Err(AlgebraError::Invalid(format!("homogenize to degree {d} below total degree {deg}")));
        }
        let mut out = Self::zero(self.nvars + 1);
        for (e, c) in &self.terms {
            let mut f = *e;
            f[self.nvars] = d - e.iter().sum::<u32>();
            out.add_term(f, c.clone());
        }
        Ok(out)
    }

    /// Sets variable `var` to 1 and drops it; the other variables keep their
    /// relative order.
    pub fn dehomogenize(&self, var: usize) -> Self {
        assert!(self.nvars >= 2, "cannot drop the only variable");
        let mut out = Self::zero(self.nvars - 1);
        for (e, c) in &self.terms {
            let mut f = [0; 3];
            let mut k = 0;
            for i in 0..self.nvars {
                if i != var {
                    f[k] = e[i];
                    k += 1;
                }
            }
            out.add_term(f, c.clone());
        }
        out
    }

    /// Inserts a new variable at position `var`, inverse of `dehomogenize`
    /// for the purposes of `homogenize_at`.
    pub fn homogenize_at(&self, var: usize, d: u32) -> Result<Self, AlgebraError> {
        let h = self.homogenize(d)?;
        let n = h.nvars;
        let mut out = Self::zero(n);
        for (e, c) in &h.terms {
            let mut f = [0; 3];
            let mut k = 0;
            for (i, slot) in f.iter_mut().enumerate().take(n) {
                if i == var {
                    *slot = e[n - 1];
                } else {
                    *slot = e[k];
                    k += 1;
                }
            }
            out.add_term(f, c.clone());
        }
        Ok(out)
    }

    /// Coefficients with respect to `var`: `self = sum_k c_k * var^k`, each
    /// `c_k` free of `var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Poly<S>> {
        let d = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![Self::zero(self.nvars); d + 1];
        for (e, c) in &self.terms {
            let mut f = *e;
            let k = f[var] as usize;
            f[var] = 0;
            out[k].add_term(f, c.clone());
        }
        out
    }

    /// Univariate view in `var`, valid when no other variable occurs.
    pub fn to_univariate(&self, var: usize) -> Option<UniPoly<S>> {
        let d = self.degree_in(var).unwrap_or(0) as usize;
        let mut v = vec![S::zero(); d + 1];
        for (e, c) in &self.terms {
            if (0..self.nvars).any(|i| i != var && e[i] != 0) {
                return None;
            }
            v[e[var] as usize] = c.clone();
        }
        Some(UniPoly::new(v))
    }

    pub fn from_univariate(nvars: usize, var: usize, u: &UniPoly<S>) -> Self {
        Self::from_terms(
            nvars,
            u.coeffs().iter().enumerate().map(|(k, c)| {
                let mut e = [0; 3];
                e[var] = k as u32;
                (e, c.clone())
            }),
        )
    }

    /// Sets variable `var` to the constant `v` (the variable count is kept).
    pub fn specialize(&self, var: usize, v: &S) -> Self {
        let d = self.degree_in(var).unwrap_or(0) as usize;
        let mut pw = vec![S::one()];
        for k in 1..=d {
            let next = pw[k - 1].clone() * v.clone();
            pw.push(next);
        }
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut f = *e;
            f[var] = 0;
            out.add_term(f, c.clone() * pw[e[var] as usize].clone());
        }
        out
    }

    /// For a bivariate polynomial: fixes `var` to `v` and returns the
    /// univariate polynomial in the other variable.
    pub fn to_univariate_at(&self, var: usize, v: &S) -> UniPoly<S> {
        assert_eq!(self.nvars, 2, "bivariate input expected");
        self.specialize(var, v).to_univariate(1 - var).unwrap()
    }

    /// Largest power of `var` dividing `self`.
    pub fn valuation_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).min()
    }

    /// Divides by `var^k`; panics if not divisible.
    pub fn div_var_power(&self, var: usize, k: u32) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut f = *e;
                    f[var] = f[var].checked_sub(k).expect("not divisible by the variable power");
                    (f, c.clone())
                })
                .collect(),
        }
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let (le, lc) = d.terms.iter().next_back().map(|(e, c)| (*e, c.clone())).unwrap();
        let inv = lc.inv();
        let mut r = self.clone();
        let mut q = Self::zero(self.nvars);
        while let Some((e, c)) = r.terms.iter().next_back().map(|(e, c)| (*e, c.clone())) {
            if (0..3).any(|i| e[i] < le[i]) {
                return None;
            }
            let mut m = [0; 3];
            for i in 0..3 {
                m[i] = e[i] - le[i];
            }
            let t = Self::monomial(self.nvars, m, c * inv.clone());
            r = &r - &(&t * d);
            q = &q + &t;
        }
        Some(q)
    }

    /// Pretty printer with explicit variable names.
    pub fn display_with(&self, names: &[&str]) -> String
    where
        S: fmt::Display,
    {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = (0..self.nvars)
                .filter(|&i| e[i] > 0)
                .map(|i| if e[i] == 1 { names[i].to_string() } else { format!("{}^{}", names[i], e[i]) })
                .collect();
            let cs = c.to_string();
            parts.push(if mono.is_empty() {
                cs
            } else if cs == "1" {
                mono.join("*")
            } else if cs == "-1" {
                format!("-{}", mono.join("*"))
            } else if cs.contains(' ') {
                format!("({cs})*{}", mono.join("*"))
            } else {
                format!("{cs}*{}", mono.join("*"))
            });
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = NAMES.iter().map(|c| c.to_string()).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        write!(f, "{}", self.display_with(&refs))
    }
}

impl<S: Scalar> Add for &Poly<S> {
    type Output = Poly<S>;
    fn add(self, rhs: Self) -> Poly<S> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<S: Scalar> Sub for &Poly<S> {
    type Output = Poly<S>;
    fn sub(self, rhs: Self) -> Poly<S> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<S: Scalar> Neg for &Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Poly<S> {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

impl<S: Scalar> Mul for &Poly<S> {
    type Output = Poly<S>;
    fn mul(self, rhs: Self) -> Poly<S> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]], ca.clone() * cb.clone());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, Rational};

    type P = Poly<Rational>;

    fn x2() -> P {
        P::var(2, 0)
    }
    fn y2() -> P {
        P::var(2, 1)
    }

    #[test]
    fn eval_on_curve() {
        let f = &y2() - &x2().pow(2);
        assert_eq!(f.eval(&[rat(2), rat(4)]), rat(0));
    }

    #[test]
    fn dehomogenize_qb_form() {
        let (x, y, z) = (P::var(3, 0), P::var(3, 1), P::var(3, 2));
        let b = 4;
        let form = &(&z.pow(b - 1) * &y) - &x.pow(b);
        let f = form.dehomogenize(2);
        assert_eq!(f, &y2() - &x2().pow(4));
        assert_eq!(f.homogenize(4).unwrap(), form);
    }

    #[test]
    fn derivative_of_cubic() {
        let f = &y2() - &x2().pow(3);
        assert_eq!(f.derivative(0), x2().pow(2).scale(&rat(-3)));
    }

    #[test]
    fn homogenize_below_degree_fails() {
        let f = &y2() - &x2().pow(3);
        assert!(f.homogenize(2).is_err());
    }

    #[test]
    fn exact_division() {
        let a = &x2() - &y2();
        let b = &x2() + &y2();
        let p = &a * &b;
        assert_eq!(p.div_exact(&a), Some(b.clone()));
        assert_eq!((&p + &P::one(2)).div_exact(&a), None);
    }

    #[test]
    fn substitution_and_translation() {
        let f = &y2() - &x2().pow(2);
        // y -> y + x^2 turns the parabola into the axis
        assert_eq!(f.substitute(1, &(&y2() + &x2().pow(2))), y2());
        let g = f.translate(&[rat(1), rat(1)]);
        assert_eq!(g.eval(&[rat(0), rat(0)]), rat(0));
        assert_eq!(g.order(), Some(1));
    }
}
