//! Bivariate gcd and squarefree parts over any field, and factorization of
//! ternary forms over Q.
//!
//! Bivariate polynomials use variables `(x, y)` = indices `(0, 1)`; ternary
//! forms use `(x, y, z)`.

use super::{factor_small, AlgebraError, Budget, Poly, Rational, Scalar, UniPoly};

type Rec<S> = Vec<UniPoly<S>>;

fn to_rec<S: Scalar>(f: &Poly<S>) -> Rec<S> {
    f.coefficients_in(1).iter().map(|c| c.to_univariate(0).expect("bivariate input")).collect()
}

fn from_rec<S: Scalar>(r: &Rec<S>) -> Poly<S> {
    let mut out = Poly::zero(2);
    for (j, c) in r.iter().enumerate() {
        for (i, a) in c.coeffs().iter().enumerate() {
            out.add_term([i as u32, j as u32, 0], a.clone());
        }
    }
    out
}

fn trim<S: Scalar>(r: &mut Rec<S>) {
    while r.last().map_or(false, UniPoly::is_zero) {
        r.pop();
    }
}

fn content<S: Scalar>(r: &Rec<S>) -> UniPoly<S> {
    r.iter().fold(UniPoly::zero(), |g, c| if g.is_zero() { c.monic() } else { g.gcd(c) })
}

fn div_content<S: Scalar>(r: &Rec<S>, c: &UniPoly<S>) -> Rec<S> {
    r.iter().map(|a| a.div_exact(c).expect("content divides")).collect()
}

fn prem<S: Scalar>(a: &Rec<S>, b: &Rec<S>) -> Rec<S> {
    let db = b.len() - 1;
    let lb = b[db].clone();
    let mut r = a.clone();
    trim(&mut r);
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let lr = r.last().unwrap().clone();
        let mut next: Rec<S> = r.iter().map(|c| c * &lb).collect();
        for (j, bj) in b.iter().enumerate() {
            next[k + j] = &next[k + j] - &(&lr * bj);
        }
        trim(&mut next);
        r = next;
    }
    r
}

/// Greatest common divisor of two bivariate polynomials, normalized.
pub fn gcd_bivariate<S: Scalar>(f: &Poly<S>, g: &Poly<S>) -> Poly<S> {
    if f.is_zero() {
        return g.normalized();
    }
    if g.is_zero() {
        return f.normalized();
    }
    let (mut a, mut b) = (to_rec(f), to_rec(g));
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    let ca = content(&a);
    let cb = content(&b);
    let c = ca.gcd(&cb);
    a = div_content(&a, &ca);
    b = div_content(&b, &cb);
    while b.len() > 1 {
        let r = prem(&a, &b);
        a = b;
        if r.is_empty() {
            b = Vec::new();
            break;
        }
        let cr = content(&r);
        b = div_content(&r, &cr);
    }
    let g = if b.is_empty() {
        // a is the gcd of the primitive parts
        let ca = content(&a);
        div_content(&a, &ca)
    } else {
        // b is a nonzero constant in y: primitive parts are coprime
        vec![UniPoly::one()]
    };
    let out = from_rec(&g.iter().map(|p| p * &c).collect());
    out.normalized()
}

/// Greatest common divisor of ternary forms, normalized.
pub fn gcd_forms<S: Scalar>(f: &Poly<S>, g: &Poly<S>) -> Poly<S> {
    if f.is_zero() {
        return g.normalized();
    }
    if g.is_zero() {
        return f.normalized();
    }
    let kz = f.valuation_in(2).unwrap().min(g.valuation_in(2).unwrap());
    let h = gcd_bivariate(&f.dehomogenize(2), &g.dehomogenize(2));
    let d = h.degree().unwrap_or(0);
    let hz = h.homogenize(d).expect("homogenize to own degree");
    (&hz * &Poly::monomial(3, [0, 0, kz], S::one())).normalized()
}

/// `f / gcd(f, f_x, f_y)` for a bivariate polynomial.
pub fn squarefree_part_bivariate<S: Scalar>(f: &Poly<S>) -> Poly<S> {
    let g = gcd_bivariate(&gcd_bivariate(f, &f.derivative(0)), &f.derivative(1));
    f.div_exact(&g).expect("gcd divides").normalized()
}

pub fn is_squarefree_bivariate<S: Scalar>(f: &Poly<S>) -> bool {
    let g = gcd_bivariate(&gcd_bivariate(f, &f.derivative(0)), &f.derivative(1));
    g.degree() == Some(0)
}

/// Squarefree part of a ternary form.
pub fn squarefree_part_form<S: Scalar>(f: &Poly<S>) -> Poly<S> {
    let g = gcd_forms(&gcd_forms(&gcd_forms(f, &f.derivative(0)), &f.derivative(1)), &f.derivative(2));
    f.div_exact(&g).expect("gcd divides").normalized()
}

pub fn is_squarefree_form<S: Scalar>(f: &Poly<S>) -> bool {
    if f.nvars() == 3 && f.is_homogeneous() && squarefree_on_some_line(f) {
        return true;
    }
    squarefree_part_form(f).degree() == f.degree()
}

/// A form meeting some line in `deg f` distinct points is reduced.
fn squarefree_on_some_line<S: Scalar>(f: &Poly<S>) -> bool {
    let Some(d) = f.degree() else { return false };
    let t = Poly::var(1, 0);
    for (a, b) in [(2, 3), (-3, 5), (5, -7), (7, 11)] {
        // the line (t : a t + b : 1)
        let y = &t.scale(&S::from_i64(a)) + &Poly::constant(1, S::from_i64(b));
        let g = f.compose(&[t.clone(), y, Poly::one(1)]);
        if let Some(u) = g.to_univariate(0) {
            if u.degree() == Some(d as usize) && u.is_squarefree() {
                return true;
            }
        }
    }
    false
}

// ---------- factorization of forms over Q ----------

fn truncate(f: &Poly<Rational>, prec: u32) -> Poly<Rational> {
    Poly::from_terms(2, f.terms().filter(|(e, _)| e[1] < prec).map(|(e, c)| (*e, c.clone())))
}

fn y_coeff(f: &Poly<Rational>, k: usize) -> UniPoly<Rational> {
    f.coefficients_in(1).get(k).map(|c| c.to_univariate(0).unwrap()).unwrap_or_else(UniPoly::zero)
}

fn lift_factors(f: &Poly<Rational>, factors: &[UniPoly<Rational>], prec: u32) -> Vec<Poly<Rational>> {
    if factors.len() == 1 {
        return vec![truncate(f, prec)];
    }
    let (a, b) = factors.split_at(factors.len() / 2);
    let g0 = a.iter().fold(UniPoly::one(), |acc, g| &acc * g);
    let h0 = b.iter().fold(UniPoly::one(), |acc, g| &acc * g);
    let (_, _, t) = g0.ext_gcd(&h0);
    let mut g = Poly::from_univariate(2, 0, &g0);
    let mut h = Poly::from_univariate(2, 0, &h0);
    for k in 1..prec {
        let e = y_coeff(&(f - &truncate(&(&g * &h), prec)), k as usize);
        if e.is_zero() {
            continue;
        }
        let dg = (&t * &e).rem(&g0);
        let dh = (&e - &(&dg * &h0)).div_exact(&g0).expect("Hensel step divides");
        let yk = Poly::monomial(2, [0, k, 0], Rational::from_i64(1));
        g = &g + &(&Poly::from_univariate(2, 0, &dg) * &yk);
        h = &h + &(&Poly::from_univariate(2, 0, &dh) * &yk);
    }
    let mut out = lift_factors(&g, a, prec);
    out.extend(lift_factors(&h, b, prec));
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Factors of a squarefree `f` monic in `x` whose total degree equals its
/// `x`-degree.
fn factor_monic_bivariate(f: &Poly<Rational>, budget: &Budget) -> Result<Vec<Poly<Rational>>, AlgebraError> {
    let d = f.degree_in(0).unwrap_or(0);
    if d <= 1 {
        return Ok(vec![f.clone()]);
    }
    let mut y0 = 0i64;
    let u = loop {
        let u = f.to_univariate_at(1, &Rational::from_i64(y0));
        if u.degree() == Some(d as usize) && u.is_squarefree() {
            break u;
        }
        y0 = if y0 <= 0 { 1 - y0 } else { -y0 };
        if y0.abs() > 64 {
            return Err(AlgebraError::Unsupported("no squarefree specialization found".into()));
        }
    };
    let shift = &Poly::var(2, 1) + &Poly::constant(2, Rational::from_i64(y0));
    let fs = f.substitute(1, &shift);
    let facs: Vec<UniPoly<Rational>> = factor_small(&u, budget)?.into_iter().map(|(g, _)| g).collect();
    if facs.len() == 1 {
        return Ok(vec![f.clone()]);
    }
    let prec = d + 1;
    let mut lifted = lift_factors(&fs, &facs, prec);
    let mut rest = fs.clone();
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut hit = None;
        for subset in combinations(lifted.len(), size) {
            let cand = subset.iter().fold(Poly::one(2), |acc, &i| truncate(&(&acc * &lifted[i]), prec));
            let dx = cand.degree_in(0).unwrap_or(0);
            if cand.degree() != Some(dx) {
                continue;
            }
            if let Some(q) = rest.div_exact(&cand) {
                hit = Some((subset, cand, q));
                break;
            }
        }
        match hit {
            Some((subset, cand, q)) => {
                found.push(cand);
                rest = q;
                lifted = lifted.into_iter().enumerate().filter(|(i, _)| !subset.contains(i)).map(|(_, g)| g).collect();
            }
            None => size += 1,
        }
    }
    found.push(rest);
    let back = &Poly::var(2, 1) - &Poly::constant(2, Rational::from_i64(y0));
    Ok(found.iter().map(|g| g.substitute(1, &back)).collect())
}

/// Irreducible factorization over Q of a ternary form, with exponents.
/// Factors are normalized and sorted by degree, then coefficients.
pub fn factor_form_rational(f: &Poly<Rational>, budget: &Budget) -> Result<Vec<(Poly<Rational>, u32)>, AlgebraError> {
    if f.is_zero() {
        return Err(AlgebraError::ZeroPolynomial("factor_form_rational".into()));
    }
    let s = squarefree_part_form(f);
    let d = s.degree().unwrap();
    let mut pieces = Vec::new();
    if d <= 1 {
        pieces.push(s.clone());
    } else {
        budget.check_factor(d as usize)?;
        let (a, b) = shear_with_lead(&s);
        let (x, y, z) = (Poly::var(3, 0), Poly::var(3, 1), Poly::var(3, 2));
        let fwd = [x.clone(), &y + &x.scale(&Rational::from_i64(a)), &z + &x.scale(&Rational::from_i64(b))];
        let inv = [x.clone(), &y - &x.scale(&Rational::from_i64(a)), &z - &x.scale(&Rational::from_i64(b))];
        let sh = s.compose(&fwd);
        let aff = sh.dehomogenize(2);
        let lc = aff.coeff(&[d, 0, 0]);
        let aff = aff.scale(&(Rational::from_i64(1) / lc));
        for g in factor_monic_bivariate(&aff, budget)? {
            let dg = g.degree().unwrap();
            pieces.push(g.homogenize(dg)?.compose(&inv));
        }
    }
    let mut out = Vec::new();
    for p in pieces {
        let p = p.normalized();
        let mut e = 0;
        let mut rest = f.clone();
        while let Some(q) = rest.div_exact(&p) {
            rest = q;
            e += 1;
        }
        out.push((p, e));
    }
    out.sort_by(|a, b| cmp_forms(&a.0, &b.0));
    Ok(out)
}

/// Canonical order: degree, then the normalized coefficient list in
/// lexicographic monomial order.
pub fn cmp_forms<S: Scalar + std::fmt::Display>(a: &Poly<S>, b: &Poly<S>) -> std::cmp::Ordering {
    a.degree().cmp(&b.degree()).then_with(|| {
        let ka: Vec<String> = a.terms().rev().map(|(e, c)| format!("{e:?}{c}")).collect();
        let kb: Vec<String> = b.terms().rev().map(|(e, c)| format!("{e:?}{c}")).collect();
        ka.cmp(&kb)
    })
}

fn shear_with_lead(f: &Poly<Rational>) -> (i64, i64) {
    for n in 0i64..64 {
        for a in -n..=n {
            let b = n - a.abs();
            for b in [b, -b] {
                let v = f.eval(&[Rational::from_i64(1), Rational::from_i64(a), Rational::from_i64(b)]);
                if v != Rational::from_i64(0) {
                    return (a, b);
                }
            }
        }
    }
    unreachable!("a nonzero form does not vanish on all small integer points")
}
