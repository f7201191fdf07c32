//! Sheared-resultant oracle for intersection multiplicities: the order at
//! x = 0 of Res_y after a shear, computed from scratch by Sylvester
//! determinants at sample points and interpolation.

use hypertan::localgeo::local_intersection_multiplicity;
use hypertan::projplane::{PlaneCurve, ProjectivePoint, Projectivity};
use hypertan::{Budget, FieldElement, KPoly, Poly, Rational, Scalar};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Affine polynomial: `((i, j), c)` stands for `c x^i y^j`.
pub type Affine = Vec<((u32, u32), i64)>;

fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn uni_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn uni_add(a: &mut Vec<Rational>, b: &[Rational]) {
    if a.len() < b.len() {
        a.resize(b.len(), Rational::zero());
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

fn trim(mut a: Vec<Rational>) -> Vec<Rational> {
    while a.len() > 1 && a.last().unwrap().is_zero() {
        a.pop();
    }
    a
}

/// `f(x0 + c y, y)` as a polynomial in `y`.
fn restrict(f: &Affine, x0: &Rational, c: i64) -> Vec<Rational> {
    let lin = vec![x0.clone(), q(c)];
    let mut out = vec![Rational::zero()];
    for &((i, j), a) in f {
        let mut t = vec![q(a)];
        for _ in 0..i {
            t = uni_mul(&t, &lin);
        }
        let mut yj = vec![Rational::zero(); j as usize + 1];
        yj[j as usize] = Rational::one();
        uni_add(&mut out, &uni_mul(&t, &yj));
    }
    trim(out)
}

fn det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut d = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            d = -d;
        }
        let p = m[col][col].clone();
        d *= &p;
        for r in col + 1..n {
            let f = &m[r][col] / &p;
            if f.is_zero() {
                continue;
            }
            for k in col..n {
                let v = &f * &m[col][k];
                m[r][k] -= v;
            }
        }
    }
    d
}

/// Sylvester resultant of two univariate polynomials of formal degrees
/// `da`, `db` (coefficients from the constant term up).
fn sylvester(a: &[Rational], da: usize, b: &[Rational], db: usize) -> Rational {
    let n = da + db;
    let mut m = vec![vec![Rational::zero(); n]; n];
    let coeff = |p: &[Rational], k: usize| p.get(k).cloned().unwrap_or_else(Rational::zero);
    for r in 0..db {
        for k in 0..=da {
            m[r][r + da - k] = coeff(a, k);
        }
    }
    for r in 0..da {
        for k in 0..=db {
            m[db + r][r + db - k] = coeff(b, k);
        }
    }
    det(m)
}

/// Lowest power of `x` in the polynomial through `(xs[i], ys[i])`.
fn interpolated_order(xs: &[Rational], ys: &[Rational]) -> Option<usize> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    // Newton form to monomial form
    let mut poly = vec![dd[n - 1].clone()];
    for i in (0..n - 1).rev() {
        poly = uni_mul(&poly, &[-xs[i].clone(), Rational::one()]);
        poly[0] += &dd[i];
    }
    poly.iter().position(|c| !c.is_zero())
}

fn degree(f: &Affine) -> u32 {
    f.iter().map(|((i, j), _)| i + j).max().unwrap_or(0)
}

/// Order at 0 of `Res_y(f(x + c y, y), g(x + c y, y))`, or `None` when the
/// resultant vanishes identically.
fn sheared_valuation(f: &Affine, g: &Affine, c: i64) -> Option<usize> {
    let (df, dg) = (degree(f) as usize, degree(g) as usize);
    let npts = df * dg + 1;
    let xs: Vec<Rational> = (0..npts as i64).map(|k| q(k - (npts as i64) / 2)).collect();
    let ys: Vec<Rational> = xs.iter().map(|x| sylvester(&restrict(f, x, c), df, &restrict(g, x, c), dg)).collect();
    interpolated_order(&xs, &ys)
}

/// The leading `y`-coefficient after the shear is the top form at `(c, 1)`.
fn shear_is_admissible(f: &Affine, c: i64) -> bool {
    let d = degree(f);
    let top: i64 = f.iter().filter(|((i, j), _)| i + j == d).map(|&((i, _), a)| a * c.pow(i)).sum();
    top != 0
}

pub fn oracle(f: &Affine, g: &Affine) -> Option<usize> {
    let mut best: Option<usize> = None;
    for c in [3i64, 7, 11, 17, 23, 31] {
        if !shear_is_admissible(f, c) || !shear_is_admissible(g, c) {
            continue;
        }
        let v = sheared_valuation(f, g, c)?;
        best = Some(best.map_or(v, |b| b.min(v)));
    }
    best
}

fn homogenize(f: &Affine) -> PlaneCurve {
    let d = degree(f);
    let form: KPoly =
        Poly::from_terms(3, f.iter().map(|&((i, j), a)| ([i, j, d - i - j], FieldElement::from_i64(a))));
    PlaneCurve::new(form).unwrap()
}

fn random_affine(rng: &mut ChaCha8Rng, mode: u32) -> Affine {
    let d: u32 = rng.gen_range(1..=4);
    let mut f = Affine::new();
    for total in 1..=d {
        for i in 0..=total {
            let j = total - i;
            let allowed = match mode {
                // tangent to y = 0
                1 => !(i == 1 && j == 0),
                // singular at the origin
                2 => total >= 2,
                _ => true,
            };
            if allowed && rng.gen_bool(0.55) {
                let a = rng.gen_range(-3i64..=3);
                if a != 0 {
                    f.push(((i, j), a));
                }
            }
        }
    }
    if mode == 3 {
        // y - x^2 + higher terms: an osculating pair when both use this mode
        f.retain(|((i, j), _)| i + j >= 3);
        f.push(((0, 1), 1));
        f.push(((2, 0), -1));
    }
    if degree(&f) == 0 || !f.iter().any(|((i, j), _)| i + j == degree(&f)) {
        f.push(((d, 0), 1));
        f.push(((0, d), 1));
    }
    f.sort();
    f.dedup_by(|a, b| {
        if a.0 == b.0 {
            b.1 += a.1;
            true
        } else {
            false
        }
    });
    f.retain(|(_, a)| *a != 0);
    f
}

fn random_projectivity(rng: &mut ChaCha8Rng) -> Projectivity {
    loop {
        let mut rows = [[0i64; 3]; 3];
        for r in rows.iter_mut() {
            for v in r.iter_mut() {
                *v = rng.gen_range(-3..=3);
            }
        }
        if let Ok(t) = Projectivity::from_i64(rows) {
            return t;
        }
    }
}


/// Outcome of comparing the library against the oracle on random pairs.
pub struct Comparison {
    pub compared: usize,
    /// Pairs with multiplicity at least 3.
    pub high: usize,
}

/// Compares on `pairs` random pairs, each moved by a random projectivity.
pub fn compare(pairs: usize, seed: u64) -> Result<Comparison, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = Budget::default();
    let mut out = Comparison { compared: 0, high: 0 };
    let mut attempts = 0;
    while out.compared < pairs {
        attempts += 1;
        if attempts > 5 * pairs {
            return Err(format!("only {} usable pairs", out.compared));
        }
        let mode = rng.gen_range(0..4);
        let f = random_affine(&mut rng, mode);
        let gmode = if mode == 0 { rng.gen_range(0..4) } else { mode };
        let g = random_affine(&mut rng, gmode);
        let Some(expected) = oracle(&f, &g) else { continue };
        let t = random_projectivity(&mut rng);
        let (cf, cg) = (t.apply_curve(&homogenize(&f)), t.apply_curve(&homogenize(&g)));
        let p = t.apply_point(&ProjectivePoint::rational(0, 0, 1));
        let got = local_intersection_multiplicity(&cf, &cg, &p, &budget).map_err(|e| e.to_string())?;
        if got as usize != expected {
            return Err(format!("f = {f:?}, g = {g:?}: {got} against oracle {expected}"));
        }
        let swapped = local_intersection_multiplicity(&cg, &cf, &p, &budget).map_err(|e| e.to_string())?;
        if swapped != got {
            return Err(format!("f = {f:?}, g = {g:?}: not symmetric"));
        }
        out.compared += 1;
        if expected >= 3 {
            out.high += 1;
        }
    }
    Ok(out)
}
