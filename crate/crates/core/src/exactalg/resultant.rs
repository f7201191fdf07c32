//! Sylvester resultants of multivariate polynomials.
//!
//! The determinant is taken with fraction-free (Bareiss) elimination, whose
//! intermediate divisions are exact polynomial divisions.

use super::{AlgebraError, Poly, Scalar};

/// Resultant of `f` and `g` with respect to variable `var`, using their true
/// degrees in `var`.
pub fn resultant<S: Scalar>(f: &Poly<S>, g: &Poly<S>, var: usize) -> Result<Poly<S>, AlgebraError> {
    if f.is_zero() || g.is_zero() {
        return Err(AlgebraError::ZeroPolynomial("resultant of a zero polynomial".into()));
    }
    let df = f.degree_in(var).unwrap_or(0) as usize;
    let dg = g.degree_in(var).unwrap_or(0) as usize;
    Ok(resultant_formal(f, g, var, df, dg))
}

/// Resultant with prescribed formal degrees `df >= deg f`, `dg >= deg g`.
/// Missing leading coefficients are treated as zeros of the Sylvester matrix.
pub fn resultant_formal<S: Scalar>(f: &Poly<S>, g: &Poly<S>, var: usize, df: usize, dg: usize) -> Poly<S> {
    let nv = f.nvars();
    let mut cf = f.coefficients_in(var);
    let mut cg = g.coefficients_in(var);
    assert!(cf.len() <= df + 1 && cg.len() <= dg + 1, "formal degree below actual degree");
    cf.resize(df + 1, Poly::zero(nv));
    cg.resize(dg + 1, Poly::zero(nv));
    let n = df + dg;
    if n == 0 {
        return Poly::one(nv);
    }
    let mut m: Vec<Vec<Poly<S>>> = vec![vec![Poly::zero(nv); n]; n];
    for i in 0..dg {
        for (k, c) in cf.iter().rev().enumerate() {
            m[i][i + k] = c.clone();
        }
    }
    for i in 0..df {
        for (k, c) in cg.iter().rev().enumerate() {
            m[dg + i][i + k] = c.clone();
        }
    }
    bareiss_det(m)
}

/// Discriminant-like invariant `Res(f, df/dvar)` (without the leading
/// coefficient normalization); zero iff `f` has a repeated factor in `var`.
pub fn discriminant<S: Scalar>(f: &Poly<S>, var: usize) -> Result<Poly<S>, AlgebraError> {
    let d = f.derivative(var);
    if d.is_zero() {
        return Err(AlgebraError::Invalid("polynomial does not involve the variable".into()));
    }
    resultant(f, &d, var)
}

/// Determinant of a square matrix of polynomials.
pub(crate) fn bareiss_det<S: Scalar>(mut m: Vec<Vec<Poly<S>>>) -> Poly<S> {
    let n = m.len();
    let nv = m[0][0].nvars();
    let mut sign = false;
    let mut prev = Poly::one(nv);
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(p) => {
                    m.swap(k, p);
                    sign = !sign;
                }
                None => return Poly::zero(nv),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = a.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
        for row in m.iter_mut().skip(k + 1) {
            row[k] = Poly::zero(nv);
        }
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        -&det
    } else {
        det
    }
}
