//! Unibranched germs `x = t^m, y = t^n + c t^k` and the expected effect of
//! one blow-up on them.

use hypertan::localgeo::{germ_from_parametrization, observe_blowup, LocalGerm, PointType};
use hypertan::{Budget, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use std::cmp::Ordering;

#[derive(Debug, PartialEq)]
pub enum Expected {
    /// Child type, tangent to the exceptional divisor.
    TangentToExceptional(PointType),
    /// Child type, tangent to the transformed tangent line.
    TangentToLine(PointType),
    /// Child multiplicity, transverse to both.
    Transverse(u32),
}

pub fn predict(m: u32, n: u32) -> Expected {
    match n.cmp(&(2 * m)) {
        Ordering::Less => Expected::TangentToExceptional(PointType::new(n - m, m)),
        Ordering::Greater => Expected::TangentToLine(PointType::new(m, n - m)),
        Ordering::Equal => Expected::Transverse(m),
    }
}

/// Index of the case `n < 2m`, `n > 2m`, `n = 2m`.
pub fn case(m: u32, n: u32) -> usize {
    match n.cmp(&(2 * m)) {
        Ordering::Less => 0,
        Ordering::Greater => 1,
        Ordering::Equal => 2,
    }
}

/// `(m, n, k, c)` with `m <= 4` and `gcd(m, n, k) = 1`.
pub fn germs() -> Vec<(u32, u32, u32, i64)> {
    let mut out = Vec::new();
    for m in 2u32..=4 {
        for n in m + 1..=2 * m + 3 {
            let g = m.gcd(&n);
            let tails: Vec<u32> = (n + 1..).filter(|k| g.gcd(k) == 1).take(2).collect();
            for (k, c) in [(tails[0], 1i64), (tails[0], -2), (tails[1], 3)] {
                out.push((m, n, k, c));
            }
        }
    }
    out
}

pub fn germ(m: u32, n: u32, k: u32, c: i64) -> LocalGerm {
    let one = Rational::from_integer(BigInt::from(1));
    germ_from_parametrization(m, &[(n, one), (k, Rational::from_integer(BigInt::from(c)))]).unwrap()
}

/// Blows up once and compares with the prediction.
pub fn check(g: &LocalGerm, m: u32, n: u32, budget: &Budget) -> Result<(), String> {
    let obs = observe_blowup(g, budget).map_err(|e| e.to_string())?;
    let (child, to_e, to_l) = (obs.child, obs.tangent_to_exceptional, obs.tangent_to_line);
    let ok = match predict(m, n) {
        Expected::TangentToExceptional(t) => child == t && to_e,
        Expected::TangentToLine(t) => child == t && to_l,
        Expected::Transverse(mult) => child.m == mult && !to_e && !to_l,
    };
    if ok {
        Ok(())
    } else {
        Err(format!(
            "({m},{n}): predicted {:?}, observed {child:?} tangent to E {to_e}, to line {to_l}",
            predict(m, n)
        ))
    }
}
