//! Factorization of squarefree integer polynomials: Cantor-Zassenhaus modulo
//! a small prime, multifactor Hensel lifting, and subset recombination.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Rational, UniPoly};

type Zx = Vec<BigInt>;

// ---------- arithmetic in F_p[x], coefficients low degree first ----------

#[derive(Clone, Copy)]
struct Fp(u64);

impl Fp {
    fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    fn inv(self, a: u64) -> u64 {
        self.pow(a, self.0 - 2)
    }

    fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    fn sub(self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut v: Vec<u64> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + self.0 - y) % self.0
            })
            .collect();
        Self::trim(&mut v);
        v
    }

    fn mulp(self, a: &[u64], b: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut v = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                v[i + j] = (v[i + j] + self.mul(x, y)) % self.0;
            }
        }
        Self::trim(&mut v);
        v
    }

    fn divrem(self, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
        assert!(!b.is_empty(), "division by zero polynomial mod p");
        let mut r = a.to_vec();
        Self::trim(&mut r);
        if r.len() < b.len() {
            return (vec![], r);
        }
        let inv = self.inv(*b.last().unwrap());
        let mut q = vec![0u64; r.len() - b.len() + 1];
        while r.len() >= b.len() {
            let k = r.len() - b.len();
            let c = self.mul(*r.last().unwrap(), inv);
            q[k] = c;
            for (j, &bj) in b.iter().enumerate() {
                r[k + j] = (r[k + j] + self.0 - self.mul(c, bj)) % self.0;
            }
            Self::trim(&mut r);
        }
        Self::trim(&mut q);
        (q, r)
    }

    fn rem(self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.divrem(a, b).1
    }

    fn monic(self, a: &[u64]) -> Vec<u64> {
        let inv = self.inv(*a.last().unwrap());
        a.iter().map(|&c| self.mul(c, inv)).collect()
    }

    fn gcd(self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        Self::trim(&mut a);
        Self::trim(&mut b);
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        if a.is_empty() {
            a
        } else {
            self.monic(&a)
        }
    }

    /// `(g, s, t)` with `s a + t b = g` monic.
    fn ext_gcd(self, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        let (mut s0, mut s1) = (vec![1u64], vec![]);
        let (mut t0, mut t1) = (vec![], vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = self.divrem(&r0, &r1);
            let s2 = self.sub(&s0, &self.mulp(&q, &s1));
            let t2 = self.sub(&t0, &self.mulp(&q, &t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        let inv = self.inv(*r0.last().unwrap());
        let sc = |v: &[u64]| -> Vec<u64> { v.iter().map(|&c| self.mul(c, inv)).collect() };
        (sc(&r0), sc(&s0), sc(&t0))
    }

    fn deriv(self, a: &[u64]) -> Vec<u64> {
        let mut v: Vec<u64> = a.iter().enumerate().skip(1).map(|(i, &c)| self.mul(c, i as u64 % self.0)).collect();
        Self::trim(&mut v);
        v
    }

    /// `base^e mod m` with a big exponent.
    fn powmod(self, base: &[u64], e: &BigUint, m: &[u64]) -> Vec<u64> {
        let mut acc = vec![1u64];
        let b = self.rem(base, m);
        for i in (0..e.bits()).rev() {
            acc = self.rem(&self.mulp(&acc, &acc), m);
            if e.bit(i) {
                acc = self.rem(&self.mulp(&acc, &b), m);
            }
        }
        acc
    }

    fn reduce(self, f: &Zx) -> Vec<u64> {
        let p = BigInt::from(self.0);
        let mut v: Vec<u64> = f.iter().map(|c| c.mod_floor(&p).to_u64().unwrap()).collect();
        Self::trim(&mut v);
        v
    }

    /// Distinct-degree then equal-degree factorization of a monic squarefree
    /// polynomial.
    fn factor(self, f: &[u64], rng: &mut ChaCha8Rng) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        let x = vec![0u64, 1];
        let mut rest = f.to_vec();
        let mut h = x.clone();
        let mut d = 0;
        let pbig = BigUint::from(self.0);
        while rest.len() > 1 {
            d += 1;
            if 2 * d > rest.len() - 1 {
                out.push(rest.clone());
                break;
            }
            h = self.powmod(&h, &pbig, &rest);
            let g = self.gcd(&rest, &self.sub(&h, &x));
            if g.len() > 1 {
                rest = self.divrem(&rest, &g).0;
                h = self.rem(&h, &rest);
                self.equal_degree(&g, d, rng, &mut out);
            }
        }
        out
    }

    fn equal_degree(self, f: &[u64], d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Vec<u64>>) {
        let n = f.len() - 1;
        if n == d {
            out.push(f.to_vec());
            return;
        }
        let e = (BigUint::from(self.0).pow(d as u32) - 1u32) / 2u32;
        loop {
            let mut a: Vec<u64> = (0..n).map(|_| rng.gen_range(0..self.0)).collect();
            Self::trim(&mut a);
            if a.len() < 2 {
                continue;
            }
            let b = self.sub(&self.powmod(&a, &e, f), &[1]);
            let g = self.gcd(f, &b);
            if g.len() > 1 && g.len() < f.len() {
                let q = self.divrem(f, &g).0;
                self.equal_degree(&g, d, rng, out);
                self.equal_degree(&q, d, rng, out);
                return;
            }
        }
    }
}

// ---------- integer polynomials ----------

fn zmul(a: &Zx, b: &Zx) -> Zx {
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    v
}

fn sym_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn from_fp(v: &[u64]) -> Zx {
    v.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lifts `f = lc(f) * prod(factors) mod p` to modulus `p^k`.
fn hensel_lift(f: &Zx, factors: &[Vec<u64>], fp: Fp, k: u32) -> Vec<Zx> {
    if factors.len() == 1 {
        let p = BigInt::from(fp.0);
        let m = p.pow(k);
        let lc = f.last().unwrap().clone();
        let inv = lc.modinv(&m).expect("leading coefficient coprime to p");
        return vec![f.iter().map(|c| (c * &inv).mod_floor(&m)).collect()];
    }
    let (a, b) = factors.split_at(factors.len() / 2);
    let g0 = a.iter().fold(vec![1u64], |acc, g| fp.mulp(&acc, g));
    let lc_mod = fp.reduce(&vec![f.last().unwrap().clone()]).first().copied().unwrap_or(0);
    let h0 = b.iter().fold(vec![lc_mod], |acc, g| fp.mulp(&acc, g));
    let (_, s, t) = fp.ext_gcd(&g0, &h0);
    let p = BigInt::from(fp.0);
    let mut g = from_fp(&g0);
    let mut h = from_fp(&h0);
    let mut pk = p.clone();
    for _ in 1..k {
        let gh = zmul(&g, &h);
        let e: Zx = (0..f.len()).map(|i| (&f[i] - gh.get(i).cloned().unwrap_or_default()) / &pk).collect();
        let e = fp.reduce(&e);
        if !e.is_empty() {
            let dg = fp.rem(&fp.mulp(&t, &e), &g0);
            let dh = fp.divrem(&fp.sub(&e, &fp.mulp(&dg, &h0)), &g0).0;
            for (i, c) in dg.iter().enumerate() {
                g[i] += &pk * BigInt::from(*c);
            }
            for (i, c) in dh.iter().enumerate() {
                h[i] += &pk * BigInt::from(*c);
            }
        }
        pk *= &p;
    }
    let _ = s;
    let m = pk;
    let g: Zx = g.iter().map(|c| c.mod_floor(&m)).collect();
    let h: Zx = h.iter().map(|c| c.mod_floor(&m)).collect();
    let mut out = hensel_lift_exact(&g, a, fp, k, &m);
    out.extend(hensel_lift_exact(&h, b, fp, k, &m));
    out
}

/// Recursion step: `f` is already correct modulo `p^k`; split it further.
fn hensel_lift_exact(f: &Zx, factors: &[Vec<u64>], fp: Fp, k: u32, m: &BigInt) -> Vec<Zx> {
    let lifted = hensel_lift(f, factors, fp, k);
    lifted.into_iter().map(|v| v.iter().map(|c| c.mod_floor(m)).collect()).collect()
}

fn primitive(f: &Zx) -> Zx {
    let g = f.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if f.last().map_or(false, |c| c.is_negative()) { -BigInt::one() } else { BigInt::one() };
    f.iter().map(|c| c / &g * &sign).collect()
}

fn to_rational(f: &Zx) -> UniPoly<Rational> {
    UniPoly::new(f.iter().map(|c| Rational::from_integer(c.clone())).collect())
}

fn zdiv_exact(f: &Zx, g: &Zx) -> Option<Zx> {
    let (q, r) = to_rational(f).div_rem(&to_rational(g));
    if !r.is_zero() || !q.coeffs().iter().all(|c| c.is_integer()) {
        return None;
    }
    Some(q.coeffs().iter().map(|c| c.to_integer()).collect())
}

/// Irreducible factors over Z of a primitive squarefree polynomial with
/// positive leading coefficient and degree >= 2.
pub(crate) fn factor_squarefree_integer(f: &Zx) -> Vec<Zx> {
    let n = f.len() - 1;
    let lc = f.last().unwrap().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    // choose the prime with the fewest modular factors among a few candidates
    let mut best: Option<(Fp, Vec<Vec<u64>>)> = None;
    let mut tried = 0;
    let mut p = 3u64;
    while tried < 5 {
        p = next_prime(p + 1);
        let fp = Fp(p);
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fm = fp.reduce(f);
        if fm.len() != f.len() || fp.gcd(&fm, &fp.deriv(&fm)).len() > 1 {
            continue;
        }
        tried += 1;
        let facs = fp.factor(&fp.monic(&fm), &mut rng);
        if facs.len() == 1 {
            return vec![f.clone()];
        }
        if best.as_ref().map_or(true, |(_, b)| facs.len() < b.len()) {
            best = Some((fp, facs));
        }
    }
    let (fp, facs) = best.unwrap();
    // Mignotte-style bound on factor coefficients, times the leading coefficient
    let norm = f.iter().map(|c| c.abs()).max().unwrap();
    let bound = BigInt::from(2u32).pow(n as u32) * BigInt::from(n + 1) * norm * lc.abs();
    let p = BigInt::from(fp.0);
    let mut k = 1u32;
    let mut m = p.clone();
    while m <= &bound * 2 {
        m *= &p;
        k += 1;
    }
    let mut lifted = hensel_lift(f, &facs, fp, k);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = false;
        for subset in combinations(lifted.len(), size) {
            let lc_rest = rest.last().unwrap().clone();
            let mut cand = vec![lc_rest.clone()];
            for &i in &subset {
                cand = zmul(&cand, &lifted[i]).iter().map(|c| c.mod_floor(&m)).collect();
            }
            let cand = primitive(&cand.iter().map(|c| sym_mod(c, &m)).collect());
            if let Some(q) = zdiv_exact(&rest, &cand) {
                out.push(cand);
                rest = q;
                let mut keep = Vec::new();
                for (i, g) in lifted.iter().enumerate() {
                    if !subset.contains(&i) {
                        keep.push(g.clone());
                    }
                }
                lifted = keep;
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    out.push(primitive(&rest));
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
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
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn next_prime(mut n: u64) -> u64 {
    loop {
        if (2..).take_while(|d| d * d <= n).all(|d| n % d != 0) && n > 1 {
            return n;
        }
        n += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[i64]) -> Zx {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn splits_product_of_quadratics() {
        // (x^2 + 1)(x^2 - 2)(x - 3)
        let f = zmul(&zmul(&z(&[1, 0, 1]), &z(&[-2, 0, 1])), &z(&[-3, 1]));
        let mut facs = factor_squarefree_integer(&f);
        facs.sort();
        let mut want = vec![z(&[-3, 1]), z(&[1, 0, 1]), z(&[-2, 0, 1])];
        want.sort();
        assert_eq!(facs, want);
    }

    #[test]
    fn swinnerton_dyer_style_irreducible() {
        // x^4 - 10x^2 + 1 splits modulo every prime but is irreducible
        let f = z(&[1, 0, -10, 0, 1]);
        assert_eq!(factor_squarefree_integer(&f), vec![f.clone()]);
    }

    #[test]
    fn non_monic_factors() {
        // (2x + 3)(3x^2 - 5)
        let f = zmul(&z(&[3, 2]), &z(&[-5, 0, 3]));
        let mut facs = factor_squarefree_integer(&f);
        facs.sort_by_key(|g| g.len());
        assert_eq!(facs, vec![z(&[3, 2]), z(&[-5, 0, 3])]);
    }
}
