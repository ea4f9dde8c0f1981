//! Unramified p-adic rings `(Z/p^m)[t]/(T)`, their Frobenius lift σ, and Newton lifting of
//! the solutions of `f(x) = σ^j(x)` for `f ≡ x^{p^j} (mod p)`.

use num::{Integer, ToPrimitive};
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::modp::{is_prime, PolyFp};
use crate::algebra::poly::Poly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrobError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree and precision must be at least 1")]
    ZeroParameter,
    #[error("p^m = {p}^{m} does not fit in 62 bits")]
    PrecisionTooLarge { p: u64, m: u32 },
    #[error("modulus is not monic of degree {0} and irreducible mod p")]
    BadModulus(usize),
    #[error("polynomial is not congruent to x^{q} mod p")]
    NotAFrobeniusLift { q: u64 },
    #[error("coefficient {0} is not p-integral")]
    NotIntegral(String),
    #[error("Hensel iteration for sigma(t) did not converge")]
    Hensel,
}

/// `(Z/p^m)[t]/(T)` with T monic of degree e and irreducible mod p.
#[derive(Clone, Debug, Serialize)]
pub struct ZqContext {
    pub p: u64,
    pub e: usize,
    pub m: u32,
    pub pm: u64,
    /// Low degree first, length e + 1, monic.
    pub modulus: Vec<u64>,
    #[serde(skip)]
    sigma_t: Vec<u64>,
}

/// Element as e coordinates mod p^m in the basis 1, t, ..., t^{e-1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ZqElem(pub Vec<u64>);

impl ZqContext {
    /// Context with the lexicographically first irreducible modulus.
    pub fn new(p: u64, e: usize, m: u32) -> Result<Self, FrobError> {
        Self::with_modulus(p, e, m, None)
    }

    pub fn with_modulus(p: u64, e: usize, m: u32, modulus: Option<Vec<u64>>) -> Result<Self, FrobError> {
        if !is_prime(p) {
            return Err(FrobError::NotPrime(p));
        }
        if e == 0 || m == 0 {
            return Err(FrobError::ZeroParameter);
        }
        let pm = (p as u128).checked_pow(m).filter(|v| *v < (1u128 << 62)).ok_or(FrobError::PrecisionTooLarge { p, m })? as u64;
        let modulus = match modulus {
            Some(t) => {
                let ok = t.len() == e + 1
                    && t[e] == 1
                    && PolyFp::new(t.iter().map(|c| c % p).collect(), p).is_irreducible();
                if !ok {
                    return Err(FrobError::BadModulus(e));
                }
                t.iter().map(|c| c % pm).collect()
            }
            None => first_irreducible(p, e),
        };
        let mut ctx = ZqContext { p, e, m, pm, modulus, sigma_t: vec![] };
        ctx.sigma_t = ctx.lift_sigma_t()?.0;
        Ok(ctx)
    }

    /// q = p^e, the residue field size.
    pub fn q(&self) -> u64 {
        self.p.pow(self.e as u32)
    }

    pub fn zero(&self) -> ZqElem {
        ZqElem(vec![0; self.e])
    }

    pub fn one(&self) -> ZqElem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> ZqElem {
        let mut v = vec![0; self.e];
        v[0] = n.rem_euclid(self.pm as i64) as u64;
        ZqElem(v)
    }

    /// The class of t (zero when e = 1 and T = t).
    pub fn t(&self) -> ZqElem {
        if self.e == 1 {
            return self.from_int(self.pm as i64 - self.modulus[0] as i64);
        }
        let mut v = vec![0; self.e];
        v[1] = 1;
        ZqElem(v)
    }

    pub fn add(&self, a: &ZqElem, b: &ZqElem) -> ZqElem {
        ZqElem(a.0.iter().zip(&b.0).map(|(x, y)| ((*x as u128 + *y as u128) % self.pm as u128) as u64).collect())
    }

    pub fn sub(&self, a: &ZqElem, b: &ZqElem) -> ZqElem {
        ZqElem(a.0.iter().zip(&b.0).map(|(x, y)| ((*x as u128 + self.pm as u128 - *y as u128) % self.pm as u128) as u64).collect())
    }

    pub fn scale(&self, a: &ZqElem, k: u64) -> ZqElem {
        ZqElem(a.0.iter().map(|x| ((*x as u128 * k as u128) % self.pm as u128) as u64).collect())
    }

    pub fn mul(&self, a: &ZqElem, b: &ZqElem) -> ZqElem {
        let (e, pm) = (self.e, self.pm as u128);
        let mut prod = vec![0u128; 2 * e - 1];
        for (i, x) in a.0.iter().enumerate() {
            for (j, y) in b.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + *x as u128 * *y as u128) % pm;
            }
        }
        // reduce by the monic modulus from the top
        for k in (e..2 * e - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, t) in self.modulus[..e].iter().enumerate() {
                prod[k - e + i] = (prod[k - e + i] + pm - (c * *t as u128) % pm) % pm;
            }
        }
        ZqElem(prod[..e].iter().map(|v| *v as u64).collect())
    }

    pub fn pow(&self, a: &ZqElem, mut n: u128) -> ZqElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    pub fn is_zero(&self, a: &ZqElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    /// Valuation (m for zero).
    pub fn valuation(&self, a: &ZqElem) -> u32 {
        a.0.iter()
            .filter(|&&c| c != 0)
            .map(|&c| {
                let mut v = 0;
                let mut c = c;
                while c % self.p == 0 {
                    c /= self.p;
                    v += 1;
                }
                v
            })
            .min()
            .unwrap_or(self.m)
    }

    /// Reduction mod p of each coordinate.
    pub fn residue(&self, a: &ZqElem) -> Vec<u64> {
        a.0.iter().map(|c| c % self.p).collect()
    }

    /// Inverse of a unit: `a^{q-2}` mod p, then Newton `y ← y(2 - a y)`.
    pub fn inv(&self, a: &ZqElem) -> Option<ZqElem> {
        if self.valuation(a) > 0 {
            return None;
        }
        let mut y = self.pow(a, self.q() as u128 - 2);
        if self.q() == 2 {
            y = self.one();
        }
        let two = self.from_int(2);
        for _ in 0..=self.m.ilog2() + 1 {
            y = self.mul(&y, &self.sub(&two, &self.mul(a, &y)));
        }
        (self.mul(a, &y) == self.one()).then_some(y)
    }

    pub fn eval_poly(&self, f: &[ZqElem], x: &ZqElem) -> ZqElem {
        f.iter().rev().fold(self.zero(), |acc, c| self.add(&self.mul(&acc, x), c))
    }

    fn modulus_eval(&self, x: &ZqElem) -> (ZqElem, ZqElem) {
        let coeffs: Vec<ZqElem> = self.modulus.iter().map(|&c| self.from_int(c as i64)).collect();
        let deriv: Vec<ZqElem> =
            coeffs.iter().enumerate().skip(1).map(|(i, c)| self.scale(c, i as u64)).collect();
        (self.eval_poly(&coeffs, x), self.eval_poly(&deriv, x))
    }

    /// σ(t): the root of T congruent to t^p, by Newton iteration.
    fn lift_sigma_t(&self) -> Result<(Vec<u64>, u32), FrobError> {
        let mut s = self.pow(&self.t(), self.p as u128);
        for step in 0..=2 * self.m {
            let (val, der) = self.modulus_eval(&s);
            if self.is_zero(&val) {
                return Ok((s.0, step));
            }
            let inv = self.inv(&der).ok_or(FrobError::Hensel)?;
            s = self.sub(&s, &self.mul(&val, &inv));
        }
        Err(FrobError::Hensel)
    }

    pub fn sigma_t(&self) -> ZqElem {
        ZqElem(self.sigma_t.clone())
    }

    /// σ(Σ x_i t^i) = Σ x_i σ(t)^i.
    pub fn frobenius(&self, x: &ZqElem) -> ZqElem {
        let st = self.sigma_t();
        let mut acc = self.zero();
        let mut pw = self.one();
        for &c in &x.0 {
            acc = self.add(&acc, &self.scale(&pw, c));
            pw = self.mul(&pw, &st);
        }
        acc
    }

    /// σ^k for any integer k (σ^e = 1).
    pub fn frobenius_power(&self, x: &ZqElem, k: i64) -> ZqElem {
        let k = k.rem_euclid(self.e as i64);
        (0..k).fold(x.clone(), |acc, _| self.frobenius(&acc))
    }

    /// All q residues, each lifted coordinatewise.
    pub fn residues(&self) -> Vec<ZqElem> {
        let q = self.q();
        (0..q)
            .map(|mut code| {
                let mut v = vec![0; self.e];
                for c in v.iter_mut() {
                    *c = code % self.p;
                    code /= self.p;
                }
                ZqElem(v)
            })
            .collect()
    }

    /// Rational-coefficient polynomial mapped into the ring (coefficients must be p-integral).
    pub fn poly_from_rational(&self, f: &Poly) -> Result<Vec<ZqElem>, FrobError> {
        f.coeffs()
            .iter()
            .map(|c| {
                let q = c.as_rational().ok_or_else(|| FrobError::NotIntegral(c.to_string()))?;
                let pm = num::BigInt::from(self.pm);
                let den = q.denom().mod_floor(&pm);
                let num = q.numer().mod_floor(&pm);
                let den_u = den.to_u64().expect("reduced");
                if den_u % self.p == 0 {
                    return Err(FrobError::NotIntegral(c.to_string()));
                }
                let inv = self.inv(&self.from_int(den_u as i64)).expect("unit");
                Ok(self.scale(&inv, num.to_u64().expect("reduced")))
            })
            .collect()
    }

    pub fn display(&self, x: &ZqElem) -> String {
        if self.e == 1 {
            return x.0[0].to_string();
        }
        let terms: Vec<String> = x.0.iter().map(|c| c.to_string()).collect();
        format!("[{}]", terms.join(", "))
    }
}

fn first_irreducible(p: u64, e: usize) -> Vec<u64> {
    if e == 1 {
        return vec![0, 1];
    }
    let total = p.pow(e as u32);
    for code in 0..total {
        let mut c = Vec::with_capacity(e + 1);
        let mut k = code;
        for _ in 0..e {
            c.push(k % p);
            k /= p;
        }
        c.push(1);
        if c[0] != 0 && PolyFp::new(c.clone(), p).is_irreducible() {
            return c;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

/// Checks `f ≡ x^{p^j} (mod p)`.
pub fn is_frobenius_lift(ctx: &ZqContext, f: &[ZqElem], j: u32) -> bool {
    let q = ctx.p.pow(j) as usize;
    f.iter().enumerate().all(|(i, c)| {
        let r = ctx.residue(c);
        if i == q {
            r[0] == 1 && r[1..].iter().all(|&v| v == 0)
        } else {
            r.iter().all(|&v| v == 0)
        }
    }) && f.len() > q
}

/// Solutions of `f(x) = σ^j(x)` to precision p^m, one per residue in F_q (q = p^e).
/// Each Newton step gains one valuation unit: `x ← x + p^k σ^{-j}(ε)` with
/// `f(x) - σ^j(x) = p^k ε`.
pub fn lift_sharp_points_twisted(ctx: &ZqContext, f: &[ZqElem], j: u32) -> Result<Vec<ZqElem>, FrobError> {
    if !is_frobenius_lift(ctx, f, j) {
        return Err(FrobError::NotAFrobeniusLift { q: ctx.p.pow(j) });
    }
    let mut out = Vec::with_capacity(ctx.q() as usize);
    for a in ctx.residues() {
        let mut x = a;
        for k in 1..ctx.m {
            let diff = ctx.sub(&ctx.eval_poly(f, &x), &ctx.frobenius_power(&x, j as i64));
            if ctx.is_zero(&diff) {
                break;
            }
            debug_assert!(ctx.valuation(&diff) >= k);
            let pk = ctx.p.pow(k);
            let eps = ZqElem(diff.0.iter().map(|c| (c / pk) % ctx.p).collect());
            let c = ctx.frobenius_power(&eps, -(j as i64));
            x = ctx.add(&x, &ctx.scale(&c, pk));
        }
        out.push(x);
    }
    Ok(out)
}

/// The case `f ≡ x^q` with q = p^e: solutions of `f(x) = σ^e(x)`.
pub fn lift_sharp_points(ctx: &ZqContext, f: &[ZqElem]) -> Result<Vec<ZqElem>, FrobError> {
    lift_sharp_points_twisted(ctx, f, ctx.e as u32)
}

/// Coordinatewise product of univariate solution sets.
pub fn lift_sharp_points_product(ctx: &ZqContext, fs: &[Vec<ZqElem>], j: u32) -> Result<Vec<Vec<ZqElem>>, FrobError> {
    let sets: Vec<Vec<ZqElem>> = fs.iter().map(|f| lift_sharp_points_twisted(ctx, f, j)).collect::<Result<_, _>>()?;
    let mut out: Vec<Vec<ZqElem>> = vec![vec![]];
    for s in &sets {
        out = out.iter().flat_map(|pre| s.iter().map(move |x| [pre.clone(), vec![x.clone()]].concat())).collect();
    }
    Ok(out)
}

/// `x^{p^j} + p g(x)` with g random of degree < p^j.
pub fn random_frobenius_lift(ctx: &ZqContext, j: u32, rng: &mut impl Rng) -> Vec<ZqElem> {
    let q = ctx.p.pow(j) as usize;
    let mut f: Vec<ZqElem> = (0..q)
        .map(|_| ctx.scale(&ZqElem((0..ctx.e).map(|_| rng.gen_range(0..ctx.pm)).collect()), ctx.p))
        .collect();
    f.push(ctx.one());
    f
}

#[derive(Clone, Debug, Serialize)]
pub struct CaptureReport {
    pub p: u64,
    pub period: usize,
    pub precision: u32,
    pub points: usize,
    pub periodic: usize,
    pub violations: Vec<String>,
}

/// Lifts the solutions of `f(x) = σ(x)` over the degree-`period` unramified extension and
/// checks `f^{∘period}(x) ≡ x (mod p^m)` for each.
pub fn periodic_capture_check(p: u64, f: &Poly, period: usize, m: u32) -> Result<CaptureReport, FrobError> {
    let ctx = ZqContext::new(p, period, m)?;
    let fz = ctx.poly_from_rational(f)?;
    let pts = lift_sharp_points_twisted(&ctx, &fz, 1)?;
    let mut violations = Vec::new();
    let mut periodic = 0;
    for x in &pts {
        let y = (0..period).fold(x.clone(), |acc, _| ctx.eval_poly(&fz, &acc));
        if y == *x {
            periodic += 1;
        } else {
            violations.push(ctx.display(x));
        }
    }
    Ok(CaptureReport { p, period, precision: m, points: pts.len(), periodic, violations })
}

/// Classical Hensel lifting of the roots of `f(x) - x` over Z/p^m (derivative is a unit).
pub fn hensel_fixed_points(p: u64, m: u32, f: &Poly) -> Result<Vec<u64>, FrobError> {
    let ctx = ZqContext::new(p, 1, m)?;
    let mut g = ctx.poly_from_rational(f)?;
    if g.len() < 2 {
        g.resize(2, ctx.zero());
    }
    g[1] = ctx.sub(&g[1], &ctx.one());
    let dg: Vec<ZqElem> = g.iter().enumerate().skip(1).map(|(i, c)| ctx.scale(c, i as u64)).collect();
    let mut out = Vec::new();
    for r in 0..p {
        let mut x = ctx.from_int(r as i64);
        if ctx.valuation(&ctx.eval_poly(&g, &x)) == 0 {
            continue;
        }
        for _ in 0..=m {
            let Some(inv) = ctx.inv(&ctx.eval_poly(&dg, &x)) else { break };
            x = ctx.sub(&x, &ctx.mul(&ctx.eval_poly(&g, &x), &inv));
        }
        if ctx.is_zero(&ctx.eval_poly(&g, &x)) {
            out.push(x.0[0]);
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::FieldConfig;

    fn p(s: &str) -> Poly {
        Poly::parse(s, &FieldConfig::rational()).unwrap()
    }

    #[test]
    fn frobenius_on_f4() {
        let ctx = ZqContext::new(2, 2, 5).unwrap();
        assert_eq!(ctx.modulus, vec![1, 1, 1]);
        // σ(t) = -1 - t
        let expect = ctx.sub(&ctx.from_int(-1), &ctx.t());
        assert_eq!(ctx.sigma_t(), expect);
        let x = ZqElem(vec![5, 7]);
        assert_eq!(ctx.frobenius(&ctx.frobenius(&x)), x);
        let one = ZqContext::new(5, 1, 3).unwrap();
        assert_eq!(one.frobenius(&one.from_int(17)), one.from_int(17));
    }

    #[test]
    fn teichmuller() {
        let ctx = ZqContext::new(5, 1, 3).unwrap();
        let f = ctx.poly_from_rational(&p("x^5")).unwrap();
        let mut pts: Vec<u64> = lift_sharp_points(&ctx, &f).unwrap().iter().map(|x| x.0[0]).collect();
        pts.sort();
        assert_eq!(pts, vec![0, 1, 57, 68, 124]);
        assert_eq!(hensel_fixed_points(5, 3, &p("x^5")).unwrap(), pts);
    }

    #[test]
    fn capture() {
        let r = periodic_capture_check(3, &p("x^3+3*x"), 2, 4).unwrap();
        assert_eq!((r.points, r.periodic), (9, 9));
        let r = periodic_capture_check(5, &p("x^5"), 2, 3).unwrap();
        assert!(r.violations.is_empty());
        let ctx = ZqContext::new(3, 1, 4).unwrap();
        assert!(lift_sharp_points(&ctx, &ctx.poly_from_rational(&p("x^3+x")).unwrap()).is_err());
    }
}
