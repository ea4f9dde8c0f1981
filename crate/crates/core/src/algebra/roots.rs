//! Roots in K of polynomials over K, by l-adic lifting and exact verification.
//!
//! Every root alpha of q over K is a root of the rational norm R = q * conj(q). With N the
//! leading coefficient of the integral primitive R, 2*N*alpha = A + B*sqrt(d) with integers
//! |A|, |B| <= 2*N*C where C is the Cauchy bound of R. Roots of R are lifted modulo l^k past
//! that bound; pairs of lifted roots determine (A, B) through an l-adic sqrt(d).

use num::{BigInt, Integer, One, Signed, Zero};

use super::field::{lcm_denominators, FieldElem, Rational};
use super::modp::{is_prime, is_qr, reduce_bigint, sqrt_mod, PolyFp};
use super::poly::Poly;

fn modinv(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

fn eval_int(c: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for v in c.iter().rev() {
        acc = (acc * x + v).mod_floor(m);
    }
    acc
}

/// Newton-lifts a simple root r of c modulo l to modulo l^k (returned together with l^k).
fn hensel_lift(c: &[BigInt], r: u64, l: u64, k: u32) -> BigInt {
    let dc: Vec<BigInt> = c.iter().enumerate().skip(1).map(|(i, v)| v * BigInt::from(i)).collect();
    let lb = BigInt::from(l);
    let mut x = BigInt::from(r);
    let mut prec = 1u32;
    while prec < k {
        prec = (prec * 2).min(k);
        let m = lb.pow(prec);
        let fx = eval_int(c, &x, &m);
        let dfx = eval_int(&dc, &x, &m);
        let inv = modinv(&dfx, &m).expect("simple root has a unit derivative");
        x = (x - fx * inv).mod_floor(&m);
    }
    x
}

fn symmetric(v: &BigInt, m: &BigInt) -> BigInt {
    let r = v.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Integer primitive multiple of a rational polynomial.
fn integral_coeffs(p: &Poly) -> Vec<BigInt> {
    let l = lcm_denominators(p.coeffs());
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| {
            let v = c.rational_part() * Rational::from_integer(l.clone());
            debug_assert!(v.is_integer());
            v.to_integer()
        })
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    ints.into_iter().map(|v| v / &g).collect()
}

/// Distinct roots of `p` in Q(sqrt d), sorted.
pub fn roots_in_field(p: &Poly, d: i64) -> Vec<FieldElem> {
    if p.is_constant() {
        return vec![];
    }
    let q = p.squarefree_part();
    let r = if q.is_rational() { q.clone() } else { (&q * &q.conj()).squarefree_part() };
    debug_assert!(r.is_rational());
    let c = integral_coeffs(&r);
    let n = c.last().expect("nonconstant").clone();
    let n_abs = n.abs();
    let cauchy = {
        let mut best = BigInt::zero();
        for v in &c[..c.len() - 1] {
            let t = v.abs().div_ceil(&n_abs);
            if t > best {
                best = t;
            }
        }
        best + 1
    };
    let bound = BigInt::from(4) * &n_abs * &cauchy + 1;
    let quad = d != 1;
    let deg = c.len() - 1;

    // choose l
    let mut l = 2u64;
    loop {
        l += 1;
        if !is_prime(l) {
            continue;
        }
        if reduce_bigint(&n, l) == 0 {
            continue;
        }
        if quad {
            let dm = reduce_bigint(&BigInt::from(d), l);
            if dm == 0 || l == 2 || !is_qr(dm, l) {
                continue;
            }
        }
        let rm = PolyFp::new(c.iter().map(|v| reduce_bigint(v, l)).collect(), l);
        if rm.degree() != deg || rm.gcd(&rm.derivative()).degree() > 0 {
            continue;
        }
        break;
    }
    let lb = BigInt::from(l);
    let mut k = 1u32;
    while lb.pow(k) <= bound {
        k += 1;
    }
    let m = lb.pow(k);
    let rm = PolyFp::new(c.iter().map(|v| reduce_bigint(v, l)).collect(), l);
    let lifted: Vec<BigInt> = rm.roots_brute().into_iter().map(|r0| hensel_lift(&c, r0, l, k)).collect();

    let mut out: Vec<FieldElem> = Vec::new();
    let consider = |cand: FieldElem, out: &mut Vec<FieldElem>| {
        if !out.contains(&cand) && q.eval(&cand).is_zero() {
            out.push(cand);
        }
    };
    if !quad {
        for r0 in &lifted {
            let num = symmetric(&(&n * r0), &m);
            consider(FieldElem::from_rational(Rational::new(num, n.clone())), &mut out);
        }
    } else {
        let dm = reduce_bigint(&BigInt::from(d), l);
        let s0 = sqrt_mod(dm, l).expect("quadratic residue");
        let dpoly = [BigInt::from(-d), BigInt::zero(), BigInt::one()];
        let s = hensel_lift(&dpoly, s0, l, k);
        let sinv = modinv(&s, &m).expect("unit");
        let two_n = BigInt::from(2) * &n;
        for ri in &lifted {
            for rj in &lifted {
                let a = symmetric(&(&n * (ri + rj)), &m);
                let b = symmetric(&(&n * (ri - rj) * &sinv), &m);
                let cand = FieldElem::new(
                    Rational::new(a, two_n.clone()),
                    Rational::new(b, two_n.clone()),
                    d,
                );
                consider(cand, &mut out);
            }
        }
    }
    out.sort();
    out
}

/// Distinct roots in K of a polynomial whose coefficients live in K (K read off the coefficients).
pub fn field_roots(p: &Poly) -> Vec<FieldElem> {
    roots_in_field(p, p.field_d())
}

/// Distinct rational roots, sorted.
pub fn rational_roots(p: &Poly) -> Vec<Rational> {
    roots_in_field(p, 1)
        .into_iter()
        .filter_map(|r| r.as_rational().cloned())
        .collect()
}

/// Roots in K with multiplicity.
pub fn roots_with_multiplicity(p: &Poly, d: i64) -> Vec<(FieldElem, usize)> {
    let mut out = Vec::new();
    for (part, m) in p.squarefree_decomposition() {
        for r in roots_in_field(&part, d) {
            out.push((r, m));
        }
    }
    out.sort();
    out
}

/// Smallest integer strictly greater than every |root| (Cauchy bound), as f64-free integer.
pub fn cauchy_bound(p: &Poly) -> BigInt {
    let lc = p.lc().abs_upper_bound();
    let mut best = Rational::zero();
    for c in &p.coeffs()[..p.coeffs().len().saturating_sub(1)] {
        let t = c.abs_upper_bound() / &lc;
        if t > best {
            best = t;
        }
    }
    (best + Rational::one()).ceil().to_integer() + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::FieldConfig;

    fn p(s: &str, d: i64) -> Poly {
        let cfg = if d == 1 { FieldConfig::rational() } else { FieldConfig::quadratic(d).unwrap() };
        Poly::parse(s, &cfg).unwrap()
    }

    #[test]
    fn rational_root_sets() {
        let r = rational_roots(&p("(2*x-3)*(x+5)^2*(x^2+1)", 1));
        assert_eq!(r, vec![Rational::from_integer((-5).into()), Rational::new(3.into(), 2.into())]);
        assert!(rational_roots(&p("x^2-2", 1)).is_empty());
        assert_eq!(rational_roots(&p("x^3", 1)), vec![Rational::zero()]);
    }

    #[test]
    fn quadratic_roots() {
        let r = roots_in_field(&p("x^2-2", 1), 2);
        assert_eq!(r.len(), 2);
        let r = field_roots(&p("(x - 1/3*s + 2)*(x+7)*(x^2+3)", 2));
        assert_eq!(r.len(), 2);
        let r = roots_in_field(&p("x^2+x+1", 1), -3);
        assert_eq!(r.len(), 2);
        let r = roots_in_field(&p("x^4 + 1", 1), -1);
        assert!(r.is_empty());
        let r = roots_in_field(&p("x^2 + 1", 1), -1);
        assert_eq!(r.len(), 2);
    }
}
