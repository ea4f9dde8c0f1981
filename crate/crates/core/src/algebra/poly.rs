//! Dense univariate polynomials over K.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use super::field::{FieldConfig, FieldElem, Rational};

/// Coefficients lowest degree first; never carries trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<FieldElem>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("scaling factor must be nonzero")]
    ZeroScale,
    #[error("polynomial must be nonconstant")]
    Constant,
    #[error("base polynomial must have degree at least 1")]
    BadBase,
}

impl Poly {
    pub fn from_coeffs(mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Poly::from_coeffs(cs.iter().map(|&c| FieldElem::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::constant(FieldElem::one())
    }

    pub fn constant(c: FieldElem) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn x() -> Self {
        Poly::from_ints(&[0, 1])
    }

    /// c * x^k
    pub fn monomial(c: FieldElem, k: usize) -> Self {
        let mut v = vec![FieldElem::zero(); k + 1];
        v[k] = c;
        Poly::from_coeffs(v)
    }

    /// x^k
    pub fn power_of_x(k: usize) -> Self {
        Poly::monomial(FieldElem::one(), k)
    }

    pub fn linear(a: FieldElem, b: FieldElem) -> Self {
        Poly::from_coeffs(vec![b, a])
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<FieldElem> {
        self.coeffs
    }

    /// Coefficient of x^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).cloned().unwrap_or_else(FieldElem::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lc(&self) -> FieldElem {
        self.coeffs.last().cloned().unwrap_or_else(FieldElem::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_one()
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lc().inv().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    pub fn scale(&self, c: &FieldElem) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_rational())
    }

    /// The ambient d recorded on coefficients (1 when all coefficients are rational).
    pub fn field_d(&self) -> i64 {
        self.coeffs.iter().map(|c| c.d()).find(|&d| d != 1).unwrap_or(1)
    }

    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        let mut acc = FieldElem::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &FieldElem::from_int(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, mut e: usize) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// outer(inner(x)), by Horner in the ring of polynomials.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Poly::constant(c.clone());
        }
        acc
    }

    /// f(x + c).
    pub fn shift(&self, c: &FieldElem) -> Poly {
        self.compose(&Poly::linear(FieldElem::one(), c.clone()))
    }

    /// f(x^k).
    pub fn inflate(&self, k: usize) -> Poly {
        if k == 0 {
            return Poly::constant(self.eval(&FieldElem::one()));
        }
        let mut v = vec![FieldElem::zero(); self.degree() * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * k] = c.clone();
        }
        Poly::from_coeffs(v)
    }

    /// Apply a coefficient map (used for sigma).
    pub fn map_coeffs(&self, f: impl Fn(&FieldElem) -> FieldElem) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    pub fn sigma(&self, cfg: &FieldConfig) -> Poly {
        self.map_coeffs(|c| cfg.apply(c))
    }

    pub fn sigma_inv(&self, cfg: &FieldConfig) -> Poly {
        self.map_coeffs(|c| cfg.apply_inverse(c))
    }

    pub fn sigma_power(&self, cfg: &FieldConfig, n: i64) -> Poly {
        self.map_coeffs(|c| cfg.apply_power(c, n))
    }

    pub fn conj(&self) -> Poly {
        self.map_coeffs(|c| c.conj())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.degree() < divisor.degree() || self.is_zero() {
            return (Poly::zero(), self.clone());
        }
        let dl = divisor.lc().inv().expect("nonzero");
        let dd = divisor.degree();
        let mut r = self.coeffs.clone();
        let mut q = vec![FieldElem::zero(); self.degree() - dd + 1];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] * &dl;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    let t = &c * dc;
                    r[i + j] -= &t;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Poly::from_coeffs(q), Poly::from_coeffs(r))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.div_rem(divisor).1
    }

    /// Exact quotient when `divisor` divides `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(divisor);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic_or_zero();
        }
        a.monic_or_zero()
    }

    fn monic_or_zero(self) -> Poly {
        if self.is_zero() {
            self
        } else {
            self.monic()
        }
    }

    /// Squarefree part (monic).
    pub fn squarefree_part(&self) -> Poly {
        if self.is_constant() {
            return Poly::one();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).expect("gcd divides").monic()
    }

    /// Yun's algorithm: pairwise coprime monic squarefree parts with multiplicities,
    /// so that f = lc * prod part^m.
    pub fn squarefree_decomposition(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a = f.gcd(&fp);
        let mut b = f.div_exact(&a).expect("divides");
        let mut c = fp.div_exact(&a).expect("divides");
        let mut d = &c - &b.derivative();
        let mut i = 1;
        loop {
            let g = b.gcd(&d);
            let nb = b.div_exact(&g).expect("divides");
            if !g.is_constant() {
                out.push((g.clone(), i));
            }
            if nb.is_constant() {
                break;
            }
            c = d.div_exact(&g).expect("divides");
            b = nb;
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    /// Rational coefficients, if all coefficients are rational.
    pub fn rational_coeffs(&self) -> Option<Vec<Rational>> {
        self.coeffs.iter().map(|c| c.as_rational().cloned()).collect()
    }

    /// Lowest exponent with a nonzero coefficient (0 for the zero polynomial).
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    /// Exponents carrying nonzero coefficients.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i).collect()
    }

    /// Reverses coefficients relative to degree `n`: x^n f(1/x).
    pub fn reversed(&self, n: usize) -> Poly {
        let mut v = vec![FieldElem::zero(); n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if i <= n {
                v[n - i] = c.clone();
            }
        }
        Poly::from_coeffs(v)
    }

    pub fn max_coeff_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.numer_denom_bits()).max().unwrap_or(0)
    }

    pub fn parse(text: &str, cfg: &FieldConfig) -> Result<Poly, super::parse::ParseError> {
        super::parse::parse_poly(text, cfg)
    }
}

/// c * f := f(cx) / c^deg f.
pub fn rescale(c: &FieldElem, f: &Poly) -> Result<Poly, PolyError> {
    if c.is_zero() {
        return Err(PolyError::ZeroScale);
    }
    if f.is_constant() {
        return Err(PolyError::Constant);
    }
    let n = f.degree();
    let cinv = c.inv().expect("nonzero");
    // coefficient i picks up c^i / c^n = c^{-(n-i)}
    let mut pw = FieldElem::one();
    let mut out = vec![FieldElem::zero(); n + 1];
    for i in (0..=n).rev() {
        out[i] = &f.coeffs[i] * &pw;
        pw = &pw * &cinv;
    }
    Ok(Poly::from_coeffs(out))
}

/// Digits c_i (deg c_i < deg h) with f = sum c_i h^i.
pub fn base_expansion(f: &Poly, h: &Poly) -> Result<Vec<Poly>, PolyError> {
    if h.degree() < 1 || h.is_zero() {
        return Err(PolyError::BadBase);
    }
    let mut digits = Vec::new();
    let mut cur = f.clone();
    while !cur.is_zero() {
        let (q, r) = cur.div_rem(h);
        digits.push(r);
        cur = q;
    }
    if digits.is_empty() {
        digits.push(Poly::zero());
    }
    Ok(digits)
}

/// When every digit of f in base h is a constant, the outer polynomial g with f = g(h).
pub fn outer_if_in_subring(f: &Poly, h: &Poly) -> Option<Poly> {
    let digits = base_expansion(f, h).ok()?;
    if digits.iter().all(|d| d.is_constant()) {
        Some(Poly::from_coeffs(digits.into_iter().map(|d| d.coeff(0)).collect()))
    } else {
        None
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::from_coeffs(v)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![FieldElem::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let t = a * b;
                v[i + j] += &t;
            }
        }
        Poly::from_coeffs(v)
    }
}

macro_rules! owned_ops {
    ($trait:ident, $method:ident) => {
        impl $trait for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
        impl $trait<Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

fn write_rational_abs(q: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let q = q.abs();
    if q.denom().is_one() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

/// Canonical text form, highest degree first: `x^3 - 3/4*x + 1/2*s*x - 3`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            for (part, with_s) in [(c.rational_part(), false), (c.sqrt_part(), true)] {
                if part.is_zero() {
                    continue;
                }
                let neg = part.is_negative();
                if first {
                    if neg {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, "{}", if neg { " - " } else { " + " })?;
                }
                first = false;
                let unit = part.abs().is_one();
                let mut factors: Vec<String> = Vec::new();
                if !unit || (k == 0 && !with_s) {
                    factors.push(String::new());
                }
                if with_s {
                    factors.push("s".into());
                }
                if k == 1 {
                    factors.push("x".into());
                } else if k > 1 {
                    factors.push(format!("x^{k}"));
                }
                for (idx, fac) in factors.iter().enumerate() {
                    if idx > 0 {
                        write!(f, "*")?;
                    }
                    if fac.is_empty() {
                        write_rational_abs(part, f)?;
                    } else {
                        write!(f, "{fac}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// x -> a x + b with a != 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearMap {
    a: FieldElem,
    b: FieldElem,
}

impl LinearMap {
    pub fn new(a: FieldElem, b: FieldElem) -> Option<Self> {
        if a.is_zero() {
            None
        } else {
            Some(LinearMap { a, b })
        }
    }

    pub fn identity() -> Self {
        LinearMap { a: FieldElem::one(), b: FieldElem::zero() }
    }

    pub fn translation(b: FieldElem) -> Self {
        LinearMap { a: FieldElem::one(), b }
    }

    pub fn scaling(a: FieldElem) -> Option<Self> {
        LinearMap::new(a, FieldElem::zero())
    }

    pub fn from_poly(p: &Poly) -> Option<Self> {
        if p.degree() != 1 {
            return None;
        }
        LinearMap::new(p.coeff(1), p.coeff(0))
    }

    pub fn a(&self) -> &FieldElem {
        &self.a
    }

    pub fn b(&self) -> &FieldElem {
        &self.b
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_scaling(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_translation(&self) -> bool {
        self.a.is_one()
    }

    pub fn to_poly(&self) -> Poly {
        Poly::linear(self.a.clone(), self.b.clone())
    }

    pub fn apply(&self, x: &FieldElem) -> FieldElem {
        &(&self.a * x) + &self.b
    }

    pub fn inverse(&self) -> LinearMap {
        let ai = self.a.inv().expect("invertible");
        LinearMap { b: -(&self.b * &ai), a: ai }
    }

    /// self ∘ inner.
    pub fn then_after(&self, inner: &LinearMap) -> LinearMap {
        LinearMap { a: &self.a * &inner.a, b: &(&self.a * &inner.b) + &self.b }
    }

    pub fn sigma(&self, cfg: &FieldConfig) -> LinearMap {
        LinearMap { a: cfg.apply(&self.a), b: cfg.apply(&self.b) }
    }

    /// self ∘ p.
    pub fn compose_left(&self, p: &Poly) -> Poly {
        &p.scale(&self.a) + &Poly::constant(self.b.clone())
    }

    /// p ∘ self.
    pub fn compose_right(&self, p: &Poly) -> Poly {
        p.compose(&self.to_poly())
    }
}

impl fmt::Display for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

impl Serialize for LinearMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_poly().to_string())
    }
}

/// Integer as a field element.
pub fn int(n: i64) -> FieldElem {
    FieldElem::from_int(n)
}
