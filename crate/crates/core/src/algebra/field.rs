//! The coefficient field K = Q or Q(sqrt d) and its involution.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("d = {0} is not a squarefree integer different from 0")]
    NotSquarefree(i64),
    #[error("conjugation requires a quadratic field (d != 1)")]
    ConjugationOverQ,
}

/// Which automorphism of K plays the role of the difference operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sigma {
    Identity,
    Conjugation,
}

/// K = Q(sqrt d) (d = 1 means Q) together with the chosen automorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldConfig {
    d: i64,
    sigma: Sigma,
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig::rational()
    }
}

pub fn is_squarefree(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    let n = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

impl FieldConfig {
    pub fn new(d: i64, sigma: Sigma) -> Result<Self, FieldError> {
        if !is_squarefree(d) {
            return Err(FieldError::NotSquarefree(d));
        }
        if d == 1 && sigma == Sigma::Conjugation {
            return Err(FieldError::ConjugationOverQ);
        }
        Ok(FieldConfig { d, sigma })
    }

    pub fn rational() -> Self {
        FieldConfig { d: 1, sigma: Sigma::Identity }
    }

    pub fn quadratic(d: i64) -> Result<Self, FieldError> {
        FieldConfig::new(d, Sigma::Identity)
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn sigma(&self) -> Sigma {
        self.sigma
    }

    pub fn with_sigma(&self, sigma: Sigma) -> Result<Self, FieldError> {
        FieldConfig::new(self.d, sigma)
    }

    pub fn is_rational(&self) -> bool {
        self.d == 1
    }

    /// The generator sqrt d (equals 1 when K = Q).
    pub fn sqrt_d(&self) -> FieldElem {
        if self.d == 1 {
            FieldElem::one()
        } else {
            FieldElem::new(Rational::zero(), Rational::one(), self.d)
        }
    }

    pub fn apply(&self, x: &FieldElem) -> FieldElem {
        match self.sigma {
            Sigma::Identity => x.clone(),
            Sigma::Conjugation => x.conj(),
        }
    }

    /// sigma^{-1}; both supported automorphisms are involutions.
    pub fn apply_inverse(&self, x: &FieldElem) -> FieldElem {
        self.apply(x)
    }

    pub fn apply_power(&self, x: &FieldElem, n: i64) -> FieldElem {
        if n.rem_euclid(2) == 0 {
            x.clone()
        } else {
            self.apply(x)
        }
    }

    pub fn elem(&self, a: Rational, b: Rational) -> FieldElem {
        FieldElem::new(a, b, self.d)
    }
}

/// a + b*sqrt(d). Equality and hashing ignore `d` (the ambient field is fixed per computation).
#[derive(Clone, Debug)]
pub struct FieldElem {
    a: Rational,
    b: Rational,
    d: i64,
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b
    }
}

impl Eq for FieldElem {}

impl Hash for FieldElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
    }
}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on (a, b); a total order used only for canonical tie-breaking.
impl Ord for FieldElem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.a.cmp(&other.a).then_with(|| self.b.cmp(&other.b))
    }
}

fn join_d(x: i64, y: i64) -> i64 {
    if x == 1 {
        y
    } else {
        debug_assert!(y == 1 || x == y, "mixing elements of Q(sqrt {x}) and Q(sqrt {y})");
        x
    }
}

impl FieldElem {
    pub fn new(a: Rational, b: Rational, d: i64) -> Self {
        if b.is_zero() || d == 1 {
            // d = 1 has no irrational part; fold it into a
            let a = if d == 1 { a + b } else { a };
            return FieldElem { a, b: Rational::zero(), d };
        }
        FieldElem { a, b, d }
    }

    pub fn zero() -> Self {
        FieldElem { a: Rational::zero(), b: Rational::zero(), d: 1 }
    }

    pub fn one() -> Self {
        FieldElem { a: Rational::one(), b: Rational::zero(), d: 1 }
    }

    pub fn from_rational(q: Rational) -> Self {
        FieldElem { a: q, b: Rational::zero(), d: 1 }
    }

    pub fn from_int(n: i64) -> Self {
        FieldElem::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        FieldElem::from_rational(Rational::from_integer(n))
    }

    pub fn frac(n: i64, m: i64) -> Self {
        FieldElem::from_rational(Rational::new(BigInt::from(n), BigInt::from(m)))
    }

    /// Same value, tagged as living in Q(sqrt d).
    pub fn in_field(mut self, d: i64) -> Self {
        if self.b.is_zero() {
            self.d = d;
        }
        self
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn sqrt_part(&self) -> &Rational {
        &self.b
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.b.is_zero() {
            Some(&self.a)
        } else {
            None
        }
    }

    pub fn is_integer(&self) -> bool {
        self.b.is_zero() && self.a.is_integer()
    }

    /// Galois conjugate a - b*sqrt(d).
    pub fn conj(&self) -> Self {
        FieldElem { a: self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    /// Norm to Q: a^2 - d*b^2.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - Rational::from_integer(BigInt::from(self.d)) * &self.b * &self.b
    }

    pub fn trace(&self) -> Rational {
        &self.a + &self.a
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(FieldElem { a: &self.a / &n, b: -(&self.b / &n), d: self.d })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = FieldElem::one().in_field(self.d);
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

    /// Integer power; negative exponents need a nonzero base.
    pub fn powi(&self, e: i64) -> Option<Self> {
        if e >= 0 {
            Some(self.pow(e as u64))
        } else {
            self.inv().map(|v| v.pow(e.unsigned_abs()))
        }
    }

    /// Some square root inside K, if one exists. The returned root has nonnegative
    /// leading component (a > 0, or a = 0 and b >= 0).
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let d = self.d;
        let root = if self.b.is_zero() {
            if let Some(r) = rational_sqrt(&self.a) {
                Some(FieldElem::from_rational(r).in_field(d))
            } else if d != 1 {
                // a = c^2 d  gives  c*sqrt(d)
                let dd = Rational::from_integer(BigInt::from(d));
                rational_sqrt(&(&self.a / &dd)).map(|c| FieldElem::new(Rational::zero(), c, d))
            } else {
                None
            }
        } else {
            // (p + q s)^2 = p^2 + d q^2 + 2pq s
            let n = rational_sqrt(&self.norm())?;
            let two = Rational::from_integer(BigInt::from(2));
            let mut found = None;
            for cand in [(&self.a + &n) / &two, (&self.a - &n) / &two] {
                if let Some(p) = rational_sqrt(&cand) {
                    if p.is_zero() {
                        continue;
                    }
                    let q = &self.b / (&two * &p);
                    let r = FieldElem::new(p, q, d);
                    if &(&r * &r) == self {
                        found = Some(r);
                        break;
                    }
                }
            }
            found
        }?;
        Some(root.canonical_sign())
    }

    /// Chooses between x and -x: the one whose first nonzero component is positive.
    pub fn canonical_sign(self) -> Self {
        let negative = if self.a.is_zero() { self.b.is_negative() } else { self.a.is_negative() };
        if negative {
            -self
        } else {
            self
        }
    }

    /// An embedding of K into the complex numbers (sqrt d positive real or i*sqrt|d|).
    pub fn to_complex(&self) -> (f64, f64) {
        let a = rat_to_f64(&self.a);
        let b = rat_to_f64(&self.b);
        if self.d > 0 {
            (a + b * (self.d as f64).sqrt(), 0.0)
        } else {
            (a, b * ((-self.d) as f64).sqrt())
        }
    }

    /// A rational upper bound for the absolute value under `to_complex`.
    pub fn abs_upper_bound(&self) -> Rational {
        let s = BigInt::from(self.d.unsigned_abs()).sqrt() + BigInt::one();
        self.a.abs() + self.b.abs() * Rational::from_integer(s)
    }

    pub fn numer_denom_bits(&self) -> u64 {
        self.a.numer().bits() + self.a.denom().bits() + self.b.numer().bits() + self.b.denom().bits()
    }
}

pub fn rat_to_f64(q: &Rational) -> f64 {
    let n = q.numer().to_f64().unwrap_or(f64::NAN);
    let d = q.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        n / d
    } else {
        // scale both down to avoid overflow
        let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(900) as usize;
        let n = (q.numer() >> shift).to_f64().unwrap_or(0.0);
        let d = (q.denom() >> shift).to_f64().unwrap_or(1.0);
        n / d
    }
}

pub fn integer_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    let n = integer_sqrt_exact(q.numer())?;
    let d = integer_sqrt_exact(q.denom())?;
    Some(Rational::new(n, d))
}

/// Exact rational k-th root (real, sign-compatible), if it exists.
pub fn rational_nth_root(q: &Rational, k: u32) -> Option<Rational> {
    if k == 0 {
        return None;
    }
    if k == 1 {
        return Some(q.clone());
    }
    let neg = q.is_negative();
    if neg && k % 2 == 0 {
        return None;
    }
    let root_int = |n: &BigInt| -> Option<BigInt> {
        let r = n.abs().nth_root(k);
        if num::pow::pow(r.clone(), k as usize) == n.abs() {
            Some(r)
        } else {
            None
        }
    };
    let n = root_int(q.numer())?;
    let d = root_int(q.denom())?;
    let r = Rational::new(n, d);
    Some(if neg { -r } else { r })
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $imp:expr) => {
        impl<'a> $trait<&'a FieldElem> for &'a FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: &'a FieldElem) -> FieldElem {
                let f: fn(&FieldElem, &FieldElem) -> FieldElem = $imp;
                f(self, rhs)
            }
        }
        impl $trait<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: &'a FieldElem) -> FieldElem {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<FieldElem> for &'a FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |x, y| FieldElem {
    a: &x.a + &y.a,
    b: &x.b + &y.b,
    d: join_d(x.d, y.d)
});
forward_binop!(Sub, sub, |x, y| FieldElem {
    a: &x.a - &y.a,
    b: &x.b - &y.b,
    d: join_d(x.d, y.d)
});
forward_binop!(Mul, mul, |x, y| {
    let d = join_d(x.d, y.d);
    if x.b.is_zero() && y.b.is_zero() {
        return FieldElem { a: &x.a * &y.a, b: Rational::zero(), d };
    }
    let dd = Rational::from_integer(BigInt::from(d));
    FieldElem {
        a: &x.a * &y.a + dd * &x.b * &y.b,
        b: &x.a * &y.b + &x.b * &y.a,
        d,
    }
});
forward_binop!(Div, div, |x, y| {
    let inv = y.inv().expect("division by zero in K");
    x * &inv
});

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem { a: -self.a, b: -self.b, d: self.d }
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem { a: -self.a.clone(), b: -self.b.clone(), d: self.d }
    }
}

impl AddAssign<&FieldElem> for FieldElem {
    fn add_assign(&mut self, rhs: &FieldElem) {
        self.a += &rhs.a;
        self.b += &rhs.b;
        self.d = join_d(self.d, rhs.d);
    }
}

impl SubAssign<&FieldElem> for FieldElem {
    fn sub_assign(&mut self, rhs: &FieldElem) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
        self.d = join_d(self.d, rhs.d);
    }
}

impl MulAssign<&FieldElem> for FieldElem {
    fn mul_assign(&mut self, rhs: &FieldElem) {
        *self = &*self * rhs;
    }
}

impl From<i64> for FieldElem {
    fn from(n: i64) -> Self {
        FieldElem::from_int(n)
    }
}

impl From<Rational> for FieldElem {
    fn from(q: Rational) -> Self {
        FieldElem::from_rational(q)
    }
}

fn fmt_rational(q: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.denom().is_one() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

/// Prints in the polynomial grammar: `3/2`, `-s`, `1/2 + 3*s`.
impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return fmt_rational(&self.a, f);
        }
        if !self.a.is_zero() {
            fmt_rational(&self.a, f)?;
            write!(f, "{}", if self.b.is_negative() { " - " } else { " + " })?;
        } else if self.b.is_negative() {
            write!(f, "-")?;
        }
        let babs = self.b.abs();
        if !babs.is_one() {
            fmt_rational(&babs, f)?;
            write!(f, "*")?;
        }
        write!(f, "s")
    }
}

/// All k-th roots of `c` that lie in K (k >= 1).
pub fn nth_roots_in_field(c: &FieldElem, k: u32) -> Vec<FieldElem> {
    let d = c.d();
    if k == 0 {
        return vec![];
    }
    if c.is_zero() {
        return vec![c.clone()];
    }
    if k == 1 {
        return vec![c.clone()];
    }
    let mut out: Vec<FieldElem> = Vec::new();
    let push = |v: FieldElem, out: &mut Vec<FieldElem>| {
        if !out.contains(&v) {
            out.push(v);
        }
    };
    // find one root by prime-power steps, then multiply by roots of unity in K
    let base = one_nth_root(c, k);
    if let Some(r) = base {
        for z in roots_of_unity(d) {
            let cand = &r * &z;
            if cand.pow(k as u64) == *c {
                push(cand, &mut out);
            }
        }
    }
    out.sort();
    out
}

fn roots_of_unity(d: i64) -> Vec<FieldElem> {
    let mut v = vec![FieldElem::one().in_field(d), FieldElem::from_int(-1).in_field(d)];
    let half = Rational::new(BigInt::from(1), BigInt::from(2));
    match d {
        -1 => {
            v.push(FieldElem::new(Rational::zero(), Rational::one(), d));
            v.push(FieldElem::new(Rational::zero(), -Rational::one(), d));
        }
        -3 => {
            for sa in [1i64, -1] {
                for sb in [1i64, -1] {
                    v.push(FieldElem::new(
                        &half * Rational::from_integer(BigInt::from(sa)),
                        &half * Rational::from_integer(BigInt::from(sb)),
                        d,
                    ));
                }
            }
        }
        _ => {}
    }
    v
}

fn smallest_prime_factor(mut k: u32) -> Vec<u32> {
    let mut fs = Vec::new();
    let mut p = 2;
    while p * p <= k {
        while k % p == 0 {
            fs.push(p);
            k /= p;
        }
        p += 1;
    }
    if k > 1 {
        fs.push(k);
    }
    fs
}

fn one_nth_root(c: &FieldElem, k: u32) -> Option<FieldElem> {
    let mut cur = vec![c.clone()];
    for p in smallest_prime_factor(k) {
        let mut next = Vec::new();
        for x in &cur {
            for r in prime_roots(x, p) {
                if !next.contains(&r) {
                    next.push(r);
                }
            }
        }
        if next.is_empty() {
            return None;
        }
        cur = next;
    }
    cur.into_iter().next()
}

/// Roots of y^p = c in K for a prime p, up to roots of unity.
fn prime_roots(c: &FieldElem, p: u32) -> Vec<FieldElem> {
    let d = c.d();
    if p == 2 {
        return c.sqrt().into_iter().flat_map(|r| [r.clone(), -r]).collect();
    }
    let mut out = Vec::new();
    if let Some(q) = c.as_rational() {
        if let Some(r) = rational_nth_root(q, p) {
            out.push(FieldElem::from_rational(r).in_field(d));
        }
        return out;
    }
    // y = u + v s with y^p = c: the norm N(y) is the real p-th root of N(c), and the trace
    // t = y + y^sigma is a rational root of the power sum polynomial t -> y^p + y^{sigma p}
    let nu = match rational_nth_root(&c.norm(), p) {
        Some(n) => n,
        None => return out,
    };
    // power sums s_j = y^j + ybar^j satisfy s_j = t s_{j-1} - nu s_{j-2}
    let t_poly = {
        use crate::algebra::poly::Poly;
        let t = Poly::x();
        let nu_c = Poly::constant(FieldElem::from_rational(nu.clone()));
        let mut s0 = Poly::constant(FieldElem::from_int(2));
        let mut s1 = t.clone();
        for _ in 2..=p {
            let s2 = &(&t * &s1) - &(&nu_c * &s0);
            s0 = s1;
            s1 = s2;
        }
        &s1 - &Poly::constant(FieldElem::from_rational(c.trace()))
    };
    for t in crate::algebra::roots::rational_roots(&t_poly) {
        // y^2 - t y + nu = 0
        let disc = &t * &t - Rational::from_integer(BigInt::from(4)) * &nu;
        let disc_e = FieldElem::from_rational(disc).in_field(d);
        if let Some(sq) = disc_e.sqrt() {
            let two = FieldElem::from_int(2);
            for sg in [sq.clone(), -sq] {
                let y = (FieldElem::from_rational(t.clone()).in_field(d) + sg) / &two;
                if y.pow(p as u64) == *c && !out.contains(&y) {
                    out.push(y);
                }
            }
        }
    }
    out
}

pub fn bigint_to_i64(n: &BigInt) -> Option<i64> {
    n.to_i64()
}

pub fn lcm_denominators<'a>(it: impl IntoIterator<Item = &'a FieldElem>) -> BigInt {
    let mut l = BigInt::one();
    for c in it {
        l = l.lcm(c.a.denom());
        l = l.lcm(c.b.denom());
    }
    l
}

/// Serialized in the text grammar, e.g. `"1/2 + 3*s"`.
impl Serialize for FieldElem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
