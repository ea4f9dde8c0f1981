//! Small-prime arithmetic: scalars and dense polynomials over F_p with p < 2^62.

use num::{BigInt, Integer, ToPrimitive};

use super::field::Rational;

pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn addmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

pub fn submod(a: u64, b: u64, p: u64) -> u64 {
    addmod(a, p - b % p, p)
}

pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse modulo a prime; `None` for zero.
pub fn invmod(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        None
    } else {
        Some(powmod(a, p - 2, p))
    }
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

pub fn next_prime(mut n: u64) -> u64 {
    loop {
        n += 1;
        if is_prime(n) {
            return n;
        }
    }
}

/// Reduces a big integer into [0, p).
pub fn reduce_bigint(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().expect("in range")
}

/// Reduces a rational modulo p; `None` when p divides the denominator.
pub fn reduce_rational(q: &Rational, p: u64) -> Option<u64> {
    let den = reduce_bigint(q.denom(), p);
    let inv = invmod(den, p)?;
    Some(mulmod(reduce_bigint(q.numer(), p), inv, p))
}

/// Legendre symbol test.
pub fn is_qr(a: u64, p: u64) -> bool {
    let a = a % p;
    a == 0 || p == 2 || powmod(a, (p - 1) / 2, p) == 1
}

/// Tonelli-Shanks square root modulo an odd prime.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 || p == 2 {
        return Some(a);
    }
    if !is_qr(a, p) {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while is_qr(z, p) {
        z += 1;
    }
    let mut m = s;
    let mut c = powmod(z, q, p);
    let mut t = powmod(a, q, p);
    let mut r = powmod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulmod(tt, tt, p);
            i += 1;
        }
        let b = powmod(c, 1 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    Some(r.min(p - r))
}

/// Dense polynomial over F_p, lowest degree first, trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFp {
    pub c: Vec<u64>,
    pub p: u64,
}

impl PolyFp {
    pub fn new(mut c: Vec<u64>, p: u64) -> Self {
        for v in c.iter_mut() {
            *v %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        PolyFp { c, p }
    }

    pub fn zero(p: u64) -> Self {
        PolyFp { c: vec![], p }
    }

    pub fn one(p: u64) -> Self {
        PolyFp::new(vec![1], p)
    }

    pub fn x(p: u64) -> Self {
        PolyFp::new(vec![0, 1], p)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lc(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0;
        for &c in self.c.iter().rev() {
            acc = addmod(mulmod(acc, x, self.p), c, self.p);
        }
        acc
    }

    pub fn add(&self, o: &PolyFp) -> PolyFp {
        let n = self.c.len().max(o.c.len());
        let v = (0..n)
            .map(|i| addmod(*self.c.get(i).unwrap_or(&0), *o.c.get(i).unwrap_or(&0), self.p))
            .collect();
        PolyFp::new(v, self.p)
    }

    pub fn sub(&self, o: &PolyFp) -> PolyFp {
        let n = self.c.len().max(o.c.len());
        let v = (0..n)
            .map(|i| submod(*self.c.get(i).unwrap_or(&0), *o.c.get(i).unwrap_or(&0), self.p))
            .collect();
        PolyFp::new(v, self.p)
    }

    pub fn mul(&self, o: &PolyFp) -> PolyFp {
        if self.is_zero() || o.is_zero() {
            return PolyFp::zero(self.p);
        }
        let mut v = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                v[i + j] = addmod(v[i + j], mulmod(a, b, self.p), self.p);
            }
        }
        PolyFp::new(v, self.p)
    }

    pub fn derivative(&self) -> PolyFp {
        let v = self.c.iter().enumerate().skip(1).map(|(i, &c)| mulmod(c, i as u64 % self.p, self.p)).collect();
        PolyFp::new(v, self.p)
    }

    pub fn div_rem(&self, d: &PolyFp) -> (PolyFp, PolyFp) {
        let p = self.p;
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.c.len() < d.c.len() {
            return (PolyFp::zero(p), self.clone());
        }
        let inv = invmod(d.lc(), p).expect("unit leading coefficient");
        let mut r = self.c.clone();
        let dd = d.degree();
        let mut q = vec![0u64; self.c.len() - dd];
        for i in (0..q.len()).rev() {
            let c = mulmod(r[i + dd], inv, p);
            q[i] = c;
            if c != 0 {
                for (j, &dc) in d.c.iter().enumerate() {
                    r[i + j] = submod(r[i + j], mulmod(c, dc, p), p);
                }
            }
        }
        r.truncate(dd);
        (PolyFp::new(q, p), PolyFp::new(r, p))
    }

    pub fn rem(&self, d: &PolyFp) -> PolyFp {
        self.div_rem(d).1
    }

    pub fn monic(&self) -> PolyFp {
        if self.is_zero() {
            return self.clone();
        }
        let inv = invmod(self.lc(), self.p).expect("unit");
        PolyFp::new(self.c.iter().map(|&c| mulmod(c, inv, self.p)).collect(), self.p)
    }

    pub fn gcd(&self, o: &PolyFp) -> PolyFp {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// self^e mod m.
    pub fn powmod(&self, mut e: u128, m: &PolyFp) -> PolyFp {
        let mut base = self.rem(m);
        let mut acc = PolyFp::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// Ben-Or irreducibility test for a polynomial of degree >= 1.
    pub fn is_irreducible(&self) -> bool {
        let n = self.degree();
        if self.is_zero() || n == 0 {
            return false;
        }
        let f = self.monic();
        let x = PolyFp::x(self.p);
        let mut xp = x.clone();
        for _ in 1..=n / 2 {
            xp = xp.powmod(self.p as u128, &f);
            let g = f.gcd(&xp.sub(&x));
            if g.degree() > 0 {
                return false;
            }
        }
        true
    }

    /// Roots in F_p by exhaustive evaluation (intended for small p).
    pub fn roots_brute(&self) -> Vec<u64> {
        (0..self.p).filter(|&a| self.eval(a) == 0).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tonelli_agrees_with_squaring() {
        let p = 1_000_003;
        for a in 1..200u64 {
            if let Some(r) = sqrt_mod(a, p) {
                assert_eq!(mulmod(r, r, p), a);
            } else {
                assert!(!is_qr(a, p));
            }
        }
    }

    #[test]
    fn ben_or_on_small_cases() {
        assert!(PolyFp::new(vec![1, 1, 1], 2).is_irreducible());
        assert!(!PolyFp::new(vec![1, 0, 1], 2).is_irreducible());
        assert!(PolyFp::new(vec![2, 0, 1], 5).is_irreducible());
    }

    #[test]
    fn primes() {
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
        assert_eq!(next_prime(7), 11);
    }
}
