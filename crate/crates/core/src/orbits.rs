//! Orbits of coordinatewise maps, Zariski-density tests by monomial evaluation rank, and the
//! construction of points with dense orbit.

use num::{Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::field::{FieldConfig, FieldElem, Rational};
use crate::algebra::linalg::{nullspace, nullspace_mod, rank, rank_mod, Matrix};
use crate::algebra::modp::{addmod, is_prime, mulmod, next_prime, reduce_rational, sqrt_mod};
use crate::algebra::poly::{LinearMap, Poly};
use crate::product_invariants::{classify_coordinate, linear_block_skeleton, LinearCoordinate};

/// Coefficient bit size above which exact orbits log a warning.
pub const EXACT_BIT_BUDGET: u64 = 1 << 14;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrbitError {
    #[error("map has {map} coordinates but the point has {point}")]
    DimensionMismatch { map: usize, point: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} divides a denominator of the map or of the start point")]
    DenominatorCollision(u64),
    #[error("d = {d} is not a square mod {p}")]
    NonResidue { d: i64, p: u64 },
    #[error("density test at degree {degree} needs {need} points, sample has {have}")]
    InsufficientPoints { degree: usize, need: usize, have: usize },
    #[error("independence hypothesis fails: {0}")]
    Independence(String),
    #[error("coordinate {0} is constant")]
    Constant(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "p")]
pub enum Mode {
    Exact,
    Modular(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum OrbitPoints {
    Exact(Vec<Vec<FieldElem>>),
    Modular(Vec<Vec<u64>>),
}

impl OrbitPoints {
    pub fn len(&self) -> usize {
        match self {
            OrbitPoints::Exact(v) => v.len(),
            OrbitPoints::Modular(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitSample {
    pub map: Vec<Poly>,
    pub start: Vec<FieldElem>,
    pub mode: Mode,
    pub points: OrbitPoints,
}

impl OrbitSample {
    pub fn dim(&self) -> usize {
        self.map.len()
    }

    /// Every `step`-th point starting at `offset`.
    pub fn subsample(&self, offset: usize, step: usize) -> OrbitSample {
        let pick = |len: usize| (offset..len).step_by(step.max(1));
        let points = match &self.points {
            OrbitPoints::Exact(v) => OrbitPoints::Exact(pick(v.len()).map(|i| v[i].clone()).collect()),
            OrbitPoints::Modular(v) => OrbitPoints::Modular(pick(v.len()).map(|i| v[i].clone()).collect()),
        };
        OrbitSample { points, ..self.clone() }
    }
}

/// Reduction K → F_p, with √d sent to the smaller square root of d mod p.
pub struct Reducer {
    p: u64,
    s: Option<u64>,
}

impl Reducer {
    pub fn new(p: u64, d: i64) -> Result<Self, OrbitError> {
        if !is_prime(p) {
            return Err(OrbitError::NotPrime(p));
        }
        let s = if d == 1 {
            None
        } else {
            let dm = d.rem_euclid(p as i64) as u64;
            Some(sqrt_mod(dm, p).ok_or(OrbitError::NonResidue { d, p })?)
        };
        Ok(Reducer { p, s })
    }

    pub fn reduce(&self, x: &FieldElem) -> Result<u64, OrbitError> {
        let a = reduce_rational(x.rational_part(), self.p).ok_or(OrbitError::DenominatorCollision(self.p))?;
        if x.sqrt_part().is_zero() {
            return Ok(a);
        }
        let b = reduce_rational(x.sqrt_part(), self.p).ok_or(OrbitError::DenominatorCollision(self.p))?;
        Ok(addmod(a, mulmod(b, self.s.unwrap_or(0), self.p), self.p))
    }

    pub fn reduce_poly(&self, f: &Poly) -> Result<Vec<u64>, OrbitError> {
        f.coeffs().iter().map(|c| self.reduce(c)).collect()
    }
}

fn horner_mod(c: &[u64], x: u64, p: u64) -> u64 {
    c.iter().rev().fold(0, |acc, &a| addmod(mulmod(acc, x, p), a, p))
}

/// N+1 points `a, Φ(a), ..., Φ^N(a)`.
pub fn orbit(phi: &[Poly], start: &[FieldElem], n: usize, mode: Mode) -> Result<OrbitSample, OrbitError> {
    if phi.len() != start.len() {
        return Err(OrbitError::DimensionMismatch { map: phi.len(), point: start.len() });
    }
    let d = phi.iter().map(|f| f.field_d()).chain(start.iter().map(|x| x.d())).find(|&d| d != 1).unwrap_or(1);
    let points = match mode {
        Mode::Exact => {
            let mut cur: Vec<FieldElem> = start.to_vec();
            let mut pts = vec![cur.clone()];
            let mut warned = false;
            for _ in 0..n {
                cur = phi.iter().zip(&cur).map(|(f, x)| f.eval(x)).collect();
                let bits: u64 = cur.iter().map(|x| x.numer_denom_bits()).max().unwrap_or(0);
                if bits > EXACT_BIT_BUDGET && !warned {
                    log::warn!("exact orbit coefficients reached {bits} bits; consider modular mode");
                    warned = true;
                }
                pts.push(cur.clone());
            }
            OrbitPoints::Exact(pts)
        }
        Mode::Modular(p) => {
            let red = Reducer::new(p, d)?;
            let maps: Vec<Vec<u64>> = phi.iter().map(|f| red.reduce_poly(f)).collect::<Result<_, _>>()?;
            let mut cur: Vec<u64> = start.iter().map(|x| red.reduce(x)).collect::<Result<_, _>>()?;
            let mut pts = vec![cur.clone()];
            for _ in 0..n {
                cur = maps.iter().zip(&cur).map(|(c, &x)| horner_mod(c, x, p)).collect();
                pts.push(cur.clone());
            }
            OrbitPoints::Modular(pts)
        }
    };
    Ok(OrbitSample { map: phi.to_vec(), start: start.to_vec(), mode, points })
}

/// Uniformly random prime in [2^29, 2^30).
pub fn random_prime_30(rng: &mut impl Rng) -> u64 {
    next_prime(rng.gen_range((1u64 << 29)..(1u64 << 30) - 64))
}

/// Exponent vectors of all monomials of total degree <= d in n variables, graded.
pub fn monomials(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out.sort_by_key(|m| (m.iter().sum::<usize>(), std::cmp::Reverse(m.clone())));
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum DensityVerdict {
    /// No hypersurface of degree <= d contains the sample.
    DenseUpTo { d: usize },
    /// A hypersurface of minimal degree through every sample point.
    ContainedIn {
        degree: usize,
        monomials: Vec<Vec<usize>>,
        /// Coefficients, as field elements (exact) or residues (modular).
        kernel: Vec<String>,
        equation: String,
        /// Exact kernels are certified; modular ones are probabilistic.
        certified: bool,
    },
}

fn monomial_name(m: &[usize]) -> String {
    let parts: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{e}", i + 1) })
        .collect();
    if parts.is_empty() { "1".into() } else { parts.join("*") }
}

fn equation_string(monos: &[Vec<usize>], coeffs: &[String]) -> String {
    let terms: Vec<String> = monos
        .iter()
        .zip(coeffs)
        .filter(|(_, c)| c.as_str() != "0")
        .map(|(m, c)| format!("({c})*{}", monomial_name(m)))
        .collect();
    format!("{} = 0", terms.join(" + "))
}

fn eval_monomial(m: &[usize], pt: &[FieldElem]) -> FieldElem {
    m.iter().zip(pt).fold(FieldElem::one(), |acc, (&e, x)| &acc * &x.pow(e as u64))
}

fn eval_monomial_mod(m: &[usize], pt: &[u64], p: u64) -> u64 {
    m.iter().zip(pt).fold(1, |acc, (&e, &x)| mulmod(acc, crate::algebra::modp::powmod(x, e as u64, p), p))
}

/// Rank test of the monomial-evaluation matrix; on failure, the kernel at the least degree.
pub fn density_test(sample: &OrbitSample, d: usize) -> Result<DensityVerdict, OrbitError> {
    let n = sample.dim();
    let need = binomial(n + d, d);
    if sample.points.len() < need {
        return Err(OrbitError::InsufficientPoints { degree: d, need, have: sample.points.len() });
    }
    for deg in 1..=d {
        let monos = monomials(n, deg);
        let cols = monos.len();
        let found: Option<(Vec<String>, bool)> = match &sample.points {
            OrbitPoints::Exact(pts) => {
                let m: Matrix = pts.iter().map(|pt| monos.iter().map(|mo| eval_monomial(mo, pt)).collect()).collect();
                if rank(&m) == cols {
                    None
                } else {
                    let v = nullspace(&m, cols).into_iter().next().expect("rank deficient");
                    let ok = pts.iter().all(|pt| {
                        monos.iter().zip(&v).fold(FieldElem::zero(), |acc, (mo, c)| &acc + &(c * &eval_monomial(mo, pt))).is_zero()
                    });
                    Some((v.iter().map(|c| c.to_string()).collect(), ok))
                }
            }
            OrbitPoints::Modular(pts) => {
                let Mode::Modular(p) = sample.mode else { unreachable!("modular points") };
                let m: Vec<Vec<u64>> =
                    pts.iter().map(|pt| monos.iter().map(|mo| eval_monomial_mod(mo, pt, p)).collect()).collect();
                if rank_mod(&m, p) == cols {
                    None
                } else {
                    let v = nullspace_mod(&m, cols, p).into_iter().next().expect("rank deficient");
                    Some((v.iter().map(|c| c.to_string()).collect(), false))
                }
            }
        };
        if let Some((kernel, certified)) = found {
            let equation = equation_string(&monos, &kernel);
            return Ok(DensityVerdict::ContainedIn { degree: deg, monomials: monos, kernel, equation, certified });
        }
    }
    Ok(DensityVerdict::DenseUpTo { d })
}

/// A start point with its construction record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensePoint {
    pub point: Vec<FieldElem>,
    pub fresh_primes: Vec<u64>,
    pub audit: Vec<String>,
}

/// Real upper bound R with |f(x)| > |x| whenever |x| > R, R >= 1.
fn escape_radius(f: &Poly) -> Rational {
    let n = f.degree();
    let lc = f.lc().abs_upper_bound();
    let lower: Rational = (0..n).map(|i| f.coeff(i).abs_upper_bound()).sum();
    let lc_abs = if f.lc().is_rational() { f.lc().rational_part().abs() } else { lc };
    let r = (Rational::from_integer(1.into()) + lower) / lc_abs;
    r.max(Rational::from_integer(1.into()))
}

/// Point with Zariski-dense orbit: escaping integer for the first nonlinear coordinate and
/// reciprocals of fresh primes for the others.
pub fn construct_dense_point(fs: &[Poly], cfg: &FieldConfig) -> Result<DensePoint, OrbitError> {
    if let Some(i) = fs.iter().position(|f| f.is_constant()) {
        return Err(OrbitError::Constant(i + 1));
    }
    let mut audit = Vec::new();
    let linear: Vec<usize> = (0..fs.len()).filter(|&i| fs[i].degree() == 1).collect();
    let mut point: Vec<FieldElem> = vec![FieldElem::zero(); fs.len()];
    if !linear.is_empty() {
        let maps: Vec<LinearMap> = linear.iter().map(|&i| LinearMap::from_poly(&fs[i]).expect("linear")).collect();
        let skel = linear_block_skeleton(&maps).map_err(|e| OrbitError::Independence(e.to_string()))?;
        if !skel.characters.is_empty() {
            return Err(OrbitError::Independence(format!("scalings satisfy {}", skel.characters[0].equation)));
        }
        if !skel.fixed.is_empty() {
            return Err(OrbitError::Independence("an identity coordinate has no dense orbit".into()));
        }
        if !skel.translation_differences.is_empty() {
            return Err(OrbitError::Independence("two translations leave their difference invariant".into()));
        }
        for (slot, &i) in linear.iter().enumerate() {
            point[i] = match &skel.coordinates[slot] {
                LinearCoordinate::Scaling { center, .. } => center + &FieldElem::one(),
                _ => FieldElem::zero(),
            };
            audit.push(format!("x{}: linear, start {} off the fixed point", i + 1, point[i]));
        }
    }
    // primes to avoid: coefficient numerators and denominators, and degrees
    let mut bad: Vec<u64> = Vec::new();
    for f in fs {
        bad.push(f.degree() as u64);
        for c in f.coeffs() {
            for q in [c.rational_part(), c.sqrt_part()] {
                for part in [q.numer().abs(), q.denom().clone()] {
                    if let Some(v) = part.to_u64() {
                        bad.push(v);
                    }
                }
            }
        }
    }
    let mut fresh: Vec<u64> = Vec::new();
    let mut floor = 3u64;
    let mut first = true;
    for i in (0..fs.len()).filter(|&i| fs[i].degree() >= 2) {
        let class = classify_coordinate(&fs[i], cfg);
        if first {
            let r = escape_radius(&fs[i]);
            let a = r.floor().to_integer() + num::BigInt::from(2);
            point[i] = FieldElem::from_bigint(a.clone());
            floor = floor.max(a.to_u64().unwrap_or(u64::MAX / 2));
            audit.push(format!(
                "x{}: {:?}, start {} beyond escape radius {} so the orbit is not preperiodic",
                i + 1,
                class.verdict,
                point[i],
                r
            ));
            first = false;
            continue;
        }
        let mut q = next_prime(floor + 1);
        while bad.iter().any(|&b| b != 0 && b % q == 0) {
            q = next_prime(q + 1);
        }
        fresh.push(q);
        floor = q;
        point[i] = FieldElem::from_rational(Rational::new(1.into(), q.into()));
        audit.push(format!("x{}: {:?}, start 1/{q}, fresh prime {q} is not invertible in the coefficient ring", i + 1, class.verdict));
    }
    Ok(DensePoint { point, fresh_primes: fresh, audit })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldConfig {
        FieldConfig::rational()
    }
    fn p(s: &str) -> Poly {
        Poly::parse(s, &q()).unwrap()
    }
    fn fe(n: i64) -> FieldElem {
        FieldElem::from_int(n)
    }

    #[test]
    fn orbits_iterate() {
        let o = orbit(&[p("x^2+1")], &[fe(0)], 4, Mode::Exact).unwrap();
        let OrbitPoints::Exact(pts) = &o.points else { panic!() };
        let xs: Vec<String> = pts.iter().map(|v| v[0].to_string()).collect();
        assert_eq!(xs, ["0", "1", "2", "5", "26"]);
        let o = orbit(&[p("2*x"), p("3*x")], &[fe(1), fe(1)], 3, Mode::Modular(101)).unwrap();
        assert_eq!(o.points, OrbitPoints::Modular(vec![vec![1, 1], vec![2, 3], vec![4, 9], vec![8, 27]]));
        assert!(matches!(orbit(&[p("x/101")], &[fe(1)], 1, Mode::Modular(101)), Err(OrbitError::DenominatorCollision(101))));
    }

    #[test]
    fn density() {
        let o = orbit(&[p("2*x"), p("3*x")], &[fe(1), fe(1)], 9, Mode::Exact).unwrap();
        assert_eq!(density_test(&o, 2).unwrap(), DensityVerdict::DenseUpTo { d: 2 });
        let o = orbit(&[p("2*x"), p("4*x")], &[fe(1), fe(1)], 9, Mode::Exact).unwrap();
        match density_test(&o, 2).unwrap() {
            DensityVerdict::ContainedIn { degree, certified, .. } => assert_eq!((degree, certified), (2, true)),
            v => panic!("{v:?}"),
        }
        let o = orbit(&[p("x^2")], &[fe(1)], 3, Mode::Exact).unwrap();
        assert!(matches!(density_test(&o, 1).unwrap(), DensityVerdict::ContainedIn { degree: 1, .. }));
    }

    #[test]
    fn dense_points() {
        let dp = construct_dense_point(&[p("x^2"), p("x^2-1")], &q()).unwrap();
        assert_eq!(dp.point[0], fe(3));
        assert_eq!(dp.fresh_primes, vec![5]);
        assert_eq!(construct_dense_point(&[p("x^2")], &q()).unwrap().point, vec![fe(3)]);
        assert!(matches!(construct_dense_point(&[p("2*x"), p("4*x")], &q()), Err(OrbitError::Independence(_))));
    }
}
