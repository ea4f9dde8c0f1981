//! Ritty presentations, the swappable-type taxonomy, Chebyshev polynomials, and the two
//! translation-relation families.
//!
//! A center `m` of `f` is a point where `g(x) = (f(x+m) - f(m)) / lc(f)` is exactly a ritty
//! polynomial; `L(z) = lc*z + f(m)` and `M(y) = y - m` then satisfy `L ∘ g ∘ M = f`.

use num::integer::gcd;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::crit::critical_values;
use crate::algebra::field::{FieldElem, Rational};
use crate::algebra::linalg::{rank, Matrix};
use crate::algebra::poly::{LinearMap, Poly};
use crate::algebra::roots::roots_in_field;
use crate::decomp::is_indecomposable;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RittyError {
    #[error("input is decomposable")]
    Decomposable,
    #[error("degree must be at least 2")]
    DegreeTooSmall,
    #[error("Chebyshev index must be positive")]
    ZeroIndex,
    #[error("presentation is not an S-form")]
    NotSForm,
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

/// Monic C_n with x^n + x^{-n} = C_n(x + 1/x).
pub fn chebyshev(n: usize) -> Result<Poly, RittyError> {
    if n == 0 {
        return Err(RittyError::ZeroIndex);
    }
    let x = Poly::x();
    let mut prev = Poly::constant(FieldElem::from_int(2));
    let mut cur = x.clone();
    for _ in 1..n {
        let next = &(&x * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum RittyVariant {
    /// x^p (p = 2 is the quadratic case).
    Monomial { p: usize },
    /// lambda * C_p; `lambda` present only when it lies in K, `lambda_sq` always.
    ChebyshevLike { p: usize, lambda: Option<FieldElem>, lambda_sq: FieldElem },
    /// x^k * u(x^l)^n.
    SForm { k: usize, l: usize, n: usize, u: Poly },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RittyForm {
    pub variant: RittyVariant,
    /// `(L, M)` with `L ∘ ritty ∘ M = f`, when they lie in K.
    pub witnesses: Option<(LinearMap, LinearMap)>,
    /// Irreducible quadratic over K defining the witness field when witnesses leave K.
    pub witness_field: Option<Poly>,
}

impl RittyForm {
    /// The ritty polynomial itself.
    pub fn ritty(&self) -> Poly {
        match &self.variant {
            RittyVariant::Monomial { p } => Poly::power_of_x(*p),
            RittyVariant::ChebyshevLike { p, lambda, .. } => {
                let c = chebyshev(*p).expect("p >= 1");
                match lambda {
                    Some(l) => crate::algebra::poly::rescale(l, &c).expect("nonzero"),
                    None => c,
                }
            }
            RittyVariant::SForm { k, l, n, u } => s_form(*k, *l, *n, u),
        }
    }

    /// Exact replay of `L ∘ ritty ∘ M = f`.
    pub fn verify(&self, f: &Poly) -> bool {
        match &self.witnesses {
            Some((l, m)) => &l.compose_left(&m.compose_right(&self.ritty())) == f,
            None => self.witness_field.is_some(),
        }
    }
}

/// x^k * u(x^l)^n
pub fn s_form(k: usize, l: usize, n: usize, u: &Poly) -> Poly {
    &Poly::power_of_x(k) * &u.inflate(l).pow(n)
}

/// Center killing the x^{N-1} coefficient: -f_{N-1} / (N f_N).
pub fn balancing_center(f: &Poly) -> FieldElem {
    let n = f.degree();
    -(&f.coeff(n - 1) / &(&f.lc() * &FieldElem::from_int(n as i64)))
}

/// (f(x+m) - f(m)) / lc(f)
pub fn centered_at(f: &Poly, m: &FieldElem) -> Poly {
    let s = f.shift(m);
    (&s - &Poly::constant(s.coeff(0))).scale(&f.lc().inv().expect("nonzero"))
}

fn center_witnesses(f: &Poly, m: &FieldElem) -> (LinearMap, LinearMap) {
    let l = LinearMap::new(f.lc(), f.eval(m)).expect("nonzero lc");
    let mm = LinearMap::translation(-m);
    (l, mm)
}

/// f is linearly related to x^N; returns the center.
pub fn monomial_center(f: &Poly) -> Option<FieldElem> {
    let n = f.degree();
    if n < 2 {
        return None;
    }
    let m = balancing_center(f);
    (centered_at(f, &m) == Poly::power_of_x(n)).then_some(m)
}

/// lambda^2 such that the balanced centering of f equals lambda * C_p, for odd prime p.
pub fn chebyshev_scale_sq(f: &Poly) -> Option<(FieldElem, FieldElem)> {
    let p = f.degree();
    if p < 3 || p % 2 == 0 {
        return None;
    }
    let m = balancing_center(f);
    let g = centered_at(f, &m);
    if g.coeff(p - 2).is_zero() {
        return None;
    }
    let pe = FieldElem::from_int(p as i64);
    let nu = -(&g.coeff(p - 2) / &pe); // nu = 1 / lambda^2
    let c = chebyshev(p).expect("p >= 1");
    let mut pw = FieldElem::one();
    for j in 0..=p / 2 {
        let idx = p - 2 * j;
        if g.coeff(idx) != &c.coeff(idx) * &pw {
            return None;
        }
        if idx >= 1 && g.coeff(idx - 1) != FieldElem::zero() {
            return None;
        }
        pw *= &nu;
    }
    Some((m, nu.inv().expect("nonzero")))
}

fn is_odd_prime(p: usize) -> bool {
    p >= 3 && (2..p).take_while(|q| q * q <= p).all(|q| p % q != 0)
}

/// TypeC presentation of a polynomial of odd prime degree.
pub fn chebyshev_form(f: &Poly, d: i64) -> Option<RittyForm> {
    let p = f.degree();
    if !is_odd_prime(p) {
        return None;
    }
    let (m, lsq) = chebyshev_scale_sq(f)?;
    let lambda = lsq.clone().in_field(d).sqrt().map(|l| l.in_field(d));
    match lambda {
        Some(lam) => {
            // f(x) = lc * lam^{-p} C_p(lam (x - m)) + f(m), and lam * C_p = lam^{-p} C_p(lam x)
            let lw = LinearMap::new(f.lc(), f.eval(&m)).expect("nonzero");
            let mw = LinearMap::translation(-&m);
            Some(RittyForm {
                variant: RittyVariant::ChebyshevLike { p, lambda: Some(lam), lambda_sq: lsq },
                witnesses: Some((lw, mw)),
                witness_field: None,
            })
        }
        None => Some(RittyForm {
            variant: RittyVariant::ChebyshevLike { p, lambda: None, lambda_sq: lsq.clone() },
            witnesses: None,
            witness_field: Some(Poly::from_coeffs(vec![-&lsq, FieldElem::zero(), FieldElem::one()])),
        }),
    }
}

/// Maximal (k, l, n, u) when `g` (monic, g(0) = 0) is of the shape x^k u(x^l)^n.
pub fn sform_shape(g: &Poly) -> Option<(usize, usize, usize, Poly)> {
    if g.is_constant() || !g.coeff(0).is_zero() || !g.is_monic() {
        return None;
    }
    let k = g.valuation();
    let v = Poly::from_coeffs(g.coeffs()[k..].to_vec());
    if v.is_constant() {
        return None;
    }
    let l = v.support().into_iter().fold(0usize, gcd);
    let w = Poly::from_coeffs(v.coeffs().iter().step_by(l).cloned().collect());
    let sq = w.squarefree_decomposition();
    let n = sq.iter().fold(0usize, |acc, (_, m)| gcd(acc, *m));
    let mut u = Poly::one();
    for (part, m) in &sq {
        u = &u * &part.pow(m / n);
    }
    if gcd(k, l) != 1 || gcd(k, n) != 1 || (l == 1 && n == 1) || u.is_constant() {
        return None;
    }
    debug_assert_eq!(&s_form(k, l, n, &u), g);
    Some((k, l, n, u))
}

/// S-form presentation of f at center m, if any.
pub fn sform_at(f: &Poly, m: &FieldElem) -> Option<RittyForm> {
    let g = centered_at(f, m);
    let (k, l, n, u) = sform_shape(&g)?;
    Some(RittyForm {
        variant: RittyVariant::SForm { k, l, n, u },
        witnesses: Some(center_witnesses(f, m)),
        witness_field: None,
    })
}

/// K-rational candidate centers: the balancing center and every K-point above a K-rational
/// critical value.
pub fn candidate_centers(f: &Poly, d: i64) -> Vec<FieldElem> {
    let mut out = vec![balancing_center(f).in_field(d)];
    for cf in critical_values(f, d) {
        if let Some(c) = &cf.value {
            let fiber = f - &Poly::constant(c.clone());
            for r in roots_in_field(&fiber, d) {
                if !out.contains(&r) {
                    out.push(r);
                }
            }
        }
    }
    out
}

/// All K-centers at which f has an S-form presentation.
pub fn sform_presentations(f: &Poly, d: i64) -> Vec<(FieldElem, RittyForm)> {
    let mut out = Vec::new();
    for m in candidate_centers(f, d) {
        if let Some(form) = sform_at(f, &m) {
            out.push((m, form));
        }
    }
    out
}

/// Whether some critical value outside K could carry an S-form center (necessary condition:
/// ramification above it at least (deg - 1) / 2).
pub fn has_unresolved_centers(f: &Poly, d: i64) -> bool {
    let deg = f.degree();
    critical_values(f, d)
        .iter()
        .any(|cf| cf.value.is_none() && 2 * cf.multiplicity + 1 >= deg)
}

/// All ritty forms linearly related to an indecomposable f, with K-rational witnesses where
/// possible.
pub fn ritty_presentations(f: &Poly, d: i64) -> Result<Vec<RittyForm>, RittyError> {
    if f.degree() < 2 {
        return Err(RittyError::DegreeTooSmall);
    }
    if !is_indecomposable(f) {
        return Err(RittyError::Decomposable);
    }
    let mut out = Vec::new();
    if let Some(m) = monomial_center(f) {
        out.push(RittyForm {
            variant: RittyVariant::Monomial { p: f.degree() },
            witnesses: Some(center_witnesses(f, &m)),
            witness_field: None,
        });
    }
    if let Some(c) = chebyshev_form(f, d) {
        out.push(c);
    }
    out.extend(sform_presentations(f, d).into_iter().map(|(_, r)| r));
    Ok(out)
}

/// (in-degree, out-degree) of an S-form.
pub fn in_out_degree(form: &RittyForm) -> Result<(usize, usize), RittyError> {
    match &form.variant {
        RittyVariant::SForm { l, n, .. } => Ok((*l, *n)),
        _ => Err(RittyError::NotSForm),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    Unswappable,
    Monomial,
    TypeC,
    TypeJ,
    TypeCoJ,
    TypeB,
}

#[derive(Clone, Debug, Serialize)]
pub struct SwapClass {
    pub verdict: Verdict,
    pub evidence: Vec<RittyForm>,
    /// Human-readable reasons, in the order they were established.
    pub trace: Vec<String>,
    /// Set when the verdict rests on K-rational centers only and an irrational center is not
    /// excluded by ramification counting.
    pub unresolved_witness: bool,
}

/// Number of distinct K-centers with an S-form presentation.
fn jani_count(f: &Poly, d: i64) -> usize {
    sform_presentations(f, d).len()
}

/// Taxonomy verdict for an indecomposable polynomial.
pub fn classify(f: &Poly, d: i64) -> Result<SwapClass, RittyError> {
    if f.degree() < 2 {
        return Err(RittyError::DegreeTooSmall);
    }
    if !is_indecomposable(f) {
        return Err(RittyError::Decomposable);
    }
    let mut trace = Vec::new();
    if let Some(m) = monomial_center(f) {
        trace.push(format!("balanced centering at {m} is x^{}", f.degree()));
        let form = RittyForm {
            variant: RittyVariant::Monomial { p: f.degree() },
            witnesses: Some(center_witnesses(f, &m)),
            witness_field: None,
        };
        return Ok(SwapClass { verdict: Verdict::Monomial, evidence: vec![form], trace, unresolved_witness: false });
    }
    if let Some(c) = chebyshev_form(f, d) {
        trace.push("balanced centering is a rescaled Chebyshev polynomial".into());
        let unresolved = c.witnesses.is_none();
        return Ok(SwapClass { verdict: Verdict::TypeC, evidence: vec![c], trace, unresolved_witness: unresolved });
    }
    let pres = sform_presentations(f, d);
    let unresolved = has_unresolved_centers(f, d);
    if pres.is_empty() {
        trace.push("no K-rational center yields an S-form".into());
        return Ok(SwapClass { verdict: Verdict::Unswappable, evidence: vec![], trace, unresolved_witness: unresolved });
    }
    let evidence: Vec<RittyForm> = pres.iter().map(|(_, r)| r.clone()).collect();
    if pres.len() >= 2 {
        let centers: Vec<String> = pres.iter().map(|(m, _)| m.to_string()).collect();
        trace.push(format!("S-form presentations at centers {}", centers.join(", ")));
        return Ok(SwapClass { verdict: Verdict::TypeJ, evidence, trace, unresolved_witness: false });
    }
    let (_, form) = &pres[0];
    if let RittyVariant::SForm { k, l, n, u } = &form.variant {
        let total = l * n;
        for l2 in (1..=total).filter(|l2| total % l2 == 0) {
            let n2 = total / l2;
            if (l2, n2) == (*l, *n) {
                continue;
            }
            let s2 = s_form(*k, l2, n2, u);
            if !is_indecomposable(&s2) {
                continue;
            }
            if jani_count(&s2, d) >= 2 {
                trace.push(format!("monomial swaps reach x^{k}*u(x^{l2})^{n2}, which is type J"));
                return Ok(SwapClass { verdict: Verdict::TypeCoJ, evidence, trace, unresolved_witness: unresolved });
            }
        }
        trace.push(format!("unique center; no in/out-degree redistribution of {total} is type J"));
    }
    Ok(SwapClass { verdict: Verdict::TypeB, evidence, trace, unresolved_witness: unresolved })
}

/// Certified solution of one translation-relation family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TranslationSolution {
    pub u: Poly,
    pub b: FieldElem,
    pub u2: Poly,
    /// Rank of the (s+1)-square operator matrix.
    pub rank: usize,
}

fn fe(n: i64) -> FieldElem {
    FieldElem::from_int(n)
}

/// Operator matrix of (2s^2+2s) Y + (3 - 4z) Y' + 2(z - z^2) Y'' on polynomials of degree <= s.
pub fn type_w_matrix(s: usize) -> Matrix {
    let si = s as i64;
    let mut m = vec![vec![FieldElem::zero(); s + 1]; s + 1];
    for j in 0..=s {
        let ji = j as i64;
        m[j][j] = fe(2 * si * si + 2 * si - 2 * ji * ji - 2 * ji);
        if j < s {
            m[j][j + 1] = fe((ji + 1) * (2 * ji + 3));
        }
    }
    m
}

/// Operator matrix of u(z) + 2z u'(z) - (2s+1)(-1)^s u(2 - z) on polynomials of degree <= s.
pub fn type_c_hat_matrix(s: usize) -> Matrix {
    let sign = if s % 2 == 0 { 1 } else { -1 };
    let c = fe(sign * (2 * s as i64 + 1));
    let two_minus_z = Poly::from_ints(&[2, -1]);
    let mut m = vec![vec![FieldElem::zero(); s + 1]; s + 1];
    for i in 0..=s {
        let col = &Poly::monomial(fe(1 + 2 * i as i64), i) - &two_minus_z.pow(i).scale(&c);
        for (j, row) in m.iter_mut().enumerate() {
            row[i] = col.coeff(j);
        }
    }
    m
}

/// Monic kernel vector of an upper-triangular operator whose only zero diagonal entry is last.
fn back_substitute(m: &Matrix) -> Result<Poly, RittyError> {
    let s = m.len() - 1;
    let mut u = vec![FieldElem::zero(); s + 1];
    u[s] = FieldElem::one();
    for j in (0..s).rev() {
        let mut acc = FieldElem::zero();
        for (i, ui) in u.iter().enumerate().skip(j + 1) {
            acc += &(&m[j][i] * ui);
        }
        let piv = m[j][j].inv().ok_or_else(|| RittyError::Internal(format!("zero pivot at {j}")))?;
        u[j] = -(&acc * &piv);
    }
    Ok(Poly::from_coeffs(u))
}

/// The unique monic degree-s u with (+B) ∘ (x u(x)^2) ∘ (+1) = x u2(x)^2.
pub fn type_w_polynomial(s: usize) -> Result<TranslationSolution, RittyError> {
    if s == 0 {
        return Err(RittyError::ZeroIndex);
    }
    let m = type_w_matrix(s);
    let u = back_substitute(&m)?;
    let one = FieldElem::one();
    let shifted = u.shift(&one);
    let xp1 = Poly::from_ints(&[1, 1]);
    let u2 = (&shifted + &(&xp1 * &shifted.derivative()).scale(&fe(2)))
        .scale(&fe(2 * s as i64 + 1).inv().expect("nonzero"));
    let u1 = u.eval(&one);
    let b = -(&u1 * &u1);
    let lhs = &(&xp1 * &shifted.pow(2)) + &Poly::constant(b.clone());
    let rhs = &Poly::x() * &u2.pow(2);
    if lhs != rhs {
        return Err(RittyError::Internal("type W identity".into()));
    }
    Ok(TranslationSolution { u, b, u2, rank: rank(&m) })
}

/// The unique monic degree-s u with (+B) ∘ (x u(x)^2) ∘ (+1) = x u2(x^2).
pub fn type_c_hat_polynomial(s: usize) -> Result<TranslationSolution, RittyError> {
    if s == 0 {
        return Err(RittyError::ZeroIndex);
    }
    let m = type_c_hat_matrix(s);
    let u = back_substitute(&m)?;
    let one = FieldElem::one();
    let u1 = u.eval(&one);
    let b = -(&u1 * &u1);
    let xp1 = Poly::from_ints(&[1, 1]);
    let lhs = &(&xp1 * &u.shift(&one).pow(2)) + &Poly::constant(b.clone());
    let c = lhs.coeffs();
    if c.iter().step_by(2).any(|v| !v.is_zero()) {
        return Err(RittyError::Internal("type C-hat identity: even part".into()));
    }
    let u2 = Poly::from_coeffs(c.iter().skip(1).step_by(2).cloned().collect());
    if &Poly::x() * &u2.inflate(2) != lhs {
        return Err(RittyError::Internal("type C-hat identity".into()));
    }
    Ok(TranslationSolution { u, b, u2, rank: rank(&m) })
}

/// U(y) = 4^s u2(y/4), which satisfies x U(x^2) = C_{2s+1}.
pub fn chebyshev_from_c_hat(sol: &TranslationSolution) -> Poly {
    let s = sol.u2.degree();
    let quarter = FieldElem::from_rational(Rational::new(1.into(), 4.into()));
    sol.u2.compose(&Poly::monomial(quarter, 1)).scale(&fe(4).pow(s as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::FieldConfig;

    fn p(s: &str) -> Poly {
        Poly::parse(s, &FieldConfig::rational()).unwrap()
    }

    #[test]
    fn chebyshev_small() {
        assert_eq!(chebyshev(2).unwrap(), p("x^2-2"));
        assert_eq!(chebyshev(3).unwrap(), p("x^3-3*x"));
        assert_eq!(chebyshev(6).unwrap(), p("x^6-6*x^4+9*x^2-2"));
        assert!(chebyshev(0).is_err());
    }

    #[test]
    fn worked_verdicts() {
        let v = |s: &str| classify(&p(s), 1).unwrap().verdict;
        assert_eq!(v("x^5"), Verdict::Monomial);
        assert_eq!(v("x^3-3*x"), Verdict::TypeC);
        assert_eq!(v("x^2*(x-1)^3"), Verdict::TypeJ);
        assert_eq!(v("x^2*(x^3-1)"), Verdict::TypeCoJ);
        assert_eq!(v("x*(x^2+2)^2"), Verdict::TypeB);
        assert_eq!(v("x^4+x^2+x"), Verdict::Unswappable);
        assert_eq!(v("x^2+5*x"), Verdict::Monomial);
    }

    #[test]
    fn irrational_chebyshev_witness() {
        let c = classify(&p("x^3+x"), 1).unwrap();
        assert_eq!(c.verdict, Verdict::TypeC);
        assert_eq!(c.evidence[0].witness_field, Some(p("x^2+3")));
    }

    #[test]
    fn presentations_and_degrees() {
        let f = p("x*(1+x^3)^2");
        let pres = ritty_presentations(&f, 1).unwrap();
        assert_eq!(pres.len(), 1);
        assert_eq!(
            pres[0].variant,
            RittyVariant::SForm { k: 1, l: 3, n: 2, u: p("x+1") }
        );
        assert!(pres[0].verify(&f));
        let j = ritty_presentations(&p("x^2*(x-1)^3"), 1).unwrap();
        assert_eq!(j.len(), 2);
        assert!(j.iter().all(|r| r.verify(&p("x^2*(x-1)^3"))));
        let b = ritty_presentations(&p("x*(x^2+2)^2"), 1).unwrap();
        assert_eq!(in_out_degree(&b[0]).unwrap(), (2, 2));
        let q = ritty_presentations(&p("x^2*(x^3+1)^5"), 1).unwrap();
        assert_eq!(in_out_degree(&q[0]).unwrap(), (3, 5));
        assert!(ritty_presentations(&p("x^4"), 1).is_err());
    }

    #[test]
    fn translation_families_small() {
        let w = type_w_polynomial(1).unwrap();
        assert_eq!(w.u, p("x - 3/4"));
        assert_eq!(w.b, FieldElem::frac(-1, 16));
        assert_eq!(w.u2, p("x + 3/4"));
        assert_eq!(w.rank, 1);
        let c = type_c_hat_polynomial(1).unwrap();
        assert_eq!(c.u, p("x - 3/2"));
        assert_eq!(c.b, FieldElem::frac(-1, 4));
        assert_eq!(c.u2, p("x - 3/4"));
        assert_eq!(chebyshev_from_c_hat(&c), p("x - 3"));
    }
}
