//! Skew-twists of decompositions, correspondences `(h, π, ρ)` between `f` and `g`, and the
//! certificate-driven search for skew-invariant plane curves.
//!
//! A correspondence satisfies `f ∘ π = π^σ ∘ h` and `g ∘ ρ = ρ^σ ∘ h`; its image
//! `{(π(c), ρ(c))}` is then invariant under `(x, y) ↦ (f(x), g(y))` twisted by σ.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::field::{nth_roots_in_field, FieldConfig, FieldElem, Sigma};
use crate::algebra::linalg::{nullspace, rref, Matrix};
use crate::algebra::poly::{LinearMap, Poly};
use crate::algebra::roots::{rational_roots, roots_in_field};
use crate::decomp::{enumerate_d_f, normalize, right_component, Decomposition};
use crate::ritty::{candidate_centers, chebyshev, monomial_center};
use crate::swaps::{chebyshev_relation, try_ritt_swap, SwapResult};
use crate::words::{Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SkewError {
    #[error("{which} = {poly} is linearly related to {evidence}; such inputs are not trivial")]
    NotTrivial { which: &'static str, poly: String, evidence: String },
    #[error("degree {0} is below 2")]
    DegreeTooSmall(usize),
    #[error("letter {0} is not a B_k letter")]
    BadLetter(String),
    #[error("word has rank {word} but the decomposition has length {dec}")]
    RankMismatch { word: usize, dec: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Correspondence {
    pub f: Poly,
    pub g: Poly,
    pub h: Poly,
    pub pi: Poly,
    pub rho: Poly,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub implicit: Option<String>,
    #[serde(skip)]
    pub field: FieldConfig,
}

impl Correspondence {
    pub fn new(f: Poly, g: Poly, h: Poly, pi: Poly, rho: Poly, field: FieldConfig) -> Self {
        Correspondence { f, g, h, pi, rho, implicit: None, field }
    }

    /// The diagonal correspondence of `f` with itself.
    pub fn diagonal(f: &Poly, field: FieldConfig) -> Self {
        Correspondence::new(f.clone(), f.clone(), f.clone(), Poly::x(), Poly::x(), field)
    }

    pub fn with_implicit(mut self) -> Self {
        self.implicit = implicitize(&self.pi, &self.rho).map(|c| c.to_string());
        self
    }

    /// Bidegree `(deg π, deg ρ)` of the parametrization.
    pub fn bidegree(&self) -> (usize, usize) {
        (self.pi.degree(), self.rho.degree())
    }
}

/// Exact check of both commuting squares.
pub fn verify_correspondence(c: &Correspondence) -> bool {
    let cfg = &c.field;
    if c.h.degree() < 1 || (c.pi.is_constant() && c.rho.is_constant()) {
        return false;
    }
    c.f.compose(&c.pi) == c.pi.sigma(cfg).compose(&c.h) && c.g.compose(&c.rho) == c.rho.sigma(cfg).compose(&c.h)
}

/// `(f_1^σ, f_k, ..., f_2)`, normalized.
pub fn apply_phi(d: &Decomposition, cfg: &FieldConfig) -> Decomposition {
    let fs = d.factors();
    let k = fs.len();
    let mut out = vec![fs[k - 1].sigma(cfg)];
    out.extend_from_slice(&fs[..k - 1]);
    normalize(&out).expect("degrees preserved")
}

/// `(f_{k-1}, ..., f_1, f_k^{σ^{-1}})`, normalized.
pub fn apply_beta(d: &Decomposition, cfg: &FieldConfig) -> Decomposition {
    let fs = d.factors();
    let mut out = fs[1..].to_vec();
    out.push(fs[0].sigma_inv(cfg));
    normalize(&out).expect("degrees preserved")
}

/// All `L` with `b ∘ L = target` (equal degrees).
fn solve_inner_linear(b: &Poly, target: &Poly, d: i64) -> Vec<LinearMap> {
    let m = b.degree();
    if m == 0 || target.degree() != m {
        return vec![];
    }
    if m == 1 {
        let bl = LinearMap::from_poly(b).expect("degree 1");
        return LinearMap::from_poly(&bl.inverse().compose_left(target)).into_iter().collect();
    }
    let ratio = (&target.lc() / &b.lc()).in_field(d);
    let mut out = Vec::new();
    for a in nth_roots_in_field(&ratio, m as u32) {
        let am1 = a.pow(m as u64 - 1);
        let num = &target.coeff(m - 1) - &(&b.coeff(m - 1) * &am1);
        let den = &(&b.lc() * &FieldElem::from_int(m as i64)) * &am1;
        let Some(shift) = den.inv().map(|i| &num * &i) else { continue };
        if let Some(l) = LinearMap::new(a, shift) {
            if l.compose_right(b) == *target {
                out.push(l);
            }
        }
    }
    out
}

/// All `r` with `b ∘ r = big`.
pub fn left_divide(big: &Poly, b: &Poly, d: i64) -> Vec<Poly> {
    let (n, m) = (big.degree(), b.degree());
    if m == 0 || n % m != 0 {
        return vec![];
    }
    let e = n / m;
    if m == 1 {
        let bl = LinearMap::from_poly(b).expect("degree 1");
        return vec![bl.inverse().compose_left(big)];
    }
    let (outer, inner) = if e == 1 {
        (big.clone(), Poly::x())
    } else {
        match right_component(big, e) {
            Some(pair) => pair,
            None => return vec![],
        }
    };
    solve_inner_linear(b, &outer, d).into_iter().map(|l| l.compose_left(&inner)).collect()
}

/// All nonzero `α` in K with `α^n = σ(α) c` (n >= 2).
pub fn skew_scalars(c: &FieldElem, n: usize, cfg: &FieldConfig) -> Vec<FieldElem> {
    let d = cfg.d();
    let c = c.clone().in_field(d);
    let mut cands: Vec<FieldElem> = Vec::new();
    match cfg.sigma() {
        Sigma::Identity => cands.extend(nth_roots_in_field(&c, n as u32 - 1)),
        Sigma::Conjugation => {
            // N(α)^{n-1} = N(c) and α^{n+1} = c N(α)
            let nc = FieldElem::from_rational(c.norm());
            let eq = &Poly::power_of_x(n - 1) - &Poly::constant(nc);
            for nu in rational_roots(&eq) {
                let cand = (&c * &FieldElem::from_rational(nu)).in_field(d);
                cands.extend(nth_roots_in_field(&cand, n as u32 + 1));
            }
        }
    }
    let mut out: Vec<FieldElem> = Vec::new();
    for a in cands {
        if !a.is_zero() && a.pow(n as u64) == &cfg.apply(&a) * &c && !out.contains(&a) {
            out.push(a);
        }
    }
    out
}

/// All `L` with `g ∘ L ∘ a = L^σ ∘ target`.
fn fit_outer_linear(g: &Poly, a: &Poly, target: &Poly, cfg: &FieldConfig) -> Vec<LinearMap> {
    let (n, e) = (g.degree(), a.degree());
    let d = cfg.d();
    if n < 2 || e < 1 || target.degree() != n * e {
        return vec![];
    }
    let c = (&target.lc() / &(&g.lc() * &a.lc().pow(n as u64))).in_field(d);
    let alphas = skew_scalars(&c, n, cfg);
    let mut out: Vec<LinearMap> = Vec::new();
    let deg = (n - 1) * e;
    for alpha in alphas {
        let ga = g.compose(&a.scale(&alpha));
        let rhs = target.scale(&cfg.apply(&alpha)).coeff(deg);
        let den = &(&g.lc() * &FieldElem::from_int(n as i64)) * &(&alpha.pow(n as u64 - 1) * &a.lc().pow(n as u64 - 1));
        let beta = &(&rhs - &ga.coeff(deg)) * &den.inv().expect("nonzero");
        let Some(l) = LinearMap::new(alpha, beta) else { continue };
        let la = l.compose_left(a);
        if g.compose(&la) == l.sigma(cfg).compose_left(target) && !out.contains(&l) {
            out.push(l);
        }
    }
    out
}

/// Finds every `h` with `f ∘ π = π^σ ∘ h` and keeps those with `g ∘ ρ = ρ^σ ∘ h`.
pub fn certify(f: &Poly, g: &Poly, pi: &Poly, rho: &Poly, cfg: &FieldConfig) -> Vec<Correspondence> {
    if pi.is_constant() {
        return vec![];
    }
    let lhs = f.compose(pi);
    left_divide(&lhs, &pi.sigma(cfg), cfg.d())
        .into_iter()
        .map(|h| Correspondence::new(f.clone(), g.clone(), h, pi.clone(), rho.clone(), *cfg))
        .filter(verify_correspondence)
        .collect()
}

/// K-points with `f(m) = σ(m)`, restricted to rational and pure-imaginary parts.
pub fn skew_fixed_points(f: &Poly, cfg: &FieldConfig) -> Vec<FieldElem> {
    let d = cfg.d();
    let mut cands = roots_in_field(&(f - &Poly::x()), d);
    if cfg.sigma() == Sigma::Conjugation {
        cands.extend(roots_in_field(&(f + &Poly::x()), d));
    }
    let mut out: Vec<FieldElem> = Vec::new();
    for m in cands {
        if f.eval(&m) == cfg.apply(&m) && !out.contains(&m) {
            out.push(m);
        }
    }
    out
}

fn reject_nontrivial(which: &'static str, f: &Poly, d: i64) -> Result<(), SkewError> {
    if f.degree() < 2 {
        return Err(SkewError::DegreeTooSmall(f.degree()));
    }
    let poly = f.to_string();
    if let Some(m) = monomial_center(f) {
        return Err(SkewError::NotTrivial { which, poly, evidence: format!("x^{} (center {m})", f.degree()) });
    }
    if let Some(rel) = chebyshev_relation(f, d) {
        return Err(SkewError::NotTrivial {
            which,
            poly,
            evidence: format!("C_{} (lambda^2 = {})", rel.n, rel.lambda_sq),
        });
    }
    Ok(())
}

/// Right factors `a ∘ f^{∘n}` of iterates of `f` (including `x`), of degree at most `bound`.
fn initial_factors(f: &Poly, bound: usize) -> Vec<Poly> {
    let mut base: BTreeSet<Poly> = BTreeSet::new();
    base.insert(Poly::x());
    if let Ok(set) = enumerate_d_f(f) {
        for c in &set.classes {
            for j in 1..=c.len() {
                base.insert(c.compose_range(1, j));
            }
        }
    }
    let mut out: BTreeSet<Poly> = BTreeSet::new();
    let mut iterate = Poly::x();
    while iterate.degree() <= bound {
        for a in &base {
            if a.degree() * iterate.degree() <= bound {
                out.insert(a.compose(&iterate));
            }
        }
        iterate = f.compose(&iterate);
    }
    out.into_iter().collect()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Certified skew-invariant curves between `f` and `g` with both parametrizing degrees at
/// most `bound`: graphs, converse graphs, and monomial or Chebyshev middle pieces.
pub fn enumerate_invariant_curves(
    f: &Poly,
    g: &Poly,
    bound: usize,
    cfg: &FieldConfig,
) -> Result<Vec<Correspondence>, SkewError> {
    let d = cfg.d();
    reject_nontrivial("f", f, d)?;
    reject_nontrivial("g", g, d)?;
    if f.degree() != g.degree() {
        return Ok(vec![]);
    }
    let mut pairs: Vec<(Poly, Poly)> = Vec::new();
    // graphs y = ρ(x) and converse graphs x = π(y)
    for a in initial_factors(f, bound) {
        let target = a.sigma(cfg).compose(f);
        for l in fit_outer_linear(g, &a, &target, cfg) {
            pairs.push((Poly::x(), l.compose_left(&a)));
        }
    }
    for b in initial_factors(g, bound) {
        let target = b.sigma(cfg).compose(g);
        for l in fit_outer_linear(f, &b, &target, cfg) {
            pairs.push((l.compose_left(&b), Poly::x()));
        }
    }
    // middle pieces x^N = y^M style, centered at skew-fixed points
    let fixed_f = skew_fixed_points(f, cfg);
    let fixed_g = skew_fixed_points(g, cfg);
    for n in 1..=bound {
        for m in 1..=bound {
            if gcd(n, m) != 1 || n * m == 1 {
                continue;
            }
            for a in &fixed_f {
                for b in &fixed_g {
                    let pi = &Poly::power_of_x(n) + &Poly::constant(a.clone());
                    let rho = &Poly::power_of_x(m) + &Poly::constant(b.clone());
                    pairs.push((pi, rho));
                }
            }
        }
    }
    let two_deg = 2 * f.degree();
    for n in 2..=bound {
        for m in 2..=bound {
            if gcd(n, m) == 1 && two_deg % n == 0 && two_deg % m == 0 {
                pairs.push((chebyshev(n).expect("n >= 1"), chebyshev(m).expect("m >= 1")));
            }
        }
    }
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut out = Vec::new();
    for (pi, rho) in pairs {
        if pi.degree() > bound || rho.degree() > bound {
            continue;
        }
        for c in certify(f, g, &pi, &rho, cfg) {
            let c = c.with_implicit();
            let key = c.implicit.clone().unwrap_or_else(|| format!("{} | {}", c.pi, c.rho));
            if seen.insert(key) {
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// Word action with the accumulated correspondence between the start and end composites.
#[derive(Clone, Debug, Serialize)]
pub struct SkewTwistTrace {
    pub word: Word,
    pub steps: Vec<Decomposition>,
    pub result: SwapResult,
    /// `None` when the word's action is undefined or the fiber product does not reduce.
    pub correspondence: Option<Correspondence>,
}

/// Applies a B_k (or G_k) word right to left, composing per-letter correspondences.
pub fn apply_bword(d: &Decomposition, w: &Word, cfg: &FieldConfig) -> Result<SkewTwistTrace, SkewError> {
    let k = d.len();
    if w.k() != k {
        return Err(SkewError::RankMismatch { word: w.k(), dec: k });
    }
    let wb = w.to_b();
    let f = d.compose();
    let mut cur = d.clone();
    let mut steps = vec![cur.clone()];
    let mut corr = Some(Correspondence::diagonal(&f, *cfg));
    for l in wb.letters().iter().rev() {
        match l {
            Letter::T(i) => match try_ritt_swap(&cur, *i) {
                SwapResult::Swapped { decomposition, .. } => cur = decomposition,
                SwapResult::Undefined => {
                    return Ok(SkewTwistTrace { word: w.clone(), steps, result: SwapResult::Undefined, correspondence: None })
                }
            },
            Letter::Phi => {
                let f1 = cur.factor(1).clone();
                cur = apply_phi(&cur, cfg);
                let g = cur.compose();
                corr = corr.map(|c| Correspondence::new(c.f, g, c.h, c.pi, f1.compose(&c.rho), *cfg));
            }
            Letter::Beta => {
                let b = cur.factor(k).sigma_inv(cfg);
                cur = apply_beta(&cur, cfg);
                let g = cur.compose();
                corr = corr.and_then(|c| {
                    // b ∘ r = ρ has one solution per symmetry of b; keep the one closing the square
                    for r in left_divide(&c.rho, &b, cfg.d()) {
                        let cand = Correspondence::new(c.f.clone(), g.clone(), c.h.clone(), c.pi.clone(), r, *cfg);
                        if verify_correspondence(&cand) {
                            return Some(cand);
                        }
                    }
                    (c.rho == Poly::x()).then(|| Correspondence::new(c.f, g.clone(), g, c.pi.compose(&b), Poly::x(), *cfg))
                });
            }
            other => return Err(SkewError::BadLetter(other.to_string())),
        }
        if let Some(c) = &corr {
            debug_assert!(verify_correspondence(c), "square fails after {l}");
        }
        steps.push(cur.clone());
    }
    let result = SwapResult::Swapped { decomposition: cur, shape: None };
    Ok(SkewTwistTrace { word: w.clone(), steps, result, correspondence: corr.map(|c| c.with_implicit()) })
}

/// Witnesses for `L^σ ∘ f ∘ L^{-1} = x^k u(x^n)` and `(M^σ)^{-1} ∘ g ∘ M = x^k u(x)^n`.
#[derive(Clone, Debug, Serialize)]
pub struct NotSkewTwist {
    pub l: LinearMap,
    pub m: LinearMap,
    pub n: usize,
    pub k: usize,
    pub u: Poly,
    /// Graph of `ρ = M ∘ x^n ∘ L`: `g ∘ ρ = ρ^σ ∘ f`.
    pub correspondence: Correspondence,
}

fn deflate(p: &Poly, n: usize) -> Option<Poly> {
    if p.support().iter().any(|&i| i % n != 0) {
        return None;
    }
    let d = p.degree() / n;
    Some(Poly::from_coeffs((0..=d).map(|i| p.coeff(i * n)).collect()))
}

fn rational_centers(f: &Poly, d: i64) -> Vec<FieldElem> {
    let mut out = vec![FieldElem::zero()];
    for m in candidate_centers(f, d) {
        if m.is_rational() && !out.contains(&m) {
            out.push(m);
        }
    }
    out
}

/// Searches n in 2..=max_n for the monomial relation between `f` and `g`, over rational
/// translation witnesses.
pub fn solve_notskewtwist(f: &Poly, g: &Poly, max_n: usize, cfg: &FieldConfig) -> Option<NotSkewTwist> {
    if f.degree() < 2 || f.degree() != g.degree() {
        return None;
    }
    let d = cfg.d();
    let fc = rational_centers(f, d);
    let gc = rational_centers(g, d);
    for n in 2..=max_n {
        for a in &fc {
            // L = x - a
            let l = LinearMap::translation(-a);
            let ft = &f.shift(a) - &Poly::constant(cfg.apply(a));
            let k = ft.valuation();
            let Some(rest) = ft.div_exact(&Poly::power_of_x(k)) else { continue };
            let Some(u) = deflate(&rest, n) else { continue };
            if u.is_constant() {
                continue;
            }
            let target = &Poly::power_of_x(k) * &u.pow(n);
            for b in &gc {
                let m = LinearMap::translation(b.clone());
                let gt = &g.shift(b) - &Poly::constant(cfg.apply(b));
                if gt != target {
                    continue;
                }
                let rho = m.compose_left(&Poly::power_of_x(n).compose(&l.to_poly()));
                let correspondence =
                    Correspondence::new(f.clone(), g.clone(), f.clone(), Poly::x(), rho, *cfg).with_implicit();
                if verify_correspondence(&correspondence) {
                    return Some(NotSkewTwist { l, m, n, k, u, correspondence });
                }
            }
        }
    }
    None
}

/// Plane curve `Σ c_ij x^i y^j = 0`, terms in descending graded order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImplicitCurve {
    pub terms: Vec<((usize, usize), FieldElem)>,
}

impl std::fmt::Display for ImplicitCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for ((i, j), c) in &self.terms {
            let mono = match (i, j) {
                (0, 0) => String::new(),
                _ => {
                    let mut parts = Vec::new();
                    if *i > 0 {
                        parts.push(if *i == 1 { "x".to_string() } else { format!("x^{i}") });
                    }
                    if *j > 0 {
                        parts.push(if *j == 1 { "y".to_string() } else { format!("y^{j}") });
                    }
                    parts.join("*")
                }
            };
            let negative = c.is_rational() && c.rational_part() < &num::Zero::zero();
            let mag = if negative { -c } else { c.clone() };
            let coeff = if mag.is_rational() { mag.to_string() } else { format!("({mag})") };
            let sign = match (first, negative) {
                (true, false) => "",
                (true, true) => "-",
                (false, false) => " + ",
                (false, true) => " - ",
            };
            let body = match (mono.is_empty(), mag.is_one()) {
                (true, _) => coeff,
                (false, true) => mono,
                (false, false) => format!("{coeff}*{mono}"),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Minimal polynomial relation between `π` and `ρ` (degrees within `deg ρ` in x and `deg π`
/// in y), by linear algebra on the coefficient vectors of `π^i ρ^j`.
pub fn implicitize(pi: &Poly, rho: &Poly) -> Option<ImplicitCurve> {
    let (a, b) = (pi.degree(), rho.degree());
    if a == 0 || b == 0 {
        return None;
    }
    let mut monos: Vec<(usize, usize)> = (0..=b).flat_map(|i| (0..=a).map(move |j| (i, j))).collect();
    monos.sort_by(|p, q| (q.0 + q.1, q.1).cmp(&(p.0 + p.1, p.1)));
    let cols: Vec<Poly> = monos.iter().map(|&(i, j)| &pi.pow(i) * &rho.pow(j)).collect();
    let len = cols.iter().map(|c| c.degree() + 1).max().unwrap_or(1);
    let m: Matrix = (0..len).map(|r| cols.iter().map(|c| c.coeff(r)).collect()).collect();
    let mut basis = nullspace(&m, monos.len());
    if basis.is_empty() {
        return None;
    }
    rref(&mut basis);
    let last = basis.iter().rev().find(|r| r.iter().any(|c| !c.is_zero()))?;
    let lead = last.iter().find(|c| !c.is_zero())?.inv()?;
    let terms = monos
        .iter()
        .zip(last.iter())
        .filter(|(_, c)| !c.is_zero())
        .map(|(&mono, c)| (mono, c * &lead))
        .collect();
    Some(ImplicitCurve { terms })
}
