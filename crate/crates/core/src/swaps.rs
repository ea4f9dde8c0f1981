//! Ritt swaps on decompositions, the near-action of words, and chebyclump detection.
//!
//! A swap at `i` replaces `(f_{i+1}, f_i)` by the unique (up to linear equivalence) pair
//! `(g, h)` with `g ∘ h = f_{i+1} ∘ f_i` and `deg h = deg f_{i+1}`. For indecomposable factors
//! of distinct degrees such a pair forces coprime degrees, and every such identity is a
//! linearly conjugated basic Ritt identity; the shape is reported from the old pair.

use serde::Serialize;
use thiserror::Error;

use crate::algebra::field::FieldElem;
use crate::algebra::poly::{LinearMap, Poly};
use crate::decomp::{normalize, right_component, Decomposition};
use crate::ritty::{balancing_center, centered_at, chebyshev, chebyshev_scale_sq, monomial_center};
use crate::words::{Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SwapShape {
    CommutingMonomials,
    CommutingChebyshevs,
    /// x^p outside an S-form moves inside.
    MonomialOuterSForm,
    /// An S-form outside x^p moves inside.
    SFormOuterMonomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome")]
pub enum SwapResult {
    Swapped { decomposition: Decomposition, shape: Option<SwapShape> },
    Undefined,
}

impl SwapResult {
    pub fn decomposition(&self) -> Option<&Decomposition> {
        match self {
            SwapResult::Swapped { decomposition, .. } => Some(decomposition),
            SwapResult::Undefined => None,
        }
    }

    pub fn is_defined(&self) -> bool {
        matches!(self, SwapResult::Swapped { .. })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SwapError {
    #[error("position {i} out of range for a decomposition of length {k}")]
    PositionOutOfRange { i: usize, k: usize },
    #[error("letter {0} is not a Ritt-swap generator")]
    NotASwapLetter(String),
}

fn shape_of(outer: &Poly, inner: &Poly) -> Option<SwapShape> {
    let om = monomial_center(outer).is_some();
    let im = monomial_center(inner).is_some();
    match (om, im) {
        (true, true) => Some(SwapShape::CommutingMonomials),
        (true, false) => Some(SwapShape::MonomialOuterSForm),
        (false, true) => Some(SwapShape::SFormOuterMonomial),
        (false, false) => {
            let c = |f: &Poly| f.degree() % 2 == 1 && chebyshev_scale_sq(f).is_some();
            (c(outer) && c(inner)).then_some(SwapShape::CommutingChebyshevs)
        }
    }
}

/// Ritt swap at position `i` (1 <= i < k).
pub fn try_ritt_swap_checked(d: &Decomposition, i: usize) -> Result<SwapResult, SwapError> {
    let k = d.len();
    if i == 0 || i >= k {
        return Err(SwapError::PositionOutOfRange { i, k });
    }
    Ok(try_ritt_swap(d, i))
}

/// Ritt swap at position `i`; out-of-range positions are Undefined.
pub fn try_ritt_swap(d: &Decomposition, i: usize) -> SwapResult {
    let k = d.len();
    if i == 0 || i >= k {
        return SwapResult::Undefined;
    }
    let inner = d.factor(i);
    let outer = d.factor(i + 1);
    let (a, b) = (outer.degree(), inner.degree());
    if a == b {
        return SwapResult::Undefined;
    }
    let composite = outer.compose(inner);
    let Some((g, h)) = right_component(&composite, a) else {
        return SwapResult::Undefined;
    };
    let mut factors = d.factors().to_vec();
    factors[k - i] = h;
    factors[k - i - 1] = g;
    let nd = normalize(&factors).expect("nonlinear factors");
    debug_assert_eq!(nd.compose(), d.compose());
    SwapResult::Swapped { decomposition: nd, shape: shape_of(outer, inner) }
}

/// Applies an M_k word right to left; Undefined is absorbing.
pub fn apply_word(d: &Decomposition, w: &Word) -> Result<SwapResult, SwapError> {
    let k = d.len();
    for l in w.letters() {
        match l {
            Letter::T(i) if *i >= 1 && *i < k => {}
            Letter::T(i) => return Err(SwapError::PositionOutOfRange { i: *i, k }),
            other => return Err(SwapError::NotASwapLetter(other.to_string())),
        }
    }
    let mut cur = d.clone();
    for l in w.letters().iter().rev() {
        let Letter::T(i) = l else { unreachable!() };
        match try_ritt_swap(&cur, *i) {
            SwapResult::Swapped { decomposition, .. } => cur = decomposition,
            SwapResult::Undefined => return Ok(SwapResult::Undefined),
        }
    }
    Ok(SwapResult::Swapped { decomposition: cur, shape: None })
}

/// Applies letters t_i given as positions, right to left.
pub fn apply_positions(d: &Decomposition, positions: &[usize]) -> SwapResult {
    let mut cur = d.clone();
    for &i in positions.iter().rev() {
        match try_ritt_swap(&cur, i) {
            SwapResult::Swapped { decomposition, .. } => cur = decomposition,
            SwapResult::Undefined => return SwapResult::Undefined,
        }
    }
    SwapResult::Swapped { decomposition: cur, shape: None }
}

/// Linear relation of a polynomial to C_n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChebyshevRelation {
    pub n: usize,
    pub lambda_sq: FieldElem,
    /// `(L, M)` with `L ∘ f ∘ M = C_n`, when sqrt(lambda_sq) lies in K.
    pub witnesses: Option<(LinearMap, LinearMap)>,
}

/// Tests whether f (degree >= 2) is linearly related to C_n, n = deg f.
pub fn chebyshev_relation(f: &Poly, d: i64) -> Option<ChebyshevRelation> {
    let n = f.degree();
    if n < 2 {
        return None;
    }
    let m = balancing_center(f);
    let g = centered_at(f, &m);
    let c = chebyshev(n).expect("n >= 1");
    if g.coeff(n - 2).is_zero() {
        return None;
    }
    let nu = -(&g.coeff(n - 2) / &FieldElem::from_int(n as i64));
    let mut pw = FieldElem::one();
    for j in 0..=n {
        let idx = n as isize - j as isize;
        if idx < 1 {
            break;
        }
        let idx = idx as usize;
        let expected = if j % 2 == 0 {
            let e = &c.coeff(idx) * &pw;
            pw *= &nu;
            e
        } else {
            FieldElem::zero()
        };
        if g.coeff(idx) != expected {
            return None;
        }
    }
    let lambda_sq = nu.inv().expect("nonzero");
    let witnesses = lambda_sq.clone().in_field(d).sqrt().map(|lam| {
        let lam = lam.in_field(d);
        let fm = f.eval(&m);
        let lam_n = lam.pow(n as u64);
        let mw = LinearMap::new(lam.inv().expect("nonzero"), m.clone()).expect("nonzero");
        let scale = &lam_n / &f.lc();
        let lw = LinearMap::new(scale.clone(), &c.coeff(0) - &(&fm * &scale)).expect("nonzero");
        (lw, mw)
    });
    Some(ChebyshevRelation { n, lambda_sq, witnesses })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chebyclump {
    /// Outer end (inner-indexed).
    pub j: usize,
    /// Inner end (inner-indexed).
    pub i: usize,
    pub relation: ChebyshevRelation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Default)]
pub struct ChebyclumpReport {
    pub intervals: Vec<Chebyclump>,
}

/// Maximal intervals `f_j ∘ ... ∘ f_i` linearly related to some C_n with n not a power of 2.
pub fn chebyclumps(d: &Decomposition, field_d: i64) -> ChebyclumpReport {
    let k = d.len();
    let mut found: Vec<Chebyclump> = Vec::new();
    for i in 1..=k {
        for j in i..=k {
            let f = d.compose_range(i, j);
            if f.degree().is_power_of_two() {
                continue;
            }
            if let Some(relation) = chebyshev_relation(&f, field_d) {
                found.push(Chebyclump { j, i, relation });
            }
        }
    }
    let maximal: Vec<Chebyclump> = found
        .iter()
        .filter(|c| !found.iter().any(|o| (o.i, o.j) != (c.i, c.j) && o.i <= c.i && c.j <= o.j))
        .cloned()
        .collect();
    ChebyclumpReport { intervals: maximal }
}

/// Odd part of a positive integer.
pub fn odd_part(mut n: usize) -> usize {
    while n > 0 && n % 2 == 0 {
        n /= 2;
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::FieldConfig;
    use crate::decomp::normalize;

    fn p(s: &str) -> Poly {
        Poly::parse(s, &FieldConfig::rational()).unwrap()
    }

    fn dec(fs: &[&str]) -> Decomposition {
        normalize(&fs.iter().map(|s| p(s)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn basic_swaps() {
        let r = try_ritt_swap(&dec(&["x^3", "x^2"]), 1);
        assert_eq!(r.decomposition().unwrap(), &dec(&["x^2", "x^3"]));
        let r = try_ritt_swap(&dec(&["x*(x+1)^5", "x^5"]), 1);
        assert_eq!(r.decomposition().unwrap(), &dec(&["x^5", "x*(x^5+1)"]));
        assert_eq!(try_ritt_swap(&dec(&["x^3", "x^2*(x-1)^3"]), 1), SwapResult::Undefined);
        let c5 = chebyshev(5).unwrap().to_string();
        let c3 = chebyshev(3).unwrap().to_string();
        let r = try_ritt_swap(&dec(&[&c5, &c3]), 1);
        assert_eq!(r.decomposition().unwrap(), &dec(&[&c3, &c5]));
        assert_eq!(try_ritt_swap(&dec(&["x^2", "x^2"]), 1), SwapResult::Undefined);
    }

    #[test]
    fn clumps() {
        let r = chebyclumps(&dec(&["x^2-2", "x^3-3*x"]), 1);
        assert_eq!(r.intervals.len(), 1);
        assert_eq!((r.intervals[0].j, r.intervals[0].i, r.intervals[0].relation.n), (2, 1, 6));
        assert!(chebyclumps(&dec(&["x^2", "x^3"]), 1).intervals.is_empty());
        let f = p("x*(x-3)^2");
        let rel = chebyshev_relation(&f, 1).unwrap();
        let (l, m) = rel.witnesses.unwrap();
        assert_eq!(l.compose_left(&m.compose_right(&f)), chebyshev(3).unwrap());
        assert_eq!(m.to_poly(), p("x+2"));
        assert_eq!(l.to_poly(), p("x-2"));
    }
}
