//! Complete decompositions, canonical representatives of linear-equivalence classes, and the
//! swap graph of all classes of a polynomial.
//!
//! Factors are stored outermost first, `(f_k, ..., f_1)`. Position `i` counts from the inside:
//! `f_1` is the innermost factor and a swap at `i` exchanges `f_i` and `f_{i+1}`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::algebra::field::{FieldElem, Rational};
use crate::algebra::poly::{outer_if_in_subring, LinearMap, Poly};
use crate::swaps::{try_ritt_swap, SwapResult};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompError {
    #[error("polynomial of degree {0} has no decomposition (degree must be at least 2)")]
    DegreeTooSmall(usize),
    #[error("factor {0} is linear or constant")]
    LinearFactor(usize),
    #[error("empty factor list")]
    Empty,
}

/// Ordered complete decomposition `(f_k, ..., f_1)`, outermost first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decomposition {
    factors: Vec<Poly>,
}

impl Decomposition {
    /// Wraps factors without normalizing (outermost first).
    pub fn from_factors(factors: Vec<Poly>) -> Result<Self, DecompError> {
        if factors.is_empty() {
            return Err(DecompError::Empty);
        }
        for (idx, f) in factors.iter().enumerate() {
            if f.degree() < 2 {
                return Err(DecompError::LinearFactor(factors.len() - idx));
            }
        }
        Ok(Decomposition { factors })
    }

    /// Outermost first.
    pub fn factors(&self) -> &[Poly] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Factor `f_j` with 1 = innermost.
    pub fn factor(&self, j: usize) -> &Poly {
        &self.factors[self.factors.len() - j]
    }

    pub fn factor_mut(&mut self, j: usize) -> &mut Poly {
        let k = self.factors.len();
        &mut self.factors[k - j]
    }

    /// Degrees `(deg f_k, ..., deg f_1)`.
    pub fn degrees(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.degree()).collect()
    }

    pub fn compose(&self) -> Poly {
        compose_all(&self.factors)
    }

    /// Composite of `f_j ∘ ... ∘ f_i` (inner-indexed, i <= j).
    pub fn compose_range(&self, i: usize, j: usize) -> Poly {
        let k = self.len();
        compose_all(&self.factors[k - j..=k - i])
    }

    pub fn is_canonical(&self) -> bool {
        self.factors
            .iter()
            .skip(1)
            .all(|f| f.is_monic() && f.coeff(0).is_zero())
    }
}

/// Outermost first.
pub fn compose_all(factors: &[Poly]) -> Poly {
    let mut it = factors.iter().rev();
    let mut acc = it.next().cloned().unwrap_or_else(Poly::x);
    for f in it {
        acc = f.compose(&acc);
    }
    acc
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for Decomposition {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.factors.iter().map(|p| p.to_string()).collect();
        v.serialize(s)
    }
}

/// Terms of G^(1/r) mod y^len for a power series with G_0 = 1.
fn series_root(g: &[FieldElem], r: usize, len: usize) -> Vec<FieldElem> {
    let alpha = FieldElem::from_rational(Rational::new(1.into(), (r as i64).into()));
    let ap1 = &alpha + &FieldElem::one();
    let mut p = vec![FieldElem::one()];
    for n in 1..len {
        let mut acc = FieldElem::zero();
        for k in 1..=n {
            let gk = g.get(k).cloned().unwrap_or_else(FieldElem::zero);
            if gk.is_zero() {
                continue;
            }
            let coef = &(&ap1 * &FieldElem::from_int(k as i64)) - &FieldElem::from_int(n as i64);
            acc += &(&(&coef * &gk) * &p[n - k]);
        }
        p.push(&acc / &FieldElem::from_int(n as i64));
    }
    p
}

/// The monic right component of degree `e` with zero constant term, with its outer partner:
/// `f = g ∘ h`. Unique when it exists.
pub fn right_component(f: &Poly, e: usize) -> Option<(Poly, Poly)> {
    let n = f.degree();
    if e == 0 || n % e != 0 || f.is_constant() {
        return None;
    }
    if e == 1 {
        return Some((f.clone(), Poly::x()));
    }
    if e == n {
        let h = (f - &Poly::constant(f.coeff(0))).monic();
        let g = Poly::linear(f.lc(), f.coeff(0));
        return Some((g, h));
    }
    let r = n / e;
    let monic = f.monic();
    // reversed series G(y) = y^n F(1/y)
    let g: Vec<FieldElem> = (0..e).map(|i| monic.coeff(n - i)).collect();
    let hser = series_root(&g, r, e);
    let mut hc = vec![FieldElem::zero(); e + 1];
    for (i, c) in hser.into_iter().enumerate() {
        hc[e - i] = c;
    }
    hc[0] = FieldElem::zero();
    let h = Poly::from_coeffs(hc);
    let outer = outer_if_in_subring(f, &h)?;
    Some((outer, h))
}

/// Greedy complete decomposition (smallest inner degree first), normalized.
pub fn complete_decomposition(f: &Poly) -> Result<Decomposition, DecompError> {
    let n = f.degree();
    if f.is_zero() || n < 2 {
        return Err(DecompError::DegreeTooSmall(n));
    }
    let mut inner_first: Vec<Poly> = Vec::new();
    let mut cur = f.clone();
    'outer: loop {
        let m = cur.degree();
        for e in 2..m {
            if m % e != 0 {
                continue;
            }
            if let Some((g, h)) = right_component(&cur, e) {
                inner_first.push(h);
                cur = g;
                continue 'outer;
            }
        }
        inner_first.push(cur);
        break;
    }
    inner_first.reverse();
    normalize(&inner_first)
}

/// True iff `f` (degree >= 2) has no nontrivial decomposition.
pub fn is_indecomposable(f: &Poly) -> bool {
    let n = f.degree();
    n >= 2 && (2..n).filter(|e| n % e == 0).all(|e| right_component(f, e).is_none())
}

/// Canonical representative together with the maps `A_1, ..., A_{k-1}` (inner-indexed) such
/// that `c_1 = A_1^{-1} ∘ f_1`, `c_i = A_i^{-1} ∘ f_i ∘ A_{i-1}`, `c_k = f_k ∘ A_{k-1}`.
pub fn normalize_with_maps(raw: &[Poly]) -> Result<(Decomposition, Vec<LinearMap>), DecompError> {
    let mut d = Decomposition::from_factors(raw.to_vec())?;
    let k = d.len();
    let mut maps = Vec::with_capacity(k.saturating_sub(1));
    let mut prev: Option<LinearMap> = None;
    for j in 1..k {
        let mut g = d.factor(j).clone();
        if let Some(l) = &prev {
            g = l.compose_right(&g);
        }
        let a = LinearMap::new(g.lc(), g.coeff(0)).expect("nonzero leading coefficient");
        let c = a.inverse().compose_left(&g);
        *d.factor_mut(j) = c;
        maps.push(a.clone());
        prev = Some(a);
    }
    if let Some(l) = &prev {
        let top = l.compose_right(d.factor(k));
        *d.factor_mut(k) = top;
    }
    Ok((d, maps))
}

pub fn normalize(raw: &[Poly]) -> Result<Decomposition, DecompError> {
    normalize_with_maps(raw).map(|(d, _)| d)
}

/// Why two decompositions are not linearly equivalent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Inequivalence {
    LengthMismatch,
    DegreeMismatch,
    CanonicalFormsDiffer,
    InvalidInput,
}

/// Witness chain `L_1, ..., L_{k-1}` with `d2_1 = L_1^{-1} ∘ d1_1`, `d2_i = L_i^{-1} ∘ d1_i ∘ L_{i-1}`,
/// `d2_k = d1_k ∘ L_{k-1}`, verified exactly.
pub fn linear_equivalent(d1: &[Poly], d2: &[Poly]) -> Result<Vec<LinearMap>, Inequivalence> {
    if d1.len() != d2.len() {
        return Err(Inequivalence::LengthMismatch);
    }
    let deg1: Vec<usize> = d1.iter().map(|p| p.degree()).collect();
    let deg2: Vec<usize> = d2.iter().map(|p| p.degree()).collect();
    if deg1 != deg2 {
        return Err(Inequivalence::DegreeMismatch);
    }
    let (c1, a) = normalize_with_maps(d1).map_err(|_| Inequivalence::InvalidInput)?;
    let (c2, b) = normalize_with_maps(d2).map_err(|_| Inequivalence::InvalidInput)?;
    if c1 != c2 {
        return Err(Inequivalence::CanonicalFormsDiffer);
    }
    let chain: Vec<LinearMap> = a.iter().zip(&b).map(|(ai, bi)| ai.then_after(&bi.inverse())).collect();
    debug_assert!(check_chain(d1, d2, &chain));
    Ok(chain)
}

/// Exact replay of a linear-equivalence witness chain.
pub fn check_chain(d1: &[Poly], d2: &[Poly], chain: &[LinearMap]) -> bool {
    let k = d1.len();
    if d2.len() != k || chain.len() + 1 != k {
        return false;
    }
    (1..=k).all(|j| {
        let f = &d1[k - j];
        let mut g = f.clone();
        if j >= 2 {
            g = chain[j - 2].compose_right(&g);
        }
        if j < k {
            g = chain[j - 1].inverse().compose_left(&g);
        }
        g == d2[k - j]
    })
}

/// Linear-equivalence classes of complete decompositions connected by Ritt swaps.
#[derive(Clone, Debug, Serialize)]
pub struct DecompositionSet {
    pub classes: Vec<Decomposition>,
    /// `(from, i, to)`: a Ritt swap at position `i` sends class `from` to class `to`.
    pub edges: Vec<(usize, usize, usize)>,
}

impl DecompositionSet {
    /// Breadth-first swap distances from class 0.
    pub fn distances_from(&self, start: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.classes.len()];
        dist[start] = Some(0);
        let mut q = VecDeque::from([start]);
        while let Some(a) = q.pop_front() {
            for &(x, _, y) in &self.edges {
                if x == a && dist[y].is_none() {
                    dist[y] = Some(dist[a].expect("visited") + 1);
                    q.push_back(y);
                }
            }
        }
        dist
    }
}

/// Closure of the complete decomposition of `f` under Ritt swaps at every position.
pub fn enumerate_d_f(f: &Poly) -> Result<DecompositionSet, DecompError> {
    let start = complete_decomposition(f)?;
    Ok(enumerate_from(start))
}

/// Swap closure of a starting decomposition.
pub fn enumerate_from(start: Decomposition) -> DecompositionSet {
    let mut index: BTreeMap<Decomposition, usize> = BTreeMap::new();
    let mut classes = vec![start.clone()];
    index.insert(start, 0);
    let mut edges = Vec::new();
    let mut q = VecDeque::from([0usize]);
    while let Some(a) = q.pop_front() {
        let d = classes[a].clone();
        for i in 1..d.len() {
            if let SwapResult::Swapped { decomposition, .. } = try_ritt_swap(&d, i) {
                let b = match index.get(&decomposition) {
                    Some(&b) => b,
                    None => {
                        let b = classes.len();
                        classes.push(decomposition.clone());
                        index.insert(decomposition, b);
                        q.push_back(b);
                        b
                    }
                };
                edges.push((a, i, b));
            }
        }
    }
    DecompositionSet { classes, edges }
}
