//! Coordinate classification for split systems `(f_1(x_1), ..., f_n(x_n))` and the
//! invariant-variety skeleton: a linear block, a group block (monomial and Chebyshev
//! coordinates) and a trivial block catalogued by pairwise invariant curves.

use num::{BigInt, Integer, One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::field::{nth_roots_in_field, FieldConfig, FieldElem, Rational, Sigma};
use crate::algebra::linalg::{integer_kernel, integer_rank};
use crate::algebra::poly::{LinearMap, Poly};
use crate::ritty::{balancing_center, chebyshev, monomial_center};
use crate::skew::{enumerate_invariant_curves, skew_scalars, Correspondence, SkewError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProductError {
    #[error("generator {0} is zero")]
    ZeroScalar(usize),
    #[error("coordinate {0} is constant")]
    Constant(usize),
    #[error("multiplicative relations are only supported over Q (generator {0} is irrational)")]
    UnsupportedField(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum CoordVerdict {
    Linear,
    MonomialConjugate { n: usize },
    ChebyshevConjugate { n: usize },
    Trivial,
}

/// Verdict with witness `L`: `f = L^σ ∘ P ∘ L^{-1}` for P = x^n or C_n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoordinateClass {
    pub verdict: CoordVerdict,
    pub witness: Option<LinearMap>,
}

impl CoordinateClass {
    /// Recomposes the witness and compares with `f`.
    pub fn verify(&self, f: &Poly, cfg: &FieldConfig) -> bool {
        let model = match &self.verdict {
            CoordVerdict::MonomialConjugate { n } => Poly::power_of_x(*n),
            CoordVerdict::ChebyshevConjugate { n } => chebyshev(*n).expect("n >= 1"),
            CoordVerdict::Linear => return f.degree() == 1,
            CoordVerdict::Trivial => return self.witness.is_none(),
        };
        match &self.witness {
            Some(l) => conjugate(l, &model, cfg) == *f,
            None => false,
        }
    }
}

/// `L^σ ∘ p ∘ L^{-1}`
fn conjugate(l: &LinearMap, p: &Poly, cfg: &FieldConfig) -> Poly {
    l.sigma(cfg).compose_left(&l.inverse().compose_right(p))
}

/// Searches `L = αx + m` with `f = L^σ ∘ model ∘ L^{-1}`, m the balancing center.
fn conjugacy_witness(f: &Poly, model: &Poly, cfg: &FieldConfig) -> Option<LinearMap> {
    let n = f.degree();
    let m = balancing_center(f).in_field(cfg.d());
    // lc(f) = σ(α) lc(model) / α^n
    let c = (&model.lc() / &f.lc()).in_field(cfg.d());
    skew_scalars(&c, n, cfg)
        .into_iter()
        .filter_map(|a| LinearMap::new(a, m.clone()))
        .find(|l| conjugate(l, model, cfg) == *f)
}

pub fn classify_coordinate(f: &Poly, cfg: &FieldConfig) -> CoordinateClass {
    let n = f.degree();
    if n <= 1 {
        return CoordinateClass { verdict: CoordVerdict::Linear, witness: LinearMap::from_poly(f) };
    }
    if monomial_center(f).is_some() {
        if let Some(l) = conjugacy_witness(f, &Poly::power_of_x(n), cfg) {
            return CoordinateClass { verdict: CoordVerdict::MonomialConjugate { n }, witness: Some(l) };
        }
    }
    if let Some(l) = conjugacy_witness(f, &chebyshev(n).expect("n >= 1"), cfg) {
        return CoordinateClass { verdict: CoordVerdict::ChebyshevConjugate { n }, witness: Some(l) };
    }
    CoordinateClass { verdict: CoordVerdict::Trivial, witness: None }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicativeRelations {
    pub generators: Vec<String>,
    /// Pairwise coprime integers > 1 over which the generators are factored.
    pub base: Vec<String>,
    /// Basis of `{e : Π λ_i^{e_i} = 1}`.
    pub lattice: Vec<Vec<i64>>,
    /// Multiplicative rank of the group generated by the λ_i (r minus the lattice rank).
    pub rank: usize,
}

/// Refines a list of positive integers into a pairwise coprime base generating all of them.
fn coprime_base(nums: &[BigInt]) -> Vec<BigInt> {
    let mut base: Vec<BigInt> = nums.iter().filter(|n| !n.is_one()).cloned().collect();
    loop {
        base.sort();
        base.dedup();
        let mut split = None;
        'search: for i in 0..base.len() {
            for j in i + 1..base.len() {
                let g = base[i].gcd(&base[j]);
                if !g.is_one() {
                    split = Some((i, j, g));
                    break 'search;
                }
            }
        }
        let Some((i, j, g)) = split else { return base };
        let (a, b) = (&base[i] / &g, &base[j] / &g);
        base.remove(j);
        base.remove(i);
        base.extend([a, b, g].into_iter().filter(|v| !v.is_one()));
    }
}

fn valuation(mut n: BigInt, b: &BigInt) -> (i64, BigInt) {
    let mut v = 0;
    while (&n % b).is_zero() {
        n /= b;
        v += 1;
    }
    (v, n)
}

/// Exponent vectors over a coprime base; the base grows until every generator factors.
fn exponent_vectors(nums: &[BigInt]) -> (Vec<BigInt>, Vec<Vec<i64>>) {
    let mut base = coprime_base(nums);
    loop {
        let mut leftovers = Vec::new();
        let mut vecs = Vec::new();
        for n in nums {
            let mut rest = n.clone();
            let mut v = Vec::with_capacity(base.len());
            for b in &base {
                let (e, r) = valuation(rest, b);
                v.push(e);
                rest = r;
            }
            if !rest.is_one() {
                leftovers.push(rest);
            }
            vecs.push(v);
        }
        if leftovers.is_empty() {
            return (base, vecs);
        }
        base.extend(leftovers);
        base = coprime_base(&base);
    }
}

pub fn multiplicative_relations(lambdas: &[Rational]) -> Result<MultiplicativeRelations, ProductError> {
    if let Some(i) = lambdas.iter().position(|l| l.is_zero()) {
        return Err(ProductError::ZeroScalar(i + 1));
    }
    let mut all: Vec<BigInt> = Vec::new();
    for l in lambdas {
        all.push(l.numer().abs());
        all.push(l.denom().clone());
    }
    let (base, vecs) = exponent_vectors(&all);
    let r = lambdas.len();
    // row i: exponents of λ_i, then its sign bit; an auxiliary row (0, .., 2) kills sign parity
    let mut rows: Vec<Vec<BigInt>> = (0..r)
        .map(|i| {
            let mut row: Vec<BigInt> =
                vecs[2 * i].iter().zip(&vecs[2 * i + 1]).map(|(a, b)| BigInt::from(a - b)).collect();
            row.push(BigInt::from(lambdas[i].is_negative() as i64));
            row
        })
        .collect();
    let mut aux = vec![BigInt::zero(); base.len()];
    aux.push(BigInt::from(2));
    rows.push(aux);
    let lattice: Vec<Vec<i64>> = integer_kernel(&rows)
        .into_iter()
        .map(|v| {
            let mut e: Vec<i64> = v[..r].iter().map(|x| i64::try_from(x).expect("small exponents")).collect();
            if e.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                e.iter_mut().for_each(|x| *x = -*x);
            }
            e
        })
        .collect();
    let rank = integer_rank(&rows[..r].iter().map(|row| row[..base.len()].to_vec()).collect::<Vec<_>>());
    Ok(MultiplicativeRelations {
        generators: lambdas.iter().map(|l| l.to_string()).collect(),
        base: base.iter().map(|b| b.to_string()).collect(),
        lattice,
        rank,
    })
}

/// Evaluates `Π λ_i^{e_i}` exactly.
pub fn evaluate_relation(lambdas: &[Rational], e: &[i64]) -> Rational {
    lambdas.iter().zip(e).fold(Rational::one(), |acc, (l, &k)| {
        let p = num::pow::pow(l.clone(), k.unsigned_abs() as usize);
        if k >= 0 { acc * p } else { acc / p }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum LinearCoordinate {
    /// `x ↦ a (x - c) + c`
    Scaling { a: FieldElem, center: FieldElem },
    /// `x ↦ x + b`
    Translation { b: FieldElem },
    Identity,
}

/// Invariant character locus `Π (x_i - c_i)^{e_i} = const`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterLocus {
    pub exponents: Vec<i64>,
    pub equation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearSkeleton {
    pub coordinates: Vec<LinearCoordinate>,
    /// Dimension of the Zariski closure of the generated group.
    pub r: usize,
    /// Coordinates `i` whose hyperplane `x_i = c_i` is invariant.
    pub hyperplanes: Vec<usize>,
    pub characters: Vec<CharacterLocus>,
    /// Pairs of translation coordinates with invariant `x_i / b_i - x_j / b_j = const`.
    pub translation_differences: Vec<(usize, usize)>,
    /// Coordinates fixed pointwise; every level set is invariant.
    pub fixed: Vec<usize>,
}

fn character_equation(coords: &[LinearCoordinate], e: &[i64]) -> String {
    let factor = |i: usize, k: i64| -> String {
        let var = match &coords[i] {
            LinearCoordinate::Scaling { center, .. } if !center.is_zero() => format!("(x{} - {center})", i + 1),
            _ => format!("x{}", i + 1),
        };
        if k == 1 { var } else { format!("{var}^{k}") }
    };
    let num: Vec<String> = e.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, &k)| factor(i, k)).collect();
    let den: Vec<String> = e.iter().enumerate().filter(|(_, &k)| k < 0).map(|(i, &k)| factor(i, -k)).collect();
    let lhs = if num.is_empty() { "1".to_string() } else { num.join("*") };
    if den.is_empty() {
        format!("{lhs} = c")
    } else {
        format!("{lhs} = c*{}", den.join("*"))
    }
}

/// Skeleton of a product of affine maps. Scalings must be rational.
pub fn linear_block_skeleton(maps: &[LinearMap]) -> Result<LinearSkeleton, ProductError> {
    let mut coords = Vec::new();
    for m in maps {
        let a = m.a().clone();
        coords.push(if !a.is_one() {
            let center = m.b() / &(&FieldElem::one() - &a);
            LinearCoordinate::Scaling { a, center }
        } else if m.b().is_zero() {
            LinearCoordinate::Identity
        } else {
            LinearCoordinate::Translation { b: m.b().clone() }
        });
    }
    let scal: Vec<usize> = (0..coords.len()).filter(|&i| matches!(coords[i], LinearCoordinate::Scaling { .. })).collect();
    let mut lambdas = Vec::new();
    for &i in &scal {
        let LinearCoordinate::Scaling { a, .. } = &coords[i] else { unreachable!() };
        lambdas.push(a.as_rational().cloned().ok_or(ProductError::UnsupportedField(i + 1))?);
    }
    let rel = multiplicative_relations(&lambdas)?;
    let trans: Vec<usize> =
        (0..coords.len()).filter(|&i| matches!(coords[i], LinearCoordinate::Translation { .. })).collect();
    let r = rel.rank + usize::from(!trans.is_empty());
    let characters = rel
        .lattice
        .iter()
        .map(|e| {
            let mut full = vec![0i64; coords.len()];
            for (slot, &i) in scal.iter().enumerate() {
                full[i] = e[slot];
            }
            let equation = character_equation(&coords, &full);
            CharacterLocus { exponents: full, equation }
        })
        .collect();
    let translation_differences =
        trans.iter().enumerate().flat_map(|(p, &i)| trans[p + 1..].iter().map(move |&j| (i, j))).collect();
    let fixed = (0..coords.len()).filter(|&i| coords[i] == LinearCoordinate::Identity).collect();
    Ok(LinearSkeleton { coordinates: coords, r, hyperplanes: scal, characters, translation_differences, fixed })
}

/// Exact invariance of a linear-block character: `Π a_i^{e_i} = 1`.
pub fn character_is_invariant(skel: &LinearSkeleton, e: &[i64]) -> bool {
    let mut acc = FieldElem::one();
    for (c, &k) in skel.coordinates.iter().zip(e) {
        if k == 0 {
            continue;
        }
        let LinearCoordinate::Scaling { a, .. } = c else { return false };
        acc *= &a.powi(k).expect("nonzero scaling");
    }
    acc.is_one()
}

/// Torsion translate `Π z_i^{e_i} = ζ` of a subtorus in normalized group coordinates
/// `z_i = L_i^{-1}(x_i)`, mapped to itself by the character twist `χ ∘ Φ = χ^m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubtorusComponent {
    pub exponents: Vec<i64>,
    pub zeta: FieldElem,
    pub m: usize,
    /// Lives on the `t ↦ t + 1/t` cover for Chebyshev coordinates.
    pub via_chebyshev_cover: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairCatalog {
    pub i: usize,
    pub j: usize,
    pub curves: Vec<Correspondence>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantSkeleton {
    pub classes: Vec<CoordinateClass>,
    pub linear_block: Vec<usize>,
    pub group_block: Vec<usize>,
    pub trivial_block: Vec<usize>,
    pub linear: Option<LinearSkeleton>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linear_note: Option<String>,
    pub subtori: Vec<SubtorusComponent>,
    pub curves: Vec<PairCatalog>,
}

/// Roots of unity ζ in K with ζ^m = σ(ζ).
fn invariant_torsion(m: usize, cfg: &FieldConfig) -> Vec<FieldElem> {
    let mut out: Vec<FieldElem> = Vec::new();
    for order in [1u32, 2, 3, 4, 6] {
        for z in nth_roots_in_field(&FieldElem::one().in_field(cfg.d()), order) {
            if z.pow(m as u64) == cfg.apply(&z) && !out.contains(&z) {
                out.push(z);
            }
        }
    }
    out
}

/// Primitive exponent vectors with entries in [-bound, bound], supported on `support`, first
/// nonzero entry positive.
fn primitive_vectors(support: &[usize], len: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let s = support.len();
    let total = (2 * bound + 1).pow(s as u32);
    for code in 0..total {
        let mut c = code;
        let mut v = vec![0i64; len];
        for &i in support {
            v[i] = c % (2 * bound + 1) - bound;
            c /= 2 * bound + 1;
        }
        let Some(first) = v.iter().find(|&&x| x != 0) else { continue };
        let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
        if *first > 0 && g == 1 {
            out.push(v);
        }
    }
    out
}

/// Full skeleton. `curve_bound` limits pairwise curve bidegrees and `exponent_bound` the
/// subtorus characters.
pub fn invariant_skeleton(
    phi: &[Poly],
    cfg: &FieldConfig,
    curve_bound: usize,
    exponent_bound: i64,
) -> Result<InvariantSkeleton, ProductError> {
    if let Some(i) = phi.iter().position(|f| f.is_constant()) {
        return Err(ProductError::Constant(i + 1));
    }
    let classes: Vec<CoordinateClass> = phi.iter().map(|f| classify_coordinate(f, cfg)).collect();
    let pick = |pred: fn(&CoordVerdict) -> bool| -> Vec<usize> {
        (0..phi.len()).filter(|&i| pred(&classes[i].verdict)).collect()
    };
    let linear_block = pick(|v| matches!(v, CoordVerdict::Linear));
    let group_block = pick(|v| matches!(v, CoordVerdict::MonomialConjugate { .. } | CoordVerdict::ChebyshevConjugate { .. }));
    let trivial_block = pick(|v| matches!(v, CoordVerdict::Trivial));

    let (linear, linear_note) = if linear_block.is_empty() {
        (None, None)
    } else if cfg.sigma() != Sigma::Identity {
        (None, Some("linear block with nontrivial sigma is not analysed".to_string()))
    } else {
        let maps: Vec<LinearMap> =
            linear_block.iter().map(|&i| LinearMap::from_poly(&phi[i]).expect("degree 1")).collect();
        match linear_block_skeleton(&maps) {
            Ok(s) => (Some(s), None),
            Err(e) => (None, Some(e.to_string())),
        }
    };

    // characters supported on coordinates of one common degree are eigenvectors of diag(n_i)
    let mut subtori = Vec::new();
    let degree_of = |i: usize| phi[i].degree();
    let mut degrees: Vec<usize> = group_block.iter().map(|&i| degree_of(i)).collect();
    degrees.sort();
    degrees.dedup();
    for m in degrees {
        let support: Vec<usize> = group_block.iter().copied().filter(|&i| degree_of(i) == m).collect();
        let zetas = invariant_torsion(m, cfg);
        for e in primitive_vectors(&support, phi.len(), exponent_bound) {
            let cheb = support
                .iter()
                .any(|&i| e[i] != 0 && matches!(classes[i].verdict, CoordVerdict::ChebyshevConjugate { .. }));
            for z in &zetas {
                subtori.push(SubtorusComponent { exponents: e.clone(), zeta: z.clone(), m, via_chebyshev_cover: cheb });
            }
        }
    }

    let mut curves = Vec::new();
    for (p, &i) in trivial_block.iter().enumerate() {
        for &j in &trivial_block[p..] {
            match enumerate_invariant_curves(&phi[i], &phi[j], curve_bound, cfg) {
                Ok(list) => curves.push(PairCatalog { i, j, curves: list }),
                Err(SkewError::NotTrivial { .. }) | Err(_) => {}
            }
        }
    }
    Ok(InvariantSkeleton {
        classes,
        linear_block,
        group_block,
        trivial_block,
        linear,
        linear_note,
        subtori,
        curves,
    })
}
