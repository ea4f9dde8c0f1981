//! Critical values: D(t) = Res_x(t - f(x), f'(x)) up to a unit, split over K.

use serde::Serialize;

use super::field::FieldElem;
use super::linalg::Matrix;
use super::poly::Poly;
use super::roots::roots_in_field;

/// Characteristic polynomial by reduction to Hessenberg form.
pub fn charpoly(m: &Matrix) -> Poly {
    let n = m.len();
    let mut h = m.clone();
    for c in 1..n {
        let Some(i) = (c..n).find(|&i| !h[i][c - 1].is_zero()) else { continue };
        if i != c {
            h.swap(i, c);
            for row in h.iter_mut() {
                row.swap(i, c);
            }
        }
        let inv = h[c][c - 1].inv().expect("nonzero");
        for j in c + 1..n {
            if h[j][c - 1].is_zero() {
                continue;
            }
            let u = &h[j][c - 1] * &inv;
            for k in 0..n {
                let t = &u * &h[c][k];
                h[j][k] -= &t;
            }
            for row in h.iter_mut() {
                let t = &u * &row[j];
                row[c] += &t;
            }
        }
    }
    let t = Poly::x();
    let mut ps: Vec<Poly> = vec![Poly::one()];
    for k in 0..n {
        let mut next = &(&t - &Poly::constant(h[k][k].clone())) * &ps[k];
        let mut prod = FieldElem::one();
        for i in (0..k).rev() {
            prod *= &h[i + 1][i];
            let coef = &prod * &h[i][k];
            if !coef.is_zero() {
                next = &next - &ps[i].scale(&coef);
            }
        }
        ps.push(next);
    }
    ps.pop().expect("nonempty")
}

/// Monic D(t): characteristic polynomial of multiplication by f on K[x]/(f').
/// Its roots are the f(beta) over critical points beta, counted with multiplicity.
pub fn critical_value_polynomial(f: &Poly) -> Poly {
    let g = f.derivative().monic();
    let n = g.degree();
    let fr = f.rem(&g);
    let mut mat: Matrix = vec![vec![FieldElem::zero(); n]; n];
    let mut col = fr.clone();
    for j in 0..n {
        for i in 0..n {
            mat[i][j] = col.coeff(i);
        }
        col = (&col * &Poly::x()).rem(&g);
    }
    charpoly(&mat)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalFactor {
    /// Monic factor of D(t) over K.
    pub factor: Poly,
    pub multiplicity: usize,
    /// The critical value when the factor is linear.
    pub value: Option<FieldElem>,
    /// True when the factor is linear or has degree at most 3 without roots in K.
    pub certified_irreducible: bool,
}

/// D(t) split into K-linear factors plus root-free cofactors, with multiplicities.
pub fn critical_values(f: &Poly, d: i64) -> Vec<CriticalFactor> {
    let dpoly = critical_value_polynomial(f);
    let mut out = Vec::new();
    for (part, m) in dpoly.squarefree_decomposition() {
        let mut rest = part.clone();
        for r in roots_in_field(&part, d) {
            let lin = Poly::linear(FieldElem::one(), -&r);
            rest = rest.div_exact(&lin).expect("root divides");
            out.push(CriticalFactor {
                factor: lin,
                multiplicity: m,
                value: Some(r),
                certified_irreducible: true,
            });
        }
        if !rest.is_constant() {
            let deg = rest.degree();
            out.push(CriticalFactor {
                factor: rest.monic(),
                multiplicity: m,
                value: None,
                certified_irreducible: deg <= 3,
            });
        }
    }
    out
}

/// Number of distinct critical values over the algebraic closure.
pub fn distinct_critical_value_count(f: &Poly) -> usize {
    critical_value_polynomial(f).squarefree_part().degree()
}
