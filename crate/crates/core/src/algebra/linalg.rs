//! Exact linear algebra over K, over F_p, and integer kernels.

use num::{BigInt, Integer, Signed, Zero};

use super::field::FieldElem;
use super::modp::{invmod, mulmod, submod};

pub type Matrix = Vec<Vec<FieldElem>>;

/// In-place reduced row echelon form; returns pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, pr);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Basis of the right kernel {v : m v = 0}.
pub fn nullspace(m: &Matrix, cols: usize) -> Vec<Vec<FieldElem>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![FieldElem::zero(); cols];
            v[f] = FieldElem::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -&a[r][f];
            }
            v
        })
        .collect()
}

/// Some solution of m x = b, if consistent.
pub fn solve(m: &Matrix, b: &[FieldElem]) -> Option<Vec<FieldElem>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut aug: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![FieldElem::zero(); cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][cols].clone();
    }
    Some(x)
}

/// Rank modulo a prime p.
pub fn rank_mod(m: &[Vec<u64>], p: u64) -> usize {
    rref_mod(&mut m.to_vec(), p).len()
}

fn rref_mod(m: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m[i][c] % p != 0) else { continue };
        m.swap(r, pr);
        let inv = invmod(m[r][c], p).expect("unit");
        for v in m[r].iter_mut() {
            *v = mulmod(*v, inv, p);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in c..cols {
                    m[i][j] = submod(m[i][j], mulmod(f, m[r][j], p), p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Kernel basis modulo p.
pub fn nullspace_mod(m: &[Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut a = m.to_vec();
    let pivots = rref_mod(&mut a, p);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[r][f]) % p;
            }
            v
        })
        .collect()
}

/// Basis of the integer lattice {e in Z^r : sum_i e_i * rows_i = 0}, where `rows` has r
/// vectors of equal length. Computed by unimodular row reduction of [rows | I].
pub fn integer_kernel(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let r = rows.len();
    let c = rows.first().map_or(0, |v| v.len());
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut row = v.clone();
            row.extend((0..r).map(|j| BigInt::from((i == j) as i64)));
            row
        })
        .collect();
    let mut top = 0;
    for col in 0..c {
        // Euclid on column `col` among rows top..r
        loop {
            let nz: Vec<usize> = (top..r).filter(|&i| !a[i][col].is_zero()).collect();
            if nz.len() <= 1 {
                if let Some(&i) = nz.first() {
                    a.swap(top, i);
                    top += 1;
                }
                break;
            }
            let piv = *nz.iter().min_by_key(|&&i| a[i][col].abs()).expect("nonempty");
            for &i in &nz {
                if i != piv {
                    let q = a[i][col].div_floor(&a[piv][col]);
                    let prow = a[piv].clone();
                    for (x, y) in a[i].iter_mut().zip(prow.iter()) {
                        *x -= &q * y;
                    }
                }
            }
        }
        if top == r {
            break;
        }
    }
    a[top..].iter().map(|row| row[c..].to_vec()).collect()
}

/// Rank of an integer matrix (over Q).
pub fn integer_rank(rows: &[Vec<BigInt>]) -> usize {
    let m: Matrix = rows.iter().map(|r| r.iter().map(|v| FieldElem::from_bigint(v.clone())).collect()).collect();
    rank(&m)
}
