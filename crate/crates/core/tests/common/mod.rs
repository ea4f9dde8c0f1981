//! Shared fixtures: a seeded corpus of composites of ritty factors.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rittkit::algebra::field::{FieldConfig, FieldElem};
use rittkit::algebra::poly::Poly;
use rittkit::decomp::compose_all;
use rittkit::ritty::chebyshev;

/// Product of factor degrees never exceeds this, which keeps exact decomposition fast.
pub const DEGREE_CAP: usize = 128;

pub fn q() -> FieldConfig {
    FieldConfig::rational()
}

pub fn p(s: &str) -> Poly {
    Poly::parse(s, &q()).unwrap_or_else(|e| panic!("{s}: {e:?}"))
}

pub fn pk(s: &str, cfg: &FieldConfig) -> Poly {
    Poly::parse(s, cfg).unwrap_or_else(|e| panic!("{s}: {e:?}"))
}

/// Indecomposable ritty factors of degree <= 8: prime monomials, odd Chebyshevs, x^2 - 2
/// and S-forms of prime degree.
pub fn factor_pool() -> Vec<Poly> {
    let mut pool: Vec<Poly> = ["x^2", "x^3", "x^5", "x^7"].iter().map(|s| p(s)).collect();
    for n in [2, 3, 5, 7] {
        pool.push(chebyshev(n).expect("chebyshev"));
    }
    for s in [
        "x*(x^2+1)",
        "x*(x+1)^2",
        "x^2*(x+1)",
        "x*(x^2+2)^2",
        "x^2*(x-1)^3",
        "x*(x^3+1)^2",
        "x*(x^2+1)^3",
        "x^3*(x^2+1)^2",
        "x*(x^2-3)",
        "x^2*(x^3+1)",
    ] {
        pool.push(p(s));
    }
    pool
}

/// Pool entries that swap past some monomial, so corpus swap graphs are not all trivial.
fn friendly_chain(rng: &mut ChaCha8Rng, k: usize) -> Vec<Poly> {
    let families: [&[&str]; 4] = [
        &["x^2", "x^3", "x^5", "x*(x^2+1)", "x*(x^3+1)^2", "x^2*(x+1)"],
        &["x^3", "x^2", "x*(x^2+1)^3", "x^5", "x^2*(x^3+1)"],
        &["x^2", "x^3", "x^2", "x^5", "x*(x^2+2)^2", "x^3*(x^2+1)^2"],
        &["C3", "C5", "C3", "x^2-2", "C7"],
    ];
    let fam = families.choose(rng).expect("nonempty");
    (0..k)
        .map(|_| {
            let s = *fam.choose(rng).expect("nonempty");
            match s {
                "C3" => chebyshev(3).expect("C3"),
                "C5" => chebyshev(5).expect("C5"),
                "C7" => chebyshev(7).expect("C7"),
                other => p(other),
            }
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    /// Outermost first.
    pub factors: Vec<Poly>,
    pub f: Poly,
}

/// Deterministic corpus of `n` composites of 2 to 4 ritty factors whose degree product stays
/// within `DEGREE_CAP`. Even entries come from swap-friendly families; odd ones mix the whole
/// pool with small translations between factors.
pub fn corpus(n: usize, seed: u64) -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = factor_pool();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let k = rng.gen_range(2..=4);
        let mut factors = if out.len() % 2 == 0 {
            friendly_chain(&mut rng, k)
        } else {
            (0..k).map(|_| pool.choose(&mut rng).expect("nonempty").clone()).collect()
        };
        if factors.iter().map(|f| f.degree()).product::<usize>() > DEGREE_CAP {
            continue;
        }
        if out.len() % 4 == 3 {
            let j = rng.gen_range(0..k);
            let c = FieldElem::from_int(rng.gen_range(-2..=2));
            factors[j] = factors[j].shift(&c);
        }
        let f = compose_all(&factors);
        out.push(CorpusEntry { factors, f });
    }
    out
}

pub fn factorial(k: usize) -> usize {
    (1..=k).product()
}
