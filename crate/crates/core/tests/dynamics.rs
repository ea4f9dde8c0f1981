mod common;

use std::collections::BTreeSet;

use common::{p, q};
use num::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rittkit::algebra::field::FieldElem;
use rittkit::algebra::parse::parse_elem;
use rittkit::frob::{
    hensel_fixed_points, lift_sharp_points, lift_sharp_points_twisted, periodic_capture_check, random_frobenius_lift,
    ZqContext, ZqElem,
};
use rittkit::orbits::{construct_dense_point, density_test, orbit, DensityVerdict, Mode, OrbitPoints};
use rittkit::product_invariants::{
    evaluate_relation, invariant_skeleton, multiplicative_relations, CoordVerdict,
};

fn pt(xs: &[i64]) -> Vec<FieldElem> {
    xs.iter().map(|&x| FieldElem::from_int(x)).collect()
}

#[test]
fn density_examples() {
    let phi = vec![p("2*x"), p("3*x")];
    let s = orbit(&phi, &pt(&[1, 1]), 20, Mode::Modular(1_000_003)).unwrap();
    assert_eq!(density_test(&s, 4).unwrap(), DensityVerdict::DenseUpTo { d: 4 });

    let phi = vec![p("2*x"), p("4*x")];
    let s = orbit(&phi, &pt(&[1, 1]), 12, Mode::Exact).unwrap();
    let DensityVerdict::ContainedIn { degree, monomials, kernel, certified, .. } = density_test(&s, 2).unwrap() else {
        panic!("(2x, 4y) orbit lies on y = x^2");
    };
    assert_eq!((degree, certified), (2, true));
    // the kernel polynomial vanishes on a much longer exact orbit
    let coeffs: Vec<FieldElem> = kernel.iter().map(|c| parse_elem(c, &q()).unwrap()).collect();
    let long = orbit(&phi, &pt(&[1, 1]), 40, Mode::Exact).unwrap();
    let OrbitPoints::Exact(points) = long.points else { unreachable!() };
    for x in points {
        let v = monomials.iter().zip(&coeffs).fold(FieldElem::zero(), |acc, (m, c)| {
            let term = m.iter().zip(&x).fold(c.clone(), |t, (&e, xi)| &t * &xi.pow(e as u64));
            &acc + &term
        });
        assert!(v.is_zero());
    }
}

#[test]
fn dense_point_for_quadratic_pair() {
    let phi = vec![p("x^2"), p("x^2-1")];
    let dp = construct_dense_point(&phi, &q()).unwrap();
    assert_eq!(dp.point, vec![FieldElem::from_int(3), FieldElem::frac(1, 5)]);
    let s = orbit(&phi, &dp.point, 30, Mode::Modular(1_000_000_007)).unwrap();
    assert_eq!(density_test(&s, 3).unwrap(), DensityVerdict::DenseUpTo { d: 3 });
}

#[test]
fn linear_skeletons() {
    let sk = invariant_skeleton(&[p("2*x"), p("3*x")], &q(), 2, 6).unwrap();
    let lin = sk.linear.unwrap();
    assert!(lin.characters.is_empty());
    assert_eq!(lin.hyperplanes, vec![0, 1]);
    let sk = invariant_skeleton(&[p("2*x"), p("4*x")], &q(), 2, 6).unwrap();
    let chars = sk.linear.unwrap().characters;
    assert_eq!(chars.len(), 1);
    assert_eq!(chars[0].exponents, vec![2, -1]);
}

#[test]
fn group_and_curve_blocks() {
    let sk = invariant_skeleton(&[p("x^2"), p("x^2")], &q(), 2, 4).unwrap();
    assert!(sk.classes.iter().all(|c| matches!(c.verdict, CoordVerdict::MonomialConjugate { n: 2 })));
    assert!(sk.subtori.iter().any(|s| s.exponents == vec![1, -1] && s.zeta.is_one()));
    let sk = invariant_skeleton(&[p("x*(1+x^3)^2"), p("x*(1+x^2)^3")], &q(), 3, 4).unwrap();
    let cusp = sk
        .curves
        .iter()
        .filter(|c| c.i != c.j)
        .flat_map(|c| c.curves.iter())
        .any(|c| c.implicit.as_deref() == Some("x^3 - y^2"));
    assert!(cusp);
}

fn r(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

#[test]
fn relation_lattice_against_box_search() {
    let gens = [r(-2), r(4), r(6), r(9)];
    let rel = multiplicative_relations(&gens).unwrap();
    // the generators span a rank-2 group inside <-1, 2, 3>
    assert_eq!((rel.rank, rel.lattice.len()), (2, 2));
    for v in &rel.lattice {
        assert_eq!(evaluate_relation(&gens, v), r(1));
    }
    // every relation in a box is an integer combination of the basis
    let span = |e: &[i64]| -> bool {
        (-6i64..=6).any(|a| (-6i64..=6).any(|b| (0..4).all(|i| a * rel.lattice[0][i] + b * rel.lattice[1][i] == e[i])))
    };
    for a in -2i64..=2 {
        for b in -2i64..=2 {
            for c in -2i64..=2 {
                for d in -2i64..=2 {
                    let e = [a, b, c, d];
                    if evaluate_relation(&gens, &e) == r(1) {
                        assert!(span(&e), "{e:?}");
                    }
                }
            }
        }
    }
}

/// Brute force over the whole ring: the solution set of f(x) = σ^j(x).
fn brute_force(ctx: &ZqContext, f: &[ZqElem], j: u32) -> BTreeSet<ZqElem> {
    (0..ctx.pm.pow(ctx.e as u32))
        .map(|mut code| {
            ZqElem(
                (0..ctx.e)
                    .map(|_| {
                        let c = code % ctx.pm;
                        code /= ctx.pm;
                        c
                    })
                    .collect(),
            )
        })
        .filter(|x| ctx.eval_poly(f, x) == ctx.frobenius_power(x, j as i64))
        .collect()
}

#[test]
fn frobenius_lifts_are_exact_and_complete() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (pr, e, m) in [(3, 1, 4), (5, 1, 3), (7, 1, 3), (2, 2, 4)] {
        let ctx = ZqContext::new(pr, e, m).unwrap();
        for _ in 0..3 {
            let f = random_frobenius_lift(&ctx, e as u32, &mut rng);
            let pts = lift_sharp_points(&ctx, &f).unwrap();
            assert_eq!(pts.len() as u64, ctx.q());
            let residues: BTreeSet<Vec<u64>> = pts.iter().map(|x| ctx.residue(x)).collect();
            assert_eq!(residues.len() as u64, ctx.q());
            for x in &pts {
                assert_eq!(ctx.eval_poly(&f, x), ctx.frobenius_power(x, e as i64));
            }
            if ctx.pm.pow(e as u32) <= 4096 {
                assert_eq!(brute_force(&ctx, &f, e as u32), pts.iter().cloned().collect());
            }
        }
    }
}

#[test]
fn twisted_lifts_over_an_extension() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let ctx = ZqContext::new(2, 2, 3).unwrap();
    for _ in 0..3 {
        let f = random_frobenius_lift(&ctx, 1, &mut rng);
        let pts = lift_sharp_points_twisted(&ctx, &f, 1).unwrap();
        assert_eq!(pts.len(), 4);
        for x in &pts {
            assert_eq!(ctx.eval_poly(&f, x), ctx.frobenius(x));
        }
        assert_eq!(brute_force(&ctx, &f, 1), pts.iter().cloned().collect());
    }
}

#[test]
fn teichmuller_and_capture() {
    let ctx = ZqContext::new(5, 1, 3).unwrap();
    let f = ctx.poly_from_rational(&p("x^5")).unwrap();
    let got: BTreeSet<u64> = lift_sharp_points(&ctx, &f).unwrap().iter().map(|x| x.0[0]).collect();
    assert_eq!(got, BTreeSet::from([0, 1, 57, 68, 124]));
    assert_eq!(hensel_fixed_points(5, 3, &p("x^5")).unwrap(), got.into_iter().collect::<Vec<_>>());
    for (pr, f, m) in [(3, "x^3+3*x", 2), (2, "x^2+2*x^3", 3), (5, "x^5+5", 2)] {
        let rep = periodic_capture_check(pr, &p(f), m, 4).unwrap();
        assert_eq!(rep.points as u64, (pr as u64).pow(m as u32));
        assert!(rep.violations.is_empty(), "{f}: {:?}", rep.violations);
    }
}

proptest! {
    #[test]
    fn frobenius_is_a_ring_automorphism(a0 in 0u64..81, a1 in 0u64..81, b0 in 0u64..81, b1 in 0u64..81) {
        let ctx = ZqContext::new(3, 2, 4).unwrap();
        let (a, b) = (ZqElem(vec![a0, a1]), ZqElem(vec![b0, b1]));
        prop_assert_eq!(ctx.frobenius(&ctx.mul(&a, &b)), ctx.mul(&ctx.frobenius(&a), &ctx.frobenius(&b)));
        prop_assert_eq!(ctx.frobenius(&ctx.add(&a, &b)), ctx.add(&ctx.frobenius(&a), &ctx.frobenius(&b)));
        prop_assert_eq!(ctx.frobenius_power(&a, 2), a.clone());
        // σ(a) ≡ a^p mod p
        prop_assert_eq!(ctx.residue(&ctx.frobenius(&a)), ctx.residue(&ctx.pow(&a, 3)));
        if let Some(inv) = ctx.inv(&a) {
            prop_assert_eq!(ctx.mul(&a, &inv), ctx.one());
        }
    }

    #[test]
    fn relations_evaluate_to_one(e in prop::collection::vec((-3i64..=3, -3i64..=3, prop::bool::ANY), 2..5)) {
        let e: Vec<(i64, i64, bool)> = e.into_iter().filter(|&(a, b, _)| (a, b) != (0, 0)).collect();
        let gens: Vec<BigRational> = e
            .iter()
            .map(|&(a, b, neg)| {
                let v = BigRational::new(2.into(), 1.into()).pow(a as i32) * BigRational::new(5.into(), 3.into()).pow(b as i32);
                if neg { -v } else { v }
            })
            .collect();
        prop_assume!(!gens.is_empty());
        let rel = multiplicative_relations(&gens).unwrap();
        let rows: Vec<(i64, i64)> = e.iter().map(|&(a, b, _)| (a, b)).collect();
        let exp_rank = if rows.is_empty() {
            0
        } else if rows.iter().all(|&(a, b)| a * rows[0].1 == b * rows[0].0) {
            1
        } else {
            2
        };
        prop_assert_eq!(rel.rank, exp_rank);
        prop_assert_eq!(rel.lattice.len(), gens.len() - exp_rank);
        for v in &rel.lattice {
            prop_assert_eq!(evaluate_relation(&gens, v), r(1));
        }
    }
}
