mod common;

use common::{corpus, factorial};
use rittkit::decomp::{complete_decomposition, enumerate_d_f, linear_equivalent, Decomposition};
use rittkit::swaps::{apply_positions, chebyclumps, odd_part, try_ritt_swap, SwapResult};

fn classes_of(f: &rittkit::algebra::poly::Poly) -> Vec<Decomposition> {
    enumerate_d_f(f).expect("corpus composites decompose").classes
}

#[test]
fn corpus_classes_are_bounded_and_connected() {
    for entry in corpus(60, 11) {
        let set = enumerate_d_f(&entry.f).unwrap();
        let k = set.classes[0].len();
        assert_eq!(k, entry.factors.len(), "{}", entry.f);
        assert!(set.classes.len() <= factorial(k));
        let dist = set.distances_from(0);
        assert!(dist.iter().all(|d| d.is_some_and(|d| d <= k * (k - 1) / 2)), "{}", entry.f);
        assert!(set.classes.iter().all(|d| d.len() == k && d.compose() == entry.f));
    }
}

#[test]
fn swap_is_an_involution_and_preserves_the_composite() {
    for entry in corpus(40, 12) {
        for d in classes_of(&entry.f) {
            for i in 1..d.len() {
                if let SwapResult::Swapped { decomposition, .. } = try_ritt_swap(&d, i) {
                    assert_eq!(decomposition.compose(), d.compose());
                    assert_eq!(try_ritt_swap(&decomposition, i).decomposition(), Some(&d), "t{i} on {d:?}");
                }
            }
        }
    }
}

#[test]
fn far_swaps_commute_and_braids_agree() {
    for entry in corpus(40, 13) {
        for d in classes_of(&entry.f) {
            let k = d.len();
            for i in 1..k {
                for j in i + 2..k {
                    assert_eq!(apply_positions(&d, &[i, j]), apply_positions(&d, &[j, i]));
                }
                if i + 1 < k {
                    let a = apply_positions(&d, &[i, i + 1, i]);
                    let b = apply_positions(&d, &[i + 1, i, i + 1]);
                    assert_eq!(a.is_defined(), b.is_defined(), "braid at {i} on {d:?}");
                    assert_eq!(a.decomposition(), b.decomposition());
                }
            }
        }
    }
}

#[test]
fn swap_output_is_not_linearly_equivalent_to_input() {
    for entry in corpus(30, 14) {
        let d = complete_decomposition(&entry.f).unwrap();
        for i in 1..d.len() {
            if let Some(out) = try_ritt_swap(&d, i).decomposition() {
                if d.degrees() == out.degrees() {
                    continue;
                }
                assert!(linear_equivalent(d.factors(), out.factors()).is_err());
            }
        }
    }
}

#[test]
fn chebyclump_odd_parts_survive_single_swaps() {
    let odd_parts = |d: &Decomposition| {
        let mut v: Vec<usize> =
            chebyclumps(d, 1).intervals.iter().map(|c| odd_part(d.compose_range(c.i, c.j).degree())).collect();
        v.sort();
        v
    };
    for entry in corpus(40, 15) {
        for d in classes_of(&entry.f) {
            for i in 1..d.len() {
                if let Some(out) = try_ritt_swap(&d, i).decomposition() {
                    assert_eq!(odd_parts(&d), odd_parts(out), "t{i} on {d:?}");
                }
            }
        }
    }
}
