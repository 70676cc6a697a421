//! Values computed once by exhaustive search and frozen here.

use num_bigint::BigUint;
use prorigid::chevalley::{parabolic_order, ParabolicSpec, RootSubset};
use prorigid::oracle::square_roots_above;
use prorigid::ring_arith::{find_split_primes, hensel_lift_sqrt, splitting_type, Splitting};
use std::collections::BTreeSet;

#[test]
fn hensel_lifts_of_sqrt_two() {
    let table: [(u64, u64, [u64; 4]); 3] =
        [(7, 3, [3, 10, 108, 2166]), (17, 6, [6, 244, 4290, 43594]), (23, 5, [5, 373, 12011, 109347])];
    for (p, r, lifts) in table {
        for (e, &expected) in (1..=4).zip(&lifts) {
            let x = hensel_lift_sqrt(2, p, r, e).unwrap();
            assert_eq!(x, expected, "p={p} e={e}");
            assert_eq!(square_roots_above(2, p, r, e), vec![expected]);
        }
    }
}

#[test]
fn split_roots_for_method_c() {
    assert_eq!(splitting_type(7, 2).unwrap(), Splitting::Split { roots: (3, 4) });
    assert_eq!(splitting_type(17, 2).unwrap(), Splitting::Split { roots: (6, 11) });
    assert_eq!(splitting_type(5, 2).unwrap(), Splitting::Inert);
    let none = BTreeSet::new();
    assert_eq!(find_split_primes(2, 3, &none, None).unwrap(), vec![7, 17, 23]);
    assert_eq!(find_split_primes(1, 2, &none, Some((4, 1))).unwrap(), vec![5, 13]);
}

#[test]
fn sl4_parabolic_orders() {
    for (p, expected) in [(5u64, 186_000_000u64), (7, 11_587_955_904)] {
        for blocks in [[1, 3], [3, 1]] {
            let spec = ParabolicSpec::new(p, RootSubset::from_blocks(&blocks).unwrap()).unwrap();
            assert_eq!(parabolic_order(&spec), BigUint::from(expected));
        }
    }
}
