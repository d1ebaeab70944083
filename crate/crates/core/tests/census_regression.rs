//! Regression baselines for the enumerator: frozen subgroup counts for
//! the standard sweep and a golden snapshot of one census.

use ellgal::census::{enumerate_subgroups, write_snapshot};
use ellgal::torsion::LatticeClass;

const GOLDEN_SQUARE_2: &str = include_str!("data/census_square_2.txt");

#[test]
fn subgroup_counts_are_stable() {
    let expected: &[(LatticeClass, u32, usize)] = &[
        (LatticeClass::Generic, 1, 2),
        (LatticeClass::Generic, 2, 16),
        (LatticeClass::Generic, 3, 28),
        (LatticeClass::Generic, 4, 90),
        (LatticeClass::Square, 1, 3),
        (LatticeClass::Square, 2, 23),
        (LatticeClass::Square, 3, 38),
        (LatticeClass::Square, 4, 121),
        (LatticeClass::Hexagonal, 1, 4),
        (LatticeClass::Hexagonal, 2, 26),
        (LatticeClass::Hexagonal, 3, 54),
    ];
    for &(lattice, n, count) in expected {
        let result = enumerate_subgroups(lattice, n).unwrap();
        assert_eq!(
            result.subgroups.len(),
            count,
            "subgroup count changed for {lattice} N={n}"
        );
    }
}

#[test]
fn square_two_torsion_snapshot_matches_golden() {
    let result = enumerate_subgroups(LatticeClass::Square, 2).unwrap();
    assert_eq!(write_snapshot(&result), GOLDEN_SQUARE_2);
}

#[test]
fn hand_counted_label_multiset_for_generic_three_torsion() {
    // E[3] x| {+-1}: 6 translation subgroups (trivial, four Z3 lines, all
    // of E[3]) and 22 subgroups containing a point reflection.
    let result = enumerate_subgroups(LatticeClass::Generic, 3).unwrap();
    let census = &result.label_census;
    assert_eq!(census.get("Z1"), Some(&1));
    assert_eq!(census.get("Z3"), Some(&4));
    assert_eq!(census.get("Z3^2"), Some(&1));
    assert_eq!(census.get("Z2"), Some(&9));
    assert_eq!(census.get("D3"), Some(&12));
    // the full ambient group (Z3 + Z3) x| inversion
    assert_eq!(census.get("BD(3,3)"), Some(&1));
    assert_eq!(census.values().sum::<usize>(), 28);
}
