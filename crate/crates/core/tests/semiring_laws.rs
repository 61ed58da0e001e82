mod common;

use std::time::Instant;

use common::{naive_asymmetric, naive_semiring};
use gammalab_core::catalog::{b3, b3_unit_gamma, boolean_2x2, z2_realization};
use gammalab_core::{FiniteCommMonoid, GammaSemiring, Law};
use proptest::prelude::*;

fn engine_verdicts(s: &GammaSemiring) -> [bool; 3] {
    let r = s.validate();
    [Law::A1, Law::A2, Law::A3].map(|l| r.passed_law(l))
}

#[test]
fn catalog_semirings_pass_and_agree() {
    let all = [b3(), z2_realization(), b3_unit_gamma(), boolean_2x2()];
    let start = Instant::now();
    for s in &all {
        assert_eq!(engine_verdicts(s), [true; 3]);
    }
    assert!(start.elapsed().as_secs() < 10);
    for s in &all {
        assert_eq!(naive_semiring(s), [true; 3]);
    }
}

#[test]
fn two_by_two_is_not_symmetric() {
    let s = boolean_2x2();
    let w = s.find_asymmetry().expect("asymmetry witness");
    assert_eq!(s.replay(&w), Some(true));
    assert!(naive_asymmetric(&s));
    assert!(!naive_asymmetric(&b3()));
    assert!(b3().find_asymmetry().is_none());
}

#[test]
fn single_cell_mutations_are_caught() {
    let s = b3();
    let cases: [(&[usize], &[usize], Law); 3] = [
        (&[0, 0, 0], &[0, 0], Law::A1),
        (&[0, 1, 1], &[1, 1], Law::A2),
        (&[1, 1, 1], &[1, 0], Law::A3),
    ];
    for (xs, gs, law) in cases {
        let m = s.with_mu_entry(xs, gs, 1).unwrap();
        let report = m.validate();
        let w = report.failure(law).unwrap_or_else(|| panic!("{} not caught", law));
        assert_eq!(m.replay(w), Some(true));
        assert!(!naive_semiring(&m).iter().all(|&b| b));
    }
}

fn boolean_table() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..2, 32)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_boolean_tables_agree_with_naive(table in boolean_table()) {
        let s = GammaSemiring::from_table(FiniteCommMonoid::boolean(), FiniteCommMonoid::boolean(), 3, table).unwrap();
        prop_assert_eq!(engine_verdicts(&s), naive_semiring(&s));
    }

    #[test]
    fn random_mutations_of_b3_agree_with_naive(xs in prop::collection::vec(0usize..2, 3), gs in prop::collection::vec(0usize..2, 2)) {
        let s = b3();
        let v = 1 - s.mu(&xs, &gs);
        let m = s.with_mu_entry(&xs, &gs, v).unwrap();
        prop_assert_eq!(engine_verdicts(&m), naive_semiring(&m));
        if let Some(w) = m.validate().first_failure() {
            prop_assert_eq!(m.replay(w), Some(true));
        }
    }

    #[test]
    fn random_chain_tables_agree_with_naive(table in prop::collection::vec(0usize..3, 108)) {
        let s = GammaSemiring::from_table(FiniteCommMonoid::chain(3), FiniteCommMonoid::boolean(), 3, table).unwrap();
        prop_assert_eq!(engine_verdicts(&s), naive_semiring(&s));
    }
}
