mod common;

use std::sync::Arc;

use common::{brute_smallest_congruence, canonical, matrix_congruence, naive_hom};
use gammalab_core::catalog::{b3, small_modules, z2_realization};
use gammalab_core::module::validate_module;
use gammalab_core::monoid::congruence_closure;
use gammalab_core::ops::{biproduct, check_cokernel_universal, check_kernel_universal, cokernel, kernel};
use gammalab_core::search::hom_set;
use gammalab_core::{FiniteCommMonoid, Law, Module};
use proptest::prelude::*;

const BUDGET: u128 = 1 << 20;

fn catalogs() -> Vec<Vec<(String, Arc<Module>)>> {
    vec![small_modules(&b3(), &[2], 4), small_modules(&z2_realization(), &[3], 4)]
}

#[test]
fn catalog_is_large_enough() {
    let total: usize = catalogs().iter().map(|c| c.len()).sum();
    assert!(total >= 6);
    for cat in catalogs() {
        for (name, m) in &cat {
            assert!(m.size() <= 4, "{}", name);
            assert!(validate_module(m).passed(), "{}", name);
        }
    }
}

#[test]
fn hom_sets_match_naive_enumeration() {
    for cat in catalogs() {
        for (_, a) in &cat {
            for (_, b) in &cat {
                let mut engine: Vec<Vec<usize>> = hom_set(a, b, BUDGET).unwrap().into_iter().map(|f| f.map).collect();
                engine.sort();
                let mut naive = naive_hom(a, b);
                naive.sort();
                assert_eq!(engine, naive);
            }
        }
    }
}

#[test]
fn kernels_and_cokernels_are_universal() {
    let mut cases = 0;
    for cat in catalogs() {
        let tests: Vec<Arc<Module>> = cat.iter().map(|(_, m)| m.clone()).collect();
        for (an, a) in &cat {
            for (bn, b) in &cat {
                for f in hom_set(a, b, BUDGET).unwrap() {
                    let (_, incl) = kernel(&f).unwrap();
                    let k = check_kernel_universal(&f, &incl, &tests, BUDGET).unwrap();
                    assert!(k.passed(), "kernel of {:?}: {}->{}: {:?}", f.map, an, bn, k.failure);
                    let c = cokernel(&f).unwrap();
                    let u = check_cokernel_universal(&f, &c.projection, &tests, BUDGET).unwrap();
                    assert!(u.passed(), "cokernel of {:?}: {}->{}: {:?}", f.map, an, bn, u.failure);
                    let pairs: Vec<(usize, usize)> = f.image().into_iter().map(|y| (y, b.zero_element())).collect();
                    assert_eq!(canonical(&c.projection.map), brute_smallest_congruence(b, &pairs));
                    cases += 1;
                }
            }
        }
    }
    assert!(cases > 20);
}

#[test]
fn coset_description_differs_on_chain() {
    let s = b3();
    let cat = small_modules(&s, &[2], 4);
    let b = &cat.iter().find(|(n, _)| n == "B").unwrap().1;
    let c3 = &cat.iter().find(|(n, _)| n == "C3").unwrap().1;
    let f = gammalab_core::ModuleMorphism::new(b.clone(), c3.clone(), vec![0, 1]).unwrap();
    let c = cokernel(&f).unwrap();
    assert_eq!(c.module.size(), 2);
    assert!(!c.coset_description_agrees);
}

#[test]
fn biproduct_identities_on_all_pairs() {
    for cat in catalogs() {
        for (_, a) in &cat {
            for (_, b) in &cat {
                let bp = biproduct(a, b).unwrap();
                assert!(validate_module(&bp.module).passed());
                for (name, ok) in bp.identities().unwrap() {
                    assert!(ok, "{}", name);
                }
            }
        }
    }
}

#[test]
fn module_mutations_are_caught() {
    let s = b3();
    let r = Module::regular(s.clone(), &[3]).unwrap();
    let ctx = |ts: [usize; 2], gs: [usize; 2]| s.encode_context(&ts, &gs);
    let cases = [
        (ctx([0, 0], [0, 0]), 0, Law::M1),
        (ctx([0, 1], [1, 1]), 1, Law::M3),
        (ctx([1, 1], [0, 0]), 1, Law::M4),
        (ctx([1, 1], [1, 1]), 0, Law::M2),
    ];
    for (c, m, law) in cases {
        let bad = r.with_action_entry(3, c, m, 1).unwrap();
        let report = validate_module(&bad);
        let w = report.failure(law).unwrap_or_else(|| panic!("{} not caught", law));
        assert_eq!(gammalab_core::module::replay_module_witness(&bad, w), Some(true));
    }
}

fn small_monoid() -> impl Strategy<Value = FiniteCommMonoid> {
    prop_oneof![
        Just(FiniteCommMonoid::boolean()),
        Just(FiniteCommMonoid::z2()),
        (1usize..6).prop_map(FiniteCommMonoid::chain),
        (1usize..6).prop_map(FiniteCommMonoid::cyclic),
        Just(FiniteCommMonoid::boolean().product(&FiniteCommMonoid::chain(3))),
    ]
}

proptest! {
    #[test]
    fn closure_matches_matrix_fixpoint(
        m in small_monoid(),
        raw in prop::collection::vec((0usize..64, 0usize..64), 0..4),
    ) {
        let n = m.size();
        let pairs: Vec<(usize, usize)> = raw.iter().map(|&(a, b)| (a % n, b % n)).collect();
        let engine = congruence_closure(&m, &pairs).unwrap();
        let oracle = matrix_congruence(n, |a, b| m.add(a, b), &pairs);
        prop_assert_eq!(canonical(engine.classes()), oracle);
    }

    #[test]
    fn composites_of_morphisms_are_morphisms(seed in 0usize..1000) {
        let cat = small_modules(&b3(), &[2], 4);
        let pick = |k: usize| &cat[k % cat.len()].1;
        let (a, b, c) = (pick(seed), pick(seed / 7), pick(seed / 49));
        let fs = hom_set(a, b, BUDGET).unwrap();
        let gs = hom_set(b, c, BUDGET).unwrap();
        let f = &fs[seed % fs.len()];
        let g = &gs[(seed / 3) % gs.len()];
        let h = f.then(g).unwrap();
        prop_assert!(gammalab_core::module::validate_morphism(&h).unwrap().passed());
        let sum = h.plus(&h).unwrap();
        prop_assert!(gammalab_core::module::validate_morphism(&sum).unwrap().passed());
    }
}
