mod common;

use std::sync::Arc;
use std::time::Instant;

use common::{naive_hom, naive_primes};
use gammalab_core::catalog::{
    b3, b3_unit_gamma, chain_conflation, small_modules, split_conflations, top_mono, z2_realization,
};
use gammalab_core::exact::{check_quillen_instance, pullback, pushout};
use gammalab_core::free::{check_representability, free_module};
use gammalab_core::hom::{check_hom_left_exact, check_tensor_right_exact};
use gammalab_core::ideal::prime_spectrum;
use gammalab_core::search::hom_set;
use gammalab_core::{Conflation, GammaSemiring, Limits, Module};

const BUDGET: u128 = 1 << 20;

fn conflations(s: &Arc<GammaSemiring>) -> Vec<(String, Conflation)> {
    let mut out = split_conflations(&small_modules(s, &[2], 4), 4).unwrap();
    if let Some(c) = chain_conflation(s, &[2]).unwrap() {
        out.push(("B >-> C3 ->> B".into(), c));
    }
    out
}

/// Left exactness at the first two spots, by naive enumeration.
fn naive_hom_left_exact(m: &Module, c: &Conflation) -> bool {
    let ha = naive_hom(m, &c.i.source);
    let hb = naive_hom(m, &c.i.target);
    let mut pushed: Vec<Vec<usize>> = ha.iter().map(|g| g.iter().map(|&x| c.i.map[x]).collect()).collect();
    let n = pushed.len();
    pushed.sort();
    pushed.dedup();
    let z = c.p.target.zero_element();
    let mut kernel: Vec<Vec<usize>> = hb.into_iter().filter(|g| g.iter().all(|&x| c.p.map[x] == z)).collect();
    kernel.sort();
    pushed.len() == n && pushed == kernel
}

#[test]
fn hom_and_tensor_sequences_are_exact() {
    let limits = Limits::default();
    let s = b3();
    let cs = conflations(&s);
    assert!(cs.len() >= 4);
    let ms = small_modules(&s, &[2], 4);
    let ns = small_modules(&s, &[3], 4);
    for (name, c) in &cs {
        for (mn, m) in &ms {
            let r = check_hom_left_exact(m, &c.i, &c.p, &limits).unwrap();
            assert_eq!(r.holds(), naive_hom_left_exact(m, c), "{} / {}", name, mn);
            assert!(r.holds(), "Hom({}, {}): {:?}", mn, name, r);
        }
        for (nn, n) in &ns {
            let r = check_tensor_right_exact(n, 3, &c.i, &c.p, 2, &limits).unwrap();
            assert!(r.holds(), "{} ⊗ {}: {:?}", name, nn, r);
        }
    }
}

#[test]
fn quillen_axioms_on_split_catalog() {
    let start = Instant::now();
    let limits = Limits::default();
    for s in [b3(), z2_realization()] {
        let mods = small_modules(&s, &[2], 4);
        let objects: Vec<Arc<Module>> = mods.iter().map(|(_, m)| m.clone()).collect();
        let splits: Vec<Conflation> = split_conflations(&mods, 4)
            .unwrap()
            .into_iter()
            .map(|(_, c)| c)
            .collect();
        let monos: Vec<_> = top_mono(&s, &[2]).unwrap().into_iter().collect();
        let r = check_quillen_instance(&splits, &objects, &monos, &limits).unwrap();
        assert!(r.holds(), "{:#?}", r.lines());
        assert!(r.e1.checked > 0 && r.e3_pushouts.checked > 0 && r.e3_pullbacks.checked > 0);
        assert_eq!(r.excluded.len(), monos.len());
    }
    assert!(start.elapsed().as_secs() < 60);
}

#[test]
fn composable_split_conflations_compose() {
    let s = b3();
    let b = small_modules(&s, &[2], 2)
        .into_iter()
        .find(|(n, _)| n == "B")
        .unwrap()
        .1;
    let bb = gammalab_core::ops::biproduct(&b, &b).unwrap().module;
    let family = [("B".to_string(), b), ("B+B".to_string(), bb)];
    let cs: Vec<Conflation> = split_conflations(&family, 8)
        .unwrap()
        .into_iter()
        .map(|(_, c)| c)
        .collect();
    let objects: Vec<Arc<Module>> = family.iter().map(|(_, m)| m.clone()).collect();
    let r = check_quillen_instance(&cs, &objects, &[], &Limits::default()).unwrap();
    assert!(r.holds(), "{:#?}", r.lines());
    assert!(r.e2_inflations.checked > 0 && r.e2_deflations.checked > 0);
}

#[test]
fn pushouts_and_pullbacks_are_universal() {
    let s = b3();
    let mods = small_modules(&s, &[2], 4);
    let tests: Vec<Arc<Module>> = mods.iter().map(|(_, m)| m.clone()).filter(|m| m.size() <= 3).collect();
    for (name, c) in conflations(&s) {
        for x in &tests {
            for f in hom_set(&c.i.source, x, BUDGET).unwrap() {
                let po = pushout(&c.i, &f).unwrap();
                assert!(po.inflation.is_ok(), "{}: {:?}", name, po.inflation);
                let u = po.check_universal(&c.i, &f, &tests, BUDGET).unwrap();
                assert!(u.passed(), "{} along {:?}: {:?}", name, f.map, u.failure);
            }
            for g in hom_set(x, &c.p.target, BUDGET).unwrap() {
                let pb = pullback(&c.p, &g).unwrap();
                assert!(pb.deflation.is_ok(), "{}: {:?}", name, pb.deflation);
                let u = pb.check_universal(&c.p, &g, &tests, BUDGET).unwrap();
                assert!(u.passed(), "{} along {:?}: {:?}", name, g.map, u.failure);
            }
        }
    }
}

#[test]
fn free_modules_represent_maps() {
    let limits = Limits::default();
    for s in [b3(), z2_realization()] {
        let targets = small_modules(&s, &[2], 4);
        for labels in [vec!["x".to_string()], vec!["x".into(), "y".into()]] {
            for depth in 1..=2 {
                let f = free_module(&labels, &s, 2, depth, None, &limits).unwrap();
                for (name, m) in &targets {
                    let r = check_representability(&f, m, BUDGET).unwrap();
                    assert!(r.holds(), "|X|={} d={} M={}: {:?}", labels.len(), depth, name, r);
                }
            }
        }
    }
}

#[test]
fn prime_spectra_match_naive_scan() {
    let limits = Limits::default();
    for (s, expected) in [
        (b3(), vec![]),
        (b3_unit_gamma(), vec![vec![0]]),
        (z2_realization(), naive_primes(&z2_realization())),
    ] {
        let engine: Vec<Vec<usize>> = prime_spectrum(&s, &limits)
            .unwrap()
            .iter()
            .map(|i| i.members())
            .collect();
        assert_eq!(engine, naive_primes(&s));
        assert_eq!(engine, expected);
    }
}
