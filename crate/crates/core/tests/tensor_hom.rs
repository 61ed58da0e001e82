mod common;

use std::sync::Arc;

use common::naive_tensor;
use gammalab_core::catalog::{b3, small_modules, z2_realization};
use gammalab_core::hom::{check_adjunction, internal_hom};
use gammalab_core::module::validate_morphism;
use gammalab_core::search::hom_set;
use gammalab_core::tensor::{multi_tensor, positional_tensor, Factor};
use gammalab_core::{GammaSemiring, Limits, Module, ModuleMorphism};

const BUDGET: u128 = 1 << 20;

fn nonzero(s: &Arc<GammaSemiring>, slots: &[usize]) -> Vec<(String, Arc<Module>)> {
    small_modules(s, slots, 4)
        .into_iter()
        .filter(|(_, m)| m.size() > 1)
        .collect()
}

#[test]
fn tensor_matches_partition_oracle() {
    let limits = Limits::default();
    let mut instances = 0;
    for s in [b3(), z2_realization()] {
        let lefts = small_modules(&s, &[2], 4);
        let rights = small_modules(&s, &[3], 4);
        let targets: Vec<Arc<Module>> = small_modules(&s, &[], 4).into_iter().map(|(_, m)| m).collect();
        for (mn, m) in &lefts {
            for (nn, n) in &rights {
                let Some(oracle) = naive_tensor(m, 2, n, 3) else {
                    continue;
                };
                let t = positional_tensor(m, 2, n, 3, &limits).unwrap();
                let module = t.module().unwrap();
                assert_eq!(module.size(), oracle.classes, "{} ⊗ {}", mn, nn);
                let engine: Vec<usize> = (0..m.size() * n.size())
                    .map(|x| t.factor(&[x / n.size(), x % n.size()]).unwrap())
                    .collect();
                assert_eq!(
                    common::canonical(&engine),
                    common::canonical(&oracle.pure),
                    "{} ⊗ {}",
                    mn,
                    nn
                );
                for x in &targets {
                    let u = t.check_universal(x, BUDGET).unwrap();
                    assert!(u.failure.is_none(), "{} ⊗ {}: {:?}", mn, nn, u.failure);
                    assert!(u.maps >= 1);
                }
                instances += 1;
            }
        }
    }
    assert!(instances >= 5, "{}", instances);
}

#[test]
fn three_factor_tensor_is_associative_in_size() {
    let s = b3();
    let limits = Limits::default();
    let l = Arc::new(Module::regular(s.clone(), &[2]).unwrap());
    let mid = Arc::new(Module::regular(s.clone(), &[2, 3]).unwrap());
    let r = Arc::new(Module::regular(s.clone(), &[3]).unwrap());
    let triple = multi_tensor(
        &[
            Factor {
                module: l.clone(),
                slot: 2,
            },
            Factor {
                module: mid.clone(),
                slot: 3,
            },
            Factor {
                module: r.clone(),
                slot: 3,
            },
        ],
        &limits,
    )
    .unwrap();
    assert_eq!(triple.module().unwrap().size(), 2);
}

#[test]
fn adjunction_on_catalog_triples() {
    let limits = Limits::default();
    let mut triples = 0;
    for s in [b3(), z2_realization()] {
        let ms = nonzero(&s, &[2, 3]);
        let ns = nonzero(&s, &[3]);
        let tests: Vec<Arc<Module>> = ns.iter().map(|(_, m)| m.clone()).collect();
        for (mn, m) in &ms {
            for (nn, n) in &ns {
                for (pn, p) in &ns {
                    let r = check_adjunction(m, 2, n, 3, p, &tests, &limits).unwrap();
                    assert!(r.holds(), "({}, {}, {}): {:?}", mn, nn, pn, r);
                    assert_eq!(r.lhs, r.rhs);
                    triples += 1;
                }
            }
        }
    }
    assert!(triples >= 10, "{}", triples);
}

#[test]
fn tensor_is_functorial_in_first_factor() {
    let limits = Limits::default();
    let s = b3();
    let ms = nonzero(&s, &[2]);
    let n = Arc::new(Module::regular(s.clone(), &[3]).unwrap());
    let id_n: Vec<usize> = (0..n.size()).collect();
    for (_, a) in &ms {
        for (_, b) in &ms {
            for (_, c) in &ms {
                let (ta, tb, tc) = (
                    positional_tensor(a, 2, &n, 3, &limits).unwrap(),
                    positional_tensor(b, 2, &n, 3, &limits).unwrap(),
                    positional_tensor(c, 2, &n, 3, &limits).unwrap(),
                );
                for f in hom_set(a, b, BUDGET).unwrap() {
                    let fa = ta.induced_map(&tb, &[&f.map, &id_n]).unwrap();
                    let fm =
                        ModuleMorphism::new(ta.module().unwrap().clone(), tb.module().unwrap().clone(), fa.clone())
                            .unwrap();
                    assert!(validate_morphism(&fm).unwrap().passed());
                    for g in hom_set(b, c, BUDGET).unwrap() {
                        let gb = tb.induced_map(&tc, &[&g.map, &id_n]).unwrap();
                        let gf = f.then(&g).unwrap();
                        let direct = ta.induced_map(&tc, &[&gf.map, &id_n]).unwrap();
                        let composed: Vec<usize> = fa.iter().map(|&x| gb[x]).collect();
                        assert_eq!(direct, composed);
                    }
                }
            }
        }
    }
}

#[test]
fn hom_is_functorial_in_first_variable() {
    let limits = Limits::default();
    let s = b3();
    let ms = nonzero(&s, &[2, 3]);
    let p = Arc::new(Module::regular(s.clone(), &[3]).unwrap());
    for (_, a) in &ms {
        for (_, b) in &ms {
            let ha = internal_hom(a, &p, 2, 3, &[], &limits).unwrap();
            let hb = internal_hom(b, &p, 2, 3, &[], &limits).unwrap();
            for f in hom_set(a, b, BUDGET).unwrap() {
                let map: Vec<usize> = hb
                    .maps
                    .iter()
                    .map(|h| {
                        let pre: Vec<usize> = f.map.iter().map(|&x| h[x]).collect();
                        ha.index_of(&pre).expect("precomposite is in Hom")
                    })
                    .collect();
                let hf = ModuleMorphism::new(hb.module.clone(), ha.module.clone(), map).unwrap();
                assert!(validate_morphism(&hf).unwrap().passed());
            }
        }
    }
}
