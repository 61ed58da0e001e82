//! Conflations, pushouts and pullbacks, and instance checks of Quillen's
//! exact-category axioms.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::module::{validate_morphism, Module, ModuleMorphism};
use crate::ops::{biproduct, cokernel, kernel, module_congruence, quotient_module, submodule, UniversalCheck};
use crate::report::{Law, Witness};
use crate::search::hom_set;
use crate::semiring::Limits;

/// A certified kernel–cokernel pair `A ↣ B ↠ C`.
#[derive(Clone, Debug)]
pub struct Conflation {
    pub i: ModuleMorphism,
    pub p: ModuleMorphism,
}

fn rejected(message: &str, witness: Witness) -> Error {
    Error::Obstruction {
        message: message.to_string(),
        witness: Some(witness),
    }
}

fn composable(i: &ModuleMorphism, p: &ModuleMorphism) -> bool {
    Arc::ptr_eq(&i.target, &p.source) || i.target.same_structure(&p.source)
}

/// Certifies `(i, p)`: both are morphisms, `p∘i = 0`, `i` is injective
/// with image `ker p`, and `coker i → C` is bijective.
pub fn make_conflation(i: &ModuleMorphism, p: &ModuleMorphism) -> Result<Conflation> {
    if !composable(i, p) {
        return Err(Error::structural("inflation target differs from deflation source"));
    }
    for f in [i, p] {
        if let Some(w) = validate_morphism(f)?.first_failure() {
            return Err(Error::LawViolation(w.clone()));
        }
    }
    let cz = p.target.zero_element();
    if let Some(a) = (0..i.map.len()).find(|&a| p.map[i.map[a]] != cz) {
        return Err(rejected(
            "p∘i is not zero",
            Witness::new(Law::ZeroPreserved)
                .scalar("element", a)
                .sides(p.map[i.map[a]], cz),
        ));
    }
    let mut seen = vec![usize::MAX; i.target.size()];
    for (a, &b) in i.map.iter().enumerate() {
        if seen[b] != usize::MAX {
            return Err(rejected(
                "i is not injective",
                Witness::new(Law::Additive)
                    .field("elements", vec![seen[b], a])
                    .scalar("image", b),
            ));
        }
        seen[b] = a;
    }
    if let Some(b) = p.kernel_elements().into_iter().find(|&b| seen[b] == usize::MAX) {
        return Err(rejected(
            "ker p is larger than im i",
            Witness::new(Law::ZeroPreserved).scalar("element", b),
        ));
    }
    let c = cokernel(i)?;
    let mut comparison = vec![usize::MAX; c.module.size()];
    for b in 0..i.target.size() {
        let cls = c.projection.map[b];
        if comparison[cls] == usize::MAX {
            comparison[cls] = p.map[b];
        } else if comparison[cls] != p.map[b] {
            return Err(rejected(
                "p is not constant on cokernel classes",
                Witness::new(Law::Congruence)
                    .field("related", vec![c.module.zero_element(), b])
                    .sides(comparison[cls], p.map[b]),
            ));
        }
    }
    let mut hit = vec![false; p.target.size()];
    for &v in &comparison {
        if std::mem::replace(&mut hit[v], true) {
            return Err(rejected(
                "coker i → C is not injective",
                Witness::new(Law::Congruence).scalar("value", v),
            ));
        }
    }
    if let Some(v) = hit.iter().position(|&h| !h) {
        return Err(rejected(
            "coker i → C is not surjective",
            Witness::new(Law::Congruence).scalar("missed", v),
        ));
    }
    Ok(Conflation {
        i: i.clone(),
        p: p.clone(),
    })
}

/// `i` followed by its cokernel projection, certified.
pub fn complete_inflation(i: &ModuleMorphism) -> Result<Conflation> {
    let c = cokernel(i)?;
    make_conflation(i, &c.projection)
}

/// The kernel inclusion of `p` followed by `p`, certified.
pub fn complete_deflation(p: &ModuleMorphism) -> Result<Conflation> {
    let (_, incl) = kernel(p)?;
    make_conflation(&incl, p)
}

/// Whether `i` is the kernel of its own cokernel.
pub fn is_admissible_mono(i: &ModuleMorphism) -> Result<bool> {
    match complete_inflation(i) {
        Ok(_) => Ok(true),
        Err(Error::Obstruction { .. }) | Err(Error::LawViolation(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug)]
pub struct Pushout {
    pub module: Arc<Module>,
    /// `A′ → B′`.
    pub i_prime: ModuleMorphism,
    /// `B → B′`.
    pub f_prime: ModuleMorphism,
    /// The certified conflation extending `i_prime`, or why it fails.
    pub inflation: std::result::Result<Conflation, String>,
}

/// Pushout of `i: A → B` along `f: A → A′`.
pub fn pushout(i: &ModuleMorphism, f: &ModuleMorphism) -> Result<Pushout> {
    if !Arc::ptr_eq(&i.source, &f.source) && !i.source.same_structure(&f.source) {
        return Err(Error::structural("pushout legs have different sources"));
    }
    let (a2, b) = (&f.target, &i.target);
    let bp = biproduct(a2, b)?;
    let sb = b.size();
    let pairs: Vec<(usize, usize)> = (0..i.source.size())
        .map(|a| (f.map[a] * sb + b.zero_element(), a2.zero_element() * sb + i.map[a]))
        .collect();
    let cong = module_congruence(&bp.module, &pairs)?;
    let (module, q) = quotient_module(&bp.module, &cong)?;
    let i_prime = bp.inj1.then(&q)?;
    let f_prime = bp.inj2.then(&q)?;
    let inflation = complete_inflation(&i_prime).map_err(|e| e.to_string());
    Ok(Pushout {
        module,
        i_prime,
        f_prime,
        inflation,
    })
}

impl Pushout {
    /// Every cocone `(u: A′ → X, v: B → X)` with `u∘f = v∘i` factors
    /// through the pushout exactly once, for every `X` in `tests`.
    pub fn check_universal(
        &self,
        i: &ModuleMorphism,
        f: &ModuleMorphism,
        tests: &[Arc<Module>],
        budget: u128,
    ) -> Result<UniversalCheck> {
        let mut out = UniversalCheck::default();
        for x in tests {
            if x.slots() != self.module.slots() || !Arc::ptr_eq(x.parent(), self.module.parent()) {
                continue;
            }
            let us = hom_set(&f.target, x, budget)?;
            let vs = hom_set(&i.target, x, budget)?;
            let ws = hom_set(&self.module, x, budget)?;
            for u in &us {
                for v in &vs {
                    let commutes = (0..i.source.size()).all(|a| u.map[f.map[a]] == v.map[i.map[a]]);
                    if !commutes {
                        continue;
                    }
                    out.cases += 1;
                    let count = ws
                        .iter()
                        .filter(|w| {
                            self.i_prime.map.iter().map(|&y| w.map[y]).eq(u.map.iter().copied())
                                && self.f_prime.map.iter().map(|&y| w.map[y]).eq(v.map.iter().copied())
                        })
                        .count();
                    if count != 1 {
                        out.failure = Some(format!(
                            "cocone ({:?}, {:?}) has {} factorizations",
                            u.map, v.map, count
                        ));
                        return Ok(out);
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub struct Pullback {
    pub module: Arc<Module>,
    /// `B′ → C′`.
    pub p_prime: ModuleMorphism,
    /// `B′ → B`.
    pub g_prime: ModuleMorphism,
    pub deflation: std::result::Result<Conflation, String>,
}

/// Pullback of `p: B → C` along `g: C′ → C`.
pub fn pullback(p: &ModuleMorphism, g: &ModuleMorphism) -> Result<Pullback> {
    if !Arc::ptr_eq(&p.target, &g.target) && !p.target.same_structure(&g.target) {
        return Err(Error::structural("pullback legs have different targets"));
    }
    let (b, c2) = (&p.source, &g.source);
    let bp = biproduct(b, c2)?;
    let sc = c2.size();
    let elements: Vec<usize> = (0..b.size() * sc).filter(|&x| p.map[x / sc] == g.map[x % sc]).collect();
    let (module, incl) = submodule(&bp.module, &elements)?;
    let p_prime = incl.then(&bp.proj2)?;
    let g_prime = incl.then(&bp.proj1)?;
    let deflation = complete_deflation(&p_prime).map_err(|e| e.to_string());
    Ok(Pullback {
        module,
        p_prime,
        g_prime,
        deflation,
    })
}

impl Pullback {
    /// Every cone `(u: X → B, v: X → C′)` with `p∘u = g∘v` factors through
    /// the pullback exactly once, for every `X` in `tests`.
    pub fn check_universal(
        &self,
        p: &ModuleMorphism,
        g: &ModuleMorphism,
        tests: &[Arc<Module>],
        budget: u128,
    ) -> Result<UniversalCheck> {
        let mut out = UniversalCheck::default();
        for x in tests {
            if x.slots() != self.module.slots() || !Arc::ptr_eq(x.parent(), self.module.parent()) {
                continue;
            }
            let us = hom_set(x, &p.source, budget)?;
            let vs = hom_set(x, &g.source, budget)?;
            let ws = hom_set(x, &self.module, budget)?;
            for u in &us {
                for v in &vs {
                    if !(0..x.size()).all(|e| p.map[u.map[e]] == g.map[v.map[e]]) {
                        continue;
                    }
                    out.cases += 1;
                    let count = ws
                        .iter()
                        .filter(|w| {
                            w.map.iter().map(|&y| self.g_prime.map[y]).eq(u.map.iter().copied())
                                && w.map.iter().map(|&y| self.p_prime.map[y]).eq(v.map.iter().copied())
                        })
                        .count();
                    if count != 1 {
                        out.failure = Some(format!("cone ({:?}, {:?}) has {} factorizations", u.map, v.map, count));
                        return Ok(out);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Instances checked and passed for one axiom.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AxiomCount {
    pub checked: u64,
    pub passed: u64,
}

impl AxiomCount {
    fn record(&mut self, ok: bool) {
        self.checked += 1;
        self.passed += ok as u64;
    }

    pub fn holds(&self) -> bool {
        self.checked == self.passed
    }
}

#[derive(Clone, Debug, Default)]
pub struct QuillenReport {
    /// Identity conflations `0 ↣ X ↠ X` and `X ↣ X ↠ 0`.
    pub e1: AxiomCount,
    pub e2_inflations: AxiomCount,
    pub e2_deflations: AxiomCount,
    pub e3_pushouts: AxiomCount,
    pub e3_pullbacks: AxiomCount,
    /// Monomorphisms that are not kernels, excluded from the class.
    pub excluded: Vec<String>,
    pub counterexamples: Vec<String>,
}

impl QuillenReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
            && [
                self.e1,
                self.e2_inflations,
                self.e2_deflations,
                self.e3_pushouts,
                self.e3_pullbacks,
            ]
            .iter()
            .all(AxiomCount::holds)
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, c) in [
            ("E1 identities", self.e1),
            ("E2 inflations compose", self.e2_inflations),
            ("E2 deflations compose", self.e2_deflations),
            ("E3 pushouts of inflations", self.e3_pushouts),
            ("E3 pullbacks of deflations", self.e3_pullbacks),
        ] {
            out.push(format!("{}: {}/{}", name, c.passed, c.checked));
        }
        for e in &self.excluded {
            out.push(format!("not admissible, excluded: {}", e));
        }
        for c in &self.counterexamples {
            out.push(format!("counterexample: {}", c));
        }
        out
    }
}

/// Checks E1 on `objects`, E2 on composable pairs of `conflations`, and E3
/// along every morphism between the conflations and `objects`. Entries of
/// `monos` that are not kernels are listed as excluded.
pub fn check_quillen_instance(
    conflations: &[Conflation],
    objects: &[Arc<Module>],
    monos: &[ModuleMorphism],
    limits: &Limits,
) -> Result<QuillenReport> {
    let budget = limits.max_hom_enumeration;
    let mut r = QuillenReport::default();
    for (xi, x) in objects.iter().enumerate() {
        let zero = Arc::new(Module::zero(x.parent().clone(), &x.slots())?);
        let id = ModuleMorphism::identity(x);
        let into = ModuleMorphism::zero(&zero, x)?;
        let onto = ModuleMorphism::zero(x, &zero)?;
        for (name, c) in [
            ("0 ↣ X ↠ X", make_conflation(&into, &id)),
            ("X ↣ X ↠ 0", make_conflation(&id, &onto)),
        ] {
            r.e1.record(c.is_ok());
            if let Err(e) = c {
                r.counterexamples.push(format!("E1 object {} {}: {}", xi, name, e));
            }
        }
    }
    for (a, c1) in conflations.iter().enumerate() {
        for (b, c2) in conflations.iter().enumerate() {
            if composable(&c1.i, &c2.i) {
                let ok = complete_inflation(&c1.i.then(&c2.i)?);
                r.e2_inflations.record(ok.is_ok());
                if let Err(e) = ok {
                    r.counterexamples.push(format!("E2 inflations {}·{}: {}", a, b, e));
                }
            }
            if composable(&c1.p, &c2.p) {
                let ok = complete_deflation(&c1.p.then(&c2.p)?);
                r.e2_deflations.record(ok.is_ok());
                if let Err(e) = ok {
                    r.counterexamples.push(format!("E2 deflations {}·{}: {}", a, b, e));
                }
            }
        }
    }
    for (ci, c) in conflations.iter().enumerate() {
        for x in objects {
            if x.slots() != c.i.source.slots() || !Arc::ptr_eq(x.parent(), c.i.source.parent()) {
                continue;
            }
            for f in hom_set(&c.i.source, x, budget)? {
                let po = pushout(&c.i, &f)?;
                r.e3_pushouts.record(po.inflation.is_ok());
                if let Err(e) = po.inflation {
                    r.counterexamples
                        .push(format!("E3 pushout of {} along {:?}: {}", ci, f.map, e));
                }
            }
            for g in hom_set(x, &c.p.target, budget)? {
                let pb = pullback(&c.p, &g)?;
                r.e3_pullbacks.record(pb.deflation.is_ok());
                if let Err(e) = pb.deflation {
                    r.counterexamples
                        .push(format!("E3 pullback of {} along {:?}: {}", ci, g.map, e));
                }
            }
        }
    }
    for (mi, m) in monos.iter().enumerate() {
        if !is_admissible_mono(m)? {
            r.excluded.push(format!("mono {} {:?}", mi, m.map));
        }
    }
    Ok(r)
}
