//! Bounded free modules on a label set, their universal property, and
//! evaluation of terms in a target module.

use std::collections::HashMap;
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::module::{admissible_blocks, bracket_value, Module, Structure};
use crate::monoid::{bounded_term_universe, Closure, CongruenceRelation, FiniteCommMonoid, TermUniverse};
use crate::report::{AxiomReport, Law, LawScan, Witness};
use crate::search::morphism_solver;
use crate::semiring::{GammaSemiring, Limits};
use crate::tuple::for_each_uniform;

/// A generator wrapped by a word of contexts, outermost first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimitiveTerm {
    pub generator: usize,
    pub contexts: Vec<usize>,
}

/// Whether every cell of the bounded structure is defined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FreeStatus {
    Complete,
    Partial { undefined_cells: usize },
}

/// The free module truncated at a context depth, as a partial structure
/// on congruence classes of formal sums.
#[derive(Clone, Debug)]
pub struct FreeModuleBounded {
    parent: Arc<GammaSemiring>,
    slot: usize,
    labels: Vec<String>,
    depth: usize,
    primitives: Vec<PrimitiveTerm>,
    universe: TermUniverse,
    relation: CongruenceRelation,
    add: Vec<Option<usize>>,
    act: Vec<Option<usize>>,
    status: FreeStatus,
}

struct Raw<'a> {
    parent: &'a Arc<GammaSemiring>,
    slot: usize,
    universe: &'a TermUniverse,
    act: Vec<Option<usize>>,
}

impl Structure for Raw<'_> {
    fn parent(&self) -> &Arc<GammaSemiring> {
        self.parent
    }
    fn size(&self) -> usize {
        self.universe.len()
    }
    fn zero(&self) -> usize {
        0
    }
    fn add(&self, a: usize, b: usize) -> Option<usize> {
        self.universe.add(a, b)
    }
    fn slots(&self) -> Vec<usize> {
        vec![self.slot]
    }
    fn act(&self, _: usize, ctx: usize, m: usize) -> Option<usize> {
        self.act[ctx * self.universe.len() + m]
    }
}

/// Builds the bounded free module on `labels` at `slot` with context words
/// of length below `depth`. Sums are sets when T is idempotent and
/// multisets of at most `sum_bound` terms otherwise.
pub fn free_module(
    labels: &[String],
    parent: &Arc<GammaSemiring>,
    slot: usize,
    depth: usize,
    sum_bound: Option<usize>,
    limits: &Limits,
) -> Result<FreeModuleBounded> {
    let n = parent.arity();
    if slot == 0 || slot > n {
        return Err(Error::structural(format!("slot {} out of range 1..={}", slot, n)));
    }
    if depth == 0 {
        return Err(Error::structural("depth must be at least 1"));
    }
    let cc = parent.context_count();
    let tz = parent.t().zero();
    let mut ts = vec![0; n - 1];
    let mut gs = vec![0; n - 1];
    let live: Vec<usize> = (0..cc)
        .filter(|&c| {
            parent.decode_context(c, &mut ts, &mut gs);
            ts.iter().all(|&t| t != tz)
        })
        .collect();

    let mut primitives = Vec::new();
    for g in 0..labels.len() {
        let mut layer = vec![Vec::new()];
        for len in 0..depth {
            for w in &layer {
                primitives.push(PrimitiveTerm {
                    generator: g,
                    contexts: w.clone(),
                });
            }
            if len + 1 < depth {
                layer = layer
                    .iter()
                    .flat_map(|w| {
                        live.iter().map(move |&c| {
                            let mut v = vec![c];
                            v.extend_from_slice(w);
                            v
                        })
                    })
                    .collect();
                if primitives.len() + layer.len() > limits.max_tensor_classes {
                    return Err(Error::limit(
                        "free module primitive terms",
                        (primitives.len() + layer.len()) as u128,
                        limits.max_tensor_classes as u128,
                    ));
                }
            }
        }
    }
    let index: HashMap<PrimitiveTerm, usize> = primitives.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();

    let idempotent = parent.t().is_idempotent();
    let bound = if idempotent {
        primitives.len().max(1)
    } else {
        sum_bound.unwrap_or(2).max(1)
    };
    if idempotent {
        let required = crate::tuple::pow_u128(2, primitives.len());
        if required > limits.max_tensor_classes as u128 {
            return Err(Error::limit(
                "free module sums",
                required,
                limits.max_tensor_classes as u128,
            ));
        }
    }
    let universe = bounded_term_universe(primitives.len(), bound, idempotent, limits.max_tensor_classes)?;
    let u = universe.len();

    // Action on formal sums: prepend the context to every summand.
    let mut act = vec![None; cc * u];
    for c in 0..cc {
        parent.decode_context(c, &mut ts, &mut gs);
        let killing = ts.contains(&tz);
        for e in 0..u {
            let mut counts = vec![0u32; primitives.len()];
            let mut ok = true;
            if !killing {
                for (pi, &k) in universe.counts(e).iter().enumerate() {
                    if k == 0 {
                        continue;
                    }
                    let p = &primitives[pi];
                    let mut w = vec![c];
                    w.extend_from_slice(&p.contexts);
                    match index.get(&PrimitiveTerm {
                        generator: p.generator,
                        contexts: w,
                    }) {
                        Some(&q) => {
                            counts[q] = if idempotent { 1 } else { counts[q] + k };
                        }
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
            }
            act[c * u + e] = if ok { universe.index_of(&counts) } else { None };
        }
    }
    let raw = Raw {
        parent,
        slot,
        universe: &universe,
        act,
    };

    let seeds = relation_seeds(&raw, &primitives, &universe);
    let add_fn = |a: usize, b: usize| universe.add(a, b);
    let op_fn = |o: usize, x: usize| raw.act[o * u + x];
    let relation = Closure {
        size: u,
        add: &add_fn,
        op_count: cc,
        op: &op_fn,
    }
    .run(&seeds)
    .relation;

    let k = relation.class_count();
    let reps = relation.representatives().to_vec();
    let mut undefined = 0;
    let mut add = Vec::with_capacity(k * k);
    for &a in &reps {
        for &b in &reps {
            let v = universe.add(a, b).map(|s| relation.class_of(s));
            undefined += v.is_none() as usize;
            add.push(v);
        }
    }
    let mut cls_act = Vec::with_capacity(cc * k);
    for c in 0..cc {
        for &r in &reps {
            let v = raw.act[c * u + r].map(|s| relation.class_of(s));
            undefined += v.is_none() as usize;
            cls_act.push(v);
        }
    }
    let status = if undefined == 0 {
        FreeStatus::Complete
    } else {
        FreeStatus::Partial {
            undefined_cells: undefined,
        }
    };
    Ok(FreeModuleBounded {
        parent: parent.clone(),
        slot,
        labels: labels.to_vec(),
        depth,
        primitives,
        universe,
        relation,
        add,
        act: cls_act,
        status,
    })
}

/// Instances of M1 in the T-slots, M4 and M2 on every primitive term,
/// whenever all cells involved are defined.
fn relation_seeds(raw: &Raw, primitives: &[PrimitiveTerm], universe: &TermUniverse) -> Vec<(usize, usize)> {
    let p = raw.parent;
    let n = p.arity();
    let slot = raw.slot;
    let mut seeds = Vec::new();
    let singles: Vec<usize> = (0..primitives.len())
        .map(|i| {
            let mut v = vec![0u32; primitives.len()];
            v[i] = 1;
            universe.index_of(&v).expect("single terms are in the universe")
        })
        .collect();
    let mut ts = vec![0; n - 1];
    let mut gs = vec![0; n - 1];
    let t = p.t();
    let g = p.gamma();
    for &e in &singles {
        for c in 0..p.context_count() {
            p.decode_context(c, &mut ts, &mut gs);
            for i in 0..n - 1 {
                let orig = ts[i];
                for a in 0..t.size() {
                    for b in 0..t.size() {
                        ts[i] = t.add(a, b);
                        let l = raw.act(slot, p.encode_context(&ts, &gs), e);
                        ts[i] = a;
                        let va = raw.act(slot, p.encode_context(&ts, &gs), e);
                        ts[i] = b;
                        let vb = raw.act(slot, p.encode_context(&ts, &gs), e);
                        if let (Some(l), Some(r)) = (l, va.zip(vb).and_then(|(x, y)| raw.add(x, y))) {
                            if l != r {
                                seeds.push((l, r));
                            }
                        }
                    }
                }
                ts[i] = orig;
                let orig = gs[i];
                for a in 0..g.size() {
                    for b in 0..g.size() {
                        gs[i] = g.add(a, b);
                        let l = raw.act(slot, p.encode_context(&ts, &gs), e);
                        gs[i] = a;
                        let va = raw.act(slot, p.encode_context(&ts, &gs), e);
                        gs[i] = b;
                        let vb = raw.act(slot, p.encode_context(&ts, &gs), e);
                        if let (Some(l), Some(r)) = (l, va.zip(vb).and_then(|(x, y)| raw.add(x, y))) {
                            if l != r {
                                seeds.push((l, r));
                            }
                        }
                    }
                }
                gs[i] = orig;
            }
        }
        for q in 0..2 * n - 1 {
            let blocks = admissible_blocks(n, slot, q);
            if blocks.len() < 2 {
                continue;
            }
            let _ = for_each_uniform(t.size(), 2 * n - 2, |rest| {
                let mut word = Vec::with_capacity(2 * n - 1);
                word.extend_from_slice(&rest[..q]);
                word.push(0);
                word.extend_from_slice(&rest[q..]);
                for_each_uniform(g.size(), 2 * n - 2, |params| {
                    let first = bracket_value(raw, slot, &word, params, q, e, blocks[0]);
                    for &b in &blocks[1..] {
                        let v = bracket_value(raw, slot, &word, params, q, e, b);
                        if let (Some(x), Some(y)) = (first, v) {
                            if x != y {
                                seeds.push((x, y));
                            }
                        }
                    }
                    ControlFlow::Continue(())
                })
            });
        }
    }
    seeds
}

impl FreeModuleBounded {
    pub fn parent(&self) -> &Arc<GammaSemiring> {
        &self.parent
    }

    pub fn slot(&self) -> usize {
        self.slot
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn status(&self) -> FreeStatus {
        self.status
    }

    pub fn len(&self) -> usize {
        self.relation.class_count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn primitives(&self) -> &[PrimitiveTerm] {
        &self.primitives
    }

    /// Class of the insertion `⟨x⟩`.
    pub fn generator(&self, g: usize) -> usize {
        let i = self
            .primitives
            .iter()
            .position(|p| p.generator == g && p.contexts.is_empty())
            .expect("generator in range");
        let mut v = vec![0u32; self.primitives.len()];
        v[i] = 1;
        self.relation.class_of(self.universe.index_of(&v).unwrap())
    }

    /// Class of a primitive term.
    pub fn primitive_class(&self, p: &PrimitiveTerm) -> Option<usize> {
        let i = self.primitives.iter().position(|q| q == p)?;
        let mut v = vec![0u32; self.primitives.len()];
        v[i] = 1;
        Some(self.relation.class_of(self.universe.index_of(&v)?))
    }

    /// Formal sums (as coefficient vectors over primitives) in a class.
    pub fn class_members(&self, class: usize) -> Vec<&[u32]> {
        self.relation
            .members(class)
            .into_iter()
            .map(|e| self.universe.counts(e))
            .collect()
    }

    /// Renders a primitive term, e.g. `[1,⟨x⟩,1]_{1,1}`.
    pub fn display_primitive(&self, p: &PrimitiveTerm) -> String {
        let n = self.parent.arity();
        let mut ts = vec![0; n - 1];
        let mut gs = vec![0; n - 1];
        let mut s = format!("⟨{}⟩", self.labels[p.generator]);
        for &c in p.contexts.iter().rev() {
            self.parent.decode_context(c, &mut ts, &mut gs);
            let mut args: Vec<String> = ts.iter().map(|&t| self.parent.t().label(t)).collect();
            args.insert(self.slot - 1, s);
            let params: Vec<String> = gs.iter().map(|&g| self.parent.gamma().label(g)).collect();
            s = format!("[{}]_{{{}}}", args.join(","), params.join(","));
        }
        s
    }

    /// Renders the representative of a class.
    pub fn display(&self, class: usize) -> String {
        let names: Vec<String> = self.primitives.iter().map(|p| self.display_primitive(p)).collect();
        self.universe.display(self.relation.representative(class), &names)
    }

    /// The structure as a module when every cell is defined.
    pub fn to_module(&self) -> Result<Module> {
        if self.status != FreeStatus::Complete {
            return Err(Error::BoundExceeded(format!(
                "free module has undefined cells: {:?}",
                self.status
            )));
        }
        let k = self.len();
        let table: Vec<usize> = self.add.iter().map(|v| v.unwrap()).collect();
        let carrier = FiniteCommMonoid::new(k, table, self.relation.class_of(0))?
            .with_labels((0..k).map(|c| self.display(c)).collect())?;
        let act: Vec<usize> = self.act.iter().map(|v| v.unwrap()).collect();
        Module::new(
            self.parent.clone(),
            carrier,
            vec![crate::module::SlotAction {
                slot: self.slot,
                table: act,
            }],
        )
    }

    /// Value in `target` of a formal sum under generator values `phi`.
    fn eval_sum(&self, target: &Module, phi: &[usize], e: usize) -> usize {
        let mut acc = target.zero_element();
        for (pi, &k) in self.universe.counts(e).iter().enumerate() {
            let p = &self.primitives[pi];
            let mut v = phi[p.generator];
            for &c in p.contexts.iter().rev() {
                v = target.act(self.slot, c, v);
            }
            for _ in 0..k {
                acc = target.carrier().add(acc, v);
            }
        }
        acc
    }
}

impl Structure for FreeModuleBounded {
    fn parent(&self) -> &Arc<GammaSemiring> {
        &self.parent
    }
    fn size(&self) -> usize {
        self.len()
    }
    fn zero(&self) -> usize {
        self.relation.class_of(0)
    }
    fn add(&self, a: usize, b: usize) -> Option<usize> {
        self.add[a * self.len() + b]
    }
    fn slots(&self) -> Vec<usize> {
        vec![self.slot]
    }
    fn act(&self, slot: usize, ctx: usize, m: usize) -> Option<usize> {
        if slot != self.slot {
            return None;
        }
        self.act[ctx * self.len() + m]
    }
}

/// A map from the bounded free module into a module.
#[derive(Clone, Debug)]
pub struct FreeMorphism {
    pub target: Arc<Module>,
    pub map: Vec<usize>,
}

fn check_target(f: &FreeModuleBounded, target: &Module) -> Result<()> {
    if !Arc::ptr_eq(&f.parent, target.parent()) {
        return Err(Error::structural("free module and target have different parents"));
    }
    if target.slots() != vec![f.slot] {
        return Err(Error::structural(format!(
            "target slots {:?} differ from free slot {}",
            target.slots(),
            f.slot
        )));
    }
    Ok(())
}

/// The extension `φ̃` of generator values `phi`, evaluated term by term.
/// Fails with an obstruction if two sums in one class evaluate differently.
pub fn extend_morphism(f: &FreeModuleBounded, phi: &[usize], target: &Arc<Module>) -> Result<FreeMorphism> {
    check_target(f, target)?;
    if phi.len() != f.labels.len() || phi.iter().any(|&v| v >= target.size()) {
        return Err(Error::structural("generator values do not match the label set"));
    }
    let mut map = vec![usize::MAX; f.len()];
    for e in 0..f.universe.len() {
        let c = f.relation.class_of(e);
        let v = f.eval_sum(target, phi, e);
        if map[c] == usize::MAX {
            map[c] = v;
        } else if map[c] != v {
            return Err(Error::Obstruction {
                message: "term evaluation is not constant on a class".into(),
                witness: Some(
                    Witness::new(Law::Congruence)
                        .field("related", vec![f.relation.representative(c), e])
                        .sides(map[c], v),
                ),
            });
        }
    }
    Ok(FreeMorphism {
        target: target.clone(),
        map,
    })
}

/// Zero, additivity and intertwining on every defined cell.
pub fn validate_free_morphism(f: &FreeModuleBounded, g: &FreeMorphism) -> AxiomReport {
    let t = &g.target;
    let mut report = AxiomReport::new();
    let mut zero = LawScan::new(Law::ZeroPreserved);
    zero.tick();
    if g.map[Structure::zero(f)] != t.zero_element() {
        zero.fail(Witness::new(Law::ZeroPreserved).sides(g.map[Structure::zero(f)], t.zero_element()));
    }
    report.push(zero.finish());
    let mut add = LawScan::new(Law::Additive);
    'o: for a in 0..f.len() {
        for b in 0..f.len() {
            match Structure::add(f, a, b) {
                Some(s) => {
                    add.tick();
                    let r = t.carrier().add(g.map[a], g.map[b]);
                    if g.map[s] != r {
                        add.fail(
                            Witness::new(Law::Additive)
                                .field("elements", vec![a, b])
                                .sides(g.map[s], r),
                        );
                        break 'o;
                    }
                }
                None => add.skip(),
            }
        }
    }
    report.push(add.finish());
    let mut inter = LawScan::new(Law::Intertwining);
    'a: for c in 0..f.parent.context_count() {
        for m in 0..f.len() {
            match Structure::act(f, f.slot, c, m) {
                Some(v) => {
                    inter.tick();
                    let r = t.act(f.slot, c, g.map[m]);
                    if g.map[v] != r {
                        inter.fail(
                            Witness::new(Law::Intertwining)
                                .scalar("context", c)
                                .scalar("m", m)
                                .sides(g.map[v], r),
                        );
                        break 'a;
                    }
                }
                None => inter.skip(),
            }
        }
    }
    report.push(inter.finish());
    report
}

/// Comparison of `Hom(F(X), M)` with `Maps(X, M)` on the bounded carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representability {
    pub morphisms: u64,
    pub maps: u128,
    /// No two morphisms agree on the generators.
    pub restriction_injective: bool,
    /// Every generator assignment extends, and the found morphism equals
    /// the term-wise extension.
    pub extension_matches: bool,
}

impl Representability {
    pub fn holds(&self) -> bool {
        self.restriction_injective && self.extension_matches && self.morphisms as u128 == self.maps
    }
}

/// Enumerates all morphisms out of the bounded free module into `target`
/// and compares them with generator assignments.
pub fn check_representability(f: &FreeModuleBounded, target: &Arc<Module>, budget: u128) -> Result<Representability> {
    check_target(f, target)?;
    let solver = morphism_solver(f, target)?;
    let gens: Vec<usize> = (0..f.labels.len()).map(|g| f.generator(g)).collect();
    let mut seen: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    let mut injective = true;
    let mut count = 0u64;
    solver.for_each(budget, |m| {
        count += 1;
        let key: Vec<usize> = gens.iter().map(|&g| m[g]).collect();
        if seen.insert(key, m.to_vec()).is_some() {
            injective = false;
        }
        ControlFlow::Continue(())
    })?;
    let maps = crate::tuple::pow_u128(target.size(), f.labels.len());
    let mut matches = seen.len() as u128 == maps;
    if matches {
        for (phi, m) in &seen {
            if extend_morphism(f, phi, target)?.map != *m {
                matches = false;
                break;
            }
        }
    }
    Ok(Representability {
        morphisms: count,
        maps,
        restriction_injective: injective,
        extension_matches: matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::validate_structure;
    use crate::semiring::{build_matrix_realization, MatrixLayout, ScalarBase};

    fn b3() -> Arc<GammaSemiring> {
        Arc::new(
            build_matrix_realization(ScalarBase::Boolean, 1, 3, MatrixLayout::AsWritten, &Limits::default()).unwrap(),
        )
    }

    #[test]
    fn one_generator_depth_two() {
        let s = b3();
        let f = free_module(&["x".into()], &s, 2, 2, None, &Limits::default()).unwrap();
        let wrapped = PrimitiveTerm {
            generator: 0,
            contexts: vec![s.encode_context(&[1, 1], &[1, 1])],
        };
        assert_eq!(f.display_primitive(&wrapped), "[1,⟨x⟩,1]_{1,1}");
        let w = f.primitive_class(&wrapped).unwrap();
        assert_ne!(w, f.generator(0));
        assert_ne!(w, Structure::zero(&f));
        let r = validate_structure(&f);
        assert!(r.passed(), "{:?}", r.lines());

        let m = Arc::new(Module::regular(s.clone(), &[2]).unwrap());
        let ext = extend_morphism(&f, &[1], &m).unwrap();
        assert_eq!(ext.map[f.generator(0)], 1);
        assert_eq!(ext.map[w], 1);
        assert!(validate_free_morphism(&f, &ext).passed());
        let zero = extend_morphism(&f, &[0], &m).unwrap();
        assert!(zero.map.iter().all(|&v| v == 0));
        assert!(check_representability(&f, &m, 1 << 20).unwrap().holds());
    }

    #[test]
    fn degenerate_cases() {
        let s = b3();
        let empty = free_module(&[], &s, 2, 2, None, &Limits::default()).unwrap();
        assert_eq!(empty.len(), 1);
        let flat = free_module(&["x".into(), "y".into()], &s, 2, 1, None, &Limits::default()).unwrap();
        assert_eq!(flat.len(), 4);
        // Sums are closed; every action cell on a nonzero sum leaves depth 1.
        assert!(matches!(flat.status(), FreeStatus::Partial { .. }));
        assert!((0..4).all(|a| (0..4).all(|b| Structure::add(&flat, a, b).is_some())));
    }

    #[test]
    fn partial_sums_respect_collapsed_terms() {
        let s = Arc::new(
            build_matrix_realization(ScalarBase::Z2, 1, 3, MatrixLayout::AsWritten, &Limits::default()).unwrap(),
        );
        let f = free_module(&["x".into()], &s, 2, 2, None, &Limits::default()).unwrap();
        // Terms with a zero parameter vanish, so adding them to x changes nothing.
        assert_eq!(f.len(), 5);
        for p in f.primitives().iter().filter(|p| p.contexts.len() == 1) {
            let c = f.primitive_class(p).unwrap();
            assert!(c == 0 || f.display(c) == "[1,⟨x⟩,1]_{1,1}");
        }
    }
}
