//! Positional modules over a Γ-semiring: one action per declared slot, with
//! bi-modules carrying two. Validation of M1–M4 and compatibility, and
//! module morphisms.

use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::monoid::FiniteCommMonoid;
use crate::report::{AxiomReport, Law, LawResult, LawScan, Witness};
use crate::semiring::GammaSemiring;
use crate::tuple::for_each_uniform;

/// The action at one slot, as a table indexed by `ctx * |M| + m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotAction {
    /// 1-based position of the module element among the n arguments.
    pub slot: usize,
    pub table: Vec<usize>,
}

/// A finite module with zero or more positional actions over a shared
/// parent semiring.
#[derive(Clone)]
pub struct Module {
    parent: Arc<GammaSemiring>,
    carrier: FiniteCommMonoid,
    actions: Vec<SlotAction>,
}

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Module")
            .field("size", &self.carrier.size())
            .field("slots", &self.slots())
            .finish()
    }
}

/// Read access shared by complete modules and bounded partial ones.
/// Partial structures return `None` for cells outside their bound.
pub trait Structure {
    fn parent(&self) -> &Arc<GammaSemiring>;
    fn size(&self) -> usize;
    fn zero(&self) -> usize;
    fn add(&self, a: usize, b: usize) -> Option<usize>;
    fn slots(&self) -> Vec<usize>;
    fn act(&self, slot: usize, ctx: usize, m: usize) -> Option<usize>;
}

impl Module {
    /// Checks table shapes; laws are checked by [`validate_module`].
    pub fn new(parent: Arc<GammaSemiring>, carrier: FiniteCommMonoid, mut actions: Vec<SlotAction>) -> Result<Self> {
        let n = parent.arity();
        actions.sort_by_key(|a| a.slot);
        let expected = parent.context_count() * carrier.size();
        for (i, a) in actions.iter().enumerate() {
            if a.slot == 0 || a.slot > n {
                return Err(Error::structural(format!("slot {} out of range 1..={}", a.slot, n)));
            }
            if i > 0 && actions[i - 1].slot == a.slot {
                return Err(Error::structural(format!("slot {} declared twice", a.slot)));
            }
            if a.table.len() != expected {
                return Err(Error::structural(format!(
                    "action at slot {} has {} entries, expected {}",
                    a.slot,
                    a.table.len(),
                    expected
                )));
            }
            if let Some(p) = a.table.iter().position(|&v| v >= carrier.size()) {
                return Err(Error::structural(format!(
                    "action at slot {} entry {} is {} (out of range 0..{})",
                    a.slot,
                    p,
                    a.table[p],
                    carrier.size()
                )));
            }
        }
        Ok(Module {
            parent,
            carrier,
            actions,
        })
    }

    /// Builds every action table from `f(slot, ts, gs, m)`.
    pub fn from_fn(
        parent: Arc<GammaSemiring>,
        carrier: FiniteCommMonoid,
        slots: &[usize],
        f: impl Fn(usize, &[usize], &[usize], usize) -> usize,
    ) -> Result<Self> {
        let n = parent.arity();
        if let Some(&s) = slots.iter().find(|&&s| s == 0 || s > n) {
            return Err(Error::structural(format!("slot {} out of range 1..={}", s, n)));
        }
        let mut ts = vec![0; n - 1];
        let mut gs = vec![0; n - 1];
        let actions = slots
            .iter()
            .map(|&slot| {
                let mut table = Vec::with_capacity(parent.context_count() * carrier.size());
                for ctx in 0..parent.context_count() {
                    parent.decode_context(ctx, &mut ts, &mut gs);
                    for m in 0..carrier.size() {
                        table.push(f(slot, &ts, &gs, m));
                    }
                }
                SlotAction { slot, table }
            })
            .collect();
        Module::new(parent, carrier, actions)
    }

    /// The parent acting on its own carrier at each of `slots`.
    pub fn regular(parent: Arc<GammaSemiring>, slots: &[usize]) -> Result<Self> {
        let p = parent.clone();
        Module::from_fn(parent.clone(), parent.t().clone(), slots, move |slot, ts, gs, m| {
            p.mu_inserted(ts, slot, m, gs)
        })
    }

    /// `act(x⃗, m; γ⃗) = m` when every context entry is `t_one` and every
    /// parameter is `g_one`, and zero otherwise.
    pub fn scalar(
        parent: Arc<GammaSemiring>,
        carrier: FiniteCommMonoid,
        slots: &[usize],
        t_one: usize,
        g_one: usize,
    ) -> Result<Self> {
        if t_one >= parent.t().size() || g_one >= parent.gamma().size() {
            return Err(Error::structural("scalar action unit out of range"));
        }
        let zero = carrier.zero();
        Module::from_fn(parent, carrier, slots, move |_, ts, gs, m| {
            if ts.iter().all(|&t| t == t_one) && gs.iter().all(|&g| g == g_one) {
                m
            } else {
                zero
            }
        })
    }

    /// The one-element module.
    pub fn zero(parent: Arc<GammaSemiring>, slots: &[usize]) -> Result<Self> {
        Module::from_fn(parent, FiniteCommMonoid::trivial(), slots, |_, _, _, _| 0)
    }

    pub fn parent(&self) -> &Arc<GammaSemiring> {
        &self.parent
    }

    pub fn carrier(&self) -> &FiniteCommMonoid {
        &self.carrier
    }

    pub fn size(&self) -> usize {
        self.carrier.size()
    }

    pub fn zero_element(&self) -> usize {
        self.carrier.zero()
    }

    pub fn slots(&self) -> Vec<usize> {
        self.actions.iter().map(|a| a.slot).collect()
    }

    pub fn actions(&self) -> &[SlotAction] {
        &self.actions
    }

    pub fn action(&self, slot: usize) -> Option<&SlotAction> {
        self.actions.iter().find(|a| a.slot == slot)
    }

    /// Applies the slot action; panics when `slot` is not declared.
    #[inline]
    pub fn act(&self, slot: usize, ctx: usize, m: usize) -> usize {
        let a = self.action(slot).expect("declared slot");
        a.table[ctx * self.carrier.size() + m]
    }

    pub fn act_with(&self, slot: usize, ts: &[usize], gs: &[usize], m: usize) -> usize {
        self.act(slot, self.parent.encode_context(ts, gs), m)
    }

    /// Returns a copy with one action cell replaced.
    pub fn with_action_entry(&self, slot: usize, ctx: usize, m: usize, value: usize) -> Result<Self> {
        if ctx >= self.parent.context_count() || m >= self.size() || value >= self.size() {
            return Err(Error::structural("action cell out of range"));
        }
        let mut out = self.clone();
        let size = self.size();
        let a = out
            .actions
            .iter_mut()
            .find(|a| a.slot == slot)
            .ok_or_else(|| Error::structural(format!("no action at slot {}", slot)))?;
        a.table[ctx * size + m] = value;
        Ok(out)
    }

    /// Keeps only the actions at `slots`.
    pub fn restrict(&self, slots: &[usize]) -> Result<Self> {
        let mut actions = Vec::new();
        for &s in slots {
            actions.push(
                self.action(s)
                    .cloned()
                    .ok_or_else(|| Error::structural(format!("no action at slot {}", s)))?,
            );
        }
        Module::new(self.parent.clone(), self.carrier.clone(), actions)
    }

    /// Same parent, carrier table and actions.
    pub fn same_structure(&self, other: &Module) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent)
            && self.carrier.same_table(&other.carrier)
            && self.actions == other.actions
    }

    pub fn label(&self, m: usize) -> String {
        self.carrier.label(m)
    }
}

impl Structure for Module {
    fn parent(&self) -> &Arc<GammaSemiring> {
        &self.parent
    }

    fn size(&self) -> usize {
        self.carrier.size()
    }

    fn zero(&self) -> usize {
        self.carrier.zero()
    }

    fn add(&self, a: usize, b: usize) -> Option<usize> {
        Some(self.carrier.add(a, b))
    }

    fn slots(&self) -> Vec<usize> {
        Module::slots(self)
    }

    fn act(&self, slot: usize, ctx: usize, m: usize) -> Option<usize> {
        Some(Module::act(self, slot, ctx, m))
    }
}

fn same_parent(a: &Arc<GammaSemiring>, b: &Arc<GammaSemiring>) -> bool {
    Arc::ptr_eq(a, b)
}

/// Adds two optional values.
#[inline]
fn add2<S: Structure + ?Sized>(s: &S, a: Option<usize>, b: Option<usize>) -> Option<usize> {
    s.add(a?, b?)
}

/// Runs M1–M4 on every action of a module.
pub fn validate_module(m: &Module) -> AxiomReport {
    validate_structure(m)
}

/// M1–M4 over a possibly partial structure. Instances touching an
/// undefined cell are counted as skipped.
pub fn validate_structure<S: Structure + ?Sized>(s: &S) -> AxiomReport {
    let mut report = AxiomReport::new();
    let slots = s.slots();
    let mut m1 = LawScan::new(Law::M1);
    let mut m2 = LawScan::new(Law::M2);
    let mut m3 = LawScan::new(Law::M3);
    let mut m4 = LawScan::new(Law::M4);
    let mut vacuous = Vec::new();
    for &slot in &slots {
        scan_m1(s, slot, &mut m1);
        if !scan_m2(s, slot, &mut m2) {
            vacuous.push(slot);
        }
        scan_m3(s, slot, &mut m3);
        scan_m4(s, slot, &mut m4);
    }
    if !vacuous.is_empty() {
        m2.note(format!(
            "vacuous at slot(s) {:?}: no two admissible bracketings",
            vacuous
        ));
    }
    for scan in [m1, m2, m3, m4] {
        let mut r = scan.finish();
        if slots.is_empty() && r.note.is_none() {
            r.note = Some("no actions declared".into());
        }
        report.push(r);
    }
    report
}

fn ctx_witness(law: Law, slot: usize, ts: &[usize], gs: &[usize], m: usize) -> Witness {
    Witness::new(law)
        .scalar("slot", slot)
        .field("ctx_args", ts.to_vec())
        .field("params", gs.to_vec())
        .scalar("m", m)
}

fn scan_m1<S: Structure + ?Sized>(s: &S, slot: usize, scan: &mut LawScan) {
    let p = s.parent().clone();
    let n = p.arity();
    let t = p.t();
    let size = s.size();
    let mut ts = vec![0; n - 1];
    let mut gs = vec![0; n - 1];
    for ctx in 0..p.context_count() {
        p.decode_context(ctx, &mut ts, &mut gs);
        for m in 0..size {
            for m2 in 0..size {
                let lhs = s.add(m, m2).and_then(|mm| s.act(slot, ctx, mm));
                let rhs = add2(s, s.act(slot, ctx, m), s.act(slot, ctx, m2));
                match (lhs, rhs) {
                    (Some(l), Some(r)) => {
                        scan.tick();
                        if l != r {
                            scan.fail(
                                ctx_witness(Law::M1, slot, &ts, &gs, m)
                                    .scalar("position", 0)
                                    .scalar("alt", m2)
                                    .sides(l, r),
                            );
                            return;
                        }
                    }
                    _ => scan.skip(),
                }
            }
            for i in 0..n - 1 {
                let orig = ts[i];
                for a in 0..t.size() {
                    for b in 0..t.size() {
                        ts[i] = t.add(a, b);
                        let lhs = s.act(slot, p.encode_context(&ts, &gs), m);
                        ts[i] = a;
                        let va = s.act(slot, p.encode_context(&ts, &gs), m);
                        ts[i] = b;
                        let vb = s.act(slot, p.encode_context(&ts, &gs), m);
                        match (lhs, add2(s, va, vb)) {
                            (Some(l), Some(r)) => {
                                scan.tick();
                                if l != r {
                                    ts[i] = a;
                                    scan.fail(
                                        ctx_witness(Law::M1, slot, &ts, &gs, m)
                                            .scalar("position", i + 1)
                                            .scalar("alt", b)
                                            .sides(l, r),
                                    );
                                    return;
                                }
                            }
                            _ => scan.skip(),
                        }
                    }
                }
                ts[i] = orig;
            }
        }
    }
}

fn scan_m3<S: Structure + ?Sized>(s: &S, slot: usize, scan: &mut LawScan) {
    let p = s.parent().clone();
    let n = p.arity();
    let tz = p.t().zero();
    let mut ts = vec![0; n - 1];
    let mut gs = vec![0; n - 1];
    for ctx in 0..p.context_count() {
        p.decode_context(ctx, &mut ts, &mut gs);
        let killing = ts.contains(&tz);
        for m in 0..s.size() {
            if m != s.zero() && !killing {
                continue;
            }
            match s.act(slot, ctx, m) {
                Some(v) => {
                    scan.tick();
                    if v != s.zero() {
                        scan.fail(ctx_witness(Law::M3, slot, &ts, &gs, m).sides(v, s.zero()));
                        return;
                    }
                }
                None => scan.skip(),
            }
        }
    }
}

fn scan_m4<S: Structure + ?Sized>(s: &S, slot: usize, scan: &mut LawScan) {
    let p = s.parent().clone();
    let n = p.arity();
    let g = p.gamma();
    let mut ts = vec![0; n - 1];
    let mut gs = vec![0; n - 1];
    for ctx in 0..p.context_count() {
        p.decode_context(ctx, &mut ts, &mut gs);
        for m in 0..s.size() {
            for i in 0..n - 1 {
                let orig = gs[i];
                for u in 0..g.size() {
                    for v in 0..g.size() {
                        gs[i] = g.add(u, v);
                        let lhs = s.act(slot, p.encode_context(&ts, &gs), m);
                        gs[i] = u;
                        let a = s.act(slot, p.encode_context(&ts, &gs), m);
                        gs[i] = v;
                        let b = s.act(slot, p.encode_context(&ts, &gs), m);
                        match (lhs, add2(s, a, b)) {
                            (Some(l), Some(r)) => {
                                scan.tick();
                                if l != r {
                                    gs[i] = u;
                                    scan.fail(
                                        ctx_witness(Law::M4, slot, &ts, &gs, m)
                                            .scalar("param", i + 1)
                                            .scalar("alt", v)
                                            .sides(l, r),
                                    );
                                    return;
                                }
                            }
                            _ => scan.skip(),
                        }
                    }
                }
                gs[i] = orig;
            }
        }
    }
}

/// Block starts `p` (0-based) whose bracketing is defined when the module
/// element sits at flattened position `q` and the action is at `slot`.
pub(crate) fn admissible_blocks(n: usize, slot: usize, q: usize) -> Vec<usize> {
    let j = slot - 1;
    (0..n)
        .filter(|&p| {
            if q >= p && q < p + n {
                q - p == j && p == j
            } else {
                let outer = if q < p { q } else { q - (n - 1) };
                outer == j
            }
        })
        .collect()
}

/// Evaluates one admissible bracketing. `word` holds T-entries with an
/// arbitrary placeholder at `q`.
pub(crate) fn bracket_value<S: Structure + ?Sized>(
    s: &S,
    slot: usize,
    word: &[usize],
    params: &[usize],
    q: usize,
    m: usize,
    p: usize,
) -> Option<usize> {
    let par = s.parent();
    let n = par.arity();
    let og: Vec<usize> = params[..p].iter().chain(&params[p + n - 1..]).copied().collect();
    if q >= p && q < p + n {
        let its: Vec<usize> = (p..p + n).filter(|&i| i != q).map(|i| word[i]).collect();
        let inner = s.act(slot, par.encode_context(&its, &params[p..p + n - 1]), m)?;
        let ots: Vec<usize> = (0..2 * n - 1)
            .filter(|&i| i < p || i >= p + n)
            .map(|i| word[i])
            .collect();
        s.act(slot, par.encode_context(&ots, &og), inner)
    } else {
        let t = par.mu(&word[p..p + n], &params[p..p + n - 1]);
        let mut ots = Vec::with_capacity(n - 1);
        for i in 0..2 * n - 1 {
            if i == p {
                ots.push(t);
            } else if (i > p && i < p + n) || i == q {
                continue;
            } else {
                ots.push(word[i]);
            }
        }
        s.act(slot, par.encode_context(&ots, &og), m)
    }
}

/// Returns false when no position admits two bracketings.
fn scan_m2<S: Structure + ?Sized>(s: &S, slot: usize, scan: &mut LawScan) -> bool {
    let par = s.parent().clone();
    let n = par.arity();
    let mut any = false;
    for q in 0..2 * n - 1 {
        let blocks = admissible_blocks(n, slot, q);
        if blocks.len() < 2 {
            continue;
        }
        any = true;
        let flow = for_each_uniform(par.t().size(), 2 * n - 2, |rest| {
            let mut word = Vec::with_capacity(2 * n - 1);
            word.extend_from_slice(&rest[..q]);
            word.push(0);
            word.extend_from_slice(&rest[q..]);
            for_each_uniform(par.gamma().size(), 2 * n - 2, |params| {
                for m in 0..s.size() {
                    let first = bracket_value(s, slot, &word, params, q, m, blocks[0]);
                    for &p in &blocks[1..] {
                        let v = bracket_value(s, slot, &word, params, q, m, p);
                        match (first, v) {
                            (Some(a), Some(b)) => {
                                scan.tick();
                                if a != b {
                                    let mut w = word.clone();
                                    w[q] = m;
                                    scan.fail(
                                        Witness::new(Law::M2)
                                            .scalar("slot", slot)
                                            .scalar("position", q + 1)
                                            .field("word", w)
                                            .field("params", params.to_vec())
                                            .scalar("m", m)
                                            .field("blocks", vec![blocks[0], p])
                                            .sides(a, b),
                                    );
                                    return ControlFlow::Break(());
                                }
                            }
                            _ => scan.skip(),
                        }
                    }
                }
                ControlFlow::Continue(())
            })
        });
        if flow.is_break() {
            break;
        }
    }
    any
}

/// M1–M4 plus pairwise compatibility of all actions.
pub fn validate_bimodule(m: &Module) -> Result<AxiomReport> {
    if m.actions.len() < 2 {
        return Err(Error::structural(format!(
            "a bi-module needs two actions, found slots {:?}",
            m.slots()
        )));
    }
    let mut report = validate_module(m);
    report.push(compatibility(m));
    Ok(report)
}

/// `act_j(L, act_k(R, m)) = act_k(R, act_j(L, m))` for every declared pair
/// `j < k`, every pair of contexts and every `m`.
pub fn compatibility(m: &Module) -> LawResult {
    let mut scan = LawScan::new(Law::Compatibility);
    let cc = m.parent.context_count();
    'pairs: for (i, a) in m.actions.iter().enumerate() {
        for b in &m.actions[i + 1..] {
            for l in 0..cc {
                for r in 0..cc {
                    for x in 0..m.size() {
                        scan.tick();
                        let lhs = m.act(a.slot, l, m.act(b.slot, r, x));
                        let rhs = m.act(b.slot, r, m.act(a.slot, l, x));
                        if lhs != rhs {
                            scan.fail(
                                Witness::new(Law::Compatibility)
                                    .field("slots", vec![a.slot, b.slot])
                                    .field("contexts", vec![l, r])
                                    .scalar("m", x)
                                    .sides(lhs, rhs),
                            );
                            break 'pairs;
                        }
                    }
                }
            }
        }
    }
    scan.finish()
}

/// Re-evaluates a witness from [`validate_module`] or [`compatibility`];
/// `Some(true)` when the instance still fails.
pub fn replay_module_witness(m: &Module, w: &Witness) -> Option<bool> {
    let p = &m.parent;
    if w.law == Law::Compatibility {
        let slots = w.get("slots")?;
        let c = w.get("contexts")?;
        let x = w.get_scalar("m")?;
        let lhs = m.act(slots[0], c[0], m.act(slots[1], c[1], x));
        let rhs = m.act(slots[1], c[1], m.act(slots[0], c[0], x));
        return Some(lhs != rhs);
    }
    let slot = w.get_scalar("slot")?;
    m.action(slot)?;
    let x = w.get_scalar("m")?;
    let add = |a: usize, b: usize| m.carrier.add(a, b);
    match w.law {
        Law::M2 => {
            let word = w.get("word")?;
            let params = w.get("params")?;
            let q = w.get_scalar("position")? - 1;
            let b = w.get("blocks")?;
            let u = bracket_value(m, slot, word, params, q, x, b[0])?;
            let v = bracket_value(m, slot, word, params, q, x, b[1])?;
            Some(u != v)
        }
        Law::M1 | Law::M3 | Law::M4 => {
            let mut ts = w.get("ctx_args")?.to_vec();
            let mut gs = w.get("params")?.to_vec();
            let act = |ts: &[usize], gs: &[usize], x: usize| m.act_with(slot, ts, gs, x);
            match w.law {
                Law::M3 => Some(act(&ts, &gs, x) != m.zero_element()),
                Law::M1 => {
                    let pos = w.get_scalar("position")?;
                    let alt = w.get_scalar("alt")?;
                    if pos == 0 {
                        Some(act(&ts, &gs, add(x, alt)) != add(act(&ts, &gs, x), act(&ts, &gs, alt)))
                    } else {
                        let a = ts[pos - 1];
                        ts[pos - 1] = p.t().add(a, alt);
                        let l = act(&ts, &gs, x);
                        ts[pos - 1] = a;
                        let va = act(&ts, &gs, x);
                        ts[pos - 1] = alt;
                        let vb = act(&ts, &gs, x);
                        Some(l != add(va, vb))
                    }
                }
                _ => {
                    let i = w.get_scalar("param")? - 1;
                    let alt = w.get_scalar("alt")?;
                    let u = gs[i];
                    gs[i] = p.gamma().add(u, alt);
                    let l = act(&ts, &gs, x);
                    gs[i] = u;
                    let a = act(&ts, &gs, x);
                    gs[i] = alt;
                    let b = act(&ts, &gs, x);
                    Some(l != add(a, b))
                }
            }
        }
        _ => None,
    }
}

/// An element map between two modules over the same parent and slots.
#[derive(Clone, Debug)]
pub struct ModuleMorphism {
    pub source: Arc<Module>,
    pub target: Arc<Module>,
    pub map: Vec<usize>,
}

impl ModuleMorphism {
    /// Checks shapes only; laws are checked by [`validate_morphism`].
    pub fn new(source: Arc<Module>, target: Arc<Module>, map: Vec<usize>) -> Result<Self> {
        if !same_parent(&source.parent, &target.parent) {
            return Err(Error::structural("source and target have different parents"));
        }
        if source.slots() != target.slots() {
            return Err(Error::structural(format!(
                "slot mismatch: source {:?}, target {:?}",
                source.slots(),
                target.slots()
            )));
        }
        if map.len() != source.size() {
            return Err(Error::structural(format!(
                "map has {} entries, source has {} elements",
                map.len(),
                source.size()
            )));
        }
        if let Some(&v) = map.iter().find(|&&v| v >= target.size()) {
            return Err(Error::structural(format!(
                "map value {} out of range 0..{}",
                v,
                target.size()
            )));
        }
        Ok(ModuleMorphism { source, target, map })
    }

    pub fn identity(m: &Arc<Module>) -> Self {
        ModuleMorphism {
            source: m.clone(),
            target: m.clone(),
            map: (0..m.size()).collect(),
        }
    }

    pub fn zero(source: &Arc<Module>, target: &Arc<Module>) -> Result<Self> {
        ModuleMorphism::new(
            source.clone(),
            target.clone(),
            vec![target.zero_element(); source.size()],
        )
    }

    #[inline]
    pub fn apply(&self, m: usize) -> usize {
        self.map[m]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ModuleMorphism) -> Result<ModuleMorphism> {
        if !Arc::ptr_eq(&self.target, &other.source) && !self.target.same_structure(&other.source) {
            return Err(Error::structural("composition of non-composable morphisms"));
        }
        Ok(ModuleMorphism {
            source: self.source.clone(),
            target: other.target.clone(),
            map: self.map.iter().map(|&x| other.map[x]).collect(),
        })
    }

    /// Pointwise sum; the result is re-validated.
    pub fn plus(&self, other: &ModuleMorphism) -> Result<ModuleMorphism> {
        if self.map.len() != other.map.len() || !self.target.same_structure(&other.target) {
            return Err(Error::structural("sum of morphisms with different domains"));
        }
        let t = self.target.carrier();
        let f = ModuleMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            map: self.map.iter().zip(&other.map).map(|(a, b)| t.add(*a, *b)).collect(),
        };
        if let Some(w) = validate_morphism(&f)?.first_failure() {
            return Err(Error::LawViolation(w.clone()));
        }
        Ok(f)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        self.map.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        for &v in &self.map {
            seen[v] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn is_zero(&self) -> bool {
        self.map.iter().all(|&v| v == self.target.zero_element())
    }

    /// Image as a sorted element list.
    pub fn image(&self) -> Vec<usize> {
        let mut seen = vec![false; self.target.size()];
        for &v in &self.map {
            seen[v] = true;
        }
        (0..seen.len()).filter(|&v| seen[v]).collect()
    }

    /// Preimage of zero.
    pub fn kernel_elements(&self) -> Vec<usize> {
        (0..self.map.len())
            .filter(|&m| self.map[m] == self.target.zero_element())
            .collect()
    }
}

/// Zero preservation, additivity and intertwining of every action.
pub fn validate_morphism(f: &ModuleMorphism) -> Result<AxiomReport> {
    let f = ModuleMorphism::new(f.source.clone(), f.target.clone(), f.map.clone())?;
    let (s, t) = (&f.source, &f.target);
    let mut report = AxiomReport::new();

    let mut zero = LawScan::new(Law::ZeroPreserved);
    zero.tick();
    let z = f.map[s.zero_element()];
    if z != t.zero_element() {
        zero.fail(
            Witness::new(Law::ZeroPreserved)
                .scalar("m", s.zero_element())
                .sides(z, t.zero_element()),
        );
    }
    report.push(zero.finish());

    let mut add = LawScan::new(Law::Additive);
    'o: for a in 0..s.size() {
        for b in 0..s.size() {
            add.tick();
            let l = f.map[s.carrier.add(a, b)];
            let r = t.carrier.add(f.map[a], f.map[b]);
            if l != r {
                add.fail(Witness::new(Law::Additive).field("elements", vec![a, b]).sides(l, r));
                break 'o;
            }
        }
    }
    report.push(add.finish());

    let mut inter = LawScan::new(Law::Intertwining);
    'a: for a in &s.actions {
        for ctx in 0..s.parent.context_count() {
            for m in 0..s.size() {
                inter.tick();
                let l = f.map[s.act(a.slot, ctx, m)];
                let r = t.act(a.slot, ctx, f.map[m]);
                if l != r {
                    inter.fail(
                        Witness::new(Law::Intertwining)
                            .scalar("slot", a.slot)
                            .scalar("context", ctx)
                            .scalar("m", m)
                            .sides(l, r),
                    );
                    break 'a;
                }
            }
        }
    }
    report.push(inter.finish());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::{build_matrix_realization, Limits, MatrixLayout, ScalarBase};

    fn b3() -> Arc<GammaSemiring> {
        Arc::new(
            build_matrix_realization(ScalarBase::Boolean, 1, 3, MatrixLayout::AsWritten, &Limits::default()).unwrap(),
        )
    }

    #[test]
    fn admissible_blocks_for_ternary() {
        for q in 0..5 {
            assert!(admissible_blocks(3, 2, q).len() <= 1, "q={}", q);
        }
        assert_eq!(admissible_blocks(3, 3, 4), vec![0, 1, 2]);
        assert_eq!(admissible_blocks(3, 1, 0), vec![0, 1, 2]);
    }

    #[test]
    fn regular_modules_validate() {
        let s = b3();
        for slots in [vec![1], vec![2], vec![3], vec![2, 3]] {
            let m = Module::regular(s.clone(), &slots).unwrap();
            let r = validate_module(&m);
            assert!(r.passed(), "{:?}: {:?}", slots, r.lines());
        }
        let r = validate_module(&Module::regular(s.clone(), &[2]).unwrap());
        assert!(r.get(Law::M2).unwrap().note.is_some());
        let bi = Module::regular(s, &[2, 3]).unwrap();
        assert!(validate_bimodule(&bi).unwrap().passed());
    }

    #[test]
    fn single_cell_mutations() {
        let s = b3();
        let m = Module::regular(s.clone(), &[3]).unwrap();
        let cases = [
            (Law::M1, &[0, 0][..], &[0, 0][..], 0),
            (Law::M3, &[0, 1], &[1, 1], 1),
            (Law::M4, &[1, 1], &[0, 0], 1),
            (Law::M2, &[1, 1], &[1, 1], 0),
        ];
        for (law, ts, gs, x) in cases {
            let ctx = s.encode_context(ts, gs);
            let bad = m.with_action_entry(3, ctx, x, 1).unwrap();
            let r = validate_module(&bad);
            let w = r.failure(law).unwrap_or_else(|| panic!("{} not caught", law));
            assert_eq!(replay_module_witness(&bad, w), Some(true));
            assert_eq!(replay_module_witness(&m, w), Some(false));
        }
    }

    #[test]
    fn morphisms() {
        let s = b3();
        let m = Arc::new(Module::regular(s.clone(), &[2]).unwrap());
        let z = Arc::new(Module::zero(s.clone(), &[2]).unwrap());
        assert!(validate_morphism(&ModuleMorphism::identity(&m)).unwrap().passed());
        assert!(validate_morphism(&ModuleMorphism::zero(&m, &z).unwrap())
            .unwrap()
            .passed());
        let swap = ModuleMorphism::new(m.clone(), m.clone(), vec![1, 0]).unwrap();
        assert!(!validate_morphism(&swap).unwrap().passed_law(Law::ZeroPreserved));
        let other = Arc::new(Module::regular(s, &[3]).unwrap());
        assert!(ModuleMorphism::new(m, other, vec![0, 1]).is_err());
    }
}
