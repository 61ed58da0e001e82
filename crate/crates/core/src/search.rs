//! Backtracking enumeration of maps into a module subject to additive and
//! action constraints. Used for Hom sets, universal properties, isomorphism
//! search and balanced maps.

use std::ops::ControlFlow;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::module::{Module, ModuleMorphism, Structure};

const UNSET: usize = usize::MAX;

/// A condition on an unknown map `f` into the target module.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constraint {
    /// `f(a) + f(b) = f(c)`.
    Add(usize, usize, usize),
    /// `act(slot, ctx, f(m)) = f(out)` in the target.
    Act {
        slot: usize,
        ctx: usize,
        m: usize,
        out: usize,
    },
    /// `f(a) = f(b)`.
    Eq(usize, usize),
    /// `f(a) = 0`.
    Zero(usize),
}

/// A constraint system over `vars` unknowns valued in `target`.
pub struct Solver<'a> {
    target: &'a Module,
    vars: usize,
    constraints: Vec<Constraint>,
    watch: Vec<Vec<usize>>,
    fixed: Vec<(usize, usize)>,
}

struct State {
    value: Vec<usize>,
    trail: Vec<usize>,
    queue: Vec<usize>,
    nodes: u128,
}

impl<'a> Solver<'a> {
    pub fn new(target: &'a Module, vars: usize) -> Self {
        Solver {
            target,
            vars,
            constraints: Vec::new(),
            watch: vec![Vec::new(); vars],
            fixed: Vec::new(),
        }
    }

    pub fn push(&mut self, c: Constraint) {
        let idx = self.constraints.len();
        let mut touch = |v: usize| self.watch[v].push(idx);
        match c {
            Constraint::Add(a, b, out) => {
                touch(a);
                if b != a {
                    touch(b);
                }
                touch(out);
            }
            Constraint::Act { m, out, .. } => {
                touch(m);
                if out != m {
                    touch(out);
                }
            }
            Constraint::Eq(a, b) => {
                touch(a);
                touch(b);
            }
            Constraint::Zero(a) => touch(a),
        }
        self.constraints.push(c);
    }

    /// Prescribes `f(var) = value`.
    pub fn fix(&mut self, var: usize, value: usize) {
        self.fixed.push((var, value));
    }

    fn set(&self, st: &mut State, x: usize, v: usize) -> bool {
        match st.value[x] {
            UNSET => {
                st.value[x] = v;
                st.trail.push(x);
                st.queue.push(x);
                true
            }
            u => u == v,
        }
    }

    fn propagate(&self, st: &mut State) -> bool {
        let t = self.target;
        while let Some(x) = st.queue.pop() {
            for &ci in &self.watch[x] {
                let ok = match self.constraints[ci] {
                    Constraint::Add(a, b, c) => {
                        let (fa, fb) = (st.value[a], st.value[b]);
                        if fa != UNSET && fb != UNSET {
                            let v = t.carrier().add(fa, fb);
                            self.set(st, c, v)
                        } else {
                            true
                        }
                    }
                    Constraint::Act { slot, ctx, m, out } => {
                        let fm = st.value[m];
                        if fm != UNSET {
                            let v = t.act(slot, ctx, fm);
                            self.set(st, out, v)
                        } else {
                            true
                        }
                    }
                    Constraint::Eq(a, b) => {
                        let (fa, fb) = (st.value[a], st.value[b]);
                        if fa != UNSET {
                            self.set(st, b, fa)
                        } else if fb != UNSET {
                            self.set(st, a, fb)
                        } else {
                            true
                        }
                    }
                    Constraint::Zero(a) => self.set(st, a, t.zero_element()),
                };
                if !ok {
                    st.queue.clear();
                    return false;
                }
            }
        }
        true
    }

    fn undo(&self, st: &mut State, mark: usize) {
        while st.trail.len() > mark {
            let x = st.trail.pop().unwrap();
            st.value[x] = UNSET;
        }
    }

    /// Calls `f` on every solution in lexicographic order of the free
    /// choices. Fails with a limit error after `budget` search nodes.
    pub fn for_each(&self, budget: u128, mut f: impl FnMut(&[usize]) -> ControlFlow<()>) -> Result<()> {
        let mut st = State {
            value: vec![UNSET; self.vars],
            trail: Vec::new(),
            queue: Vec::new(),
            nodes: 0,
        };
        for c in &self.constraints {
            if let Constraint::Zero(a) = *c {
                if !self.set(&mut st, a, self.target.zero_element()) {
                    return Ok(());
                }
            }
        }
        for &(x, v) in &self.fixed {
            if v >= self.target.size() || !self.set(&mut st, x, v) {
                return Ok(());
            }
        }
        if !self.propagate(&mut st) {
            return Ok(());
        }
        let _ = self.dfs(&mut st, 0, budget, &mut f)?;
        Ok(())
    }

    fn dfs(
        &self,
        st: &mut State,
        from: usize,
        budget: u128,
        f: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>> {
        let next = (from..self.vars).find(|&x| st.value[x] == UNSET);
        let Some(x) = next else {
            return Ok(f(&st.value));
        };
        for v in 0..self.target.size() {
            st.nodes += 1;
            if st.nodes > budget {
                return Err(Error::limit("morphism search nodes", st.nodes, budget));
            }
            let mark = st.trail.len();
            if self.set(st, x, v) && self.propagate(st) && self.dfs(st, x + 1, budget, f)?.is_break() {
                self.undo(st, mark);
                return Ok(ControlFlow::Break(()));
            }
            self.undo(st, mark);
        }
        Ok(ControlFlow::Continue(()))
    }

    /// Number of solutions.
    pub fn count(&self, budget: u128) -> Result<u64> {
        let mut n = 0;
        self.for_each(budget, |_| {
            n += 1;
            ControlFlow::Continue(())
        })?;
        Ok(n)
    }
}

/// Constraints making a map out of `source` a morphism into `target`:
/// zero, additivity and intertwining of every action of the source, on
/// every defined cell.
pub fn morphism_solver<'a, S: Structure + ?Sized>(source: &S, target: &'a Module) -> Result<Solver<'a>> {
    if !Arc::ptr_eq(source.parent(), target.parent()) {
        return Err(Error::structural("source and target have different parents"));
    }
    if source.slots() != target.slots() {
        return Err(Error::structural(format!(
            "slot mismatch: source {:?}, target {:?}",
            source.slots(),
            target.slots()
        )));
    }
    let n = source.size();
    let mut solver = Solver::new(target, n);
    solver.push(Constraint::Zero(source.zero()));
    for a in 0..n {
        for b in a..n {
            if let Some(c) = source.add(a, b) {
                solver.push(Constraint::Add(a, b, c));
            }
        }
    }
    for slot in source.slots() {
        for ctx in 0..source.parent().context_count() {
            for m in 0..n {
                if let Some(out) = source.act(slot, ctx, m) {
                    solver.push(Constraint::Act { slot, ctx, m, out });
                }
            }
        }
    }
    Ok(solver)
}

/// Every module morphism `source → target`.
pub fn hom_set(source: &Arc<Module>, target: &Arc<Module>, budget: u128) -> Result<Vec<ModuleMorphism>> {
    let solver = morphism_solver(source.as_ref(), target)?;
    let mut out = Vec::new();
    solver.for_each(budget, |f| {
        out.push(ModuleMorphism {
            source: source.clone(),
            target: target.clone(),
            map: f.to_vec(),
        });
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// A bijective morphism `a → b`, if one exists.
pub fn find_isomorphism(a: &Arc<Module>, b: &Arc<Module>, budget: u128) -> Result<Option<ModuleMorphism>> {
    if a.size() != b.size() || a.slots() != b.slots() || !Arc::ptr_eq(a.parent(), b.parent()) {
        return Ok(None);
    }
    let solver = morphism_solver(a.as_ref(), b)?;
    let mut found = None;
    solver.for_each(budget, |f| {
        let mut seen = vec![false; b.size()];
        if f.iter().all(|&v| !std::mem::replace(&mut seen[v], true)) {
            found = Some(f.to_vec());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(found.map(|map| ModuleMorphism {
        source: a.clone(),
        target: b.clone(),
        map,
    }))
}
