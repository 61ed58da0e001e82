//! Positional tensor products as quotients of a normal-form universe by
//! congruence closure.
//!
//! For factors `M₁, …, M_r` a formal sum of pure tensors is normalized by
//! additivity in the first factor and the zero relations: it becomes a
//! function from `R = (M₂∖0) × ⋯ × (M_r∖0)` to `M₁`. The remaining
//! additivity and balancing relations are imposed by closure.

use std::collections::HashMap;
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::module::{Module, SlotAction};
use crate::monoid::{Closure, CongruenceRelation, FiniteCommMonoid};
use crate::search::{Constraint, Solver};
use crate::semiring::Limits;
use crate::tuple::{self, for_each_tuple};

/// Effective relation merges by origin.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RelationLog {
    /// Seeds from additivity in factors 2..r that merged two classes.
    pub additivity: usize,
    /// Seeds from balancing that merged two classes.
    pub balancing: usize,
    /// Merges forced by compatibility with addition.
    pub saturation: usize,
    /// Pure tensors with a zero entry, identified with 0 by the normal form.
    pub zero_normal_form: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TensorStatus {
    Complete,
    BoundExceeded { required: u128, limit: usize },
}

/// A factor module and the slot of its balancing action.
#[derive(Clone, Debug)]
pub struct Factor {
    pub module: Arc<Module>,
    pub slot: usize,
}

#[derive(Clone, Debug)]
pub struct TensorResult {
    pub status: TensorStatus,
    pub factors: Vec<Factor>,
    /// `None` when the bound was exceeded.
    pub module: Option<Arc<Module>>,
    pub log: RelationLog,
    pub warnings: Vec<String>,
    factor_map: Vec<usize>,
    rests: Vec<Vec<usize>>,
    rest_index: HashMap<Vec<usize>, usize>,
    relation: Option<CongruenceRelation>,
}

fn mixed_encode(digits: &[usize], radices: &[usize]) -> usize {
    digits.iter().zip(radices).fold(0, |acc, (d, r)| acc * r + d)
}

struct Universe<'a> {
    first: &'a Module,
    rests: Vec<Vec<usize>>,
    rest_index: HashMap<Vec<usize>, usize>,
    zero_vec: usize,
    size: usize,
}

impl Universe<'_> {
    fn decode(&self, v: usize) -> Vec<usize> {
        tuple::decode(v, self.first.size(), self.rests.len())
    }

    fn encode(&self, d: &[usize]) -> usize {
        tuple::encode(d, self.first.size())
    }

    fn add(&self, a: usize, b: usize) -> usize {
        let (da, db) = (self.decode(a), self.decode(b));
        let s: Vec<usize> = da
            .iter()
            .zip(&db)
            .map(|(x, y)| self.first.carrier().add(*x, *y))
            .collect();
        self.encode(&s)
    }

    /// Normal form of the pure tensor `t`.
    fn pure(&self, t: &[usize]) -> usize {
        match self.rest_index.get(&t[1..]) {
            Some(&r) if t[0] != self.first.zero_element() => {
                let mut d = vec![self.first.zero_element(); self.rests.len()];
                d[r] = t[0];
                self.encode(&d)
            }
            _ => self.zero_vec,
        }
    }
}

/// `M ⊗ N` balanced between slot `j` of `M` and slot `k` of `N`.
pub fn positional_tensor(
    m: &Arc<Module>,
    j: usize,
    n: &Arc<Module>,
    k: usize,
    limits: &Limits,
) -> Result<TensorResult> {
    multi_tensor(
        &[
            Factor {
                module: m.clone(),
                slot: j,
            },
            Factor {
                module: n.clone(),
                slot: k,
            },
        ],
        limits,
    )
}

/// The r-fold tensor, balanced between each adjacent pair of factors.
pub fn multi_tensor(factors: &[Factor], limits: &Limits) -> Result<TensorResult> {
    if factors.len() < 2 {
        return Err(Error::structural("a tensor needs at least two factors"));
    }
    let parent = factors[0].module.parent().clone();
    for f in factors {
        if !Arc::ptr_eq(f.module.parent(), &parent) {
            return Err(Error::structural("tensor factors have different parents"));
        }
        if f.module.action(f.slot).is_none() {
            return Err(Error::structural(format!(
                "factor has no action at slot {} (slots {:?})",
                f.slot,
                f.module.slots()
            )));
        }
    }
    let first = factors[0].module.as_ref();
    let radices: Vec<usize> = factors.iter().map(|f| f.module.size()).collect();
    let rest_radices: Vec<usize> = factors[1..].iter().map(|f| f.module.size()).collect();
    let mut rests = Vec::new();
    let _ = for_each_tuple(&rest_radices, |t| {
        if t.iter().zip(&factors[1..]).all(|(&x, f)| x != f.module.zero_element()) {
            rests.push(t.to_vec());
        }
        ControlFlow::Continue(())
    });
    let rest_index: HashMap<Vec<usize>, usize> = rests.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
    let required = tuple::pow_u128(first.size(), rests.len());
    if required > limits.max_tensor_classes as u128 {
        return Ok(TensorResult {
            status: TensorStatus::BoundExceeded {
                required,
                limit: limits.max_tensor_classes,
            },
            factors: factors.to_vec(),
            module: None,
            log: RelationLog::default(),
            warnings: Vec::new(),
            factor_map: Vec::new(),
            rests,
            rest_index,
            relation: None,
        });
    }
    let size = required as usize;
    let zero_vec = tuple::encode(&vec![first.zero_element(); rests.len()], first.size());
    let u = Universe {
        first,
        rests,
        rest_index,
        zero_vec,
        size,
    };

    let mut log = RelationLog::default();
    let _ = for_each_tuple(&radices, |t| {
        if t.iter().zip(factors).any(|(&x, f)| x == f.module.zero_element()) {
            log.zero_normal_form += 1;
        }
        ControlFlow::Continue(())
    });

    // Additivity in factors 2..r.
    let mut seeds: Vec<(usize, usize)> = Vec::new();
    for i in 1..factors.len() {
        let mi = &factors[i].module;
        let _ = for_each_tuple(&radices, |t| {
            let mut t = t.to_vec();
            let a = t[i];
            for b in 0..mi.size() {
                t[i] = mi.carrier().add(a, b);
                let lhs = u.pure(&t);
                t[i] = a;
                let pa = u.pure(&t);
                t[i] = b;
                let pb = u.pure(&t);
                t[i] = a;
                seeds.push((lhs, u.add(pa, pb)));
            }
            ControlFlow::Continue(())
        });
    }
    let additivity_seeds = seeds.len();

    // Balancing between adjacent factors under a shared context.
    let cc = parent.context_count();
    for i in 0..factors.len() - 1 {
        let (l, r) = (&factors[i], &factors[i + 1]);
        let _ = for_each_tuple(&radices, |t| {
            let mut t1 = t.to_vec();
            let mut t2 = t.to_vec();
            for c in 0..cc {
                t1[i] = l.module.act(l.slot, c, t[i]);
                t2[i + 1] = r.module.act(r.slot, c, t[i + 1]);
                seeds.push((u.pure(&t1), u.pure(&t2)));
            }
            ControlFlow::Continue(())
        });
    }

    let add = |a: usize, b: usize| Some(u.add(a, b));
    let op = |_: usize, _: usize| None;
    let outcome = Closure {
        size,
        add: &add,
        op_count: 0,
        op: &op,
    }
    .run(&seeds);
    log.additivity = outcome.seed_effective[..additivity_seeds]
        .iter()
        .filter(|&&b| b)
        .count();
    log.balancing = outcome.seed_effective[additivity_seeds..]
        .iter()
        .filter(|&&b| b)
        .count();
    log.saturation = outcome.saturation_merges;
    let relation = outcome.relation;

    let k = relation.class_count();
    let reps = relation.representatives().to_vec();
    let mut table = Vec::with_capacity(k * k);
    for &a in &reps {
        for &b in &reps {
            table.push(relation.class_of(u.add(a, b)));
        }
    }
    let labels: Vec<String> = reps.iter().map(|&r| display_vec(&u, factors, r)).collect();
    let carrier = FiniteCommMonoid::new(k, table, relation.class_of(zero_vec))?.with_labels(labels)?;

    let mut factor_map = Vec::new();
    let _ = for_each_tuple(&radices, |t| {
        factor_map.push(relation.class_of(u.pure(t)));
        ControlFlow::Continue(())
    });

    let (actions, warnings) = residual_actions(&u, factors, &relation);
    let module = Module::new(parent, carrier, actions)?;
    Ok(TensorResult {
        status: TensorStatus::Complete,
        factors: factors.to_vec(),
        module: Some(Arc::new(module)),
        log,
        warnings,
        factor_map,
        rests: u.rests,
        rest_index: u.rest_index,
        relation: Some(relation),
    })
}

fn display_vec(u: &Universe, factors: &[Factor], v: usize) -> String {
    let d = u.decode(v);
    let parts: Vec<String> = d
        .iter()
        .enumerate()
        .filter(|(_, &x)| x != u.first.zero_element())
        .map(|(r, &x)| {
            let mut s = u.first.label(x);
            for (f, &y) in factors[1..].iter().zip(&u.rests[r]) {
                s.push('⊗');
                s.push_str(&f.module.label(y));
            }
            s
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

/// Actions of the factors at slots other than their balancing slot. A slot
/// already claimed by an earlier factor is skipped; an action that is not
/// constant on classes is dropped. Both cases produce a warning.
fn residual_actions(u: &Universe, factors: &[Factor], relation: &CongruenceRelation) -> (Vec<SlotAction>, Vec<String>) {
    let parent = factors[0].module.parent();
    let cc = parent.context_count();
    let k = relation.class_count();
    let mut claimed: Vec<usize> = Vec::new();
    let mut actions = Vec::new();
    let mut warnings = Vec::new();
    for (i, f) in factors.iter().enumerate() {
        for a in f.module.actions() {
            if a.slot == f.slot {
                continue;
            }
            if claimed.contains(&a.slot) {
                warnings.push(format!(
                    "residual action at slot {} of factor {} collides with an earlier factor; skipped",
                    a.slot,
                    i + 1
                ));
                continue;
            }
            let mut table = vec![usize::MAX; cc * k];
            let mut ok = true;
            'c: for c in 0..cc {
                for v in 0..u.size {
                    let d = u.decode(v);
                    let image = if i == 0 {
                        let e: Vec<usize> = d.iter().map(|&x| f.module.act(a.slot, c, x)).collect();
                        u.encode(&e)
                    } else {
                        let mut acc = u.zero_vec;
                        for (r, &x) in d.iter().enumerate() {
                            let mut t = Vec::with_capacity(factors.len());
                            t.push(x);
                            t.extend_from_slice(&u.rests[r]);
                            t[i] = f.module.act(a.slot, c, t[i]);
                            acc = u.add(acc, u.pure(&t));
                        }
                        acc
                    };
                    let cell = &mut table[c * k + relation.class_of(v)];
                    let cls = relation.class_of(image);
                    if *cell == usize::MAX {
                        *cell = cls;
                    } else if *cell != cls {
                        ok = false;
                        break 'c;
                    }
                }
            }
            if ok {
                claimed.push(a.slot);
                actions.push(SlotAction { slot: a.slot, table });
            } else {
                warnings.push(format!(
                    "residual action at slot {} of factor {} is not well defined on classes; dropped",
                    a.slot,
                    i + 1
                ));
            }
        }
    }
    (actions, warnings)
}

impl TensorResult {
    pub fn is_complete(&self) -> bool {
        self.status == TensorStatus::Complete
    }

    /// The result module; fails when the bound was exceeded.
    pub fn module(&self) -> Result<&Arc<Module>> {
        self.module.as_ref().ok_or_else(|| match self.status {
            TensorStatus::BoundExceeded { required, limit } => Error::BoundExceeded(format!(
                "tensor universe needs {} elements, limit is {}",
                required, limit
            )),
            TensorStatus::Complete => unreachable!(),
        })
    }

    fn radices(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.module.size()).collect()
    }

    /// Class of the pure tensor `t`.
    pub fn factor(&self, t: &[usize]) -> Result<usize> {
        self.module()?;
        Ok(self.factor_map[mixed_encode(t, &self.radices())])
    }

    /// Map `self → other` induced by element maps on each factor.
    pub fn induced_map(&self, other: &TensorResult, maps: &[&[usize]]) -> Result<Vec<usize>> {
        let src = self.module()?;
        other.module()?;
        if maps.len() != self.factors.len() || other.factors.len() != self.factors.len() {
            return Err(Error::structural("induced map needs one map per factor"));
        }
        let relation = self.relation.as_ref().unwrap();
        let first = &self.factors[0].module;
        let target = other.module()?;
        let mut out = vec![usize::MAX; src.size()];
        for v in 0..relation.len() {
            let d = tuple::decode(v, first.size(), self.rests.len());
            let mut acc = target.zero_element();
            for (r, &x) in d.iter().enumerate() {
                let mut t = Vec::with_capacity(maps.len());
                t.push(maps[0][x]);
                for (i, &y) in self.rests[r].iter().enumerate() {
                    t.push(maps[i + 1][y]);
                }
                acc = target.carrier().add(acc, other.factor(&t)?);
            }
            let cell = &mut out[relation.class_of(v)];
            if *cell == usize::MAX {
                *cell = acc;
            } else if *cell != acc {
                return Err(Error::Obstruction {
                    message: "induced map is not constant on tensor classes".into(),
                    witness: None,
                });
            }
        }
        Ok(out)
    }

    /// Number of pure-tensor representatives whose first entry is nonzero.
    pub fn universe_rests(&self) -> usize {
        self.rest_index.len()
    }

    /// Checks that every multi-additive balanced map into the carrier of
    /// `target` factors through the result exactly once. Returns the number
    /// of such maps.
    pub fn check_universal(&self, target: &Module, budget: u128) -> Result<UniversalOutcome> {
        let result = self.module()?.clone();
        let radices = self.radices();
        let total: usize = radices.iter().product();
        let mut solver = Solver::new(target, total);
        let cc = result.parent().context_count();
        let _ = for_each_tuple(&radices, |t| {
            let code = mixed_encode(t, &radices);
            if t.iter().zip(&self.factors).any(|(&x, f)| x == f.module.zero_element()) {
                solver.push(Constraint::Zero(code));
            }
            let mut s = t.to_vec();
            for (i, f) in self.factors.iter().enumerate() {
                for b in 0..f.module.size() {
                    s[i] = b;
                    let cb = mixed_encode(&s, &radices);
                    s[i] = f.module.carrier().add(t[i], b);
                    let cs = mixed_encode(&s, &radices);
                    s[i] = t[i];
                    solver.push(Constraint::Add(code, cb, cs));
                }
            }
            for i in 0..self.factors.len() - 1 {
                let (l, r) = (&self.factors[i], &self.factors[i + 1]);
                for c in 0..cc {
                    let mut t1 = t.to_vec();
                    let mut t2 = t.to_vec();
                    t1[i] = l.module.act(l.slot, c, t[i]);
                    t2[i + 1] = r.module.act(r.slot, c, t[i + 1]);
                    solver.push(Constraint::Eq(mixed_encode(&t1, &radices), mixed_encode(&t2, &radices)));
                }
            }
            ControlFlow::Continue(())
        });
        let mut outcome = UniversalOutcome::default();
        let mut err = None;
        solver.for_each(budget, |beta| {
            outcome.maps += 1;
            let mut s = Solver::new(target, result.size());
            s.push(Constraint::Zero(result.zero_element()));
            for a in 0..result.size() {
                for b in a..result.size() {
                    s.push(Constraint::Add(a, b, result.carrier().add(a, b)));
                }
            }
            for (code, &cls) in self.factor_map.iter().enumerate() {
                s.fix(cls, beta[code]);
            }
            match s.count(budget) {
                Ok(1) => ControlFlow::Continue(()),
                Ok(c) => {
                    outcome.failure = Some(format!("balanced map {:?} has {} factorizations", beta, c));
                    ControlFlow::Break(())
                }
                Err(e) => {
                    err = Some(e);
                    ControlFlow::Break(())
                }
            }
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        Ok(outcome)
    }
}

#[derive(Clone, Debug, Default)]
pub struct UniversalOutcome {
    pub maps: u64,
    pub failure: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::validate_module;
    use crate::semiring::{build_matrix_realization, GammaSemiring, MatrixLayout, ScalarBase};

    fn b3() -> Arc<GammaSemiring> {
        Arc::new(
            build_matrix_realization(ScalarBase::Boolean, 1, 3, MatrixLayout::AsWritten, &Limits::default()).unwrap(),
        )
    }

    #[test]
    fn boolean_regular_tensor() {
        let s = b3();
        let l = Arc::new(Module::regular(s.clone(), &[2]).unwrap());
        let r = Arc::new(Module::regular(s.clone(), &[3]).unwrap());
        let t = positional_tensor(&l, 2, &r, 3, &Limits::default()).unwrap();
        let m = t.module().unwrap();
        assert_eq!(m.size(), 2);
        assert_ne!(t.factor(&[1, 1]).unwrap(), m.zero_element());
        assert!(t.check_universal(&l, 1 << 20).unwrap().failure.is_none());

        let z = Arc::new(Module::zero(s.clone(), &[3]).unwrap());
        let t0 = positional_tensor(&l, 2, &z, 3, &Limits::default()).unwrap();
        assert_eq!(t0.module().unwrap().size(), 1);
    }

    #[test]
    fn residual_action_from_bimodule() {
        let s = b3();
        let bi = Arc::new(Module::regular(s.clone(), &[2, 3]).unwrap());
        let r = Arc::new(Module::regular(s.clone(), &[3]).unwrap());
        let t = positional_tensor(&bi, 2, &r, 3, &Limits::default()).unwrap();
        let m = t.module().unwrap();
        assert_eq!(m.slots(), vec![3]);
        assert!(validate_module(m).passed());
    }

    #[test]
    fn three_factors() {
        let s = b3();
        let l = Arc::new(Module::regular(s.clone(), &[2]).unwrap());
        let r = Arc::new(Module::regular(s.clone(), &[3]).unwrap());
        let f = |m: &Arc<Module>, slot| Factor {
            module: m.clone(),
            slot,
        };
        let t = multi_tensor(&[f(&l, 2), f(&l, 2), f(&r, 3)], &Limits::default()).unwrap();
        assert_eq!(t.module().unwrap().size(), 2);
    }

    #[test]
    fn bound_exceeded_is_reported() {
        let s = Arc::new(
            build_matrix_realization(ScalarBase::Boolean, 2, 3, MatrixLayout::AsWritten, &Limits::default()).unwrap(),
        );
        let l = Arc::new(Module::regular(s.clone(), &[2]).unwrap());
        let r = Arc::new(Module::regular(s, &[3]).unwrap());
        let t = positional_tensor(&l, 2, &r, 3, &Limits::default()).unwrap();
        assert!(!t.is_complete());
        assert!(matches!(t.module(), Err(Error::BoundExceeded(_))));
    }
}
