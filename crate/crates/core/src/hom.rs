//! Internal Hom, the tensor–Hom adjunction, and exactness of the Hom and
//! tensor functors on a short sequence.

use std::collections::HashMap;
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::module::{validate_morphism, Module, ModuleMorphism, SlotAction};
use crate::monoid::{congruence_closure, FiniteCommMonoid};
use crate::search::{hom_set, Constraint, Solver};
use crate::semiring::Limits;
use crate::tensor::positional_tensor;
use crate::tuple;

/// Additive maps `M → P` preserving the actions of `P`, as a module.
#[derive(Clone, Debug)]
pub struct HomModule {
    pub module: Arc<Module>,
    pub maps: Vec<Vec<usize>>,
    pub source: Arc<Module>,
    pub target: Arc<Module>,
    pub j: usize,
    pub k: usize,
    index: HashMap<Vec<usize>, usize>,
}

impl HomModule {
    pub fn index_of(&self, map: &[usize]) -> Option<usize> {
        self.index.get(map).copied()
    }
}

fn obstruction(message: String) -> Error {
    Error::Obstruction { message, witness: None }
}

/// The carrier is enumerated and closed under pointwise addition. The
/// action at slot `k` precomposes with the slot-`j` action of `M`:
/// `(f·c)(m) = f(act_j(c, m))`. Each slot in `post` adds the action
/// `(f·c)(m) = act_s(c, f(m))` of `P`.
pub fn internal_hom(
    m: &Arc<Module>,
    p: &Arc<Module>,
    j: usize,
    k: usize,
    post: &[usize],
    limits: &Limits,
) -> Result<HomModule> {
    if !Arc::ptr_eq(m.parent(), p.parent()) {
        return Err(Error::structural("Hom between modules over different parents"));
    }
    let parent = m.parent().clone();
    if m.action(j).is_none() {
        return Err(Error::structural(format!("source has no action at slot {}", j)));
    }
    if k == 0 || k > parent.arity() {
        return Err(Error::structural(format!("slot {} out of range", k)));
    }
    for s in p.slots() {
        if m.action(s).is_none() {
            return Err(Error::structural(format!(
                "target acts at slot {} but the source does not",
                s
            )));
        }
    }
    for &s in post {
        if s == k || p.action(s).is_none() {
            return Err(Error::structural(format!(
                "post-composition slot {} must be a target slot other than {}",
                s, k
            )));
        }
    }
    let count = tuple::pow_u128(p.size(), m.size());
    if count > limits.max_hom_enumeration {
        return Err(Error::limit("maps M → P", count, limits.max_hom_enumeration));
    }
    let mut solver = Solver::new(p, m.size());
    solver.push(Constraint::Zero(m.zero_element()));
    for a in 0..m.size() {
        for b in a..m.size() {
            solver.push(Constraint::Add(a, b, m.carrier().add(a, b)));
        }
    }
    let cc = parent.context_count();
    for s in p.slots() {
        for c in 0..cc {
            for x in 0..m.size() {
                solver.push(Constraint::Act {
                    slot: s,
                    ctx: c,
                    m: x,
                    out: m.act(s, c, x),
                });
            }
        }
    }
    let mut maps = Vec::new();
    solver.for_each(limits.max_hom_enumeration, |f| {
        maps.push(f.to_vec());
        ControlFlow::Continue(())
    })?;
    let index: HashMap<Vec<usize>, usize> = maps.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
    let h = maps.len();
    let zero = index[&vec![p.zero_element(); m.size()]];
    let mut table = Vec::with_capacity(h * h);
    for f in &maps {
        for g in &maps {
            let s: Vec<usize> = f.iter().zip(g).map(|(a, b)| p.carrier().add(*a, *b)).collect();
            table.push(
                *index
                    .get(&s)
                    .ok_or_else(|| obstruction("sum of Hom elements leaves the Hom set".into()))?,
            );
        }
    }
    let labels = maps.iter().map(|f| format!("{:?}", f)).collect();
    let carrier = FiniteCommMonoid::new(h, table, zero)?.with_labels(labels)?;
    let mut actions = Vec::new();
    let mut pre = Vec::with_capacity(cc * h);
    for c in 0..cc {
        for f in &maps {
            let g: Vec<usize> = (0..m.size()).map(|x| f[m.act(j, c, x)]).collect();
            pre.push(*index.get(&g).ok_or_else(|| {
                obstruction(format!(
                    "precomposition by context {} leaves the Hom set; the source actions are not compatible",
                    c
                ))
            })?);
        }
    }
    actions.push(SlotAction { slot: k, table: pre });
    for &s in post {
        let mut t = Vec::with_capacity(cc * h);
        for c in 0..cc {
            for f in &maps {
                let g: Vec<usize> = f.iter().map(|&y| p.act(s, c, y)).collect();
                t.push(*index.get(&g).ok_or_else(|| {
                    obstruction(format!(
                        "post-composition at slot {} leaves the Hom set; the target actions are not compatible",
                        s
                    ))
                })?);
            }
        }
        actions.push(SlotAction { slot: s, table: t });
    }
    let module = Arc::new(Module::new(parent, carrier, actions)?);
    Ok(HomModule {
        module,
        maps,
        source: m.clone(),
        target: p.clone(),
        j,
        k,
        index,
    })
}

#[derive(Clone, Debug, Default)]
pub struct AdjunctionReport {
    /// `|Hom(M ⊗ N, P)|`.
    pub lhs: usize,
    /// `|Hom(N, Hom(M, P))|`.
    pub rhs: usize,
    pub curried_valid: bool,
    pub injective: bool,
    pub surjective: bool,
    pub naturality_checked: u64,
    pub naturality_ok: bool,
    pub failure: Option<String>,
}

impl AdjunctionReport {
    pub fn holds(&self) -> bool {
        self.curried_valid && self.injective && self.surjective && self.naturality_ok
    }
}

/// Verifies that currying `g ↦ (n ↦ (m ↦ g(m ⊗ n)))` is a bijection
/// `Hom(M ⊗ N, P) → Hom(N, Hom(M, P))`, and checks naturality in `P`
/// against every morphism from `P` into the modules of `tests`.
pub fn check_adjunction(
    m: &Arc<Module>,
    j: usize,
    n: &Arc<Module>,
    k: usize,
    p: &Arc<Module>,
    tests: &[Arc<Module>],
    limits: &Limits,
) -> Result<AdjunctionReport> {
    if n.slots() != vec![k] {
        return Err(Error::structural(format!(
            "N must act only at slot {}, found {:?}",
            k,
            n.slots()
        )));
    }
    let residual: Vec<usize> = m.slots().into_iter().filter(|&s| s != j).collect();
    if p.slots() != residual {
        return Err(Error::structural(format!(
            "P must act exactly at the residual slots {:?} of M, found {:?}",
            residual,
            p.slots()
        )));
    }
    let budget = limits.max_hom_enumeration;
    let t = positional_tensor(m, j, n, k, limits)?;
    let tm = t.module()?.clone();
    if tm.slots() != residual {
        return Err(obstruction(format!(
            "tensor carries slots {:?}, expected {:?}: {}",
            tm.slots(),
            residual,
            t.warnings.join("; ")
        )));
    }
    let h = internal_hom(m, p, j, k, &[], limits)?;
    let lhs = hom_set(&tm, p, budget)?;
    let rhs = hom_set(n, &h.module, budget)?;
    let mut report = AdjunctionReport {
        lhs: lhs.len(),
        rhs: rhs.len(),
        curried_valid: true,
        naturality_ok: true,
        ..Default::default()
    };

    let curry = |g: &[usize], t: &crate::tensor::TensorResult, h: &HomModule| -> Result<Option<Vec<usize>>> {
        let mut out = Vec::with_capacity(n.size());
        for y in 0..n.size() {
            let f: Vec<usize> = (0..m.size())
                .map(|x| t.factor(&[x, y]).map(|c| g[c]))
                .collect::<Result<_>>()?;
            match h.index_of(&f) {
                Some(i) => out.push(i),
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    };

    let rhs_index: HashMap<Vec<usize>, usize> = rhs.iter().enumerate().map(|(i, f)| (f.map.clone(), i)).collect();
    let mut hit = vec![false; rhs.len()];
    report.injective = true;
    for g in &lhs {
        let Some(phi) = curry(&g.map, &t, &h)? else {
            report.curried_valid = false;
            report.failure = Some(format!("curried image of {:?} is not in Hom(M, P)", g.map));
            break;
        };
        let f = ModuleMorphism::new(n.clone(), h.module.clone(), phi.clone())?;
        if !validate_morphism(&f)?.passed() {
            report.curried_valid = false;
            report.failure = Some(format!("curried image of {:?} is not a morphism", g.map));
            break;
        }
        let i = rhs_index[&phi];
        if std::mem::replace(&mut hit[i], true) {
            report.injective = false;
            report.failure = Some(format!("two morphisms curry to {:?}", phi));
        }
    }
    report.surjective = report.curried_valid && hit.iter().all(|&b| b);
    if report.curried_valid && !report.surjective && report.failure.is_none() {
        let missing = hit.iter().position(|&b| !b).unwrap();
        report.failure = Some(format!("{:?} is not a curried morphism", rhs[missing].map));
    }

    for p2 in tests {
        if !Arc::ptr_eq(p2.parent(), p.parent()) || p2.slots() != p.slots() {
            continue;
        }
        let h2 = match internal_hom(m, p2, j, k, &[], limits) {
            Ok(h2) => h2,
            Err(Error::Limit { .. }) => continue,
            Err(e) => return Err(e),
        };
        for e in hom_set(p, p2, budget)? {
            for g in &lhs {
                report.naturality_checked += 1;
                let eg: Vec<usize> = g.map.iter().map(|&v| e.map[v]).collect();
                let left = curry(&eg, &t, &h2)?;
                let right: Option<Vec<usize>> = curry(&g.map, &t, &h)?.map(|phi| {
                    phi.iter()
                        .map(|&i| {
                            let f: Vec<usize> = h.maps[i].iter().map(|&v| e.map[v]).collect();
                            h2.index_of(&f).unwrap_or(usize::MAX)
                        })
                        .collect()
                });
                if left.is_none() || left != right {
                    report.naturality_ok = false;
                    report.failure = Some(format!("naturality square fails for g = {:?}, e = {:?}", g.map, e.map));
                    return Ok(report);
                }
            }
        }
    }
    Ok(report)
}

/// Named verdicts of an exactness check, with the sizes involved.
#[derive(Clone, Debug, Default)]
pub struct ExactnessReport {
    pub checks: Vec<(String, bool)>,
    pub sizes: Vec<(String, usize)>,
}

impl ExactnessReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

fn check_sequence(i: &ModuleMorphism, p: &ModuleMorphism) -> Result<()> {
    if !Arc::ptr_eq(&i.target, &p.source) && !i.target.same_structure(&p.source) {
        return Err(Error::structural("the two morphisms are not composable"));
    }
    Ok(())
}

/// `0 → Hom(M, A) → Hom(M, B) → Hom(M, C)` is exact, by enumeration.
pub fn check_hom_left_exact(
    m: &Arc<Module>,
    i: &ModuleMorphism,
    p: &ModuleMorphism,
    limits: &Limits,
) -> Result<ExactnessReport> {
    check_sequence(i, p)?;
    let budget = limits.max_hom_enumeration;
    let ha = hom_set(m, &i.source, budget)?;
    let hb = hom_set(m, &i.target, budget)?;
    let hc = hom_set(m, &p.target, budget)?;
    let pushed: Vec<Vec<usize>> = ha.iter().map(|f| f.map.iter().map(|&x| i.map[x]).collect()).collect();
    let mut distinct = pushed.clone();
    distinct.sort();
    distinct.dedup();
    let injective = distinct.len() == pushed.len();
    let kernel: Vec<Vec<usize>> = hb
        .iter()
        .filter(|g| g.map.iter().all(|&x| p.map[x] == p.target.zero_element()))
        .map(|g| g.map.clone())
        .collect();
    let mut kernel_sorted = kernel.clone();
    kernel_sorted.sort();
    Ok(ExactnessReport {
        checks: vec![
            ("Hom(M,i) injective".into(), injective),
            ("ker Hom(M,p) = im Hom(M,i)".into(), kernel_sorted == distinct),
        ],
        sizes: vec![
            ("Hom(M,A)".into(), ha.len()),
            ("Hom(M,B)".into(), hb.len()),
            ("Hom(M,C)".into(), hc.len()),
        ],
    })
}

/// `A ⊗ N → B ⊗ N → C ⊗ N → 0` is exact: `p ⊗ N` is onto and the comparison
/// from `coker(i ⊗ N)` to `C ⊗ N` is bijective. `j` is the balancing slot
/// of `A`, `B`, `C` and `k` that of `N`.
pub fn check_tensor_right_exact(
    n: &Arc<Module>,
    k: usize,
    i: &ModuleMorphism,
    p: &ModuleMorphism,
    j: usize,
    limits: &Limits,
) -> Result<ExactnessReport> {
    check_sequence(i, p)?;
    let ta = positional_tensor(&i.source, j, n, k, limits)?;
    let tb = positional_tensor(&i.target, j, n, k, limits)?;
    let tc = positional_tensor(&p.target, j, n, k, limits)?;
    let (ma, mb, mc) = (ta.module()?, tb.module()?, tc.module()?);
    let id: Vec<usize> = (0..n.size()).collect();
    let fi = ta.induced_map(&tb, &[&i.map, &id])?;
    let fp = tb.induced_map(&tc, &[&p.map, &id])?;
    let onto = {
        let mut seen = vec![false; mc.size()];
        for &v in &fp {
            seen[v] = true;
        }
        seen.into_iter().all(|b| b)
    };
    let composite_zero = fi.iter().all(|&x| fp[x] == mc.zero_element());
    let pairs: Vec<(usize, usize)> = fi.iter().map(|&x| (x, mb.zero_element())).collect();
    let cong = congruence_closure(mb.carrier(), &pairs)?;
    let mut comparison = vec![usize::MAX; cong.class_count()];
    let mut well_defined = true;
    for x in 0..mb.size() {
        let cell = &mut comparison[cong.class_of(x)];
        if *cell == usize::MAX {
            *cell = fp[x];
        } else if *cell != fp[x] {
            well_defined = false;
        }
    }
    let bijective = well_defined && comparison.len() == mc.size() && {
        let mut c = comparison.clone();
        c.sort_unstable();
        c.dedup();
        c.len() == mc.size()
    };
    Ok(ExactnessReport {
        checks: vec![
            ("(p⊗N)∘(i⊗N) = 0".into(), composite_zero),
            ("p⊗N surjective".into(), onto),
            ("coker(i⊗N) → C⊗N bijective".into(), bijective),
        ],
        sizes: vec![
            ("A⊗N".into(), ma.size()),
            ("B⊗N".into(), mb.size()),
            ("C⊗N".into(), mc.size()),
            ("coker(i⊗N)".into(), cong.class_count()),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::biproduct;
    use crate::semiring::{build_matrix_realization, GammaSemiring, MatrixLayout, ScalarBase};

    fn b3() -> Arc<GammaSemiring> {
        Arc::new(
            build_matrix_realization(ScalarBase::Boolean, 1, 3, MatrixLayout::AsWritten, &Limits::default()).unwrap(),
        )
    }

    #[test]
    fn endomorphism_hom_of_regular() {
        let s = b3();
        let m = Arc::new(Module::regular(s.clone(), &[2]).unwrap());
        let h = internal_hom(&m, &m, 2, 3, &[], &Limits::default()).unwrap();
        assert_eq!(h.maps, vec![vec![0, 0], vec![0, 1]]);
        let z = Arc::new(Module::zero(s, &[2]).unwrap());
        assert_eq!(
            internal_hom(&z, &m, 2, 3, &[], &Limits::default()).unwrap().maps.len(),
            1
        );
        assert_eq!(
            internal_hom(&m, &z, 2, 3, &[], &Limits::default()).unwrap().maps.len(),
            1
        );
    }

    #[test]
    fn adjunction_on_regular_triple() {
        let s = b3();
        let bi = Arc::new(Module::regular(s.clone(), &[2, 3]).unwrap());
        let r = Arc::new(Module::regular(s.clone(), &[3]).unwrap());
        let rep = check_adjunction(&bi, 2, &r, 3, &r, std::slice::from_ref(&r), &Limits::default()).unwrap();
        assert!(rep.holds(), "{:?}", rep);
        assert_eq!(rep.lhs, rep.rhs);
        assert!(rep.naturality_checked > 0);
    }

    #[test]
    fn split_sequence_is_exact() {
        let s = b3();
        let m = Arc::new(Module::regular(s.clone(), &[2]).unwrap());
        let bp = biproduct(&m, &m).unwrap();
        let r = check_hom_left_exact(&m, &bp.inj1, &bp.proj2, &Limits::default()).unwrap();
        assert!(r.holds(), "{:?}", r);
        let n = Arc::new(Module::regular(s, &[3]).unwrap());
        let r = check_tensor_right_exact(&n, 3, &bp.inj1, &bp.proj2, 2, &Limits::default()).unwrap();
        assert!(r.holds(), "{:?}", r);
    }
}
