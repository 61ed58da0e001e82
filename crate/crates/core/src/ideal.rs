//! Γ-ideals, their lattice, prime spectra and quotient semirings.

use std::collections::{BTreeSet, VecDeque};
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::monoid::{congruence_closure, quotient_monoid};
use crate::report::{AxiomReport, Law, LawResult, LawScan, Witness};
use crate::semiring::{fill_with, GammaSemiring, Limits, Provenance, SemiringHom};
use crate::tuple::for_each_uniform;

/// A validated Γ-ideal.
#[derive(Clone, Debug)]
pub struct GammaIdeal {
    members: Vec<bool>,
    parent: Arc<GammaSemiring>,
}

impl GammaIdeal {
    /// Validates `members` as an ideal of `parent`.
    pub fn new(parent: Arc<GammaSemiring>, members: &[usize]) -> Result<Self> {
        let report = is_gamma_ideal(members, &parent)?;
        if let Some(w) = report.first_failure() {
            return Err(Error::LawViolation(w.clone()));
        }
        let mut inside = vec![false; parent.t().size()];
        for &x in members {
            inside[x] = true;
        }
        Ok(GammaIdeal {
            members: inside,
            parent,
        })
    }

    fn from_mask(parent: Arc<GammaSemiring>, mask: u64) -> Self {
        let members = (0..parent.t().size()).map(|x| mask >> x & 1 == 1).collect();
        GammaIdeal { members, parent }
    }

    pub fn parent(&self) -> &Arc<GammaSemiring> {
        &self.parent
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.get(x).copied().unwrap_or(false)
    }

    pub fn members(&self) -> Vec<usize> {
        (0..self.members.len()).filter(|&x| self.members[x]).collect()
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_proper(&self) -> bool {
        self.len() < self.members.len()
    }

    /// Bit `x` is set iff `x` is a member; `None` above 128 elements.
    pub fn bitmask(&self) -> Option<u128> {
        if self.members.len() > 128 {
            return None;
        }
        Some(
            self.members
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .fold(0, |m, (x, _)| m | 1 << x),
        )
    }
}

/// Checks zero membership, additive closure and absorption in every slot.
pub fn is_gamma_ideal(subset: &[usize], parent: &GammaSemiring) -> Result<AxiomReport> {
    let t = parent.t();
    if let Some(&x) = subset.iter().find(|&&x| x >= t.size()) {
        return Err(Error::structural(format!("element {} out of range 0..{}", x, t.size())));
    }
    let mut inside = vec![false; t.size()];
    for &x in subset {
        inside[x] = true;
    }
    let mut report = AxiomReport::new();

    let mut zero = LawScan::new(Law::IdealContainsZero);
    zero.tick();
    if !inside[t.zero()] {
        zero.fail(Witness::new(Law::IdealContainsZero).scalar("zero", t.zero()));
    }
    report.push(zero.finish());

    let members: Vec<usize> = (0..t.size()).filter(|&x| inside[x]).collect();
    let mut add = LawScan::new(Law::IdealAddClosed);
    'o: for &a in &members {
        for &b in &members {
            add.tick();
            if !inside[t.add(a, b)] {
                add.fail(
                    Witness::new(Law::IdealAddClosed)
                        .field("elements", vec![a, b])
                        .scalar("sum", t.add(a, b)),
                );
                break 'o;
            }
        }
    }
    report.push(add.finish());
    report.push(absorption_scan(parent, &members, &inside));
    Ok(report)
}

fn absorption_scan(parent: &GammaSemiring, members: &[usize], inside: &[bool]) -> LawResult {
    let n = parent.arity();
    let mut scan = LawScan::new(Law::IdealAbsorbing);
    let mut xs = vec![0; n];
    'slots: for slot in 0..n {
        for &a in members {
            let flow = for_each_uniform(parent.t().size(), n - 1, |rest| {
                for_each_uniform(parent.gamma().size(), n - 1, |gs| {
                    scan.tick();
                    fill_with(&mut xs, rest, slot, a);
                    let v = parent.mu(&xs, gs);
                    if !inside[v] {
                        scan.fail(
                            Witness::new(Law::IdealAbsorbing)
                                .scalar("slot", slot + 1)
                                .field("args", xs.clone())
                                .field("params", gs.to_vec())
                                .scalar("value", v),
                        );
                        return ControlFlow::Break(());
                    }
                    ControlFlow::Continue(())
                })
            });
            if flow.is_break() {
                break 'slots;
            }
        }
    }
    scan.finish()
}

/// Smallest ideal containing `mask`.
fn ideal_closure(parent: &GammaSemiring, mask: u64) -> u64 {
    let t = parent.t();
    let n = parent.arity();
    let mut set = mask | 1 << t.zero();
    let mut queue: VecDeque<usize> = (0..t.size()).filter(|&x| set >> x & 1 == 1).collect();
    let mut xs = vec![0; n];
    while let Some(a) = queue.pop_front() {
        let mut found = Vec::new();
        for b in 0..t.size() {
            if set >> b & 1 == 1 {
                found.push(t.add(a, b));
            }
        }
        for slot in 0..n {
            let _ = for_each_uniform(t.size(), n - 1, |rest| {
                for_each_uniform(parent.gamma().size(), n - 1, |gs| {
                    fill_with(&mut xs, rest, slot, a);
                    found.push(parent.mu(&xs, gs));
                    ControlFlow::Continue(())
                })
            });
        }
        for v in found {
            if set >> v & 1 == 0 {
                set |= 1 << v;
                queue.push_back(v);
            }
        }
    }
    set
}

/// All Γ-ideals in ascending bitmask order.
pub fn enumerate_ideals(parent: &Arc<GammaSemiring>, limits: &Limits) -> Result<Vec<GammaIdeal>> {
    let size = parent.t().size();
    let cap = limits.max_carrier.min(63);
    if size > cap {
        return Err(Error::limit("ideal enumeration |T|", size as u128, cap as u128));
    }
    let bottom = ideal_closure(parent, 0);
    let mut seen = BTreeSet::from([bottom]);
    let mut queue = VecDeque::from([bottom]);
    while let Some(ideal) = queue.pop_front() {
        for x in 0..size {
            if ideal >> x & 1 == 0 {
                let next = ideal_closure(parent, ideal | 1 << x);
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(seen
        .into_iter()
        .map(|m| GammaIdeal::from_mask(parent.clone(), m))
        .collect())
}

/// Checks the prime condition: whenever μ̃ lands in the ideal, some
/// argument already lies in it. Improper ideals fail with an empty witness.
pub fn check_prime(ideal: &GammaIdeal) -> LawResult {
    let p = &ideal.parent;
    let mut scan = LawScan::new(Law::Prime);
    if !ideal.is_proper() {
        scan.tick();
        scan.fail(Witness::new(Law::Prime).field("improper", ideal.members()));
        return scan.finish();
    }
    let _ = for_each_uniform(p.t().size(), p.arity(), |xs| {
        if xs.iter().any(|&x| ideal.contains(x)) {
            return ControlFlow::Continue(());
        }
        for_each_uniform(p.gamma().size(), p.arity() - 1, |gs| {
            scan.tick();
            let v = p.mu(xs, gs);
            if ideal.contains(v) {
                scan.fail(
                    Witness::new(Law::Prime)
                        .field("args", xs.to_vec())
                        .field("params", gs.to_vec())
                        .scalar("value", v),
                );
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        })
    });
    scan.finish()
}

/// The proper prime ideals, in ascending bitmask order.
pub fn prime_spectrum(parent: &Arc<GammaSemiring>, limits: &Limits) -> Result<Vec<GammaIdeal>> {
    Ok(enumerate_ideals(parent, limits)?
        .into_iter()
        .filter(|i| check_prime(i).passed())
        .collect())
}

/// `T/I` with the induced μ̃, and the projection homomorphism.
pub fn quotient_semiring(ideal: &GammaIdeal) -> Result<(Arc<GammaSemiring>, SemiringHom)> {
    let parent = &ideal.parent;
    let t = parent.t();
    let zero = t.zero();
    let pairs: Vec<(usize, usize)> = ideal.members().into_iter().map(|x| (x, zero)).collect();
    let cong = congruence_closure(t, &pairs)?;
    let (qt, proj) = quotient_monoid(t, &cong)?;
    let n = parent.arity();
    let k = qt.size();
    let gtail = parent.gamma_tuple_count();
    let len = crate::tuple::checked_pow(k, n)
        .and_then(|v| v.checked_mul(gtail))
        .ok_or_else(|| Error::structural("quotient table too large"))?;
    let mut table: Vec<Option<(usize, Vec<usize>)>> = vec![None; len];
    let mut obstruction = None;
    let _ = for_each_uniform(t.size(), n, |xs| {
        let cls: Vec<usize> = xs.iter().map(|&x| proj[x]).collect();
        let ci = crate::tuple::encode(&cls, k);
        for_each_uniform(parent.gamma().size(), n - 1, |gs| {
            let idx = ci * gtail + crate::tuple::encode(gs, parent.gamma().size());
            let v = proj[parent.mu(xs, gs)];
            match &table[idx] {
                None => table[idx] = Some((v, xs.to_vec())),
                Some((u, first)) if *u != v => {
                    obstruction = Some(
                        Witness::new(Law::Congruence)
                            .field("args", first.clone())
                            .field("alt_args", xs.to_vec())
                            .field("params", gs.to_vec())
                            .sides(*u, v),
                    );
                    return ControlFlow::Break(());
                }
                _ => {}
            }
            ControlFlow::Continue(())
        })
    });
    if let Some(w) = obstruction {
        return Err(Error::Obstruction {
            message: "induced μ̃ is not well defined on T/I".into(),
            witness: Some(w),
        });
    }
    let table: Vec<usize> = table.into_iter().map(|e| e.expect("projection is onto").0).collect();
    let mut q = GammaSemiring::from_table(qt, parent.gamma().clone(), n, table)?;
    q.set_provenance(Provenance::Quotient);
    let q = Arc::new(q);
    let hom = SemiringHom {
        f_t: proj,
        f_gamma: (0..parent.gamma().size()).collect(),
        source: parent.clone(),
        target: q.clone(),
    };
    Ok((q, hom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::{build_matrix_realization, validate_homomorphism, MatrixLayout, ScalarBase};

    fn b3() -> Arc<GammaSemiring> {
        Arc::new(
            build_matrix_realization(ScalarBase::Boolean, 1, 3, MatrixLayout::AsWritten, &Limits::default()).unwrap(),
        )
    }

    #[test]
    fn boolean_ideals_and_spectrum() {
        let s = b3();
        let ideals = enumerate_ideals(&s, &Limits::default()).unwrap();
        let masks: Vec<u128> = ideals.iter().map(|i| i.bitmask().unwrap()).collect();
        assert_eq!(masks, vec![0b01, 0b11]);
        assert!(prime_spectrum(&s, &Limits::default()).unwrap().is_empty());
    }

    #[test]
    fn non_ideal_has_witness() {
        let s = b3();
        let r = is_gamma_ideal(&[1], &s).unwrap();
        assert!(!r.passed_law(Law::IdealContainsZero));
        assert!(is_gamma_ideal(&[0], &s).unwrap().passed());
        assert!(GammaIdeal::new(s.clone(), &[1]).is_err());
    }

    #[test]
    fn quotients() {
        let s = b3();
        let zero = GammaIdeal::new(s.clone(), &[0]).unwrap();
        let (q, h) = quotient_semiring(&zero).unwrap();
        assert_eq!(q.t().size(), 2);
        assert!(validate_homomorphism(&h).unwrap().passed());
        let all = GammaIdeal::new(s.clone(), &[0, 1]).unwrap();
        let (q, h) = quotient_semiring(&all).unwrap();
        assert_eq!(q.t().size(), 1);
        assert!(q.validate().passed());
        assert!(validate_homomorphism(&h).unwrap().passed());
    }
}
