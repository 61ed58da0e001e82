//! Small named structures used by sweeps, the CLI and the test suites.

use std::sync::Arc;

use crate::error::Result;
use crate::exact::{make_conflation, Conflation};
use crate::module::{validate_module, Module, ModuleMorphism};
use crate::monoid::FiniteCommMonoid;
use crate::ops::biproduct;
use crate::semiring::{build_matrix_realization, GammaSemiring, Limits, MatrixLayout, Provenance, ScalarBase};
use crate::tuple;

fn matrix(base: ScalarBase, dim: usize) -> Arc<GammaSemiring> {
    Arc::new(
        build_matrix_realization(base, dim, 3, MatrixLayout::AsWritten, &Limits::default())
            .expect("small matrix realization"),
    )
}

/// Ternary Boolean 1×1 matrices: `T = Γ = {0, 1}`.
pub fn b3() -> Arc<GammaSemiring> {
    matrix(ScalarBase::Boolean, 1)
}

/// Ternary Boolean 2×2 matrices, `|T| = 16`.
pub fn boolean_2x2() -> Arc<GammaSemiring> {
    matrix(ScalarBase::Boolean, 2)
}

/// Ternary 1×1 matrices over Z2.
pub fn z2_realization() -> Arc<GammaSemiring> {
    matrix(ScalarBase::Z2, 1)
}

/// `B3` with a one-element parameter monoid acting as the scalar 1.
pub fn b3_unit_gamma() -> Arc<GammaSemiring> {
    let gamma = FiniteCommMonoid::trivial()
        .with_labels(vec!["1".into()])
        .expect("one label");
    let t = ScalarBase::Boolean.monoid();
    Arc::new(
        GammaSemiring::from_fn(
            t,
            gamma,
            3,
            |xs, _| xs.iter().product(),
            Provenance::Table,
            &Limits::default(),
        )
        .expect("tiny table"),
    )
}

/// The multiplicative unit of T and Γ, when the realization has one.
pub fn units(parent: &GammaSemiring) -> Option<(usize, usize)> {
    match parent.provenance() {
        Provenance::Matrix { base, dim, .. } => {
            let e: Vec<usize> = (0..dim * dim)
                .map(|k| if k / dim == k % dim { base.one() } else { base.zero() })
                .collect();
            Some((tuple::encode(&e, base.size()), base.one()))
        }
        _ => {
            // One-element Γ: look for a T-element fixed by every product with itself.
            let n = parent.arity();
            let gs = vec![0; n - 1];
            (0..parent.t().size())
                .find(|&u| {
                    u != parent.t().zero()
                        && (0..parent.t().size()).all(|x| {
                            (0..n).all(|slot| {
                                let mut xs = vec![u; n];
                                xs[slot] = x;
                                parent.mu(&xs, &gs) == x
                            })
                        })
                })
                .map(|u| (u, 0))
        }
    }
}

/// Named modules with carriers of at most `max_size` elements that pass
/// M1–M4 at `slots`: the zero module, scalar modules on small monoids, and
/// the regular module.
pub fn small_modules(parent: &Arc<GammaSemiring>, slots: &[usize], max_size: usize) -> Vec<(String, Arc<Module>)> {
    let mut out: Vec<(String, Arc<Module>)> = Vec::new();
    if let Ok(z) = Module::zero(parent.clone(), slots) {
        out.push(("0".into(), Arc::new(z)));
    }
    if let Some((t1, g1)) = units(parent) {
        let carriers = [
            ("B", FiniteCommMonoid::boolean()),
            ("C3", FiniteCommMonoid::chain(3)),
            ("C4", FiniteCommMonoid::chain(4)),
            ("B2", FiniteCommMonoid::boolean().product(&FiniteCommMonoid::boolean())),
            ("Z2", FiniteCommMonoid::z2()),
            ("Z2^2", FiniteCommMonoid::z2().product(&FiniteCommMonoid::z2())),
        ];
        for (name, c) in carriers {
            if c.size() > max_size {
                continue;
            }
            if let Ok(m) = Module::scalar(parent.clone(), c, slots, t1, g1) {
                if validate_module(&m).passed() {
                    out.push((name.into(), Arc::new(m)));
                }
            }
        }
    }
    if parent.t().size() <= max_size {
        if let Ok(m) = Module::regular(parent.clone(), slots) {
            if validate_module(&m).passed() {
                out.push(("R".into(), Arc::new(m)));
            }
        }
    }
    out
}

/// Split conflations `A ↣ A⊕C ↠ C` over pairs of nonzero `modules` whose
/// middle term has at most `max_size` elements.
pub fn split_conflations(modules: &[(String, Arc<Module>)], max_size: usize) -> Result<Vec<(String, Conflation)>> {
    let mut out = Vec::new();
    for (an, a) in modules {
        for (cn, c) in modules {
            if a.size() < 2 || c.size() < 2 || a.size() * c.size() > max_size {
                continue;
            }
            let bp = biproduct(a, c)?;
            out.push((
                format!("{} >-> {}+{} ->> {}", an, an, cn, cn),
                make_conflation(&bp.inj1, &bp.proj2)?,
            ));
        }
    }
    Ok(out)
}

/// `B ↣ C3 ↠ B`, sending 1 to the middle of the chain and collapsing the
/// bottom two. It does not split since `C3` is not `B⊕B`.
pub fn chain_conflation(parent: &Arc<GammaSemiring>, slots: &[usize]) -> Result<Option<Conflation>> {
    let Some((t1, g1)) = units(parent) else { return Ok(None) };
    let b = Arc::new(Module::scalar(
        parent.clone(),
        FiniteCommMonoid::boolean(),
        slots,
        t1,
        g1,
    )?);
    let c3 = Arc::new(Module::scalar(
        parent.clone(),
        FiniteCommMonoid::chain(3),
        slots,
        t1,
        g1,
    )?);
    if !validate_module(&b).passed() || !validate_module(&c3).passed() {
        return Ok(None);
    }
    let i = ModuleMorphism::new(b.clone(), c3.clone(), vec![0, 1])?;
    let p = ModuleMorphism::new(c3, b, vec![0, 0, 1])?;
    Ok(Some(make_conflation(&i, &p)?))
}

/// `B → C3` onto `{0, 2}`: injective, but not the kernel of its cokernel.
pub fn top_mono(parent: &Arc<GammaSemiring>, slots: &[usize]) -> Result<Option<ModuleMorphism>> {
    let Some((t1, g1)) = units(parent) else { return Ok(None) };
    let b = Arc::new(Module::scalar(
        parent.clone(),
        FiniteCommMonoid::boolean(),
        slots,
        t1,
        g1,
    )?);
    let c3 = Arc::new(Module::scalar(
        parent.clone(),
        FiniteCommMonoid::chain(3),
        slots,
        t1,
        g1,
    )?);
    Ok(Some(ModuleMorphism::new(b, c3, vec![0, 2])?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::is_admissible_mono;

    #[test]
    fn b3_catalog() {
        let s = b3();
        let names: Vec<String> = small_modules(&s, &[2], 4).into_iter().map(|(n, _)| n).collect();
        assert_eq!(names, ["0", "B", "C3", "C4", "B2", "R"]);
        assert!(chain_conflation(&s, &[2]).unwrap().is_some());
        assert!(!is_admissible_mono(&top_mono(&s, &[2]).unwrap().unwrap()).unwrap());
        let split = split_conflations(&small_modules(&s, &[2], 4), 4).unwrap();
        assert_eq!(split.len(), 4);
    }

    #[test]
    fn z2_catalog() {
        let s = z2_realization();
        let names: Vec<String> = small_modules(&s, &[3], 4).into_iter().map(|(n, _)| n).collect();
        assert_eq!(names, ["0", "Z2", "Z2^2", "R"]);
    }

    #[test]
    fn unit_gamma_has_units() {
        let s = b3_unit_gamma();
        assert!(s.validate().passed());
        assert_eq!(units(&s), Some((1, 0)));
        assert_eq!(units(&boolean_2x2()), Some((0b1001, 1)));
    }

    #[test]
    fn spectra() {
        let l = Limits::default();
        assert!(crate::ideal::prime_spectrum(&b3(), &l).unwrap().is_empty());
        let primes = crate::ideal::prime_spectrum(&b3_unit_gamma(), &l).unwrap();
        assert_eq!(primes.iter().map(|i| i.members()).collect::<Vec<_>>(), [vec![0]]);
    }
}
