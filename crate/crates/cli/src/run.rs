//! Executes directives and collects their outcomes.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use gammalab_core::exact::{check_quillen_instance, make_conflation, pullback, pushout};
use gammalab_core::free::{check_representability, extend_morphism, free_module, validate_free_morphism, FreeStatus};
use gammalab_core::hom::{check_adjunction, check_hom_left_exact, check_tensor_right_exact, internal_hom};
use gammalab_core::ideal::{enumerate_ideals, prime_spectrum, quotient_semiring, GammaIdeal};
use gammalab_core::module::{
    compatibility, replay_module_witness, validate_bimodule, validate_module, validate_morphism,
};
use gammalab_core::ops::{biproduct, check_cokernel_universal, check_kernel_universal, cokernel, kernel};
use gammalab_core::semiring::validate_gamma_semiring;
use gammalab_core::tensor::{multi_tensor, TensorStatus};
use gammalab_core::{AxiomReport, Conflation, Error, GammaSemiring, Limits, Module, Witness};

use crate::resolve::{Directive, Pair, Planned};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Unavailable,
    Fail,
    Error,
}

impl Status {
    pub fn word(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Unavailable => "UNAVAILABLE",
            Status::Error => "ERROR",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct Outcome {
    pub index: usize,
    pub directive: String,
    pub status: Status,
    pub lines: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replay_confirmed: Option<bool>,
    pub data: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    #[serde(skip)]
    pub elapsed: std::time::Duration,
}

struct Draft {
    status: Status,
    lines: Vec<String>,
    witness: Option<Witness>,
    replay: Option<bool>,
    data: Value,
}

impl Draft {
    fn new() -> Self {
        Draft {
            status: Status::Pass,
            lines: Vec::new(),
            witness: None,
            replay: None,
            data: Value::Null,
        }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    /// Records a named check; a false verdict fails the directive.
    fn verdict(&mut self, name: &str, ok: bool) {
        self.line(format!("{}: {}", name, if ok { "pass" } else { "FAIL" }));
        if !ok {
            self.fail();
        }
    }

    fn fail(&mut self) {
        self.status = self.status.max(Status::Fail);
    }

    fn report(&mut self, r: &AxiomReport, replay: impl Fn(&Witness) -> Option<bool>) {
        self.lines.extend(r.lines());
        if let Some(w) = r.first_failure() {
            self.fail();
            self.replay = replay(w);
            self.witness = Some(w.clone());
        }
    }
}

fn from_error(e: Error) -> Draft {
    let mut d = Draft::new();
    match e {
        Error::Structural(m) => {
            d.status = Status::Error;
            d.line(format!("structural error: {}", m));
        }
        Error::LawViolation(w) => {
            d.status = Status::Fail;
            d.line(format!("law violated: {}", w));
            d.witness = Some(w);
        }
        Error::Obstruction { message, witness } => {
            d.status = Status::Fail;
            d.line(format!("obstruction: {}", message));
            d.witness = witness;
        }
        e @ (Error::Limit { .. } | Error::BoundExceeded(_)) => {
            d.status = Status::Unavailable;
            d.line(e.to_string());
        }
    }
    d
}

fn certify(c: &Pair) -> Result<Conflation, Error> {
    make_conflation(&c.i, &c.p)
}

fn elems(m: &Module, xs: &[usize]) -> String {
    let v: Vec<String> = xs.iter().map(|&x| m.label(x)).collect();
    format!("{{{}}}", v.join(", "))
}

fn t_elems(s: &GammaSemiring, xs: &[usize]) -> String {
    let v: Vec<String> = xs.iter().map(|&x| s.t().label(x)).collect();
    format!("{{{}}}", v.join(", "))
}

fn execute(d: &Directive, limits: &Limits) -> Result<Draft, Error> {
    let budget = limits.max_hom_enumeration;
    let mut out = Draft::new();
    match d {
        Directive::CheckSemiring(s) => {
            out.report(&validate_gamma_semiring(s), |w| s.replay(w));
            match s.find_asymmetry() {
                Some(w) => out.line(format!("T-arguments are not interchangeable: {}", w)),
                None => out.line("T-arguments are interchangeable"),
            }
            out.data = json!({"t": s.t().size(), "gamma": s.gamma().size(), "arity": s.arity()});
        }
        Directive::CheckModule(m) => {
            out.report(&validate_module(m), |w| replay_module_witness(m, w));
            if m.actions().len() > 1 {
                let c = compatibility(m);
                out.line(format!(
                    "{} (informational): {}",
                    c.law,
                    if c.passed() { "holds" } else { "fails" }
                ));
            }
            out.data = json!({"size": m.size(), "slots": m.slots()});
        }
        Directive::CheckBimodule(m) => {
            out.report(&validate_bimodule(m)?, |w| replay_module_witness(m, w));
            out.data = json!({"size": m.size(), "slots": m.slots()});
        }
        Directive::CheckMorphism(f) => {
            out.report(&validate_morphism(f)?, |_| None);
            out.data = json!({"injective": f.is_injective(), "surjective": f.is_surjective()});
        }
        Directive::Kernel { f, tests } => {
            let (k, incl) = kernel(f)?;
            out.line(format!(
                "ker has {} elements: {}",
                k.size(),
                elems(&f.source, &incl.map)
            ));
            let u = check_kernel_universal(f, &incl, tests, budget)?;
            out.verdict(&format!("universal property ({} test maps)", u.cases), u.passed());
            if let Some(msg) = u.failure {
                out.line(msg);
            }
            out.data = json!({"size": k.size(), "elements": incl.map});
        }
        Directive::Cokernel { f, tests } => {
            let c = cokernel(f)?;
            out.line(format!("coker has {} elements", c.module.size()));
            let u = check_cokernel_universal(f, &c.projection, tests, budget)?;
            out.verdict(&format!("universal property ({} test maps)", u.cases), u.passed());
            if let Some(msg) = u.failure {
                out.line(msg);
            }
            out.line(format!(
                "coset description {}",
                if c.coset_description_agrees {
                    "agrees"
                } else {
                    "differs from the congruence"
                }
            ));
            out.data = json!({
                "size": c.module.size(),
                "projection": c.projection.map,
                "coset-description-agrees": c.coset_description_agrees,
            });
        }
        Directive::Biproduct(m, n) => {
            let b = biproduct(m, n)?;
            out.line(format!("M ⊕ N has {} elements", b.module.size()));
            for (name, ok) in b.identities()? {
                out.verdict(name, ok);
            }
            out.report(&validate_module(&b.module), |_| None);
            out.data = json!({"size": b.module.size()});
        }
        Directive::Tensor { factors, tests } => {
            let t = multi_tensor(factors, limits)?;
            if let TensorStatus::BoundExceeded { required, limit } = t.status {
                out.status = Status::Unavailable;
                out.line(format!("universe needs {} elements, limit is {}", required, limit));
                return Ok(out);
            }
            let m = t.module()?.clone();
            out.line(format!("tensor has {} classes", m.size()));
            out.line(format!(
                "relations merged: additivity {}, balancing {}, saturation {}, zero normal form {}",
                t.log.additivity, t.log.balancing, t.log.saturation, t.log.zero_normal_form
            ));
            for w in &t.warnings {
                out.line(format!("note: {}", w));
            }
            out.report(&validate_module(&m), |_| None);
            let mut maps = 0;
            // A result with no actions is tested against every declared carrier.
            let fits = |x: &&Arc<Module>| {
                Arc::ptr_eq(x.parent(), m.parent()) && (m.slots().is_empty() || x.slots() == m.slots())
            };
            for x in tests.iter().filter(fits) {
                let u = t.check_universal(x, budget)?;
                maps += u.maps;
                if let Some(msg) = u.failure {
                    out.verdict("universal property", false);
                    out.line(msg);
                }
            }
            if out.status == Status::Pass {
                out.line(format!("universal property: pass ({} balanced maps)", maps));
            }
            out.data = json!({"size": m.size(), "slots": m.slots()});
        }
        Directive::Hom { m, j, p, k, post } => {
            let h = internal_hom(m, p, *j, *k, post, limits)?;
            out.line(format!("Hom has {} morphisms", h.maps.len()));
            out.report(&validate_module(&h.module), |_| None);
            out.data = json!({"size": h.maps.len(), "slots": h.module.slots(), "maps": h.maps});
        }
        Directive::Adjunction { m, j, n, k, p, tests } => {
            let r = check_adjunction(m, *j, n, *k, p, tests, limits)?;
            out.line(format!("|Hom(M ⊗ N, P)| = {}, |Hom(N, Hom(M, P))| = {}", r.lhs, r.rhs));
            out.verdict("curried maps are morphisms", r.curried_valid);
            out.verdict("currying injective", r.injective);
            out.verdict("currying surjective", r.surjective);
            out.verdict(
                &format!("naturality ({} instances)", r.naturality_checked),
                r.naturality_ok,
            );
            if let Some(f) = r.failure {
                out.line(f);
            }
            out.data = json!({"lhs": r.lhs, "rhs": r.rhs});
        }
        Directive::HomLeftExact { m, c } => {
            certify(c)?;
            let r = check_hom_left_exact(m, &c.i, &c.p, limits)?;
            for (name, size) in &r.sizes {
                out.line(format!("|{}| = {}", name, size));
            }
            for (name, ok) in &r.checks {
                out.verdict(name, *ok);
            }
        }
        Directive::TensorRightExact { c, j, n, k } => {
            certify(c)?;
            let r = check_tensor_right_exact(n, *k, &c.i, &c.p, *j, limits)?;
            for (name, size) in &r.sizes {
                out.line(format!("|{}| = {}", name, size));
            }
            for (name, ok) in &r.checks {
                out.verdict(name, *ok);
            }
        }
        Directive::Conflation(c) => {
            certify(c)?;
            out.line(format!(
                "{} ↣ {} ↠ {} is a kernel–cokernel pair",
                c.i.source.size(),
                c.i.target.size(),
                c.p.target.size()
            ));
        }
        Directive::Pushout { c, f, tests } => {
            certify(c)?;
            let po = pushout(&c.i, f)?;
            out.line(format!("pushout has {} elements", po.module.size()));
            if let Err(e) = &po.inflation {
                out.line(e.clone());
            }
            out.verdict("pushed-out map is an inflation", po.inflation.is_ok());
            let u = po.check_universal(&c.i, f, tests, budget)?;
            out.verdict(&format!("universal property ({} cocones)", u.cases), u.passed());
            if let Some(msg) = u.failure {
                out.line(msg);
            }
            out.data = json!({"size": po.module.size(), "inflation": po.i_prime.map});
        }
        Directive::Pullback { c, g, tests } => {
            certify(c)?;
            let pb = pullback(&c.p, g)?;
            out.line(format!("pullback has {} elements", pb.module.size()));
            if let Err(e) = &pb.deflation {
                out.line(e.clone());
            }
            out.verdict("pulled-back map is a deflation", pb.deflation.is_ok());
            let u = pb.check_universal(&c.p, g, tests, budget)?;
            out.verdict(&format!("universal property ({} cones)", u.cases), u.passed());
            if let Some(msg) = u.failure {
                out.line(msg);
            }
            out.data = json!({"size": pb.module.size(), "deflation": pb.p_prime.map});
        }
        Directive::Quillen {
            conflations,
            objects,
            monos,
        } => {
            let certified: Vec<Conflation> = conflations.iter().map(certify).collect::<Result<_, _>>()?;
            let objects = if objects.is_empty() {
                let mut seen: Vec<Arc<Module>> = Vec::new();
                for c in conflations {
                    for m in [&c.i.source, &c.i.target, &c.p.target] {
                        if !seen.iter().any(|s| Arc::ptr_eq(s, m)) {
                            seen.push(m.clone());
                        }
                    }
                }
                seen
            } else {
                objects.clone()
            };
            let r = check_quillen_instance(&certified, &objects, monos, limits)?;
            out.lines.extend(r.lines());
            if !r.holds() {
                out.fail();
            }
            out.data = json!({"excluded": r.excluded, "counterexamples": r.counterexamples});
        }
        Directive::Ideals(s) => {
            let all = enumerate_ideals(s, limits)?;
            out.line(format!("{} Γ-ideals", all.len()));
            for i in &all {
                out.line(t_elems(s, &i.members()));
            }
            out.data = json!({"ideals": all.iter().map(|i| i.members()).collect::<Vec<_>>()});
        }
        Directive::Spectrum(s) => {
            let primes = prime_spectrum(s, limits)?;
            out.line(format!("{} proper prime Γ-ideals", primes.len()));
            for i in &primes {
                out.line(t_elems(s, &i.members()));
            }
            out.data = json!({"primes": primes.iter().map(|i| i.members()).collect::<Vec<_>>()});
        }
        Directive::Quotient { s, members } => {
            let ideal = GammaIdeal::new(s.clone(), members)?;
            let (q, proj) = quotient_semiring(&ideal)?;
            out.line(format!("T/I has {} elements", q.t().size()));
            out.report(&validate_gamma_semiring(&q), |w| q.replay(w));
            out.data = json!({"size": q.t().size(), "projection": proj.f_t});
        }
        Directive::FreeModule { s, slot, depth, labels } => {
            let f = free_module(labels, s, *slot, *depth, None, limits)?;
            out.line(format!(
                "{} classes of sums over {} primitive terms",
                f.len(),
                f.primitives().len()
            ));
            match f.status() {
                FreeStatus::Complete => {
                    out.line("every cell is defined");
                    out.report(&validate_module(&f.to_module()?), |_| None);
                }
                FreeStatus::Partial { undefined_cells } => {
                    out.line(format!("{} cells lie beyond the depth bound", undefined_cells))
                }
            }
            out.data = json!({"size": f.len(), "primitives": f.primitives().len()});
        }
        Directive::Extend {
            s,
            slot,
            depth,
            labels,
            target,
            images,
        } => {
            let f = free_module(labels, s, *slot, *depth, None, limits)?;
            let g = extend_morphism(&f, images, target)?;
            out.report(&validate_free_morphism(&f, &g), |_| None);
            let r = check_representability(&f, target, budget)?;
            out.line(format!(
                "{} morphisms for {} generator assignments",
                r.morphisms, r.maps
            ));
            out.verdict("restriction to generators is injective", r.restriction_injective);
            out.verdict("extension agrees with the enumerated morphism", r.extension_matches);
            out.data = json!({"map": g.map});
        }
    }
    Ok(out)
}

pub fn run_one(index: usize, p: &Planned, limits: &Limits) -> Outcome {
    let start = Instant::now();
    let d = execute(&p.directive, limits).unwrap_or_else(from_error);
    Outcome {
        index,
        directive: p.text.clone(),
        status: d.status,
        lines: d.lines,
        witness: d.witness,
        replay_confirmed: d.replay,
        data: d.data,
        elapsed_ms: None,
        elapsed: start.elapsed(),
    }
}

/// Runs the plan in parallel, or in order stopping at the first failure.
pub fn run_all(plan: &[Planned], limits: &Limits, fail_fast: bool) -> Vec<Outcome> {
    if fail_fast {
        let mut out = Vec::new();
        for (i, p) in plan.iter().enumerate() {
            let o = run_one(i, p, limits);
            let stop = o.status >= Status::Fail;
            out.push(o);
            if stop {
                break;
            }
        }
        return out;
    }
    plan.par_iter()
        .enumerate()
        .map(|(i, p)| run_one(i, p, limits))
        .collect()
}

/// 3 for structural errors, 1 for failures, 2 when something was
/// unavailable, 0 otherwise.
pub fn exit_code(outcomes: &[Outcome]) -> i32 {
    let seen: BTreeSet<Status> = outcomes.iter().map(|o| o.status).collect();
    if seen.contains(&Status::Error) {
        3
    } else if seen.contains(&Status::Fail) {
        1
    } else if seen.contains(&Status::Unavailable) {
        2
    } else {
        0
    }
}

#[derive(Serialize)]
pub struct Report<'a> {
    pub format: &'static str,
    pub version: u32,
    pub engine: &'static str,
    pub limits: &'a Limits,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
    pub outcomes: &'a [Outcome],
    #[serde(rename = "exit-code")]
    pub exit_code: i32,
}

impl<'a> Report<'a> {
    pub fn new(limits: &'a Limits, outcomes: &'a [Outcome]) -> Self {
        Report {
            format: "gammalab-report",
            version: 1,
            engine: env!("CARGO_PKG_VERSION"),
            limits,
            diagnostic: None,
            outcomes,
            exit_code: exit_code(outcomes),
        }
    }

    /// A report for a file that did not parse or resolve.
    pub fn rejected(limits: &'a Limits, diagnostic: String) -> Self {
        Report {
            diagnostic: Some(diagnostic),
            exit_code: 3,
            ..Report::new(limits, &[])
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
