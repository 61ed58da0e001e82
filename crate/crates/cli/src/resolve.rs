//! Turns a parsed document into engine objects and typed directives.

use std::collections::BTreeMap;
use std::sync::Arc;

use gammalab_core::catalog::units;
use gammalab_core::module::SlotAction;
use gammalab_core::semiring::{build_endomorphism_realization, build_matrix_realization, MatrixLayout};
use gammalab_core::tensor::Factor;
use gammalab_core::{FiniteCommMonoid, GammaSemiring, Limits, Module, ModuleMorphism, ScalarBase};

use crate::syntax::{
    CheckDecl, ConflationDecl, Construction, Diagnostic, ElemRef, Item, ModuleDecl, MonoidDecl, MorphismDecl,
    SemiringDecl, Spans, StructureFile,
};

/// A checked inflation–deflation pair, certified only when a directive
/// asks for it.
#[derive(Clone, Debug)]
pub struct Pair {
    pub name: String,
    pub i: ModuleMorphism,
    pub p: ModuleMorphism,
}

#[derive(Clone, Debug)]
pub enum Directive {
    CheckSemiring(Arc<GammaSemiring>),
    CheckModule(Arc<Module>),
    CheckBimodule(Arc<Module>),
    CheckMorphism(ModuleMorphism),
    Kernel {
        f: ModuleMorphism,
        tests: Vec<Arc<Module>>,
    },
    Cokernel {
        f: ModuleMorphism,
        tests: Vec<Arc<Module>>,
    },
    Biproduct(Arc<Module>, Arc<Module>),
    Tensor {
        factors: Vec<Factor>,
        tests: Vec<Arc<Module>>,
    },
    Hom {
        m: Arc<Module>,
        j: usize,
        p: Arc<Module>,
        k: usize,
        post: Vec<usize>,
    },
    Adjunction {
        m: Arc<Module>,
        j: usize,
        n: Arc<Module>,
        k: usize,
        p: Arc<Module>,
        tests: Vec<Arc<Module>>,
    },
    HomLeftExact {
        m: Arc<Module>,
        c: Pair,
    },
    TensorRightExact {
        c: Pair,
        j: usize,
        n: Arc<Module>,
        k: usize,
    },
    Conflation(Pair),
    Pushout {
        c: Pair,
        f: ModuleMorphism,
        tests: Vec<Arc<Module>>,
    },
    Pullback {
        c: Pair,
        g: ModuleMorphism,
        tests: Vec<Arc<Module>>,
    },
    Quillen {
        conflations: Vec<Pair>,
        objects: Vec<Arc<Module>>,
        monos: Vec<ModuleMorphism>,
    },
    Ideals(Arc<GammaSemiring>),
    Spectrum(Arc<GammaSemiring>),
    Quotient {
        s: Arc<GammaSemiring>,
        members: Vec<usize>,
    },
    FreeModule {
        s: Arc<GammaSemiring>,
        slot: usize,
        depth: usize,
        labels: Vec<String>,
    },
    Extend {
        s: Arc<GammaSemiring>,
        slot: usize,
        depth: usize,
        labels: Vec<String>,
        target: Arc<Module>,
        images: Vec<usize>,
    },
}

/// A directive with its source text, in file order.
#[derive(Clone, Debug)]
pub struct Planned {
    pub text: String,
    pub directive: Directive,
}

#[derive(Debug, Default)]
pub struct Env {
    pub monoids: BTreeMap<String, FiniteCommMonoid>,
    pub semirings: BTreeMap<String, Arc<GammaSemiring>>,
    pub modules: BTreeMap<String, Arc<Module>>,
    /// Declaration order of modules, for test catalogs.
    pub module_order: Vec<String>,
    pub morphisms: BTreeMap<String, ModuleMorphism>,
    pub conflations: BTreeMap<String, Pair>,
    pub plan: Vec<Planned>,
}

pub const DIRECTIVES: &[(&str, &str, &str)] = &[
    (
        "check-semiring",
        "S",
        "A1–A3 exhaustively, with A4 and Γ-additivity as information",
    ),
    ("check-module", "M", "M1–M4 for every declared slot"),
    (
        "check-bimodule",
        "M",
        "M1–M4 plus compatibility of every pair of actions",
    ),
    (
        "check-morphism",
        "f",
        "zero, additivity and intertwining of every action",
    ),
    (
        "kernel",
        "f",
        "kernel of f and its universal property against the declared modules",
    ),
    (
        "cokernel",
        "f",
        "cokernel of f, its universal property and the coset comparison",
    ),
    ("biproduct", "M N", "M ⊕ N and the five biproduct identities"),
    (
        "tensor",
        "M j N k",
        "M ⊗ N balanced at slot j of M and slot k of N, with its universal property",
    ),
    (
        "multi-tensor",
        "M1 j1 M2 j2 [M3 j3 …]",
        "iterated tensor balanced between adjacent factors",
    ),
    (
        "hom",
        "M j P k [post s …]",
        "internal Hom(M, P) acting at slot k through slot j of M",
    ),
    (
        "adjunction",
        "M j N k P",
        "currying Hom(M ⊗ N, P) → Hom(N, Hom(M, P)) is a natural bijection",
    ),
    (
        "hom-left-exact",
        "M c",
        "0 → Hom(M, A) → Hom(M, B) → Hom(M, C) is exact for the conflation c",
    ),
    (
        "tensor-right-exact",
        "c j N k",
        "A ⊗ N → B ⊗ N → C ⊗ N → 0 is exact for the conflation c",
    ),
    ("conflation", "c", "certifies c as a kernel–cokernel pair"),
    (
        "pushout",
        "c f",
        "pushout of the inflation of c along f, re-certified and universal",
    ),
    (
        "pullback",
        "c g",
        "pullback of the deflation of c along g, re-certified and universal",
    ),
    (
        "quillen",
        "c1 [c2 …] [objects M …] [monos f …]",
        "identity, composition and pushout/pullback stability",
    ),
    ("ideals", "S", "every Γ-ideal of S"),
    ("spectrum", "S", "the proper prime Γ-ideals of S"),
    ("quotient", "S x …", "S modulo the ideal with the listed members"),
    (
        "free-module",
        "S slot depth x [y …]",
        "bounded free module on the listed generators",
    ),
    (
        "extend",
        "S slot depth M x=e [y=e …]",
        "extends a generator assignment to a morphism into M",
    ),
];

struct Ctx<'a> {
    index: usize,
    spans: &'a Spans,
}

impl Ctx<'_> {
    fn diag(&self, field: &str, message: impl Into<String>) -> Diagnostic {
        let pos = self.spans.field(field);
        if pos.line == 0 {
            Diagnostic {
                pos: None,
                message: format!("item {}: {}", self.index + 1, message.into()),
            }
        } else {
            Diagnostic::at(pos, message)
        }
    }
}

fn elem(ctx: &Ctx, field: &str, r: &ElemRef, m: &FiniteCommMonoid, what: &str) -> Result<usize, Diagnostic> {
    match r {
        ElemRef::Index(i) if *i < m.size() => Ok(*i),
        ElemRef::Index(i) => Err(ctx.diag(field, format!("{} element {} out of range 0..{}", what, i, m.size()))),
        ElemRef::Label(l) => m
            .index_of_label(l)
            .ok_or_else(|| ctx.diag(field, format!("{} has no element labelled {:?}", what, l))),
    }
}

fn elems(ctx: &Ctx, field: &str, rs: &[ElemRef], m: &FiniteCommMonoid, what: &str) -> Result<Vec<usize>, Diagnostic> {
    rs.iter().map(|r| elem(ctx, field, r, m, what)).collect()
}

fn parse_base(name: &str) -> Option<ScalarBase> {
    match name {
        "boolean" => Some(ScalarBase::Boolean),
        "z2" => Some(ScalarBase::Z2),
        _ => {
            let k = name.strip_prefix("trunc-tropical(")?.strip_suffix(')')?;
            k.parse().ok().map(ScalarBase::TruncTropical)
        }
    }
}

impl Env {
    fn lookup<'e, T>(
        map: &'e BTreeMap<String, T>,
        ctx: &Ctx,
        field: &str,
        name: &str,
        kind: &str,
    ) -> Result<&'e T, Diagnostic> {
        map.get(name)
            .ok_or_else(|| ctx.diag(field, format!("undeclared {} {:?}", kind, name)))
    }

    fn monoid(&self, ctx: &Ctx, d: &MonoidDecl) -> Result<FiniteCommMonoid, Diagnostic> {
        if let Some(b) = &d.builtin {
            if d.add.is_some() || d.size.is_some() || d.zero.is_some() {
                return Err(ctx.diag("builtin", "a builtin monoid takes no table, size or zero"));
            }
            let words: Vec<&str> = b.split_whitespace().collect();
            let k = |i: usize| words.get(i).and_then(|w| w.parse::<usize>().ok()).filter(|&k| k >= 1);
            let m = match (words.as_slice(), k(1)) {
                (["boolean"], _) => FiniteCommMonoid::boolean(),
                (["z2"], _) => FiniteCommMonoid::z2(),
                (["chain", _], Some(k)) => FiniteCommMonoid::chain(k),
                (["cyclic", _], Some(k)) => FiniteCommMonoid::cyclic(k),
                (["trunc-tropical", _], Some(k)) => ScalarBase::TruncTropical(k).monoid(),
                _ => return Err(ctx.diag("builtin", format!("unknown builtin monoid {:?}", b))),
            };
            return match &d.labels {
                Some(l) => m.with_labels(l.clone()).map_err(|e| ctx.diag("labels", e.to_string())),
                None => Ok(m),
            };
        }
        let rows = d
            .add
            .as_ref()
            .ok_or_else(|| ctx.diag("add", "monoid needs an add table or a builtin"))?;
        let size = d.size.unwrap_or(rows.len());
        if rows.len() != size || rows.iter().any(|r| r.len() != size) {
            let widths: Vec<usize> = rows.iter().map(|r| r.len()).collect();
            let shape = match widths.iter().min() == widths.iter().max() {
                true => format!("{}×{}", rows.len(), widths.first().copied().unwrap_or(0)),
                false => format!("{} rows of widths {:?}", rows.len(), widths),
            };
            return Err(ctx.diag(
                "add",
                format!("dimension mismatch: add table is {}, expected {}×{}", shape, size, size),
            ));
        }
        if let Some(l) = &d.labels {
            if l.len() != size {
                return Err(ctx.diag(
                    "labels",
                    format!("dimension mismatch: {} labels for {} elements", l.len(), size),
                ));
            }
        }
        // Labels resolve table entries before the monoid exists.
        let provisional = {
            let m = FiniteCommMonoid::from_fn(size, 0, |_, _| 0).map_err(|e| ctx.diag("add", e.to_string()));
            match (&d.labels, m) {
                (Some(l), Ok(m)) => m
                    .with_labels(l.clone())
                    .map_err(|e| ctx.diag("labels", e.to_string()))?,
                (None, Ok(m)) => m,
                (_, Err(e)) => return Err(e),
            }
        };
        let mut table = Vec::with_capacity(size * size);
        for r in rows {
            table.extend(elems(ctx, "add", r, &provisional, "monoid")?);
        }
        let zero = match &d.zero {
            Some(z) => elem(ctx, "zero", z, &provisional, "monoid")?,
            None => 0,
        };
        let m = FiniteCommMonoid::new(size, table, zero).map_err(|e| ctx.diag("add", e.to_string()))?;
        match &d.labels {
            Some(l) => m.with_labels(l.clone()).map_err(|e| ctx.diag("labels", e.to_string())),
            None => Ok(m),
        }
    }

    fn semiring(&self, ctx: &Ctx, d: &SemiringDecl, limits: &Limits) -> Result<GammaSemiring, Diagnostic> {
        let recipes = [d.matrix.is_some(), d.endo.is_some(), d.mu.is_some()];
        if recipes.iter().filter(|&&b| b).count() != 1 {
            return Err(ctx.diag("arity", "semiring needs exactly one of matrix, endo or mu"));
        }
        let mut s = if let Some(mr) = &d.matrix {
            let base = parse_base(&mr.base).ok_or_else(|| ctx.diag("matrix", format!("unknown base {:?}", mr.base)))?;
            let layout = match mr.layout.as_deref() {
                None | Some("as-written") => MatrixLayout::AsWritten,
                Some("interleaved") => MatrixLayout::Interleaved,
                Some(other) => return Err(ctx.diag("matrix", format!("unknown layout {:?}", other))),
            };
            build_matrix_realization(base, mr.dim, d.arity, layout, limits)
                .map_err(|e| ctx.diag("matrix", e.to_string()))?
        } else if let Some(v) = &d.endo {
            let carrier = Self::lookup(&self.monoids, ctx, "endo", v, "monoid")?;
            let maps: Vec<Vec<usize>> = d
                .gamma_maps
                .iter()
                .map(|m| {
                    if m.len() != carrier.size() {
                        return Err(ctx.diag(
                            "gamma-map",
                            format!(
                                "dimension mismatch: map has {} entries, carrier has {}",
                                m.len(),
                                carrier.size()
                            ),
                        ));
                    }
                    elems(ctx, "gamma-map", m, carrier, "carrier")
                })
                .collect::<Result<_, _>>()?;
            build_endomorphism_realization(carrier, d.arity, &maps, limits)
                .map_err(|e| ctx.diag("endo", e.to_string()))?
        } else {
            let t_name =
                d.t.as_deref()
                    .ok_or_else(|| ctx.diag("mu", "a table semiring needs t"))?;
            let g_name = d
                .gamma
                .as_deref()
                .ok_or_else(|| ctx.diag("mu", "a table semiring needs gamma"))?;
            let t = Self::lookup(&self.monoids, ctx, "t", t_name, "monoid")?;
            let g = Self::lookup(&self.monoids, ctx, "gamma", g_name, "monoid")?;
            let mu = d.mu.as_ref().unwrap();
            let expected =
                (t.size() as u128).pow(d.arity as u32) * (g.size() as u128).pow(d.arity.saturating_sub(1) as u32);
            if mu.len() as u128 != expected {
                return Err(ctx.diag(
                    "mu",
                    format!("dimension mismatch: mu has {} entries, expected {}", mu.len(), expected),
                ));
            }
            let table = elems(ctx, "mu", mu, t, "T")?;
            GammaSemiring::from_table(t.clone(), g.clone(), d.arity, table)
                .map_err(|e| ctx.diag("mu", e.to_string()))?
        };
        for patch in &d.set {
            if patch.args.len() != d.arity || patch.params.len() + 1 != d.arity {
                return Err(ctx.diag("set", format!("set needs {} args and {} params", d.arity, d.arity - 1)));
            }
            let xs = elems(ctx, "set", &patch.args, s.t(), "T")?;
            let gs = elems(ctx, "set", &patch.params, s.gamma(), "Γ")?;
            let v = elem(ctx, "set", &patch.value, s.t(), "T")?;
            s = s
                .with_mu_entry(&xs, &gs, v)
                .map_err(|e| ctx.diag("set", e.to_string()))?;
        }
        Ok(s)
    }

    fn module(&self, ctx: &Ctx, d: &ModuleDecl) -> Result<Module, Diagnostic> {
        let parent = Self::lookup(&self.semirings, ctx, "over", &d.over, "semiring")?.clone();
        let mut slots = d.slots.clone();
        slots.sort_unstable();
        slots.dedup();
        if slots.len() != d.slots.len() {
            return Err(ctx.diag("slots", "a slot is listed twice"));
        }
        if let Some(&bad) = slots.iter().find(|&&s| s == 0 || s > parent.arity()) {
            return Err(ctx.diag("slots", format!("slot {} out of range 1..={}", bad, parent.arity())));
        }
        let carrier = |field| -> Result<FiniteCommMonoid, Diagnostic> {
            let name = d
                .carrier
                .as_deref()
                .ok_or_else(|| ctx.diag(field, "this module needs a carrier monoid"))?;
            Ok(Self::lookup(&self.monoids, ctx, field, name, "monoid")?.clone())
        };
        let m = match d.construction {
            Construction::Regular => Module::regular(parent.clone(), &slots),
            Construction::Zero => Module::zero(parent.clone(), &slots),
            Construction::Scalar => {
                let c = carrier("scalar")?;
                let (t1, g1) = match &d.unit {
                    Some((t, g)) => (
                        elem(ctx, "unit", t, parent.t(), "T")?,
                        elem(ctx, "unit", g, parent.gamma(), "Γ")?,
                    ),
                    None => units(&parent)
                        .ok_or_else(|| ctx.diag("scalar", "no known unit for this semiring; give unit T G"))?,
                };
                Module::scalar(parent.clone(), c, &slots, t1, g1)
            }
            Construction::Table => {
                let c = carrier("carrier")?;
                let mut declared: Vec<usize> = d.actions.iter().map(|a| a.slot).collect();
                declared.sort_unstable();
                if declared != slots {
                    return Err(ctx.diag(
                        "action",
                        format!("action tables for slots {:?} but slots {:?} declared", declared, slots),
                    ));
                }
                let expected = parent.context_count() * c.size();
                let mut actions = Vec::new();
                for a in &d.actions {
                    if a.table.len() != expected {
                        return Err(ctx.diag(
                            "action",
                            format!(
                                "dimension mismatch: action at slot {} has {} entries, expected {}",
                                a.slot,
                                a.table.len(),
                                expected
                            ),
                        ));
                    }
                    actions.push(SlotAction {
                        slot: a.slot,
                        table: elems(ctx, "action", &a.table, &c, "carrier")?,
                    });
                }
                Module::new(parent.clone(), c, actions)
            }
        }
        .map_err(|e| ctx.diag("slots", e.to_string()))?;
        let mut m = m;
        let n = parent.arity();
        for patch in &d.set {
            if !slots.contains(&patch.slot) {
                return Err(ctx.diag("set", format!("slot {} is not declared", patch.slot)));
            }
            if patch.t.len() + 1 != n || patch.g.len() + 1 != n {
                return Err(ctx.diag("set", format!("set needs {} t entries and {} g entries", n - 1, n - 1)));
            }
            let ts = elems(ctx, "set", &patch.t, parent.t(), "T")?;
            let gs = elems(ctx, "set", &patch.g, parent.gamma(), "Γ")?;
            let x = elem(ctx, "set", &patch.m, m.carrier(), "carrier")?;
            let v = elem(ctx, "set", &patch.value, m.carrier(), "carrier")?;
            let c = parent.encode_context(&ts, &gs);
            m = m
                .with_action_entry(patch.slot, c, x, v)
                .map_err(|e| ctx.diag("set", e.to_string()))?;
        }
        Ok(m)
    }

    fn morphism(&self, ctx: &Ctx, d: &MorphismDecl) -> Result<ModuleMorphism, Diagnostic> {
        let src = Self::lookup(&self.modules, ctx, "from", &d.from, "module")?;
        let tgt = Self::lookup(&self.modules, ctx, "to", &d.to, "module")?;
        if d.map.len() != src.size() {
            return Err(ctx.diag(
                "map",
                format!(
                    "dimension mismatch: map has {} entries, {} has {} elements",
                    d.map.len(),
                    d.from,
                    src.size()
                ),
            ));
        }
        let map = elems(ctx, "map", &d.map, tgt.carrier(), &d.to)?;
        ModuleMorphism::new(src.clone(), tgt.clone(), map).map_err(|e| ctx.diag("map", e.to_string()))
    }

    fn conflation(&self, ctx: &Ctx, d: &ConflationDecl) -> Result<Pair, Diagnostic> {
        let i = Self::lookup(&self.morphisms, ctx, "inflation", &d.inflation, "morphism")?;
        let p = Self::lookup(&self.morphisms, ctx, "deflation", &d.deflation, "morphism")?;
        if !Arc::ptr_eq(&i.target, &p.source) {
            return Err(ctx.diag(
                "deflation",
                format!("{} does not start where {} ends", d.deflation, d.inflation),
            ));
        }
        Ok(Pair {
            name: d.name.clone(),
            i: i.clone(),
            p: p.clone(),
        })
    }

    /// Declared modules over `parent` with exactly `slots`, in file order.
    fn catalog(&self, parent: &Arc<GammaSemiring>, slots: &[usize]) -> Vec<Arc<Module>> {
        self.module_order
            .iter()
            .map(|n| &self.modules[n])
            .filter(|m| Arc::ptr_eq(m.parent(), parent) && m.slots() == slots)
            .cloned()
            .collect()
    }

    fn directive(&self, ctx: &Ctx, d: &CheckDecl) -> Result<Directive, Diagnostic> {
        let a = &d.args;
        let arg_field = |i: usize| format!("arg{}", i);
        let need = |n: usize| -> Result<(), Diagnostic> {
            let usage = DIRECTIVES
                .iter()
                .find(|x| x.0 == d.directive)
                .map(|x| x.1)
                .unwrap_or("");
            if a.len() != n {
                return Err(ctx.diag(
                    "",
                    format!("{} takes {} arguments ({}), found {}", d.directive, n, usage, a.len()),
                ));
            }
            Ok(())
        };
        let num = |i: usize| -> Result<usize, Diagnostic> {
            a[i].parse()
                .map_err(|_| ctx.diag(&arg_field(i), format!("expected a number, found {:?}", a[i])))
        };
        let semiring = |i: usize| Self::lookup(&self.semirings, ctx, &arg_field(i), &a[i], "semiring").cloned();
        let module = |i: usize| Self::lookup(&self.modules, ctx, &arg_field(i), &a[i], "module").cloned();
        let morphism = |i: usize| Self::lookup(&self.morphisms, ctx, &arg_field(i), &a[i], "morphism").cloned();
        let pair = |i: usize| Self::lookup(&self.conflations, ctx, &arg_field(i), &a[i], "conflation").cloned();
        Ok(match d.directive.as_str() {
            "check-semiring" => {
                need(1)?;
                Directive::CheckSemiring(semiring(0)?)
            }
            "check-module" => {
                need(1)?;
                Directive::CheckModule(module(0)?)
            }
            "check-bimodule" => {
                need(1)?;
                Directive::CheckBimodule(module(0)?)
            }
            "check-morphism" => {
                need(1)?;
                Directive::CheckMorphism(morphism(0)?)
            }
            "kernel" | "cokernel" => {
                need(1)?;
                let f = morphism(0)?;
                let tests = self.catalog(f.source.parent(), &f.source.slots());
                if d.directive == "kernel" {
                    Directive::Kernel { f, tests }
                } else {
                    Directive::Cokernel { f, tests }
                }
            }
            "biproduct" => {
                need(2)?;
                Directive::Biproduct(module(0)?, module(1)?)
            }
            "tensor" | "multi-tensor" => {
                if d.directive == "tensor" {
                    need(4)?;
                } else if a.len() < 4 || !a.len().is_multiple_of(2) {
                    return Err(ctx.diag("", "multi-tensor takes module/slot pairs: M1 j1 M2 j2 …"));
                }
                let mut factors = Vec::new();
                for i in (0..a.len()).step_by(2) {
                    factors.push(Factor {
                        module: module(i)?,
                        slot: num(i + 1)?,
                    });
                }
                let tests = self.module_order.iter().map(|n| self.modules[n].clone()).collect();
                Directive::Tensor { factors, tests }
            }
            "hom" => {
                if a.len() < 4 || (a.len() > 4 && a[4] != "post") {
                    return Err(ctx.diag("", "hom takes: M j P k [post s …]"));
                }
                let post = (5..a.len()).map(num).collect::<Result<_, _>>()?;
                Directive::Hom {
                    m: module(0)?,
                    j: num(1)?,
                    p: module(2)?,
                    k: num(3)?,
                    post,
                }
            }
            "adjunction" => {
                need(5)?;
                let p = module(4)?;
                let tests = self.catalog(p.parent(), &p.slots());
                Directive::Adjunction {
                    m: module(0)?,
                    j: num(1)?,
                    n: module(2)?,
                    k: num(3)?,
                    p,
                    tests,
                }
            }
            "hom-left-exact" => {
                need(2)?;
                Directive::HomLeftExact {
                    m: module(0)?,
                    c: pair(1)?,
                }
            }
            "tensor-right-exact" => {
                need(4)?;
                Directive::TensorRightExact {
                    c: pair(0)?,
                    j: num(1)?,
                    n: module(2)?,
                    k: num(3)?,
                }
            }
            "conflation" => {
                need(1)?;
                Directive::Conflation(pair(0)?)
            }
            "pushout" | "pullback" => {
                need(2)?;
                let c = pair(0)?;
                let f = morphism(1)?;
                let tests = self.catalog(c.i.source.parent(), &c.i.source.slots());
                if d.directive == "pushout" {
                    Directive::Pushout { c, f, tests }
                } else {
                    Directive::Pullback { c, g: f, tests }
                }
            }
            "quillen" => {
                let mut conflations = Vec::new();
                let mut objects = Vec::new();
                let mut monos = Vec::new();
                let mut mode = 0;
                for (i, w) in a.iter().enumerate() {
                    match w.as_str() {
                        "objects" => mode = 1,
                        "monos" => mode = 2,
                        _ if mode == 0 => conflations.push(pair(i)?),
                        _ if mode == 1 => objects.push(module(i)?),
                        _ => monos.push(morphism(i)?),
                    }
                }
                if conflations.is_empty() {
                    return Err(ctx.diag("", "quillen needs at least one conflation"));
                }
                Directive::Quillen {
                    conflations,
                    objects,
                    monos,
                }
            }
            "ideals" | "spectrum" => {
                need(1)?;
                let s = semiring(0)?;
                if d.directive == "ideals" {
                    Directive::Ideals(s)
                } else {
                    Directive::Spectrum(s)
                }
            }
            "quotient" => {
                if a.is_empty() {
                    return Err(ctx.diag("", "quotient takes: S x …"));
                }
                let s = semiring(0)?;
                let members = (1..a.len())
                    .map(|i| elem(ctx, &arg_field(i), &ElemRef::parse(&a[i]), s.t(), "T"))
                    .collect::<Result<_, _>>()?;
                Directive::Quotient { s, members }
            }
            "free-module" => {
                if a.len() < 4 {
                    return Err(ctx.diag("", "free-module takes: S slot depth x [y …]"));
                }
                Directive::FreeModule {
                    s: semiring(0)?,
                    slot: num(1)?,
                    depth: num(2)?,
                    labels: a[3..].to_vec(),
                }
            }
            "extend" => {
                if a.len() < 5 {
                    return Err(ctx.diag("", "extend takes: S slot depth M x=e [y=e …]"));
                }
                let target = module(3)?;
                let mut labels = Vec::new();
                let mut images = Vec::new();
                for i in 4..a.len() {
                    let (x, e) = a[i]
                        .split_once('=')
                        .ok_or_else(|| ctx.diag(&arg_field(i), format!("expected x=e, found {:?}", a[i])))?;
                    labels.push(x.to_string());
                    images.push(elem(ctx, &arg_field(i), &ElemRef::parse(e), target.carrier(), &a[3])?);
                }
                Directive::Extend {
                    s: semiring(0)?,
                    slot: num(1)?,
                    depth: num(2)?,
                    labels,
                    target,
                    images,
                }
            }
            other => return Err(ctx.diag("", format!("unknown directive {:?}", other))),
        })
    }
}

/// Builds every declared object in order. The first problem found is
/// returned with its location.
pub fn resolve(file: &StructureFile, limits: &Limits) -> Result<Env, Diagnostic> {
    let mut env = Env::default();
    let mut names: BTreeMap<String, usize> = BTreeMap::new();
    for (index, (item, spans)) in file.document.items.iter().zip(&file.spans).enumerate() {
        let ctx = Ctx { index, spans };
        if let Some(name) = item.name() {
            if let Some(prev) = names.insert(name.to_string(), index) {
                return Err(ctx.diag("", format!("{:?} is already declared by item {}", name, prev + 1)));
            }
        }
        match item {
            Item::Monoid(d) => {
                let m = env.monoid(&ctx, d)?;
                env.monoids.insert(d.name.clone(), m);
            }
            Item::Semiring(d) => {
                let s = env.semiring(&ctx, d, limits)?;
                env.semirings.insert(d.name.clone(), Arc::new(s));
            }
            Item::Module(d) => {
                let m = env.module(&ctx, d)?;
                env.modules.insert(d.name.clone(), Arc::new(m));
                env.module_order.push(d.name.clone());
            }
            Item::Morphism(d) => {
                let f = env.morphism(&ctx, d)?;
                env.morphisms.insert(d.name.clone(), f);
            }
            Item::Conflation(d) => {
                let c = env.conflation(&ctx, d)?;
                env.conflations.insert(d.name.clone(), c);
            }
            Item::Check(d) => {
                let directive = env.directive(&ctx, d)?;
                let mut text = d.directive.clone();
                for a in &d.args {
                    text.push(' ');
                    text.push_str(a);
                }
                env.plan.push(Planned { text, directive });
            }
        }
    }
    Ok(env)
}
