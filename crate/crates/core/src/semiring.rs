//! n-ary Γ-semirings: the structure, its axiom checks, built-in
//! realizations and homomorphisms.

use std::collections::HashMap;
use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::monoid::FiniteCommMonoid;
use crate::report::{AxiomReport, Law, LawResult, LawScan, Verdict, Witness};
use crate::tuple::{self, for_each_uniform};

/// Global size and enumeration limits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Limits {
    pub max_carrier: usize,
    pub max_tensor_classes: usize,
    pub max_hom_enumeration: u128,
    /// Largest μ̃ table that is materialized.
    pub max_table_entries: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_carrier: 16,
            max_tensor_classes: 4096,
            max_hom_enumeration: 1 << 20,
            max_table_entries: 1 << 24,
        }
    }
}

/// Scalar semirings available to the matrix realization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ScalarBase {
    Boolean,
    Z2,
    /// `{0, …, k, ∞}` with min as addition and saturating `+` as
    /// multiplication: any sum above `k` becomes `∞`. Index `i ≤ k` is the
    /// value `i`; index `k + 1` is `∞`, the additive zero.
    TruncTropical(usize),
}

impl ScalarBase {
    pub fn size(self) -> usize {
        match self {
            ScalarBase::Boolean | ScalarBase::Z2 => 2,
            ScalarBase::TruncTropical(k) => k + 2,
        }
    }

    pub fn zero(self) -> usize {
        match self {
            ScalarBase::Boolean | ScalarBase::Z2 => 0,
            ScalarBase::TruncTropical(k) => k + 1,
        }
    }

    pub fn one(self) -> usize {
        match self {
            ScalarBase::Boolean | ScalarBase::Z2 => 1,
            ScalarBase::TruncTropical(_) => 0,
        }
    }

    pub fn add(self, a: usize, b: usize) -> usize {
        match self {
            ScalarBase::Boolean => a | b,
            ScalarBase::Z2 => a ^ b,
            ScalarBase::TruncTropical(_) => a.min(b),
        }
    }

    pub fn mul(self, a: usize, b: usize) -> usize {
        match self {
            ScalarBase::Boolean | ScalarBase::Z2 => a & b,
            ScalarBase::TruncTropical(k) => {
                if a > k || b > k || a + b > k {
                    k + 1
                } else {
                    a + b
                }
            }
        }
    }

    pub fn label(self, a: usize) -> String {
        match self {
            ScalarBase::TruncTropical(k) if a == k + 1 => "inf".to_string(),
            _ => a.to_string(),
        }
    }

    pub fn monoid(self) -> FiniteCommMonoid {
        FiniteCommMonoid::from_fn_unchecked(self.size(), self.zero(), |a, b| self.add(a, b))
            .with_labels((0..self.size()).map(|a| self.label(a)).collect())
            .expect("label count matches")
    }

    pub fn name(self) -> String {
        match self {
            ScalarBase::Boolean => "boolean".into(),
            ScalarBase::Z2 => "z2".into(),
            ScalarBase::TruncTropical(k) => format!("trunc-tropical({})", k),
        }
    }
}

/// Where the scalars sit in the matrix realization's product.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum MatrixLayout {
    /// `γ₁A₁A₂γ₂A₃⋯γ_{n−1}A_n`.
    #[default]
    AsWritten,
    /// `A₁γ₁A₂γ₂⋯γ_{n−1}A_n`.
    Interleaved,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Provenance {
    Table,
    Matrix {
        base: ScalarBase,
        dim: usize,
        layout: MatrixLayout,
    },
    Endo,
    Quotient,
}

type MuFn = Arc<dyn Fn(&[usize], &[usize]) -> usize + Send + Sync>;

#[derive(Clone)]
enum Mu {
    Table(Vec<usize>),
    Func(MuFn),
}

/// A finite n-ary Γ-semiring `(T, Γ, μ̃)`.
#[derive(Clone)]
pub struct GammaSemiring {
    t: FiniteCommMonoid,
    gamma: FiniteCommMonoid,
    arity: usize,
    mu: Mu,
    provenance: Provenance,
}

impl fmt::Debug for GammaSemiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GammaSemiring")
            .field("t", &self.t.size())
            .field("gamma", &self.gamma.size())
            .field("arity", &self.arity)
            .field("provenance", &self.provenance)
            .finish()
    }
}

impl GammaSemiring {
    /// Table-backed semiring. The table lists μ̃ in lexicographic order of
    /// `(x₁, …, x_n, γ₁, …, γ_{n−1})`. Axioms are not checked here; run
    /// [`GammaSemiring::validate`].
    pub fn from_table(t: FiniteCommMonoid, gamma: FiniteCommMonoid, arity: usize, table: Vec<usize>) -> Result<Self> {
        if arity < 2 {
            return Err(Error::structural(format!("arity {} < 2", arity)));
        }
        let expected = table_len(t.size(), gamma.size(), arity)
            .ok_or_else(|| Error::structural("μ̃ table size overflows the address space"))?;
        if table.len() != expected {
            return Err(Error::structural(format!(
                "μ̃ table has {} entries, expected {}",
                table.len(),
                expected
            )));
        }
        if let Some(pos) = table.iter().position(|&v| v >= t.size()) {
            return Err(Error::structural(format!(
                "μ̃ table entry {} is {} (out of range 0..{})",
                pos,
                table[pos],
                t.size()
            )));
        }
        Ok(GammaSemiring {
            t,
            gamma,
            arity,
            mu: Mu::Table(table),
            provenance: Provenance::Table,
        })
    }

    /// Function-backed semiring; the table is materialized when it fits in
    /// `limits.max_table_entries`.
    pub fn from_fn(
        t: FiniteCommMonoid,
        gamma: FiniteCommMonoid,
        arity: usize,
        f: impl Fn(&[usize], &[usize]) -> usize + Send + Sync + 'static,
        provenance: Provenance,
        limits: &Limits,
    ) -> Result<Self> {
        if arity < 2 {
            return Err(Error::structural(format!("arity {} < 2", arity)));
        }
        let f: MuFn = Arc::new(f);
        let mu = match table_len(t.size(), gamma.size(), arity) {
            Some(len) if len <= limits.max_table_entries => {
                let (ts, gs) = (t.size(), gamma.size());
                let mut table = Vec::with_capacity(len);
                let mut xs = vec![0; arity];
                let mut g = vec![0; arity - 1];
                let tail = tuple::checked_pow(gs, arity - 1).unwrap();
                for idx in 0..len {
                    tuple::decode_into(idx / tail, ts, &mut xs);
                    tuple::decode_into(idx % tail, gs, &mut g);
                    table.push(f(&xs, &g));
                }
                Mu::Table(table)
            }
            _ => Mu::Func(f),
        };
        Ok(GammaSemiring {
            t,
            gamma,
            arity,
            mu,
            provenance,
        })
    }

    pub fn t(&self) -> &FiniteCommMonoid {
        &self.t
    }

    pub fn gamma(&self) -> &FiniteCommMonoid {
        &self.gamma
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub(crate) fn set_provenance(&mut self, p: Provenance) {
        self.provenance = p;
    }

    pub fn table(&self) -> Option<&[usize]> {
        match &self.mu {
            Mu::Table(t) => Some(t),
            Mu::Func(_) => None,
        }
    }

    #[inline]
    pub fn mu(&self, xs: &[usize], gs: &[usize]) -> usize {
        debug_assert_eq!(xs.len(), self.arity);
        debug_assert_eq!(gs.len(), self.arity - 1);
        match &self.mu {
            Mu::Table(table) => {
                let xi = tuple::encode(xs, self.t.size());
                let gi = tuple::encode(gs, self.gamma.size());
                let tail = self.gamma_tuple_count();
                table[xi * tail + gi]
            }
            Mu::Func(f) => f(xs, gs),
        }
    }

    /// Returns a copy with one μ̃ entry replaced.
    pub fn with_mu_entry(&self, xs: &[usize], gs: &[usize], value: usize) -> Result<Self> {
        let mut table = match &self.mu {
            Mu::Table(t) => t.clone(),
            Mu::Func(_) => {
                return Err(Error::structural(
                    "μ̃ is generator-backed; only table-backed μ̃ can be edited",
                ))
            }
        };
        if xs.len() != self.arity
            || gs.len() != self.arity - 1
            || value >= self.t.size()
            || xs.iter().any(|&x| x >= self.t.size())
            || gs.iter().any(|&g| g >= self.gamma.size())
        {
            return Err(Error::structural("μ̃ entry out of range"));
        }
        let idx = tuple::encode(xs, self.t.size()) * self.gamma_tuple_count() + tuple::encode(gs, self.gamma.size());
        table[idx] = value;
        GammaSemiring::from_table(self.t.clone(), self.gamma.clone(), self.arity, table)
    }

    /// `|Γ|^{n−1}`.
    pub fn gamma_tuple_count(&self) -> usize {
        tuple::checked_pow(self.gamma.size(), self.arity - 1).expect("validated at construction")
    }

    /// Number of action contexts: `|T|^{n−1}·|Γ|^{n−1}`.
    pub fn context_count(&self) -> usize {
        tuple::checked_pow(self.t.size(), self.arity - 1).expect("small carrier") * self.gamma_tuple_count()
    }

    /// Context id of the T-tuple `ts` (the n−1 arguments other than the
    /// module slot, in slot order) and parameters `gs`.
    pub fn encode_context(&self, ts: &[usize], gs: &[usize]) -> usize {
        tuple::encode(ts, self.t.size()) * self.gamma_tuple_count() + tuple::encode(gs, self.gamma.size())
    }

    pub fn decode_context(&self, ctx: usize, ts: &mut [usize], gs: &mut [usize]) {
        let tail = self.gamma_tuple_count();
        tuple::decode_into(ctx / tail, self.t.size(), ts);
        tuple::decode_into(ctx % tail, self.gamma.size(), gs);
    }

    /// μ̃ with `m` inserted at 1-based `slot` between the context entries.
    pub fn mu_inserted(&self, ts: &[usize], slot: usize, m: usize, gs: &[usize]) -> usize {
        let mut xs = Vec::with_capacity(self.arity);
        xs.extend_from_slice(&ts[..slot - 1]);
        xs.push(m);
        xs.extend_from_slice(&ts[slot - 1..]);
        self.mu(&xs, gs)
    }

    /// Runs A1–A3 exhaustively, plus the informational A4 and Γ-additivity
    /// scans.
    pub fn validate(&self) -> AxiomReport {
        let mut report = AxiomReport::new();
        report.push(self.scan_a1());
        report.push(self.scan_a2());
        report.push(self.scan_a3());
        report.push(match self.find_asymmetry() {
            Some(w) => LawResult {
                law: Law::A4,
                verdict: Verdict::Info(format!("non-symmetric: {}", w)),
                checked: 0,
                skipped: 0,
                note: None,
            },
            None => LawResult {
                law: Law::A4,
                verdict: Verdict::Info("fully symmetric".into()),
                checked: 0,
                skipped: 0,
                note: None,
            },
        });
        let ga = self.scan_gamma_additivity();
        report.push(LawResult {
            law: Law::GammaAdditivity,
            verdict: match &ga.verdict {
                Verdict::Fail(w) => Verdict::Info(format!("not Γ-additive: {}", w)),
                _ => Verdict::Info("Γ-additive in every parameter".into()),
            },
            checked: ga.checked,
            skipped: 0,
            note: None,
        });
        report
    }

    fn scan_a1(&self) -> LawResult {
        let n = self.arity;
        let (ts, gsz) = (self.t.size(), self.gamma.size());
        let mut scan = LawScan::new(Law::A1);
        let mut xs = vec![0; n];
        'slots: for slot in 0..n {
            let flow = for_each_uniform(ts, n - 1, |rest| {
                for_each_uniform(gsz, n - 1, |gs| {
                    for a in 0..ts {
                        for b in 0..ts {
                            scan.tick();
                            fill_with(&mut xs, rest, slot, self.t.add(a, b));
                            let lhs = self.mu(&xs, gs);
                            xs[slot] = a;
                            let ma = self.mu(&xs, gs);
                            xs[slot] = b;
                            let mb = self.mu(&xs, gs);
                            let rhs = self.t.add(ma, mb);
                            if lhs != rhs {
                                xs[slot] = a;
                                scan.fail(
                                    Witness::new(Law::A1)
                                        .scalar("slot", slot + 1)
                                        .field("args", xs.clone())
                                        .scalar("alt", b)
                                        .field("params", gs.to_vec())
                                        .sides(lhs, rhs),
                                );
                                return ControlFlow::Break(());
                            }
                        }
                    }
                    ControlFlow::Continue(())
                })
            });
            if flow.is_break() {
                break 'slots;
            }
        }
        scan.finish()
    }

    fn scan_a2(&self) -> LawResult {
        let n = self.arity;
        let (ts, gsz) = (self.t.size(), self.gamma.size());
        let zero = self.t.zero();
        let mut scan = LawScan::new(Law::A2);
        let mut xs = vec![0; n];
        for slot in 0..n {
            let flow = for_each_uniform(ts, n - 1, |rest| {
                for_each_uniform(gsz, n - 1, |gs| {
                    scan.tick();
                    fill_with(&mut xs, rest, slot, zero);
                    let v = self.mu(&xs, gs);
                    if v != zero {
                        scan.fail(
                            Witness::new(Law::A2)
                                .scalar("slot", slot + 1)
                                .field("args", xs.clone())
                                .field("params", gs.to_vec())
                                .sides(v, zero),
                        );
                        return ControlFlow::Break(());
                    }
                    ControlFlow::Continue(())
                })
            });
            if flow.is_break() {
                break;
            }
        }
        scan.finish()
    }

    /// Value of the bracketing that evaluates the inner μ̃ on the block of
    /// `word` starting at 0-based `p`. Inner parameters are the ones lying
    /// between the block's arguments; the rest go to the outer μ̃.
    pub fn bracket(&self, word: &[usize], params: &[usize], p: usize) -> usize {
        let n = self.arity;
        let inner = self.mu(&word[p..p + n], &params[p..p + n - 1]);
        let mut outer = Vec::with_capacity(n);
        outer.extend_from_slice(&word[..p]);
        outer.push(inner);
        outer.extend_from_slice(&word[p + n..]);
        let mut og = Vec::with_capacity(n - 1);
        og.extend_from_slice(&params[..p]);
        og.extend_from_slice(&params[p + n - 1..]);
        self.mu(&outer, &og)
    }

    fn scan_a3(&self) -> LawResult {
        let n = self.arity;
        let (ts, gsz) = (self.t.size(), self.gamma.size());
        let mut scan = LawScan::new(Law::A3);
        let _ = for_each_uniform(ts, 2 * n - 1, |word| {
            for_each_uniform(gsz, 2 * n - 2, |params| {
                scan.tick();
                let first = self.bracket(word, params, 0);
                for p in 1..n {
                    let v = self.bracket(word, params, p);
                    if v != first {
                        scan.fail(
                            Witness::new(Law::A3)
                                .field("word", word.to_vec())
                                .field("params", params.to_vec())
                                .field("blocks", vec![0, p])
                                .sides(first, v),
                        );
                        return ControlFlow::Break(());
                    }
                }
                ControlFlow::Continue(())
            })
        });
        scan.finish()
    }

    fn scan_gamma_additivity(&self) -> LawResult {
        let n = self.arity;
        let (ts, gsz) = (self.t.size(), self.gamma.size());
        let mut scan = LawScan::new(Law::GammaAdditivity);
        let mut gs = vec![0; n - 1];
        for pos in 0..n - 1 {
            let flow = for_each_uniform(ts, n, |xs| {
                for_each_uniform(gsz, n - 2, |rest| {
                    for u in 0..gsz {
                        for v in 0..gsz {
                            scan.tick();
                            fill_with(&mut gs, rest, pos, self.gamma.add(u, v));
                            let lhs = self.mu(xs, &gs);
                            gs[pos] = u;
                            let a = self.mu(xs, &gs);
                            gs[pos] = v;
                            let b = self.mu(xs, &gs);
                            if lhs != self.t.add(a, b) {
                                gs[pos] = u;
                                scan.fail(
                                    Witness::new(Law::GammaAdditivity)
                                        .scalar("param", pos + 1)
                                        .field("args", xs.to_vec())
                                        .field("params", gs.clone())
                                        .scalar("alt", v)
                                        .sides(lhs, self.t.add(a, b)),
                                );
                                return ControlFlow::Break(());
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
        scan.finish()
    }

    /// A tuple and a transposition of two T-arguments that changes μ̃.
    pub fn find_asymmetry(&self) -> Option<Witness> {
        let n = self.arity;
        let mut found = None;
        let _ = for_each_uniform(self.t.size(), n, |xs| {
            for_each_uniform(self.gamma.size(), n - 1, |gs| {
                let v = self.mu(xs, gs);
                for i in 0..n {
                    for j in i + 1..n {
                        if xs[i] == xs[j] {
                            continue;
                        }
                        let mut ys = xs.to_vec();
                        ys.swap(i, j);
                        let w = self.mu(&ys, gs);
                        if w != v {
                            found = Some(
                                Witness::new(Law::A4)
                                    .field("args", xs.to_vec())
                                    .field("params", gs.to_vec())
                                    .field("swap", vec![i + 1, j + 1])
                                    .sides(v, w),
                            );
                            return ControlFlow::Break(());
                        }
                    }
                }
                ControlFlow::Continue(())
            })
        });
        found
    }

    /// Re-evaluates a witness produced by [`GammaSemiring::validate`];
    /// returns `Some(true)` when the instance still fails.
    pub fn replay(&self, w: &Witness) -> Option<bool> {
        match w.law {
            Law::A1 => {
                let slot = w.get_scalar("slot")? - 1;
                let mut xs = w.get("args")?.to_vec();
                let gs = w.get("params")?;
                let b = w.get_scalar("alt")?;
                let a = xs[slot];
                xs[slot] = self.t.add(a, b);
                let lhs = self.mu(&xs, gs);
                xs[slot] = a;
                let ma = self.mu(&xs, gs);
                xs[slot] = b;
                let mb = self.mu(&xs, gs);
                Some(lhs != self.t.add(ma, mb))
            }
            Law::A2 => {
                let xs = w.get("args")?;
                let gs = w.get("params")?;
                Some(self.mu(xs, gs) != self.t.zero())
            }
            Law::A3 => {
                let word = w.get("word")?;
                let params = w.get("params")?;
                let blocks = w.get("blocks")?;
                Some(self.bracket(word, params, blocks[0]) != self.bracket(word, params, blocks[1]))
            }
            Law::A4 => {
                let xs = w.get("args")?;
                let gs = w.get("params")?;
                let sw = w.get("swap")?;
                let mut ys = xs.to_vec();
                ys.swap(sw[0] - 1, sw[1] - 1);
                Some(self.mu(xs, gs) != self.mu(&ys, gs))
            }
            _ => None,
        }
    }
}

/// Writes `rest` into `xs` leaving position `slot` set to `value`.
#[inline]
pub(crate) fn fill_with(xs: &mut [usize], rest: &[usize], slot: usize, value: usize) {
    xs[..slot].copy_from_slice(&rest[..slot]);
    xs[slot] = value;
    xs[slot + 1..].copy_from_slice(&rest[slot..]);
}

fn table_len(t: usize, g: usize, n: usize) -> Option<usize> {
    tuple::checked_pow(t, n)?.checked_mul(tuple::checked_pow(g, n - 1)?)
}

/// Validates a candidate semiring; convenience wrapper over
/// [`GammaSemiring::validate`].
pub fn validate_gamma_semiring(s: &GammaSemiring) -> AxiomReport {
    s.validate()
}

fn mat_mul(base: ScalarBase, dim: usize, a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = vec![base.zero(); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = base.zero();
            for k in 0..dim {
                acc = base.add(acc, base.mul(a[i * dim + k], b[k * dim + j]));
            }
            out[i * dim + j] = acc;
        }
    }
    out
}

fn mat_scale(base: ScalarBase, g: usize, a: &mut [usize]) {
    for x in a.iter_mut() {
        *x = base.mul(g, *x);
    }
}

/// `m×m` matrices over `base` as T, base scalars as Γ, and μ̃ the
/// interleaved product of matrices and scalars in the given layout.
pub fn build_matrix_realization(
    base: ScalarBase,
    dim: usize,
    arity: usize,
    layout: MatrixLayout,
    limits: &Limits,
) -> Result<GammaSemiring> {
    if dim == 0 {
        return Err(Error::structural("matrix dimension must be positive"));
    }
    if arity < 2 {
        return Err(Error::structural(format!("arity {} < 2", arity)));
    }
    let entries = dim * dim;
    let size = tuple::pow_u128(base.size(), entries);
    if size > limits.max_carrier as u128 {
        return Err(Error::limit("matrix carrier |T|", size, limits.max_carrier as u128));
    }
    let size = size as usize;
    let bs = base.size();
    let zero_matrix = tuple::encode(&vec![base.zero(); entries], bs);
    let t = FiniteCommMonoid::from_fn_unchecked(size, zero_matrix, |a, b| {
        let da = tuple::decode(a, bs, entries);
        let db = tuple::decode(b, bs, entries);
        let s: Vec<usize> = da.iter().zip(&db).map(|(x, y)| base.add(*x, *y)).collect();
        tuple::encode(&s, bs)
    });
    let labels = (0..size)
        .map(|a| {
            let d = tuple::decode(a, bs, entries);
            if dim == 1 {
                base.label(d[0])
            } else {
                let rows: Vec<String> = d
                    .chunks(dim)
                    .map(|r| r.iter().map(|&x| base.label(x)).collect::<Vec<_>>().join(" "))
                    .collect();
                format!("[{}]", rows.join(";"))
            }
        })
        .collect();
    let t = t.with_labels(labels)?;
    let gamma = base.monoid();
    let f = move |xs: &[usize], gs: &[usize]| {
        let mats: Vec<Vec<usize>> = xs.iter().map(|&x| tuple::decode(x, bs, entries)).collect();
        let mut acc = mats[0].clone();
        match layout {
            MatrixLayout::AsWritten => {
                // γ₁A₁A₂, then γ_i A_{i+1} for i ≥ 2.
                mat_scale(base, gs[0], &mut acc);
                acc = mat_mul(base, dim, &acc, &mats[1]);
                for i in 1..gs.len() {
                    mat_scale(base, gs[i], &mut acc);
                    acc = mat_mul(base, dim, &acc, &mats[i + 1]);
                }
            }
            MatrixLayout::Interleaved => {
                for i in 0..gs.len() {
                    mat_scale(base, gs[i], &mut acc);
                    acc = mat_mul(base, dim, &acc, &mats[i + 1]);
                }
            }
        }
        tuple::encode(&acc, bs)
    };
    GammaSemiring::from_fn(t, gamma, arity, f, Provenance::Matrix { base, dim, layout }, limits)
}

fn is_additive_map(v: &FiniteCommMonoid, f: &[usize]) -> Option<Witness> {
    if f[v.zero()] != v.zero() {
        return Some(
            Witness::new(Law::ZeroPreserved)
                .field("map", f.to_vec())
                .sides(f[v.zero()], v.zero()),
        );
    }
    for a in 0..v.size() {
        for b in 0..v.size() {
            let l = f[v.add(a, b)];
            let r = v.add(f[a], f[b]);
            if l != r {
                return Some(
                    Witness::new(Law::Additive)
                        .field("map", f.to_vec())
                        .field("elements", vec![a, b])
                        .sides(l, r),
                );
            }
        }
    }
    None
}

/// Additive endomaps of `v` under pointwise addition as T, the additive
/// closure of `gamma_maps` as Γ, and μ̃ the alternating composition
/// `f₁∘γ₁∘f₂∘⋯∘γ_{n−1}∘f_n`.
pub fn build_endomorphism_realization(
    v: &FiniteCommMonoid,
    arity: usize,
    gamma_maps: &[Vec<usize>],
    limits: &Limits,
) -> Result<GammaSemiring> {
    if arity < 2 {
        return Err(Error::structural(format!("arity {} < 2", arity)));
    }
    let vs = v.size();
    for g in gamma_maps {
        if g.len() != vs || g.iter().any(|&x| x >= vs) {
            return Err(Error::structural(format!(
                "Γ-map {:?} is not a map on {} elements",
                g, vs
            )));
        }
        if let Some(w) = is_additive_map(v, g) {
            return Err(Error::LawViolation(w));
        }
    }
    let count = tuple::pow_u128(vs, vs);
    if count > limits.max_hom_enumeration {
        return Err(Error::limit("maps V → V", count, limits.max_hom_enumeration));
    }
    let mut ends: Vec<Vec<usize>> = Vec::new();
    let _ = for_each_uniform(vs, vs, |f| {
        if is_additive_map(v, f).is_none() {
            ends.push(f.to_vec());
        }
        ControlFlow::Continue(())
    });
    if ends.len() > limits.max_carrier {
        return Err(Error::limit(
            "additive endomaps |End(V)|",
            ends.len() as u128,
            limits.max_carrier as u128,
        ));
    }
    let pointwise = |a: &[usize], b: &[usize]| -> Vec<usize> { a.iter().zip(b).map(|(x, y)| v.add(*x, *y)).collect() };
    let zero_map = vec![v.zero(); vs];

    let t_index: HashMap<Vec<usize>, usize> = ends.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
    let t = FiniteCommMonoid::from_fn_unchecked(ends.len(), t_index[&zero_map], |a, b| {
        t_index[&pointwise(&ends[a], &ends[b])]
    })
    .with_labels(ends.iter().map(|f| format!("{:?}", f)).collect())?;

    // Additive closure of the Γ-maps, in discovery order starting from 0.
    let mut gmaps: Vec<Vec<usize>> = vec![zero_map.clone()];
    for g in gamma_maps {
        if !gmaps.contains(g) {
            gmaps.push(g.clone());
        }
    }
    loop {
        let mut grew = false;
        let snapshot = gmaps.clone();
        for a in &snapshot {
            for b in &snapshot {
                let s = pointwise(a, b);
                if !gmaps.contains(&s) {
                    gmaps.push(s);
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let g_index: HashMap<Vec<usize>, usize> = gmaps.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
    let gamma = FiniteCommMonoid::from_fn_unchecked(gmaps.len(), 0, |a, b| g_index[&pointwise(&gmaps[a], &gmaps[b])])
        .with_labels(gmaps.iter().map(|f| format!("{:?}", f)).collect())?;

    let ends_c = ends.clone();
    let f = move |xs: &[usize], gs: &[usize]| {
        // Compose right to left: x ↦ f₁(γ₁(f₂(⋯ f_n(x)))).
        let comp: Vec<usize> = (0..vs)
            .map(|x| {
                let mut y = ends_c[xs[xs.len() - 1]][x];
                for i in (0..gs.len()).rev() {
                    y = gmaps[gs[i]][y];
                    y = ends_c[xs[i]][y];
                }
                y
            })
            .collect();
        t_index[&comp]
    };
    GammaSemiring::from_fn(t, gamma, arity, f, Provenance::Endo, limits)
}

/// A pair of additive maps `(f_T, f_Γ)` between two semirings.
#[derive(Clone, Debug)]
pub struct SemiringHom {
    pub f_t: Vec<usize>,
    pub f_gamma: Vec<usize>,
    pub source: Arc<GammaSemiring>,
    pub target: Arc<GammaSemiring>,
}

impl SemiringHom {
    pub fn identity(s: &Arc<GammaSemiring>) -> Self {
        SemiringHom {
            f_t: (0..s.t.size()).collect(),
            f_gamma: (0..s.gamma.size()).collect(),
            source: s.clone(),
            target: s.clone(),
        }
    }
}

/// Checks additivity of both maps and the μ̃-intertwining identity.
pub fn validate_homomorphism(h: &SemiringHom) -> Result<AxiomReport> {
    let (s, t) = (&h.source, &h.target);
    if s.arity != t.arity {
        return Err(Error::structural(format!("arity mismatch: {} vs {}", s.arity, t.arity)));
    }
    if h.f_t.len() != s.t.size() || h.f_t.iter().any(|&x| x >= t.t.size()) {
        return Err(Error::structural("f_T is not a map T → T′"));
    }
    if h.f_gamma.len() != s.gamma.size() || h.f_gamma.iter().any(|&x| x >= t.gamma.size()) {
        return Err(Error::structural("f_Γ is not a map Γ → Γ′"));
    }
    let mut report = AxiomReport::new();
    let mut zero = LawScan::new(Law::ZeroPreserved);
    zero.tick();
    if h.f_t[s.t.zero()] != t.t.zero() {
        zero.fail(
            Witness::new(Law::ZeroPreserved)
                .scalar("map", 0)
                .sides(h.f_t[s.t.zero()], t.t.zero()),
        );
    }
    zero.tick();
    if h.f_gamma[s.gamma.zero()] != t.gamma.zero() {
        zero.fail(
            Witness::new(Law::ZeroPreserved)
                .scalar("map", 1)
                .sides(h.f_gamma[s.gamma.zero()], t.gamma.zero()),
        );
    }
    report.push(zero.finish());

    let mut add = LawScan::new(Law::Additive);
    for (which, (src, tgt, f)) in [(&s.t, &t.t, &h.f_t), (&s.gamma, &t.gamma, &h.f_gamma)]
        .into_iter()
        .enumerate()
    {
        'o: for a in 0..src.size() {
            for b in 0..src.size() {
                add.tick();
                let l = f[src.add(a, b)];
                let r = tgt.add(f[a], f[b]);
                if l != r {
                    add.fail(
                        Witness::new(Law::Additive)
                            .scalar("map", which)
                            .field("elements", vec![a, b])
                            .sides(l, r),
                    );
                    break 'o;
                }
            }
        }
    }
    report.push(add.finish());

    let mut inter = LawScan::new(Law::Intertwining);
    let n = s.arity;
    let _ = for_each_uniform(s.t.size(), n, |xs| {
        for_each_uniform(s.gamma.size(), n - 1, |gs| {
            inter.tick();
            let l = h.f_t[s.mu(xs, gs)];
            let fx: Vec<usize> = xs.iter().map(|&x| h.f_t[x]).collect();
            let fg: Vec<usize> = gs.iter().map(|&g| h.f_gamma[g]).collect();
            let r = t.mu(&fx, &fg);
            if l != r {
                inter.fail(
                    Witness::new(Law::Intertwining)
                        .field("args", xs.to_vec())
                        .field("params", gs.to_vec())
                        .sides(l, r),
                );
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        })
    });
    report.push(inter.finish());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b3() -> GammaSemiring {
        build_matrix_realization(ScalarBase::Boolean, 1, 3, MatrixLayout::AsWritten, &Limits::default()).unwrap()
    }

    #[test]
    fn boolean_ternary_is_valid() {
        let s = b3();
        assert_eq!(s.t().size(), 2);
        assert!(s.table().is_some());
        assert_eq!(s.mu(&[1, 1, 1], &[1, 1]), 1);
        assert_eq!(s.mu(&[1, 1, 1], &[1, 0]), 0);
        let r = s.validate();
        assert!(r.passed(), "{:?}", r.lines());
    }

    #[test]
    fn mutations_are_caught_and_replay() {
        let s = b3();
        let cases: [(&[usize], &[usize], Law); 3] = [
            (&[0, 0, 0], &[0, 0], Law::A1),
            (&[0, 1, 1], &[1, 1], Law::A2),
            (&[1, 1, 1], &[1, 0], Law::A3),
        ];
        for (xs, gs, law) in cases {
            let m = s.with_mu_entry(xs, gs, 1).unwrap();
            let r = m.validate();
            let w = r.failure(law).unwrap_or_else(|| panic!("{} not caught", law));
            assert_eq!(m.replay(w), Some(true));
            assert_eq!(s.replay(w), Some(false));
        }
    }

    #[test]
    fn all_zero_mu_passes() {
        let s = b3().with_mu_entry(&[1, 1, 1], &[1, 1], 0).unwrap();
        assert!(s.validate().passed());
    }

    #[test]
    fn two_by_two_boolean_matrices_are_not_symmetric() {
        let s =
            build_matrix_realization(ScalarBase::Boolean, 2, 3, MatrixLayout::AsWritten, &Limits::default()).unwrap();
        assert_eq!(s.t().size(), 16);
        let w = s.find_asymmetry().expect("matrix product is non-commutative");
        assert_eq!(s.replay(&w), Some(true));
    }

    #[test]
    fn tropical_layouts_agree() {
        let l = Limits::default();
        let a = build_matrix_realization(ScalarBase::TruncTropical(2), 1, 3, MatrixLayout::AsWritten, &l).unwrap();
        let b = build_matrix_realization(ScalarBase::TruncTropical(2), 1, 3, MatrixLayout::Interleaved, &l).unwrap();
        assert_eq!(a.table(), b.table());
        assert!(a.validate().passed());
    }

    #[test]
    fn carrier_limit_is_enforced() {
        let e = build_matrix_realization(ScalarBase::Z2, 3, 3, MatrixLayout::AsWritten, &Limits::default());
        assert!(matches!(e, Err(Error::Limit { .. })));
    }

    #[test]
    fn endomorphisms_of_boolean() {
        let v = FiniteCommMonoid::boolean();
        let s = build_endomorphism_realization(&v, 3, &[vec![0, 1]], &Limits::default()).unwrap();
        assert_eq!(s.t().size(), 2);
        assert_eq!(s.gamma().size(), 2);
        assert!(s.validate().passed());
        let bad = build_endomorphism_realization(&v, 3, &[vec![1, 1]], &Limits::default());
        assert!(matches!(bad, Err(Error::LawViolation(_))));
    }

    #[test]
    fn swap_is_not_a_homomorphism() {
        let s = Arc::new(
            build_matrix_realization(ScalarBase::Z2, 1, 3, MatrixLayout::AsWritten, &Limits::default()).unwrap(),
        );
        let id = SemiringHom::identity(&s);
        assert!(validate_homomorphism(&id).unwrap().passed());
        let swap = SemiringHom { f_t: vec![1, 0], ..id };
        let r = validate_homomorphism(&swap).unwrap();
        assert!(!r.passed_law(Law::ZeroPreserved));
    }
}
