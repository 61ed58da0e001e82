//! Finite commutative monoids, congruences, and bounded term universes.

use std::collections::HashMap;
use std::ops::ControlFlow;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::{AxiomReport, Law, LawScan, Witness};

/// A finite commutative monoid on the indices `0..size` with an explicit
/// addition table. The zero need not be index 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteCommMonoid {
    size: usize,
    table: Vec<usize>,
    zero: usize,
    labels: Option<Vec<String>>,
}

impl FiniteCommMonoid {
    /// Builds a monoid from a row-major table, rejecting malformed tables
    /// and law failures.
    pub fn new(size: usize, table: Vec<usize>, zero: usize) -> Result<Self> {
        let rows: Vec<Vec<usize>> = if size == 0 {
            Vec::new()
        } else {
            table.chunks(size).map(<[usize]>::to_vec).collect()
        };
        if table.len() != size * size {
            return Err(Error::structural(format!(
                "addition table has {} entries, expected {}",
                table.len(),
                size * size
            )));
        }
        let report = validate_comm_monoid(&rows, zero)?;
        if let Some(w) = report.first_failure() {
            return Err(Error::LawViolation(w.clone()));
        }
        Ok(Self::new_unchecked(size, table, zero))
    }

    pub fn from_fn(size: usize, zero: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let mut table = Vec::with_capacity(size * size);
        for a in 0..size {
            for b in 0..size {
                table.push(f(a, b));
            }
        }
        Self::new(size, table, zero)
    }

    /// For tables already known to satisfy the laws (built by this crate).
    pub(crate) fn new_unchecked(size: usize, table: Vec<usize>, zero: usize) -> Self {
        debug_assert_eq!(table.len(), size * size);
        FiniteCommMonoid {
            size,
            table,
            zero,
            labels: None,
        }
    }

    pub(crate) fn from_fn_unchecked(size: usize, zero: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        let mut table = Vec::with_capacity(size * size);
        for a in 0..size {
            for b in 0..size {
                table.push(f(a, b));
            }
        }
        Self::new_unchecked(size, table, zero)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size {
            return Err(Error::structural(format!(
                "{} labels for {} elements",
                labels.len(),
                self.size
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        match &self.labels {
            Some(l) => l.iter().position(|x| x == label),
            None => None,
        }
    }

    pub fn is_idempotent(&self) -> bool {
        (0..self.size).all(|a| self.add(a, a) == a)
    }

    /// Structural equality ignoring labels.
    pub fn same_table(&self, other: &Self) -> bool {
        self.size == other.size && self.zero == other.zero && self.table == other.table
    }

    /// The one-element monoid.
    pub fn trivial() -> Self {
        Self::new_unchecked(1, vec![0], 0)
    }

    /// `{0, 1}` under OR.
    pub fn boolean() -> Self {
        Self::from_fn_unchecked(2, 0, |a, b| a | b)
    }

    /// `{0, 1}` under XOR.
    pub fn z2() -> Self {
        Self::from_fn_unchecked(2, 0, |a, b| a ^ b)
    }

    /// The chain `0 < 1 < … < k-1` under max.
    pub fn chain(k: usize) -> Self {
        assert!(k >= 1);
        Self::from_fn_unchecked(k, 0, |a, b| a.max(b))
    }

    /// Cyclic group `Z_k` under addition mod k.
    pub fn cyclic(k: usize) -> Self {
        assert!(k >= 1);
        Self::from_fn_unchecked(k, 0, |a, b| (a + b) % k)
    }

    /// Product monoid; the pair `(a, b)` is encoded as `a * |other| + b`.
    pub fn product(&self, other: &Self) -> Self {
        let nb = other.size;
        let mut m = Self::from_fn_unchecked(self.size * nb, self.zero * nb + other.zero, |x, y| {
            self.add(x / nb, y / nb) * nb + other.add(x % nb, y % nb)
        });
        let labels = (0..self.size * nb)
            .map(|x| format!("({},{})", self.label(x / nb), other.label(x % nb)))
            .collect();
        m.labels = Some(labels);
        m
    }
}

/// Checks the commutative-monoid laws on a candidate table. Malformed
/// tables (non-square rows, out-of-range entries, bad zero) are structural
/// errors; law failures are reported with the smallest witness.
pub fn validate_comm_monoid(rows: &[Vec<usize>], zero: usize) -> Result<AxiomReport> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::structural("empty carrier"));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(Error::structural(format!(
                "row {} has {} entries, expected {}",
                i,
                r.len(),
                n
            )));
        }
        if let Some(&bad) = r.iter().find(|&&v| v >= n) {
            return Err(Error::structural(format!(
                "entry {} in row {} is out of range 0..{}",
                bad, i, n
            )));
        }
    }
    if zero >= n {
        return Err(Error::structural(format!("zero {} out of range 0..{}", zero, n)));
    }
    let add = |a: usize, b: usize| rows[a][b];
    let mut report = AxiomReport::new();

    let mut comm = LawScan::new(Law::Commutativity);
    'outer: for a in 0..n {
        for b in 0..n {
            comm.tick();
            if add(a, b) != add(b, a) {
                comm.fail(
                    Witness::new(Law::Commutativity)
                        .field("elements", vec![a, b])
                        .sides(add(a, b), add(b, a)),
                );
                break 'outer;
            }
        }
    }
    report.push(comm.finish());

    let mut assoc = LawScan::new(Law::Associativity);
    'outer2: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                assoc.tick();
                let l = add(add(a, b), c);
                let r = add(a, add(b, c));
                if l != r {
                    assoc.fail(
                        Witness::new(Law::Associativity)
                            .field("elements", vec![a, b, c])
                            .sides(l, r),
                    );
                    break 'outer2;
                }
            }
        }
    }
    report.push(assoc.finish());

    let mut neutral = LawScan::new(Law::Neutrality);
    for a in 0..n {
        neutral.tick();
        if add(a, zero) != a || add(zero, a) != a {
            neutral.fail(
                Witness::new(Law::Neutrality)
                    .field("elements", vec![a])
                    .sides(add(a, zero), a),
            );
            break;
        }
    }
    report.push(neutral.finish());
    Ok(report)
}

/// Union–find where the smaller root always wins, so every root is the
/// minimum of its class.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true if two distinct classes were merged.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    pub(crate) fn into_relation(mut self) -> CongruenceRelation {
        let n = self.parent.len();
        let mut class_of = vec![usize::MAX; n];
        let mut representatives = Vec::new();
        for x in 0..n {
            let r = self.find(x);
            if class_of[r] == usize::MAX {
                class_of[r] = representatives.len();
                representatives.push(r);
            }
            class_of[x] = class_of[r];
        }
        CongruenceRelation {
            class_of,
            representatives,
        }
    }
}

/// Worklist closure over a partial algebra: a binary addition and a family
/// of unary operators. Every performed merge of `x` and `y` schedules the
/// merge of `x + b` with `y + b` for every `b`, and of `op(x)` with `op(y)`
/// for every operator, whenever both sides are defined. When some operation
/// was undefined along the way, class-level sweeps then merge any two
/// defined results whose arguments are pairwise related, until stable.
pub(crate) struct Closure<'a> {
    pub size: usize,
    pub add: &'a dyn Fn(usize, usize) -> Option<usize>,
    pub op_count: usize,
    pub op: &'a dyn Fn(usize, usize) -> Option<usize>,
}

pub(crate) struct ClosureOutcome {
    pub relation: CongruenceRelation,
    /// Per seed: whether the seed itself merged two classes.
    pub seed_effective: Vec<bool>,
    pub saturation_merges: usize,
}

impl Closure<'_> {
    pub(crate) fn run(&self, seeds: &[(usize, usize)]) -> ClosureOutcome {
        let mut uf = UnionFind::new(self.size);
        let mut queue: Vec<(usize, usize)> = Vec::new();
        let mut seed_effective = Vec::with_capacity(seeds.len());
        let mut saturation_merges = 0;
        let mut partial = false;
        for &(a, b) in seeds {
            let merged = uf.union(a, b);
            seed_effective.push(merged);
            if merged {
                partial |= self.schedule(a, b, &mut queue);
            }
            saturation_merges += self.drain(&mut uf, &mut queue, &mut partial);
        }
        while partial {
            self.sweep(&mut uf, &mut queue);
            if queue.is_empty() {
                break;
            }
            saturation_merges += self.drain(&mut uf, &mut queue, &mut partial);
        }
        ClosureOutcome {
            relation: uf.into_relation(),
            seed_effective,
            saturation_merges,
        }
    }

    fn drain(&self, uf: &mut UnionFind, queue: &mut Vec<(usize, usize)>, partial: &mut bool) -> usize {
        let mut merges = 0;
        while let Some((x, y)) = queue.pop() {
            if uf.union(x, y) {
                merges += 1;
                *partial |= self.schedule(x, y, queue);
            }
        }
        merges
    }

    /// Returns whether some operation was undefined on one side.
    fn schedule(&self, x: usize, y: usize, queue: &mut Vec<(usize, usize)>) -> bool {
        let mut partial = false;
        for b in 0..self.size {
            match ((self.add)(x, b), (self.add)(y, b)) {
                (Some(p), Some(q)) if p != q => queue.push((p, q)),
                (Some(_), Some(_)) | (None, None) => {}
                _ => partial = true,
            }
        }
        for o in 0..self.op_count {
            match ((self.op)(o, x), (self.op)(o, y)) {
                (Some(p), Some(q)) if p != q => queue.push((p, q)),
                (Some(_), Some(_)) | (None, None) => {}
                _ => partial = true,
            }
        }
        partial
    }

    /// Queues a merge for every pair of defined results with related
    /// arguments that currently lie in different classes.
    fn sweep(&self, uf: &mut UnionFind, queue: &mut Vec<(usize, usize)>) {
        let mut seen: std::collections::HashMap<(usize, usize, usize), usize> = std::collections::HashMap::new();
        for x in 0..self.size {
            let rx = uf.find(x);
            for b in x..self.size {
                if let Some(v) = (self.add)(x, b) {
                    let rb = uf.find(b);
                    let key = (usize::MAX, rx.min(rb), rx.max(rb));
                    let first = *seen.entry(key).or_insert(v);
                    if uf.find(first) != uf.find(v) {
                        queue.push((first, v));
                    }
                }
            }
            for o in 0..self.op_count {
                if let Some(v) = (self.op)(o, x) {
                    let first = *seen.entry((o, rx, 0)).or_insert(v);
                    if uf.find(first) != uf.find(v) {
                        queue.push((first, v));
                    }
                }
            }
        }
    }
}

/// A partition of a carrier. Classes are numbered in order of their
/// smallest element, which is also the class representative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceRelation {
    class_of: Vec<usize>,
    representatives: Vec<usize>,
}

impl CongruenceRelation {
    pub fn identity(n: usize) -> Self {
        CongruenceRelation {
            class_of: (0..n).collect(),
            representatives: (0..n).collect(),
        }
    }

    pub fn total(n: usize) -> Self {
        CongruenceRelation {
            class_of: vec![0; n],
            representatives: if n == 0 { vec![] } else { vec![0] },
        }
    }

    /// Builds a relation from any labelling of elements; labels are
    /// renumbered canonically.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut uf = UnionFind::new(labels.len());
        let mut first: HashMap<usize, usize> = HashMap::new();
        for (x, &l) in labels.iter().enumerate() {
            match first.get(&l) {
                Some(&y) => {
                    uf.union(x, y);
                }
                None => {
                    first.insert(l, x);
                }
            }
        }
        uf.into_relation()
    }

    pub fn len(&self) -> usize {
        self.class_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_of.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.representatives.len()
    }

    #[inline]
    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn classes(&self) -> &[usize] {
        &self.class_of
    }

    pub fn representative(&self, class: usize) -> usize {
        self.representatives[class]
    }

    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    pub fn members(&self, class: usize) -> Vec<usize> {
        (0..self.class_of.len())
            .filter(|&x| self.class_of[x] == class)
            .collect()
    }

    /// Returns a witness `(a, a', b)` with `a ~ a'` but `a+b ≁ a'+b`.
    pub fn compatibility_witness(&self, base: &FiniteCommMonoid) -> Option<Witness> {
        for a in 0..base.size() {
            let r = self.representatives[self.class_of[a]];
            for b in 0..base.size() {
                let l = base.add(a, b);
                let rr = base.add(r, b);
                if self.class_of[l] != self.class_of[rr] {
                    return Some(
                        Witness::new(Law::Congruence)
                            .field("related", vec![a, r])
                            .scalar("addend", b)
                            .sides(l, rr),
                    );
                }
            }
        }
        None
    }

    /// True when every class of `self` lies inside a class of `coarser`.
    pub fn refines(&self, coarser: &CongruenceRelation) -> bool {
        self.len() == coarser.len()
            && (0..self.len()).all(|x| {
                let r = self.representatives[self.class_of[x]];
                coarser.related(x, r)
            })
    }
}

/// Smallest addition-compatible equivalence on `base` containing `pairs`.
pub fn congruence_closure(base: &FiniteCommMonoid, pairs: &[(usize, usize)]) -> Result<CongruenceRelation> {
    if let Some(&(a, b)) = pairs.iter().find(|&&(a, b)| a >= base.size() || b >= base.size()) {
        return Err(Error::structural(format!(
            "pair ({}, {}) out of range 0..{}",
            a,
            b,
            base.size()
        )));
    }
    let add = |a: usize, b: usize| Some(base.add(a, b));
    let op = |_: usize, _: usize| None;
    let closure = Closure {
        size: base.size(),
        add: &add,
        op_count: 0,
        op: &op,
    };
    Ok(closure.run(pairs).relation)
}

/// Quotient of `base` by a congruence, with its projection map.
pub fn quotient_monoid(base: &FiniteCommMonoid, cong: &CongruenceRelation) -> Result<(FiniteCommMonoid, Vec<usize>)> {
    if cong.len() != base.size() {
        return Err(Error::structural(format!(
            "relation on {} elements applied to a carrier of {}",
            cong.len(),
            base.size()
        )));
    }
    if let Some(w) = cong.compatibility_witness(base) {
        return Err(Error::LawViolation(w));
    }
    let k = cong.class_count();
    let quotient = FiniteCommMonoid::from_fn_unchecked(k, cong.class_of(base.zero()), |x, y| {
        cong.class_of(base.add(cong.representative(x), cong.representative(y)))
    });
    let labels = (0..k)
        .map(|c| format!("[{}]", base.label(cong.representative(c))))
        .collect();
    let quotient = quotient.with_labels(labels)?;
    Ok((quotient, cong.classes().to_vec()))
}

/// Formal sums of generators with at most `bound` summands. Sums are sets
/// when `idempotent`, multisets otherwise.
#[derive(Clone, Debug)]
pub struct TermUniverse {
    generators: usize,
    bound: usize,
    idempotent: bool,
    elements: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl TermUniverse {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn idempotent(&self) -> bool {
        self.idempotent
    }

    /// The empty sum.
    pub fn zero(&self) -> usize {
        0
    }

    /// Coefficient vector of an element.
    pub fn counts(&self, e: usize) -> &[u32] {
        &self.elements[e]
    }

    pub fn index_of(&self, counts: &[u32]) -> Option<usize> {
        self.index.get(counts).copied()
    }

    pub fn generator(&self, g: usize) -> usize {
        let mut v = vec![0u32; self.generators];
        v[g] = 1;
        self.index[&v]
    }

    /// Formal addition; `None` means the sum leaves the universe.
    pub fn add(&self, a: usize, b: usize) -> Option<usize> {
        let va = &self.elements[a];
        let vb = &self.elements[b];
        let sum: Vec<u32> = va
            .iter()
            .zip(vb)
            .map(|(x, y)| if self.idempotent { (*x).max(*y) } else { x + y })
            .collect();
        self.index.get(&sum).copied()
    }

    pub fn display(&self, e: usize, names: &[String]) -> String {
        let parts: Vec<String> = self.elements[e]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(g, &c)| {
                if c == 1 {
                    names[g].clone()
                } else {
                    format!("{}{}", c, names[g])
                }
            })
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }

    /// Materializes the addition as a monoid when no sum leaves the universe.
    pub fn as_monoid(&self) -> Option<FiniteCommMonoid> {
        let n = self.len();
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push(self.add(a, b)?);
            }
        }
        Some(FiniteCommMonoid::new_unchecked(n, table, 0))
    }
}

/// All formal sums of at most `depth_bound` generators, ordered by number of
/// summands and then by descending coefficient vector.
pub fn bounded_term_universe(
    generators: usize,
    depth_bound: usize,
    idempotent: bool,
    max_elements: usize,
) -> Result<TermUniverse> {
    if depth_bound == 0 {
        return Err(Error::structural("depth bound must be at least 1"));
    }
    let mut elements: Vec<Vec<u32>> = Vec::new();
    let cap = if idempotent { 1 } else { depth_bound as u32 };
    for total in 0..=depth_bound {
        let mut cur = vec![0u32; generators];
        let flow = compositions(&mut cur, 0, total as u32, cap, &mut |v| {
            if elements.len() >= max_elements {
                return ControlFlow::Break(());
            }
            elements.push(v.to_vec());
            ControlFlow::Continue(())
        });
        if flow.is_break() {
            return Err(Error::limit(
                "bounded term universe elements",
                max_elements as u128 + 1,
                max_elements as u128,
            ));
        }
    }
    let index = elements.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
    Ok(TermUniverse {
        generators,
        bound: depth_bound,
        idempotent,
        elements,
        index,
    })
}

fn compositions(
    cur: &mut Vec<u32>,
    pos: usize,
    remaining: u32,
    cap: u32,
    f: &mut dyn FnMut(&[u32]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if pos == cur.len() {
        return if remaining == 0 {
            f(cur)
        } else {
            ControlFlow::Continue(())
        };
    }
    let hi = remaining.min(cap);
    for c in (0..=hi).rev() {
        cur[pos] = c;
        compositions(cur, pos + 1, remaining - c, cap, f)?;
    }
    cur[pos] = 0;
    ControlFlow::Continue(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(m: &FiniteCommMonoid) -> Vec<Vec<usize>> {
        m.table().chunks(m.size()).map(<[usize]>::to_vec).collect()
    }

    #[test]
    fn boolean_and_z2_pass() {
        assert!(validate_comm_monoid(&rows(&FiniteCommMonoid::boolean()), 0)
            .unwrap()
            .passed());
        assert!(validate_comm_monoid(&rows(&FiniteCommMonoid::z2()), 0)
            .unwrap()
            .passed());
    }

    #[test]
    fn broken_commutativity_has_witness() {
        let r = validate_comm_monoid(&[vec![0, 1], vec![0, 1]], 0).unwrap();
        let w = r.failure(Law::Commutativity).unwrap();
        assert_eq!(w.get("elements"), Some(&[0, 1][..]));
    }

    #[test]
    fn malformed_tables_are_structural() {
        assert!(matches!(
            validate_comm_monoid(&[vec![0, 1, 1], vec![1, 1, 1]], 0),
            Err(Error::Structural(_))
        ));
        assert!(matches!(
            validate_comm_monoid(&[vec![0, 5], vec![5, 1]], 0),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn closure_examples() {
        let b = FiniteCommMonoid::boolean();
        assert_eq!(congruence_closure(&b, &[]).unwrap().class_count(), 2);
        assert_eq!(congruence_closure(&b, &[(1, 0)]).unwrap().class_count(), 1);
        let z = FiniteCommMonoid::z2();
        assert_eq!(congruence_closure(&z, &[(1, 0)]).unwrap().class_count(), 1);
        assert!(congruence_closure(&z, &[(2, 0)]).is_err());
    }

    #[test]
    fn closure_on_chain_keeps_top() {
        let c = FiniteCommMonoid::chain(3);
        let r = congruence_closure(&c, &[(1, 0)]).unwrap();
        assert_eq!(r.classes(), &[0, 0, 1]);
        let (q, p) = quotient_monoid(&c, &r).unwrap();
        assert_eq!(q.size(), 2);
        assert_eq!(p, vec![0, 0, 1]);
    }

    #[test]
    fn quotients() {
        let b = FiniteCommMonoid::boolean();
        let (q, _) = quotient_monoid(&b, &CongruenceRelation::identity(2)).unwrap();
        assert!(q.same_table(&b));
        let (q, p) = quotient_monoid(&b, &CongruenceRelation::total(2)).unwrap();
        assert_eq!(q.size(), 1);
        assert_eq!(p[0], p[1]);
    }

    #[test]
    fn incompatible_partition_rejected() {
        // {0,1} {2} on the 3-chain is not a congruence: 0~1 but 0+2=2, 1+2=2 fine;
        // {0,2} {1}: 0~2 gives 1+0=1 vs 1+2=2.
        let c = FiniteCommMonoid::chain(3);
        let r = CongruenceRelation::from_labels(&[0, 1, 0]);
        assert!(matches!(quotient_monoid(&c, &r), Err(Error::LawViolation(_))));
    }

    #[test]
    fn term_universe_examples() {
        let u = bounded_term_universe(1, 2, true, 100).unwrap();
        assert_eq!(u.len(), 2);
        assert_eq!(u.add(1, 1), Some(1));
        let u = bounded_term_universe(1, 2, false, 100).unwrap();
        assert_eq!(u.len(), 3);
        let gg = u.add(1, 1).unwrap();
        assert_eq!(u.counts(gg), &[2]);
        assert_eq!(u.add(gg, 1), None);
        let u = bounded_term_universe(2, 1, true, 100).unwrap();
        assert_eq!(u.len(), 3);
        assert_eq!(u.add(u.generator(0), u.generator(1)), None);
    }

    #[test]
    fn product_monoid() {
        let b = FiniteCommMonoid::boolean();
        let bb = b.product(&b);
        assert_eq!(bb.size(), 4);
        assert!(bb.is_idempotent());
        assert_eq!(bb.add(1, 2), 3);
    }
}
