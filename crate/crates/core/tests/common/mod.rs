//! Independent reference implementations. Everything here works from raw
//! operation tables by brute force and shares no code with the engine
//! beyond table lookups.
#![allow(dead_code)]

use gammalab_core::{GammaSemiring, Module};

/// Calls `f` on every tuple of `len` digits below `base`.
pub fn tuples(base: usize, len: usize, mut f: impl FnMut(&[usize])) {
    let mut d = vec![0; len];
    loop {
        f(&d);
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            d[i] += 1;
            if d[i] < base {
                break;
            }
            d[i] = 0;
        }
    }
}

/// A1, A2 and A3 by direct quantification.
pub fn naive_semiring(s: &GammaSemiring) -> [bool; 3] {
    let n = s.arity();
    let (ts, gs) = (s.t().size(), s.gamma().size());
    let add = |a, b| s.t().add(a, b);
    let zero = s.t().zero();
    let mut a1 = true;
    let mut a2 = true;
    tuples(ts, n, |xs| {
        tuples(gs, n - 1, |g| {
            for i in 0..n {
                let mut ys = xs.to_vec();
                ys[i] = zero;
                if s.mu(&ys, g) != zero {
                    a2 = false;
                }
                for b in 0..ts {
                    let mut zs = xs.to_vec();
                    zs[i] = b;
                    let mut sum = xs.to_vec();
                    sum[i] = add(xs[i], b);
                    if s.mu(&sum, g) != add(s.mu(xs, g), s.mu(&zs, g)) {
                        a1 = false;
                    }
                }
            }
        })
    });
    let mut a3 = true;
    let w = 2 * n - 1;
    tuples(ts, w, |word| {
        tuples(gs, w - 1, |params| {
            let mut first = None;
            let mut outer = vec![0; n];
            let mut op = vec![0; n - 1];
            for p in 0..n {
                outer[..p].copy_from_slice(&word[..p]);
                outer[p] = s.mu(&word[p..p + n], &params[p..p + n - 1]);
                outer[p + 1..].copy_from_slice(&word[p + n..]);
                op[..p].copy_from_slice(&params[..p]);
                op[p..].copy_from_slice(&params[p + n - 1..]);
                let v = s.mu(&outer, &op);
                match first {
                    None => first = Some(v),
                    Some(f) if f != v => a3 = false,
                    _ => {}
                }
            }
        })
    });
    [a1, a2, a3]
}

/// Whether some argument permutation changes a value.
pub fn naive_asymmetric(s: &GammaSemiring) -> bool {
    let n = s.arity();
    let mut found = false;
    tuples(s.t().size(), n, |xs| {
        tuples(s.gamma().size(), n - 1, |g| {
            for i in 0..n {
                for j in i + 1..n {
                    let mut ys = xs.to_vec();
                    ys.swap(i, j);
                    if s.mu(&ys, g) != s.mu(xs, g) {
                        found = true;
                    }
                }
            }
        })
    });
    found
}

/// Every map `src → tgt` that preserves zero, addition and each action.
pub fn naive_hom(src: &Module, tgt: &Module) -> Vec<Vec<usize>> {
    let ctxs = src.parent().context_count();
    let mut out = Vec::new();
    tuples(tgt.size(), src.size(), |f| {
        if f[src.zero_element()] != tgt.zero_element() {
            return;
        }
        for a in 0..src.size() {
            for b in 0..src.size() {
                if f[src.carrier().add(a, b)] != tgt.carrier().add(f[a], f[b]) {
                    return;
                }
            }
        }
        for slot in src.slots() {
            for c in 0..ctxs {
                for m in 0..src.size() {
                    if f[src.act(slot, c, m)] != tgt.act(slot, c, f[m]) {
                        return;
                    }
                }
            }
        }
        out.push(f.to_vec());
    });
    out
}

/// Canonical labels: classes numbered by first occurrence.
pub fn canonical(labels: &[usize]) -> Vec<usize> {
    let mut seen = std::collections::HashMap::new();
    labels
        .iter()
        .map(|l| {
            let k = seen.len();
            *seen.entry(*l).or_insert(k)
        })
        .collect()
}

fn is_module_congruence(m: &Module, rgs: &[usize]) -> bool {
    let n = m.size();
    let ctxs = m.parent().context_count();
    for x in 0..n {
        for y in 0..n {
            if rgs[x] != rgs[y] {
                continue;
            }
            for z in 0..n {
                if rgs[m.carrier().add(x, z)] != rgs[m.carrier().add(y, z)] {
                    return false;
                }
            }
            for slot in m.slots() {
                for c in 0..ctxs {
                    if rgs[m.act(slot, c, x)] != rgs[m.act(slot, c, y)] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Every partition of `0..n` as a restricted growth string.
pub fn partitions(n: usize, mut f: impl FnMut(&[usize])) {
    fn go(i: usize, max: usize, rgs: &mut Vec<usize>, n: usize, f: &mut dyn FnMut(&[usize])) {
        if i == n {
            f(rgs);
            return;
        }
        for v in 0..=max + 1 {
            rgs.push(v);
            go(i + 1, max.max(v), rgs, n, f);
            rgs.pop();
        }
    }
    if n == 0 {
        f(&[]);
        return;
    }
    let mut rgs = vec![0];
    go(1, 0, &mut rgs, n, &mut f);
}

/// The finest module congruence relating every given pair, found by
/// scanning all partitions of the carrier. Panics if no single finest one
/// exists.
pub fn brute_smallest_congruence(m: &Module, pairs: &[(usize, usize)]) -> Vec<usize> {
    let mut candidates: Vec<Vec<usize>> = Vec::new();
    partitions(m.size(), |rgs| {
        if pairs.iter().all(|&(a, b)| rgs[a] == rgs[b]) && is_module_congruence(m, rgs) {
            candidates.push(rgs.to_vec());
        }
    });
    let refines = |a: &[usize], b: &[usize]| (0..a.len()).all(|x| (0..a.len()).all(|y| a[x] != a[y] || b[x] == b[y]));
    let finest: Vec<&Vec<usize>> = candidates
        .iter()
        .filter(|c| candidates.iter().all(|d| refines(c, d)))
        .collect();
    assert_eq!(finest.len(), 1, "no unique finest congruence");
    finest[0].clone()
}

/// Smallest equivalence on `0..size` containing `seeds` and closed under
/// `x ~ y ⇒ x+z ~ y+z`, by fixpoint iteration on the full relation matrix.
pub fn matrix_congruence(size: usize, add: impl Fn(usize, usize) -> usize, seeds: &[(usize, usize)]) -> Vec<usize> {
    let mut rel = vec![false; size * size];
    for x in 0..size {
        rel[x * size + x] = true;
    }
    for &(a, b) in seeds {
        rel[a * size + b] = true;
        rel[b * size + a] = true;
    }
    loop {
        let mut changed = false;
        for x in 0..size {
            for y in 0..size {
                if !rel[x * size + y] {
                    continue;
                }
                for z in 0..size {
                    let (u, v) = (add(x, z), add(y, z));
                    if !rel[u * size + v] {
                        rel[u * size + v] = true;
                        rel[v * size + u] = true;
                        changed = true;
                    }
                }
            }
        }
        for k in 0..size {
            for x in 0..size {
                if !rel[x * size + k] {
                    continue;
                }
                for y in 0..size {
                    if rel[k * size + y] && !rel[x * size + y] {
                        rel[x * size + y] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let labels: Vec<usize> = (0..size)
        .map(|x| (0..size).find(|&y| rel[x * size + y]).unwrap())
        .collect();
    canonical(&labels)
}

pub struct NaiveTensor {
    pub classes: usize,
    /// Class of the pure tensor `m ⊗ n`, at `m·|N| + n`.
    pub pure: Vec<usize>,
}

/// `M ⊗ N` as a quotient of formal sums of pairs of nonzero elements.
/// Only covers carriers where sums are sets (`x + x = x`) or parity
/// vectors (`x + x = 0`); `None` otherwise or when too large.
pub fn naive_tensor(m: &Module, j: usize, n: &Module, k: usize) -> Option<NaiveTensor> {
    let idem = |c: &Module| (0..c.size()).all(|x| c.carrier().add(x, x) == x);
    let nil = |c: &Module| (0..c.size()).all(|x| c.carrier().add(x, x) == c.zero_element());
    let xor = if idem(m) && idem(n) {
        false
    } else if nil(m) && nil(n) {
        true
    } else {
        return None;
    };
    let mz: Vec<usize> = (0..m.size()).filter(|&x| x != m.zero_element()).collect();
    let nz: Vec<usize> = (0..n.size()).filter(|&x| x != n.zero_element()).collect();
    let gens = mz.len() * nz.len();
    if gens > 8 {
        return None;
    }
    let size = 1usize << gens;
    let add = move |a: usize, b: usize| if xor { a ^ b } else { a | b };
    let pure = |a: usize, b: usize| -> usize {
        match (mz.iter().position(|&x| x == a), nz.iter().position(|&y| y == b)) {
            (Some(i), Some(q)) => 1 << (i * nz.len() + q),
            _ => 0,
        }
    };
    let mut seeds = Vec::new();
    for a in 0..m.size() {
        for a2 in 0..m.size() {
            for b in 0..n.size() {
                seeds.push((pure(m.carrier().add(a, a2), b), add(pure(a, b), pure(a2, b))));
            }
        }
    }
    for b in 0..n.size() {
        for b2 in 0..n.size() {
            for a in 0..m.size() {
                seeds.push((pure(a, n.carrier().add(b, b2)), add(pure(a, b), pure(a, b2))));
            }
        }
    }
    for c in 0..m.parent().context_count() {
        for a in 0..m.size() {
            for b in 0..n.size() {
                seeds.push((pure(m.act(j, c, a), b), pure(a, n.act(k, c, b))));
            }
        }
    }
    let labels = matrix_congruence(size, add, &seeds);
    let classes = labels.iter().copied().max().unwrap() + 1;
    let pure_classes = (0..m.size() * n.size())
        .map(|x| labels[pure(x / n.size(), x % n.size())])
        .collect();
    Some(NaiveTensor {
        classes,
        pure: pure_classes,
    })
}

/// Proper subsets of T that are ideals and prime, as sorted member lists.
pub fn naive_primes(s: &GammaSemiring) -> Vec<Vec<usize>> {
    let t = s.t();
    let size = t.size();
    let n = s.arity();
    let mut out = Vec::new();
    for mask in 0u64..(1 << size) - 1 {
        let inside = |x: usize| mask >> x & 1 == 1;
        if !inside(t.zero()) {
            continue;
        }
        let members: Vec<usize> = (0..size).filter(|&x| inside(x)).collect();
        let closed = members.iter().all(|&a| members.iter().all(|&b| inside(t.add(a, b))));
        let mut absorbing = true;
        let mut prime = true;
        tuples(size, n, |xs| {
            tuples(s.gamma().size(), n - 1, |g| {
                let v = s.mu(xs, g);
                let any_in = xs.iter().any(|&x| inside(x));
                if any_in && !inside(v) {
                    absorbing = false;
                }
                if !any_in && inside(v) {
                    prime = false;
                }
            })
        });
        if closed && absorbing && prime {
            out.push(members);
        }
    }
    out
}
