//! Mixed-radix tuple encoding and lexicographic enumeration.

use std::ops::ControlFlow;

/// Encodes `digits` (most significant first) in base `base`.
#[inline]
pub fn encode(digits: &[usize], base: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * base + d)
}

/// Inverse of [`encode`]; fills `out` with exactly `out.len()` digits.
#[inline]
pub fn decode_into(mut index: usize, base: usize, out: &mut [usize]) {
    for d in out.iter_mut().rev() {
        *d = index % base;
        index /= base;
    }
}

pub fn decode(index: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    decode_into(index, base, &mut out);
    out
}

/// `base^exp`, saturating into `u128` so callers can report refusals.
pub fn pow_u128(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

/// Checked `base^exp` in `usize`.
pub fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Visits every tuple with `tuple[i] < radices[i]` in lexicographic order.
/// An empty `radices` visits the empty tuple once; a zero radix visits none.
pub fn for_each_tuple<F>(radices: &[usize], mut f: F) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    if radices.contains(&0) {
        return ControlFlow::Continue(());
    }
    let mut cur = vec![0usize; radices.len()];
    loop {
        f(&cur)?;
        let mut i = radices.len();
        loop {
            if i == 0 {
                return ControlFlow::Continue(());
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < radices[i] {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Like [`for_each_tuple`] with a uniform radix.
pub fn for_each_uniform<F>(base: usize, len: usize, f: F) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    for_each_tuple(&vec![base; len], f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_order() {
        let mut seen = Vec::new();
        let _ = for_each_tuple(&[2, 3], |t| {
            seen.push(encode(t, 3));
            ControlFlow::Continue(())
        });
        assert_eq!(seen, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(decode(5, 3, 2), vec![1, 2]);
    }

    #[test]
    fn empty_and_zero_radix() {
        let mut count = 0;
        let _ = for_each_tuple(&[], |_| {
            count += 1;
            ControlFlow::Continue(())
        });
        assert_eq!(count, 1);
        let _ = for_each_tuple(&[2, 0], |_| {
            count += 1;
            ControlFlow::Continue(())
        });
        assert_eq!(count, 1);
    }
}
