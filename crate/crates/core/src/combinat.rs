//! Small enumeration helpers.

use alloc::vec::Vec;

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// Non-decreasing sequences of length `len` over `0..k`.
pub fn multisets(k: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn go(k: usize, len: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            cur.push(i);
            go(k, len, i, cur, out);
            cur.pop();
        }
    }
    go(k, len, 0, &mut cur, &mut out);
    out
}

/// All sequences of length `len` over `0..k`.
pub fn tuples(k: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = alloc::vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * k);
        for t in &out {
            for i in 0..k {
                let mut u = t.clone();
                u.push(i);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

/// Compositions of `total` into `parts` positive parts.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(parts);
    fn go(rest: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if rest < parts {
            return;
        }
        for first in 1..=rest - (parts - 1) {
            cur.push(first);
            go(rest - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    go(total, parts, &mut cur, &mut out);
    out
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Subsequence of `items` selected by the bits of `mask`.
pub fn select<T: Clone>(items: &[T], mask: u64) -> Vec<T> {
    items.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, x)| x.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(0).len(), 1);
        assert_eq!(multisets(3, 2).len(), 6);
        assert_eq!(tuples(3, 2).len(), 9);
        assert_eq!(compositions(4, 2), alloc::vec![alloc::vec![1, 3], alloc::vec![2, 2], alloc::vec![3, 1]]);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(select(&[10, 20, 30], 0b101), alloc::vec![10, 30]);
    }
}
