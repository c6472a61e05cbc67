//! Reference computations for the integration tests. Nothing here calls the
//! library: permutations are one-line tables, cycles are plain vectors.

#![allow(dead_code)]

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// All permutations of `[n]` as one-line tables `map[i - 1] = pi(i)`, by Heap's algorithm.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut a: Vec<usize> = (1..=n).collect();
    let mut out = vec![a.clone()];
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Cycles of a one-line table, each starting at its minimum, sorted by minimum.
pub fn cycles_of(map: &[usize]) -> Vec<Vec<usize>> {
    let n = map.len();
    let mut seen = vec![false; n + 1];
    let mut out = Vec::new();
    for start in 1..=n {
        if seen[start] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cyc.push(x);
            x = map[x - 1];
        }
        out.push(cyc);
    }
    out
}

/// Whether the permutation maps each element of `cyc` to the next one, cyclically.
pub fn has_cycle(map: &[usize], cyc: &[usize]) -> bool {
    (0..cyc.len()).all(|i| map[cyc[i] - 1] == cyc[(i + 1) % cyc.len()])
}

/// Every cycle with support in `[n]`, listed from its minimum.
pub fn all_cycles(n: usize) -> Vec<Vec<usize>> {
    fn orders(rest: &[usize]) -> Vec<Vec<usize>> {
        if rest.is_empty() {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for i in 0..rest.len() {
            let mut others = rest.to_vec();
            let x = others.remove(i);
            for mut tail in orders(&others) {
                tail.insert(0, x);
                out.push(tail);
            }
        }
        out
    }
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let support: Vec<usize> = (1..=n).filter(|x| mask & (1 << (x - 1)) != 0).collect();
        for tail in orders(&support[1..]) {
            let mut c = vec![support[0]];
            c.extend(tail);
            out.push(c);
        }
    }
    out
}

/// `rows[n][k]` as the coefficient of `x^k` in `x (x+1) ... (x+n-1)`.
pub fn stirling_rows(max_n: usize) -> Vec<Vec<BigUint>> {
    let mut rows = vec![vec![BigUint::one()]];
    for n in 1..=max_n {
        let prev = &rows[n - 1];
        let mut next = vec![BigUint::zero(); n + 1];
        for (i, c) in prev.iter().enumerate() {
            next[i + 1] += c;
            next[i] += c * BigUint::from(n - 1);
        }
        rows.push(next);
    }
    rows
}

/// `[n k]` from precomputed rows, zero outside `0 <= k <= n`.
pub fn st(rows: &[Vec<BigUint>], n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    rows[n as usize][k as usize].clone()
}

pub fn choose(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

pub fn share_cycle(a: &[Vec<usize>], b: &[Vec<usize>]) -> bool {
    a.iter().any(|c| b.contains(c))
}

/// Largest set of pairwise cycle-disjoint members, by plain include/exclude recursion.
pub fn naive_nu(members: &[Vec<Vec<usize>>]) -> usize {
    fn go(members: &[Vec<Vec<usize>>], i: usize, chosen: &mut Vec<usize>) -> usize {
        if i == members.len() {
            return chosen.len();
        }
        let skip = go(members, i + 1, chosen);
        if chosen.iter().all(|&j| !share_cycle(&members[j], &members[i])) {
            chosen.push(i);
            let take = go(members, i + 1, chosen);
            chosen.pop();
            skip.max(take)
        } else {
            skip
        }
    }
    go(members, 0, &mut Vec::new())
}

/// Largest subfamily with no `s + 1` pairwise disjoint members, by trying
/// every subset. Only for ground sets of at most 20 members.
pub fn naive_emc(members: &[Vec<Vec<usize>>], s: usize) -> usize {
    let m = members.len();
    assert!(m <= 20);
    let mut best = 0;
    for mask in 0u32..(1u32 << m) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let sub: Vec<Vec<Vec<usize>>> =
            (0..m).filter(|i| mask & (1 << i) != 0).map(|i| members[i].clone()).collect();
        if naive_nu(&sub) <= s {
            best = size;
        }
    }
    best
}
