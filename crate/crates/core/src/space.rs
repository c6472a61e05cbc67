//! Exhaustive enumeration of `S(n,k)` and the interned index built over it.

use std::collections::HashMap;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::perm::{Cycle, CyclePerm};
use crate::stirling::stirling_unsigned;

pub const DEFAULT_ENUMERATION_CAP: usize = 10_000_000;

/// Every permutation of `[n]` with exactly `k` cycles, in lexicographic order
/// of canonical form.
pub fn enumerate_snk(n: usize, k: usize) -> Result<Vec<CyclePerm>> {
    enumerate_snk_capped(n, k, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_snk_capped(n: usize, k: usize, cap: usize) -> Result<Vec<CyclePerm>> {
    if k == 0 || k > n {
        return Err(Error::invalid(format!("S(n,k) needs 1 <= k <= n, got n={n} k={k}")));
    }
    let count = stirling_unsigned(n, k as i64);
    if count > BigUint::from(cap) {
        return Err(Error::capacity("S(n,k) enumeration", count, cap));
    }
    let mut out = Vec::with_capacity(usize::try_from(&count).unwrap_or(cap));
    // succ[i] is the image of i; slot 0 is unused.
    let mut succ = vec![0usize; n + 1];
    grow(n, k, 0, 0, &mut succ, &mut out);
    out.sort_unstable();
    Ok(out)
}

/// Places element `placed + 1`, either as a new cycle or spliced in after any
/// earlier element, mirroring `[n k] = [n-1 k-1] + (n-1)[n-1 k]`.
fn grow(n: usize, k: usize, placed: usize, cycles: usize, succ: &mut [usize], out: &mut Vec<CyclePerm>) {
    if placed == n {
        let perm = CyclePerm::canonicalize(&succ[1..]).expect("successor table is a bijection");
        out.push(perm);
        return;
    }
    let x = placed + 1;
    let remaining = n - x;
    if cycles < k && k - cycles - 1 <= remaining {
        succ[x] = x;
        grow(n, k, x, cycles + 1, succ, out);
    }
    if cycles >= 1 && k - cycles <= remaining {
        for i in 1..x {
            let after = succ[i];
            succ[x] = after;
            succ[i] = x;
            grow(n, k, x, cycles, succ, out);
            succ[i] = after;
        }
    }
}

/// The enumeration of `S(n,k)` with every distinct cycle interned to a dense id.
///
/// Cycle ids are handed out in first-seen order while scanning the sorted
/// permutations, so they are reproducible run to run. Immutable once built.
#[derive(Debug)]
pub struct SnkSpace {
    n: usize,
    k: usize,
    perms: Vec<CyclePerm>,
    perm_index: HashMap<CyclePerm, u32>,
    cycles: Vec<Cycle>,
    cycle_index: HashMap<Cycle, u32>,
    perm_cycles: Vec<Vec<u32>>,
    cycle_perms: Vec<Vec<u32>>,
}

impl SnkSpace {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        Self::with_cap(n, k, DEFAULT_ENUMERATION_CAP)
    }

    pub fn with_cap(n: usize, k: usize, cap: usize) -> Result<Self> {
        let perms = enumerate_snk_capped(n, k, cap)?;
        if perms.len() > u32::MAX as usize {
            return Err(Error::capacity("S(n,k) ids", perms.len(), u32::MAX));
        }
        let mut cycles = Vec::new();
        let mut cycle_index: HashMap<Cycle, u32> = HashMap::new();
        let mut perm_cycles = Vec::with_capacity(perms.len());
        let mut cycle_perms: Vec<Vec<u32>> = Vec::new();
        let mut perm_index = HashMap::with_capacity(perms.len());
        for (pid, p) in perms.iter().enumerate() {
            let mut ids: Vec<u32> = p
                .cycle_set()
                .iter()
                .map(|c| {
                    *cycle_index.entry(c.clone()).or_insert_with(|| {
                        cycles.push(c.clone());
                        cycle_perms.push(Vec::new());
                        (cycles.len() - 1) as u32
                    })
                })
                .collect();
            for &cid in &ids {
                cycle_perms[cid as usize].push(pid as u32);
            }
            ids.sort_unstable();
            perm_cycles.push(ids);
            perm_index.insert(p.clone(), pid as u32);
        }
        Ok(SnkSpace {
            n,
            k,
            perms,
            perm_index,
            cycles,
            cycle_index,
            perm_cycles,
            cycle_perms,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    pub fn perm(&self, id: usize) -> &CyclePerm {
        &self.perms[id]
    }

    pub fn perms(&self) -> &[CyclePerm] {
        &self.perms
    }

    pub fn id_of(&self, perm: &CyclePerm) -> Option<usize> {
        self.perm_index.get(perm).map(|&i| i as usize)
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles.len()
    }

    pub fn cycle(&self, id: u32) -> &Cycle {
        &self.cycles[id as usize]
    }

    /// `None` when the cycle occurs in no member of `S(n,k)`.
    pub fn cycle_id(&self, c: &Cycle) -> Option<u32> {
        self.cycle_index.get(c).copied()
    }

    /// Interned ids of `M(pi)`, ascending.
    pub fn perm_cycle_ids(&self, id: usize) -> &[u32] {
        &self.perm_cycles[id]
    }

    /// Ids of all permutations containing the cycle, ascending.
    pub fn perms_with_cycle(&self, cid: u32) -> &[u32] {
        &self.cycle_perms[cid as usize]
    }

    /// True iff the two permutations share no cycle.
    pub fn disjoint(&self, a: usize, b: usize) -> bool {
        let (x, y) = (&self.perm_cycles[a], &self.perm_cycles[b]);
        let (mut i, mut j) = (0, 0);
        while i < x.len() && j < y.len() {
            match x[i].cmp(&y[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    /// Parses permutation text and checks it belongs to this space.
    pub fn parse_member(&self, text: &str) -> Result<usize> {
        let p = CyclePerm::parse(text, Some(self.n))?;
        self.id_of(&p).ok_or_else(|| {
            Error::invalid(format!("{p} has {} cycles, expected {}", p.k(), self.k))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stirling::StirlingTable;

    fn all_perms(n: usize) -> Vec<CyclePerm> {
        // Heap's algorithm over one-line tables.
        let mut a: Vec<usize> = (1..=n).collect();
        let mut out = vec![CyclePerm::canonicalize(&a).unwrap()];
        let mut c = vec![0usize; n];
        let mut i = 1;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    a.swap(0, i);
                } else {
                    a.swap(c[i], i);
                }
                out.push(CyclePerm::canonicalize(&a).unwrap());
                c[i] += 1;
                i = 1;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        out
    }

    #[test]
    fn small_examples() {
        let s33 = enumerate_snk(3, 3).unwrap();
        assert_eq!(s33, vec![CyclePerm::identity(3)]);
        assert_eq!(enumerate_snk(4, 2).unwrap().len(), 11);
        assert_eq!(enumerate_snk(5, 3).unwrap().len(), 35);
        assert!(enumerate_snk(3, 0).is_err());
        assert!(enumerate_snk(3, 4).is_err());
    }

    #[test]
    fn matches_filter_over_all_permutations() {
        for n in 1..=6 {
            let all = all_perms(n);
            for k in 1..=n {
                let mut filtered: Vec<_> = all.iter().filter(|p| p.k() == k).cloned().collect();
                filtered.sort();
                assert_eq!(enumerate_snk(n, k).unwrap(), filtered, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn counts_match_stirling() {
        let t = StirlingTable::new(8);
        for n in 1..=8 {
            for k in 1..=n {
                let perms = enumerate_snk(n, k).unwrap();
                assert_eq!(BigUint::from(perms.len()), *t.get(n, k as i64).unwrap());
                assert!(perms.windows(2).all(|w| w[0] < w[1]));
                assert!(perms.iter().all(|p| p.k() == k));
                for p in &perms {
                    assert_eq!(&CyclePerm::canonicalize(&p.to_mapping()).unwrap(), p);
                }
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = enumerate_snk_capped(6, 2, 100).unwrap_err();
        assert!(matches!(err, Error::Capacity { .. }));
    }

    #[test]
    fn interning() {
        let sp = SnkSpace::new(4, 3).unwrap();
        assert_eq!(sp.len(), 6);
        // first member is (1)(2)(3 4); its cycles get ids 0, 1, 2
        assert_eq!(sp.perm(0).to_string(), "(1)(2)(3 4)");
        assert_eq!(sp.perm_cycle_ids(0), &[0, 1, 2]);
        let c34: Cycle = "(3 4)".parse().unwrap();
        let cid = sp.cycle_id(&c34).unwrap();
        assert_eq!(sp.perms_with_cycle(cid), &[0]);
        let fixed4 = sp.cycle_id(&Cycle::fixed(4)).unwrap();
        assert_eq!(sp.perms_with_cycle(fixed4).len(), 3);
        assert!(sp.cycle_id(&"(1 2 3)".parse().unwrap()).is_none());
        for a in 0..sp.len() {
            assert!(!sp.disjoint(a, a));
            for b in 0..sp.len() {
                assert_eq!(sp.disjoint(a, b), !sp.perm(a).shares_cycle(sp.perm(b)));
            }
        }
        assert_eq!(sp.parse_member("(1 2)(3)(4)").unwrap(), sp.id_of(&CyclePerm::parse("(1 2)(3)(4)", None).unwrap()).unwrap());
        assert!(sp.parse_member("(1 2)(3 4)").is_err());
    }

    #[test]
    fn interning_is_reproducible() {
        let a = SnkSpace::new(6, 3).unwrap();
        let b = SnkSpace::new(6, 3).unwrap();
        assert_eq!(a.cycle_count(), b.cycle_count());
        for c in 0..a.cycle_count() as u32 {
            assert_eq!(a.cycle(c), b.cycle(c));
        }
    }
}
