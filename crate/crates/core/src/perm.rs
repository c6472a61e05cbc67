//! Cycles and permutations in canonical cycle form.
//!
//! A [`Cycle`] is rotated so its smallest element comes first, which makes
//! equality of cyclic sequences plain slice equality. A [`CyclePerm`] keeps
//! every cycle of the permutation, fixed points included, sorted by their
//! smallest element. Elements are 1-based throughout.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cycle(Vec<usize>);

impl Cycle {
    /// Builds a cycle from its elements in cyclic order, rotating it into canonical form.
    pub fn new(elements: Vec<usize>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::invalid("empty cycle"));
        }
        if elements.contains(&0) {
            return Err(Error::invalid("cycle elements are 1-based"));
        }
        let mut sorted = elements.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("repeated element in cycle {elements:?}")));
        }
        Ok(Self::from_distinct(elements))
    }

    /// Fixed point `(t)`.
    pub fn fixed(t: usize) -> Self {
        assert!(t >= 1, "cycle elements are 1-based");
        Cycle(vec![t])
    }

    fn from_distinct(mut elements: Vec<usize>) -> Self {
        let pos = elements
            .iter()
            .enumerate()
            .min_by_key(|&(_, v)| *v)
            .map(|(i, _)| i)
            .unwrap_or(0);
        elements.rotate_left(pos);
        Cycle(elements)
    }

    pub fn elements(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> usize {
        self.0[0]
    }

    pub fn max(&self) -> usize {
        *self.0.iter().max().expect("cycles are non-empty")
    }

    /// The support `N(c)` as a sorted list.
    pub fn support(&self) -> Vec<usize> {
        let mut s = self.0.clone();
        s.sort_unstable();
        s
    }

    pub fn is_fixed_point(&self) -> bool {
        self.0.len() == 1
    }

    pub fn support_disjoint(&self, other: &Cycle) -> bool {
        !self.0.iter().any(|x| other.0.contains(x))
    }
}

/// Every cycle whose support lies in `[n]`, ordered by support size, then
/// lexicographically. There are `sum_j C(n,j) (j-1)!` of them.
pub fn all_cycles(n: usize) -> Vec<Cycle> {
    fn arrange(rest: &mut Vec<usize>, current: &mut Vec<usize>, out: &mut Vec<Cycle>) {
        if rest.is_empty() {
            out.push(Cycle(current.clone()));
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            current.push(x);
            arrange(rest, current, out);
            current.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << n) {
        let support: Vec<usize> = (1..=n).filter(|&x| mask & (1 << (x - 1)) != 0).collect();
        let mut rest = support[1..].to_vec();
        arrange(&mut rest, &mut vec![support[0]], &mut out);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for Cycle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let cycles = parse_cycles(s)?;
        match <[Cycle; 1]>::try_from(cycles) {
            Ok([c]) => Ok(c),
            Err(v) => Err(Error::invalid(format!("expected one cycle, found {}", v.len()))),
        }
    }
}

impl Serialize for Cycle {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A permutation of `[n]` stored as its complete cycle decomposition.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclePerm {
    n: usize,
    cycles: Vec<Cycle>,
}

impl CyclePerm {
    /// Checks that the cycles partition `[n]` and puts them in canonical order.
    pub fn from_cycles(n: usize, mut cycles: Vec<Cycle>) -> Result<Self> {
        let mut seen = vec![false; n + 1];
        for c in &cycles {
            for &x in c.elements() {
                if x > n {
                    return Err(Error::invalid(format!("element {x} outside [1, {n}]")));
                }
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::invalid(format!("element {x} appears in two cycles")));
                }
            }
        }
        if let Some(missing) = (1..=n).find(|&x| !seen[x]) {
            return Err(Error::invalid(format!("element {missing} is not covered by any cycle")));
        }
        cycles.sort_unstable_by_key(Cycle::min);
        Ok(CyclePerm { n, cycles })
    }

    /// Builds the canonical form from a one-line table, `mapping[i - 1] = pi(i)`.
    pub fn canonicalize(mapping: &[usize]) -> Result<Self> {
        let n = mapping.len();
        let mut hit = vec![false; n + 1];
        for &y in mapping {
            if y == 0 || y > n || std::mem::replace(&mut hit[y], true) {
                return Err(Error::invalid(format!("{mapping:?} is not a bijection on [1, {n}]")));
            }
        }
        let mut visited = vec![false; n + 1];
        let mut cycles = Vec::new();
        for start in 1..=n {
            if visited[start] {
                continue;
            }
            let mut elems = Vec::new();
            let mut x = start;
            while !visited[x] {
                visited[x] = true;
                elems.push(x);
                x = mapping[x - 1];
            }
            // `start` is the smallest unvisited element, so the rotation is already canonical.
            cycles.push(Cycle(elems));
        }
        Ok(CyclePerm { n, cycles })
    }

    /// Successor table with `pi(i)` at index `i - 1`.
    pub fn to_mapping(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for c in &self.cycles {
            let e = c.elements();
            for (i, &x) in e.iter().enumerate() {
                out[x - 1] = e[(i + 1) % e.len()];
            }
        }
        out
    }

    /// Parses text such as `(1 3 2)(4)`. When `n` is `None` the ground set is
    /// `[max element]`. The cycles must partition the ground set.
    pub fn parse(text: &str, n: Option<usize>) -> Result<Self> {
        let cycles = parse_cycles(text)?;
        if cycles.is_empty() {
            return Err(Error::invalid("no cycles in permutation text"));
        }
        let n = n.unwrap_or_else(|| cycles.iter().map(Cycle::max).max().unwrap_or(0));
        Self::from_cycles(n, cycles)
    }

    pub fn identity(n: usize) -> Self {
        CyclePerm {
            n,
            cycles: (1..=n).map(Cycle::fixed).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of cycles.
    pub fn k(&self) -> usize {
        self.cycles.len()
    }

    /// `M(pi)`, sorted by smallest element.
    pub fn cycle_set(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn contains_cycle(&self, b: &Cycle) -> bool {
        self.cycles
            .binary_search_by_key(&b.min(), Cycle::min)
            .map(|i| &self.cycles[i] == b)
            .unwrap_or(false)
    }

    pub fn shares_cycle(&self, other: &CyclePerm) -> bool {
        self.cycles.iter().any(|c| other.contains_cycle(c))
    }
}

impl fmt::Display for CyclePerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cycles {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl Serialize for CyclePerm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Reads a run of parenthesised cycles. Whitespace is ignored between tokens
/// and commas may separate elements.
fn parse_cycles(text: &str) -> Result<Vec<Cycle>> {
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let Some(body) = rest.strip_prefix('(') else {
            return Err(Error::invalid(format!("expected '(' in {text:?}")));
        };
        let close = body
            .find(')')
            .ok_or_else(|| Error::invalid(format!("unclosed cycle in {text:?}")))?;
        let elems = body[..close]
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::invalid(format!("bad element {t:?} in {text:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        cycles.push(Cycle::new(elems)?);
        rest = body[close + 1..].trim_start();
    }
    Ok(cycles)
}
