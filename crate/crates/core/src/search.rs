//! Exact `EMC(n,k,s)`: the largest family in `S(n,k)` whose matching number
//! is at most `s`, compared against the alternating Stirling sum.
//!
//! A family has matching number at most `s` exactly when it omits a member
//! of every `(s+1)`-matching of `S(n,k)`, so the problem is a maximum
//! hyperedge-free set in the `(s+1)`-uniform hypergraph of those matchings.
//! The union of the families anchored at the fixed points `1..=s` seeds the
//! search as a feasible incumbent.

use std::ops::RangeInclusive;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use rayon::prelude::*;
use serde::Serialize;

use crate::clique;
use crate::error::{Error, Result};
use crate::family::{union_size_pie, AnchorSpec, Family};
use crate::hypergraph;
use crate::matching::{enumerate_matchings, nu_p, DisjointnessGraph};
use crate::space::SnkSpace;
use crate::stirling::{stirling_unsigned, BoundValue, StirlingTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Limits {
    /// Largest `|S(n,k)|` that will be enumerated.
    pub ground_cap: usize,
    /// Largest number of `(s+1)`-matchings that will be materialised.
    pub hyperedge_cap: usize,
    /// Branch-and-bound nodes before giving up with bounds.
    pub node_limit: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            ground_cap: 10_000,
            hyperedge_cap: 1_000_000,
            node_limit: 20_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum EmcValue {
    Exact { value: BigUint },
    Unknown { lower: BigUint, upper: BigUint },
}

impl EmcValue {
    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            EmcValue::Exact { value } => Some(value),
            EmcValue::Unknown { .. } => None,
        }
    }

    pub fn lower(&self) -> &BigUint {
        match self {
            EmcValue::Exact { value } => value,
            EmcValue::Unknown { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> &BigUint {
        match self {
            EmcValue::Exact { value } => value,
            EmcValue::Unknown { upper, .. } => upper,
        }
    }
}

/// How the exact optimum compares with the alternating-sum bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Agreement {
    Equal,
    ExactExceedsBound,
    BoundExceedsExact,
}

impl Agreement {
    /// Decided from an interval `[lower, upper]` known to contain the optimum.
    pub fn from_interval(lower: &BigUint, upper: &BigUint, bound: &BigInt) -> Option<Agreement> {
        let lower = BigInt::from(lower.clone());
        let upper = BigInt::from(upper.clone());
        if lower == upper && &lower == bound {
            Some(Agreement::Equal)
        } else if &lower > bound {
            Some(Agreement::ExactExceedsBound)
        } else if &upper < bound {
            Some(Agreement::BoundExceedsExact)
        } else {
            None
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Agreement::Equal => "equal",
            Agreement::ExactExceedsBound => "exact_exceeds_bound",
            Agreement::BoundExceedsExact => "bound_exceeds_exact",
        }
    }
}

/// The forbidden configurations of one `(n, k, s)` instance.
#[derive(Debug)]
pub struct EmcInstance {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub ground: Arc<SnkSpace>,
    /// Every `(s+1)`-matching of `S(n,k)`, as ascending id lists.
    pub hyperedges: Vec<Vec<u32>>,
}

impl EmcInstance {
    pub fn build(n: usize, k: usize, s: usize, limits: &Limits) -> Result<Self> {
        check_params(n, k, s)?;
        let ground = Arc::new(SnkSpace::with_cap(n, k, limits.ground_cap)?);
        Self::on_ground(ground, s, limits)
    }

    fn on_ground(ground: Arc<SnkSpace>, s: usize, limits: &Limits) -> Result<Self> {
        let full = Family::full(ground.clone());
        let hyperedges = enumerate_matchings(&full, s + 1, limits.hyperedge_cap)?
            .into_iter()
            .map(|m| m.members().iter().map(|&i| i as u32).collect())
            .collect();
        Ok(EmcInstance {
            n: ground.n(),
            k: ground.k(),
            s,
            ground,
            hyperedges,
        })
    }

    /// Whether the family avoids every hyperedge, i.e. has matching number at most `s`.
    pub fn admits(&self, family: &Family) -> bool {
        self.hyperedges
            .iter()
            .all(|e| !e.iter().all(|&v| family.contains(v as usize)))
    }
}

#[derive(Debug, Clone)]
pub struct EmcResult {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub value: EmcValue,
    /// A family with matching number at most `s` of size `value.lower()`,
    /// when the ground set was enumerated.
    pub witness: Option<Family>,
    pub bound: BoundValue,
    pub agreement: Option<Agreement>,
    pub threshold_met: bool,
    /// `k >= 4`, the range the extremal theorem is stated for.
    pub in_theorem_scope: bool,
    pub hyperedges: Option<usize>,
    pub nodes: u64,
    /// Why the value is not exact, when it is not.
    pub note: Option<String>,
    /// Solve time, the only field that differs between identical runs.
    pub wall_ms: u64,
}

impl EmcResult {
    pub fn is_exact(&self) -> bool {
        self.value.exact().is_some()
    }
}

fn check_params(n: usize, k: usize, s: usize) -> Result<()> {
    if k == 0 || k > n || s == 0 {
        return Err(Error::invalid(format!(
            "instance needs 1 <= k <= n and s >= 1, got n={n} k={k} s={s}"
        )));
    }
    Ok(())
}

/// The fixed points `1..=min(s, n)`.
fn anchor_points(n: usize, s: usize) -> Vec<usize> {
    (1..=s.min(n)).collect()
}

struct Frame {
    n: usize,
    k: usize,
    s: usize,
    bound: BoundValue,
    construction_size: BigUint,
    total: BigUint,
    start: Instant,
}

impl Frame {
    fn new(n: usize, k: usize, s: usize) -> Result<Self> {
        let start = Instant::now();
        check_params(n, k, s)?;
        let table = StirlingTable::new(n);
        let bound = table.emc_bound(n, k, s)?;
        let anchors = AnchorSpec::fixed_points(&anchor_points(n, s))?;
        let construction_size = union_size_pie(&table, n, k, &anchors)?
            .to_biguint()
            .expect("a union size is non-negative");
        Ok(Frame {
            n,
            k,
            s,
            bound,
            construction_size,
            total: stirling_unsigned(n, k as i64),
            start,
        })
    }

    fn finish(
        self,
        value: EmcValue,
        witness: Option<Family>,
        hyperedges: Option<usize>,
        nodes: u64,
        note: Option<String>,
    ) -> EmcResult {
        let agreement = Agreement::from_interval(value.lower(), value.upper(), &self.bound.value);
        EmcResult {
            n: self.n,
            k: self.k,
            s: self.s,
            threshold_met: self.bound.threshold_met(),
            in_theorem_scope: self.k >= 4,
            value,
            witness,
            bound: self.bound,
            agreement,
            hyperedges,
            nodes,
            note,
            wall_ms: self.start.elapsed().as_millis() as u64,
        }
    }

    /// Bounds that need no enumeration: the construction below, everything above.
    fn unknown(self, note: String, witness: Option<Family>) -> EmcResult {
        let value = EmcValue::Unknown {
            lower: self.construction_size.clone(),
            upper: self.total.clone(),
        };
        self.finish(value, witness, None, 0, Some(note))
    }
}

/// Exact `EMC(n,k,s)` by exhaustive branch and bound. Limit exhaustion is
/// not an error: the result then carries certified lower and upper bounds.
pub fn emc_exact(n: usize, k: usize, s: usize, limits: &Limits) -> Result<EmcResult> {
    let frame = Frame::new(n, k, s)?;
    let ground = match SnkSpace::with_cap(n, k, limits.ground_cap) {
        Ok(g) => Arc::new(g),
        Err(e @ Error::Capacity { .. }) => return Ok(frame.unknown(e.to_string(), None)),
        Err(e) => return Err(e),
    };
    let construction = Family::extremal(ground.clone(), &anchor_points(n, s))?;
    let instance = match EmcInstance::on_ground(ground.clone(), s, limits) {
        Ok(inst) => inst,
        Err(e @ Error::Capacity { .. }) => {
            return Ok(frame.unknown(e.to_string(), Some(construction)));
        }
        Err(e) => return Err(e),
    };
    debug_assert!(instance.admits(&construction));

    let graph = DisjointnessGraph::build(&Family::full(ground.clone()));
    let incumbent: Vec<usize> = construction.ids().collect();
    let outcome = with_deep_stack(|| {
        hypergraph::max_edge_free_set(
            ground.len(),
            s + 1,
            &instance.hyperedges,
            graph.rows(),
            incumbent,
            limits.node_limit,
        )
    });
    let witness = Family::from_ids(ground.clone(), outcome.best.iter().copied())?;
    verify_witness(&witness, s)?;
    let (value, note) = if outcome.optimal {
        (EmcValue::Exact { value: BigUint::from(outcome.best.len()) }, None)
    } else {
        (
            EmcValue::Unknown {
                lower: BigUint::from(outcome.best.len()),
                upper: BigUint::from(outcome.upper),
            },
            Some(format!("node limit {} reached", limits.node_limit)),
        )
    };
    Ok(frame.finish(value, Some(witness), Some(instance.hyperedges.len()), outcome.nodes, note))
}

/// `s = 1`: the largest cycle-intersecting family, found as a maximum clique
/// of the share-a-cycle graph. Independent of the hypergraph route.
pub fn emc_exact_s1(n: usize, k: usize, ground_cap: usize) -> Result<EmcResult> {
    let frame = Frame::new(n, k, 1)?;
    let ground = match SnkSpace::with_cap(n, k, ground_cap) {
        Ok(g) => Arc::new(g),
        Err(e @ Error::Capacity { .. }) => return Ok(frame.unknown(e.to_string(), None)),
        Err(e) => return Err(e),
    };
    let graph = DisjointnessGraph::build(&Family::full(ground.clone()));
    let seed: Vec<usize> = Family::extremal(ground.clone(), &[1])?.ids().collect();
    let found = clique::max_clique(&graph.intersection_rows(), seed);
    let witness = Family::from_ids(ground, found.clique.iter().copied())?;
    verify_witness(&witness, 1)?;
    let value = EmcValue::Exact { value: BigUint::from(witness.len()) };
    Ok(frame.finish(value, Some(witness), None, found.nodes, None))
}

fn verify_witness(witness: &Family, s: usize) -> Result<()> {
    let (nu, _) = nu_p(witness)?;
    assert!(nu <= s, "witness has matching number {nu} > {s}");
    Ok(())
}

fn with_deep_stack<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    std::thread::scope(|scope| {
        std::thread::Builder::new()
            .stack_size(64 << 20)
            .spawn_scoped(scope, f)
            .expect("spawn solver thread")
            .join()
            .expect("solver thread panicked")
    })
}

/// Ranges of `n`, `k` and `s`; pairs with `k > n` or `k = 0` are not instances.
#[derive(Debug, Clone)]
pub struct Grid {
    pub n: RangeInclusive<usize>,
    pub k: RangeInclusive<usize>,
    pub s: RangeInclusive<usize>,
}

impl Grid {
    pub fn instances(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for n in self.n.clone() {
            for k in self.k.clone().filter(|&k| k >= 1 && k <= n) {
                for s in self.s.clone().filter(|&s| s >= 1) {
                    out.push((n, k, s));
                }
            }
        }
        out
    }
}

/// Solves every instance of the grid, in grid order. Instances run in
/// parallel; each result is the same as a standalone [`emc_exact`] call.
pub fn sweep(grid: &Grid, limits: &Limits) -> Vec<EmcResult> {
    grid.instances()
        .into_par_iter()
        .map(|(n, k, s)| emc_exact(n, k, s, limits).expect("grid instances are valid"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(n: usize, k: usize, s: usize) -> EmcResult {
        emc_exact(n, k, s, &Limits::default()).unwrap()
    }

    /// Every subset of `S(n,k)`, kept when no `(s+1)` members are pairwise disjoint.
    fn brute_force_emc(n: usize, k: usize, s: usize) -> usize {
        let sp = SnkSpace::new(n, k).unwrap();
        let m = sp.len();
        assert!(m <= 16);
        let disjoint = |a: usize, b: usize| sp.disjoint(a, b);
        let mut best = 0;
        for mask in 0u32..(1 << m) {
            let members: Vec<usize> = (0..m).filter(|&i| mask & (1 << i) != 0).collect();
            if members.len() <= best {
                continue;
            }
            if largest_matching(&members, &disjoint) <= s {
                best = members.len();
            }
        }
        best
    }

    fn largest_matching(members: &[usize], disjoint: &dyn Fn(usize, usize) -> bool) -> usize {
        fn go(rest: &[usize], chosen: &mut Vec<usize>, disjoint: &dyn Fn(usize, usize) -> bool) -> usize {
            let Some((&first, tail)) = rest.split_first() else {
                return chosen.len();
            };
            let skip = go(tail, chosen, disjoint);
            if chosen.iter().all(|&c| disjoint(c, first)) {
                chosen.push(first);
                let take = go(tail, chosen, disjoint);
                chosen.pop();
                skip.max(take)
            } else {
                skip
            }
        }
        go(members, &mut Vec::new(), disjoint)
    }

    #[test]
    fn spot_values() {
        let r = exact(3, 3, 1);
        assert_eq!(r.value.exact(), Some(&BigUint::from(1u32)));
        assert_eq!(r.agreement, Some(Agreement::Equal));

        let r = exact(4, 3, 1);
        assert_eq!(r.value.exact(), Some(&BigUint::from(3u32)));
        assert_eq!(r.bound.value, BigInt::from(3));
        assert_eq!(r.agreement, Some(Agreement::Equal));
        assert!(!r.threshold_met);
        assert!(!r.in_theorem_scope);
    }

    #[test]
    fn matches_brute_force_on_tiny_spaces() {
        for (n, k) in [(3, 1), (3, 2), (4, 2), (4, 3), (4, 4), (5, 4)] {
            for s in 1..=3 {
                let r = exact(n, k, s);
                let expect = brute_force_emc(n, k, s);
                assert_eq!(r.value.exact(), Some(&BigUint::from(expect)), "n={n} k={k} s={s}");
                let w = r.witness.unwrap();
                assert_eq!(w.len(), expect);
                assert!(nu_p(&w).unwrap().0 <= s);
            }
        }
    }

    #[test]
    fn s1_routes_agree() {
        for n in 1..=5 {
            for k in 1..=n {
                let a = exact(n, k, 1);
                let b = emc_exact_s1(n, k, 10_000).unwrap();
                assert_eq!(a.value, b.value, "n={n} k={k}");
            }
        }
        assert_eq!(emc_exact_s1(4, 3, 100).unwrap().value.exact(), Some(&BigUint::from(3u32)));
    }

    #[test]
    fn ground_cap_gives_unknown() {
        let limits = Limits { ground_cap: 10, ..Limits::default() };
        let r = emc_exact(10, 3, 2, &limits).unwrap();
        assert!(!r.is_exact());
        assert!(r.witness.is_none());
        // construction size 2[9,2] - [8,1]
        let t = StirlingTable::new(10);
        let lower = BigInt::from(2u32) * BigInt::from(t.get(9, 2).unwrap().clone())
            - BigInt::from(t.get(8, 1).unwrap().clone());
        assert_eq!(BigInt::from(r.value.lower().clone()), lower);
        assert_eq!(r.value.upper(), t.get(10, 3).unwrap());
        assert_eq!(r.agreement, None);
    }

    #[test]
    fn hyperedge_cap_gives_unknown() {
        let limits = Limits { hyperedge_cap: 5, ..Limits::default() };
        let r = emc_exact(5, 3, 1, &limits).unwrap();
        assert!(!r.is_exact());
        assert!(r.witness.is_some());
        assert!(r.note.unwrap().contains("capacity"));
    }

    #[test]
    fn node_limit_bounds_bracket_optimum() {
        let full = exact(5, 2, 1);
        let opt = full.value.exact().unwrap().clone();
        let limits = Limits { node_limit: 3, ..Limits::default() };
        let r = emc_exact(5, 2, 1, &limits).unwrap();
        if !r.is_exact() {
            assert!(r.value.lower() <= &opt && &opt <= r.value.upper());
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(emc_exact(3, 4, 1, &Limits::default()).is_err());
        assert!(emc_exact(3, 0, 1, &Limits::default()).is_err());
        assert!(emc_exact(3, 2, 0, &Limits::default()).is_err());
    }

    #[test]
    fn sweep_grid() {
        let grid = Grid { n: 3..=5, k: 2..=5, s: 1..=1 };
        let results = sweep(&grid, &Limits::default());
        let keys: Vec<_> = results.iter().map(|r| (r.n, r.k, r.s)).collect();
        assert_eq!(keys, grid.instances());
        assert_eq!(keys.len(), 2 + 3 + 4);
        for r in &results {
            assert!(r.is_exact());
            assert!(BigInt::from(r.value.lower().clone()) >= r.bound.value);
        }
        let empty = Grid { n: 3..=3, k: 4..=6, s: 1..=1 };
        assert!(sweep(&empty, &Limits::default()).is_empty());

        let tiny = Limits { ground_cap: 5, ..Limits::default() };
        let r = sweep(&Grid { n: 12..=12, k: 2..=2, s: 1..=1 }, &tiny);
        assert_eq!(r.len(), 1);
        assert!(!r[0].is_exact());
    }
}
