//! Exact combinatorics for families of permutations of `[n]` with exactly
//! `k` cycles whose matching number is bounded.
//!
//! Two permutations are *disjoint* when their cycle decompositions share no
//! cycle; a matching is a set of pairwise-disjoint permutations. The crate
//! enumerates `S(n,k)`, computes matching numbers exactly, evaluates the
//! alternating Stirling sum `sum_{i=1..s} (-1)^{i-1} C(s,i) [n-i, k-i]` and
//! compares it against exhaustive searches for the largest family with
//! matching number at most `s`.

pub mod clique;
pub mod error;
pub mod family;
pub mod hypergraph;
pub mod matching;
pub mod perm;
pub mod report;
pub mod search;
pub mod space;
pub mod stirling;

pub use error::{Error, Result};
pub use family::{anchored_family, extremal_family, union_size_pie, AnchorSpec, Family};
pub use matching::{
    avoid_cycles, enumerate_matchings, extend_matching, extend_matching_multi, is_matching, nu_p,
    DisjointnessGraph, Matching,
};
pub use perm::{all_cycles, Cycle, CyclePerm};
pub use search::{emc_exact, emc_exact_s1, sweep, Agreement, EmcInstance, EmcResult, EmcValue, Grid, Limits};
pub use space::{enumerate_snk, SnkSpace};
pub use stirling::{binomial, emc_bound, stirling_unsigned, BoundValue, StirlingTable};
