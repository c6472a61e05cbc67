//! Machine-readable reports and the invariant sweeps behind `verify`.
//!
//! Reports are JSON with sorted keys. Every arbitrary-precision number is a
//! decimal string. Each instance record carries a `wall_time_ms` field; it is
//! the only part of a report that may differ between runs.

use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use fixedbitset::FixedBitSet;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::family::{union_size_pie, AnchorSpec, Family};
use crate::matching::Matching;
use crate::perm::{all_cycles, Cycle};
use crate::search::{EmcResult, EmcValue};
use crate::space::{enumerate_snk, SnkSpace};
use crate::stirling::{BoundValue, StirlingTable};

pub const SCHEMA_VERSION: &str = "1";

pub const WALL_TIME_KEY: &str = "wall_time_ms";

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub instances: Vec<Value>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            instances: Vec::new(),
        }
    }

    pub fn to_value(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "instances": self.instances,
        })
    }

    /// Pretty JSON followed by a newline.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_value()).expect("reports serialize");
        text.push('\n');
        text
    }
}

/// Removes every `wall_time_ms` entry, recursively.
pub fn strip_wall_time(value: &mut Value) {
    match value {
        Value::Object(map) => {
            map.remove(WALL_TIME_KEY);
            map.values_mut().for_each(strip_wall_time);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_wall_time),
        _ => {}
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, u64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_millis() as u64)
}

fn with_time(mut record: Value, ms: u64) -> Value {
    record[WALL_TIME_KEY] = json!(ms);
    record
}

fn decimal(v: &impl ToString) -> Value {
    Value::String(v.to_string())
}

pub fn bound_record(b: &BoundValue) -> Value {
    json!({
        "n": b.n,
        "k": b.k,
        "s": b.s,
        "bound": decimal(&b.value),
        "terms": b.terms.iter().map(decimal).collect::<Vec<_>>(),
        "threshold_met": b.threshold_met(),
    })
}

pub fn emc_record(r: &EmcResult) -> Value {
    let mut rec = json!({
        "n": r.n,
        "k": r.k,
        "s": r.s,
        "bound": decimal(&r.bound.value),
        "bound_terms": r.bound.terms.iter().map(decimal).collect::<Vec<_>>(),
        "agreement": r.agreement.map(|a| a.as_str()),
        "threshold_met": r.threshold_met,
        "in_theorem_scope": r.in_theorem_scope,
        "nodes": r.nodes,
        "hyperedges": r.hyperedges,
        "note": r.note,
    });
    match &r.value {
        EmcValue::Exact { value } => {
            rec["status"] = json!("exact");
            rec["exact"] = decimal(value);
        }
        EmcValue::Unknown { lower, upper } => {
            rec["status"] = json!("unknown");
            rec["lower"] = decimal(lower);
            rec["upper"] = decimal(upper);
        }
    }
    rec["witness"] = match &r.witness {
        Some(w) => json!(w.perms().map(|p| p.to_string()).collect::<Vec<_>>()),
        None => Value::Null,
    };
    with_time(rec, r.wall_ms)
}

pub fn matching_record(family: &Family, nu: usize, witness: &Matching, wall_ms: u64) -> Value {
    let perms: Vec<String> = witness.perms(family.space()).map(|p| p.to_string()).collect();
    with_time(
        json!({
            "n": family.n(),
            "k": family.k(),
            "family_size": family.len(),
            "nu": nu,
            "witness": perms,
        }),
        wall_ms,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Recurrence,
    Lemmas,
    Pie,
    Construction,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Recurrence => "recurrence",
            Suite::Lemmas => "lemmas",
            Suite::Pie => "pie",
            Suite::Construction => "construction",
            Suite::All => "all",
        }
    }

    pub fn default_max_n(self) -> usize {
        match self {
            Suite::Recurrence => 12,
            Suite::Lemmas => 60,
            Suite::Pie => 6,
            Suite::Construction => 8,
            Suite::All => 0,
        }
    }

    fn parts(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Recurrence, Suite::Lemmas, Suite::Pie, Suite::Construction],
            one => vec![one],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "recurrence" => Suite::Recurrence,
            "lemmas" => Suite::Lemmas,
            "pie" => Suite::Pie,
            "construction" => Suite::Construction,
            "all" => Suite::All,
            other => return Err(Error::invalid(format!("unknown suite {other:?}"))),
        })
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub records: Vec<Value>,
    pub failures: usize,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Enumeration beyond this `n` is not attempted by the sweeps.
const ENUMERATION_MAX_N: usize = 8;
const ANCHORED_MAX_N: usize = 7;

/// Runs a suite; `max_n` overrides each part's default range. A failing
/// check is recorded with `"pass": false`, never returned as an error.
pub fn verify(suite: Suite, max_n: Option<usize>) -> Result<VerifyOutcome> {
    let mut records = Vec::new();
    for part in suite.parts() {
        let n = max_n.unwrap_or(part.default_max_n());
        let mut recs = match part {
            Suite::Recurrence => recurrence_suite(n),
            Suite::Lemmas => lemmas_suite(n)?,
            Suite::Pie => pie_suite(n)?,
            Suite::Construction => construction_suite(n)?,
            Suite::All => unreachable!(),
        };
        for r in &mut recs {
            r["suite"] = json!(part.name());
        }
        records.extend(recs);
    }
    let failures = records.iter().filter(|r| r["pass"] != json!(true)).count();
    Ok(VerifyOutcome { records, failures })
}

fn check(name: &str, params: Value, pass: bool, ms: u64) -> Value {
    let mut rec = params;
    rec["check"] = json!(name);
    rec["pass"] = json!(pass);
    with_time(rec, ms)
}

/// Coefficients of `x (x+1) ... (x+n-1)`; the coefficient of `x^k` is `[n k]`.
fn rising_factorial_coefficients(n: usize) -> Vec<BigUint> {
    let mut poly = vec![BigUint::one()];
    for j in 0..n {
        let mut next = vec![BigUint::zero(); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] += c;
            next[i] += c * BigUint::from(j);
        }
        poly = next;
    }
    poly
}

fn recurrence_suite(max_n: usize) -> Vec<Value> {
    let table = StirlingTable::new(max_n);
    (1..=max_n)
        .into_par_iter()
        .flat_map_iter(|n| {
            let t = &table;
            let mut out = Vec::new();
            let (ok, ms) = timed(|| {
                (1..=n).all(|k| {
                    let k = k as i64;
                    let prev = t.get(n - 1, k - 1).unwrap() + t.get(n - 1, k).unwrap() * BigUint::from(n - 1);
                    t.get(n, k).unwrap() == &prev
                })
            });
            out.push(check("recurrence", json!({"n": n}), ok, ms));

            let (ok, ms) = timed(|| rising_factorial_coefficients(n).as_slice() == t.row(n).unwrap());
            out.push(check("rising_factorial", json!({"n": n}), ok, ms));

            let (ok, ms) = timed(|| {
                let sum: BigUint = t.row(n).unwrap().iter().sum();
                let fact: BigUint = (1..=n).map(BigUint::from).product();
                sum == fact
            });
            out.push(check("row_sum_factorial", json!({"n": n}), ok, ms));

            let (ok, ms) = timed(|| (1..n).all(|k| t.get(n, k as i64).unwrap() >= t.get(n - 1, k as i64).unwrap()));
            out.push(check("monotone_in_n", json!({"n": n}), ok, ms));

            if n <= ENUMERATION_MAX_N {
                let (ok, ms) = timed(|| {
                    (1..=n).all(|k| {
                        let count = enumerate_snk(n, k).map(|v| v.len()).unwrap_or(usize::MAX);
                        BigUint::from(count) == *t.get(n, k as i64).unwrap()
                    })
                });
                out.push(check("enumeration_count", json!({"n": n}), ok, ms));
            }
            out
        })
        .collect()
}

const ALTERNATING_K: std::ops::RangeInclusive<usize> = 3..=5;
const ALTERNATING_S: std::ops::RangeInclusive<usize> = 1..=4;
const ALTERNATING_SPAN: usize = 20;

fn lemmas_suite(max_n: usize) -> Result<Vec<Value>> {
    let alt_top = ALTERNATING_S.end() * ALTERNATING_K.end() * ALTERNATING_K.end() + ALTERNATING_SPAN;
    let table = StirlingTable::new(max_n.max(alt_top));
    let t = &table;
    let mut out: Vec<Value> = (2..=max_n)
        .into_par_iter()
        .flat_map_iter(|n| {
            let (down, ms_down) = timed(|| {
                let ks: Vec<usize> = (1..n).collect();
                let ok = ks.iter().all(|&k| t.ratio_down_holds(n, k).unwrap_or(false));
                (ks.len(), ok)
            });
            let (diag, ms_diag) = timed(|| {
                let ks: Vec<usize> = (2..n).collect();
                let ok = ks.iter().all(|&k| t.ratio_diag_holds(n, k).unwrap_or(false));
                (ks.len(), ok)
            });
            let mut recs = vec![check("ratio_down", json!({"n": n, "cases": down.0}), down.1, ms_down)];
            if diag.0 > 0 {
                recs.push(check("ratio_diag", json!({"n": n, "cases": diag.0}), diag.1, ms_diag));
            }
            recs
        })
        .collect();

    let grid: Vec<(usize, usize)> = ALTERNATING_K
        .flat_map(|k| ALTERNATING_S.map(move |s| (k, s)))
        .collect();
    let alt: Vec<Value> = grid
        .into_par_iter()
        .map(|(k, s)| {
            let lo = s * k * k;
            let hi = lo + ALTERNATING_SPAN;
            let (ok, ms) = timed(|| (lo..=hi).all(|n| t.alternating_lower_bound(n, k, s).unwrap_or(false)));
            check(
                "alternating_lower_bound",
                json!({"k": k, "s": s, "n_from": lo, "n_to": hi}),
                ok,
                ms,
            )
        })
        .collect();
    out.extend(alt);
    Ok(out)
}

/// Anchor sets of `s` cycles on `[n]` with pairwise-disjoint supports, as
/// index tuples into `cycles` in increasing order.
fn disjoint_anchor_sets(cycles: &[Cycle], s: usize) -> Vec<Vec<usize>> {
    fn go(cycles: &[Cycle], start: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for i in start..cycles.len() {
            if cur.iter().all(|&j| cycles[j].support_disjoint(&cycles[i])) {
                cur.push(i);
                go(cycles, i + 1, s, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(cycles, 0, s, &mut Vec::new(), &mut out);
    out
}

/// Member set of the family anchored at `b`, read off the space's cycle index.
fn anchored_bits(space: &SnkSpace, b: &Cycle) -> FixedBitSet {
    let mut bits = FixedBitSet::with_capacity(space.len());
    if let Some(cid) = space.cycle_id(b) {
        bits.extend(space.perms_with_cycle(cid).iter().map(|&i| i as usize));
    }
    bits
}

const PIE_MAX_S: usize = 3;

fn pie_suite(max_n: usize) -> Result<Vec<Value>> {
    let table = StirlingTable::new(max_n.max(1));
    let pairs: Vec<(usize, usize)> = (1..=max_n).flat_map(|n| (1..=n).map(move |k| (n, k))).collect();
    let per_pair: Vec<Result<Vec<Value>>> = pairs
        .into_par_iter()
        .map(|(n, k)| {
            let space = SnkSpace::new(n, k)?;
            let cycles = all_cycles(n);
            let bits: Vec<FixedBitSet> = cycles.iter().map(|b| anchored_bits(&space, b)).collect();
            let mut recs = Vec::new();
            for s in 1..=PIE_MAX_S.min(n) {
                let start = Instant::now();
                let sets = disjoint_anchor_sets(&cycles, s);
                let mut mismatches = 0usize;
                for set in &sets {
                    let spec = AnchorSpec::new(set.iter().map(|&i| cycles[i].clone()).collect())?;
                    let formula = union_size_pie(&table, n, k, &spec)?;
                    let mut union = FixedBitSet::with_capacity(space.len());
                    for &i in set {
                        union.union_with(&bits[i]);
                    }
                    if formula != BigInt::from(union.count_ones(..)) {
                        mismatches += 1;
                    }
                }
                recs.push(check(
                    "pie_vs_enumeration",
                    json!({"n": n, "k": k, "s": s, "anchor_sets": sets.len(), "mismatches": mismatches}),
                    mismatches == 0,
                    start.elapsed().as_millis() as u64,
                ));
            }
            Ok(recs)
        })
        .collect();
    let mut out = Vec::new();
    for r in per_pair {
        out.extend(r?);
    }
    out.push(dichotomy_record()?);
    Ok(out)
}

/// At `n = 36, k = 3, s = 2` anchoring at a fixed point and a transposition
/// loses to the bound; anchoring at two fixed points attains it.
fn dichotomy_record() -> Result<Value> {
    let (n, k, s) = (36, 3, 2);
    let start = Instant::now();
    let table = StirlingTable::new(n);
    let bound = table.emc_bound(n, k, s)?.value;
    let mixed = union_size_pie(&table, n, k, &AnchorSpec::new(vec![Cycle::fixed(1), Cycle::new(vec![2, 3])?])?)?;
    let fixed = union_size_pie(&table, n, k, &AnchorSpec::fixed_points(&[1, 2])?)?;
    let pass = mixed < bound && fixed == bound;
    Ok(check(
        "anchor_dichotomy",
        json!({
            "n": n, "k": k, "s": s,
            "bound": decimal(&bound),
            "fixed_point_union": decimal(&fixed),
            "mixed_union": decimal(&mixed),
        }),
        pass,
        start.elapsed().as_millis() as u64,
    ))
}

const CONSTRUCTION_MAX_S: usize = 4;

fn construction_suite(max_n: usize) -> Result<Vec<Value>> {
    let table = StirlingTable::new(max_n.max(1));
    let pairs: Vec<(usize, usize)> = (1..=max_n.min(ENUMERATION_MAX_N))
        .flat_map(|n| (1..=n).map(move |k| (n, k)))
        .collect();
    let per_pair: Vec<Result<Vec<Value>>> = pairs
        .into_par_iter()
        .map(|(n, k)| {
            let space = Arc::new(SnkSpace::new(n, k)?);
            let mut recs = Vec::new();
            for s in 1..=CONSTRUCTION_MAX_S.min(n) {
                let start = Instant::now();
                let t_set: Vec<usize> = (1..=s).collect();
                let size = Family::extremal(space.clone(), &t_set)?.len();
                let bound = table.emc_bound(n, k, s)?.value;
                let pie = union_size_pie(&table, n, k, &AnchorSpec::fixed_points(&t_set)?)?;
                let pass = BigInt::from(size) == bound && pie == bound;
                recs.push(check(
                    "extremal_size",
                    json!({"n": n, "k": k, "s": s, "size": size, "bound": decimal(&bound)}),
                    pass,
                    start.elapsed().as_millis() as u64,
                ));
            }
            if n <= ANCHORED_MAX_N {
                let start = Instant::now();
                let cycles = all_cycles(n);
                let mismatches = cycles
                    .iter()
                    .filter(|b| {
                        let count = anchored_bits(&space, b).count_ones(..);
                        let expect = table.get(n - b.len(), k as i64 - 1).expect("within table");
                        BigUint::from(count) != *expect
                    })
                    .count();
                recs.push(check(
                    "anchored_count",
                    json!({"n": n, "k": k, "cycles": cycles.len(), "mismatches": mismatches}),
                    mismatches == 0,
                    start.elapsed().as_millis() as u64,
                ));
            }
            Ok(recs)
        })
        .collect();
    let mut out = Vec::new();
    for r in per_pair {
        out.extend(r?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{emc_exact, Limits};

    #[test]
    fn rising_factorial_matches_table() {
        let t = StirlingTable::new(10);
        for n in 0..=10 {
            assert_eq!(rising_factorial_coefficients(n).as_slice(), t.row(n).unwrap());
        }
    }

    #[test]
    fn suites_pass_at_small_range() {
        for suite in [Suite::Recurrence, Suite::Lemmas, Suite::Pie, Suite::Construction] {
            let out = verify(suite, Some(5)).unwrap();
            assert!(out.passed(), "{}", suite.name());
            assert!(!out.records.is_empty());
            assert!(out.records.iter().all(|r| r["suite"] == suite.name()));
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for suite in [Suite::Recurrence, Suite::Lemmas, Suite::Pie, Suite::Construction, Suite::All] {
            assert_eq!(suite.name().parse::<Suite>().unwrap(), suite);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn anchor_sets_are_disjoint() {
        let cycles = all_cycles(4);
        let pairs = disjoint_anchor_sets(&cycles, 2);
        assert!(pairs.iter().all(|p| cycles[p[0]].support_disjoint(&cycles[p[1]])));
        // fixed+fixed 6, fixed+transposition 12, fixed+3-cycle 4*2, two transpositions 3
        assert_eq!(pairs.len(), 6 + 12 + 8 + 3);
        let quads = disjoint_anchor_sets(&cycles, 4);
        assert_eq!(quads.len(), 1);
    }

    #[test]
    fn report_json_shape() {
        let r = emc_exact(4, 3, 1, &Limits::default()).unwrap();
        let mut report = Report::new("cyclematch exact 4 3 1");
        report.instances.push(emc_record(&r));
        let text = report.to_json();
        let mut v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["schema_version"], "1");
        let inst = &v["instances"][0];
        assert_eq!(inst["exact"], "3");
        assert_eq!(inst["bound"], "3");
        assert_eq!(inst["agreement"], "equal");
        assert_eq!(inst["status"], "exact");
        assert_eq!(inst["witness"].as_array().unwrap().len(), 3);
        strip_wall_time(&mut v);
        assert!(v["instances"][0].get(WALL_TIME_KEY).is_none());
        // keys come out sorted
        let keys: Vec<&String> = v["instances"][0].as_object().unwrap().keys().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn bound_record_fields() {
        let b = StirlingTable::new(5).emc_bound(5, 3, 2).unwrap();
        let rec = bound_record(&b);
        assert_eq!(rec["bound"], "20");
        assert_eq!(rec["terms"], json!(["22", "-2"]));
        assert_eq!(rec["threshold_met"], false);
    }
}
