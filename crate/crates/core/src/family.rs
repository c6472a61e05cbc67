//! Families of permutations inside a fixed `S(n,k)`.
//!
//! A [`Family`] is a bit set of ids into a shared [`SnkSpace`], so building
//! thousands of families never copies a permutation.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{Cycle, CyclePerm};
use crate::space::SnkSpace;
use crate::stirling::StirlingTable;

/// Anchors above this count make the inclusion-exclusion sum impractical.
pub const MAX_PIE_ANCHORS: usize = 20;

#[derive(Debug, Clone)]
pub struct Family {
    space: Arc<SnkSpace>,
    members: FixedBitSet,
    // cycle id -> ids of members containing it
    incidence: OnceLock<HashMap<u32, Vec<u32>>>,
}

impl Family {
    fn from_bits(space: Arc<SnkSpace>, members: FixedBitSet) -> Self {
        Family {
            space,
            members,
            incidence: OnceLock::new(),
        }
    }

    pub fn empty(space: Arc<SnkSpace>) -> Self {
        let len = space.len();
        Self::from_bits(space, FixedBitSet::with_capacity(len))
    }

    pub fn full(space: Arc<SnkSpace>) -> Self {
        let mut bits = FixedBitSet::with_capacity(space.len());
        bits.insert_range(..);
        Self::from_bits(space, bits)
    }

    pub fn from_ids(space: Arc<SnkSpace>, ids: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut bits = FixedBitSet::with_capacity(space.len());
        for id in ids {
            if id >= space.len() {
                return Err(Error::invalid(format!(
                    "id {id} out of range for S({},{}) with {} members",
                    space.n(),
                    space.k(),
                    space.len()
                )));
            }
            bits.insert(id);
        }
        Ok(Self::from_bits(space, bits))
    }

    /// All members of `S(n,k)` that contain the cycle `b`.
    pub fn anchored(space: Arc<SnkSpace>, b: &Cycle) -> Result<Self> {
        check_cycle_on(b, space.n())?;
        let mut bits = FixedBitSet::with_capacity(space.len());
        if let Some(cid) = space.cycle_id(b) {
            bits.extend(space.perms_with_cycle(cid).iter().map(|&i| i as usize));
        }
        Ok(Self::from_bits(space, bits))
    }

    /// Union over `t` in `T` of the families anchored at the fixed point `(t)`.
    pub fn extremal(space: Arc<SnkSpace>, t_set: &[usize]) -> Result<Self> {
        check_fixed_point_set(t_set, space.n())?;
        let mut bits = FixedBitSet::with_capacity(space.len());
        for &t in t_set {
            if let Some(cid) = space.cycle_id(&Cycle::fixed(t)) {
                bits.extend(space.perms_with_cycle(cid).iter().map(|&i| i as usize));
            }
        }
        Ok(Self::from_bits(space, bits))
    }

    pub fn space(&self) -> &Arc<SnkSpace> {
        &self.space
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn k(&self) -> usize {
        self.space.k()
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.members.contains(id)
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.members
    }

    /// Member ids, ascending.
    pub fn ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.ones()
    }

    pub fn perms(&self) -> impl Iterator<Item = &CyclePerm> + '_ {
        self.members.ones().map(|i| self.space.perm(i))
    }

    /// Cycle id to the members containing that cycle. Built on first use.
    pub fn incidence(&self) -> &HashMap<u32, Vec<u32>> {
        self.incidence.get_or_init(|| {
            let mut map: HashMap<u32, Vec<u32>> = HashMap::new();
            for m in self.members.ones() {
                for &c in self.space.perm_cycle_ids(m) {
                    map.entry(c).or_default().push(m as u32);
                }
            }
            map
        })
    }

    /// Members containing the cycle `b`, ascending.
    pub fn members_with(&self, b: &Cycle) -> &[u32] {
        self.space
            .cycle_id(b)
            .and_then(|c| self.incidence().get(&c))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    fn check_same_space(&self, other: &Family) -> Result<()> {
        if self.n() != other.n() || self.k() != other.k() {
            return Err(Error::SpaceMismatch(self.n(), self.k(), other.n(), other.k()));
        }
        Ok(())
    }

    pub fn union(&self, other: &Family) -> Result<Family> {
        self.check_same_space(other)?;
        let mut bits = self.members.clone();
        bits.union_with(&other.members);
        Ok(Self::from_bits(self.space.clone(), bits))
    }

    pub fn intersection(&self, other: &Family) -> Result<Family> {
        self.check_same_space(other)?;
        let mut bits = self.members.clone();
        bits.intersect_with(&other.members);
        Ok(Self::from_bits(self.space.clone(), bits))
    }

    pub fn filter(&self, mut pred: impl FnMut(&CyclePerm) -> bool) -> Family {
        let mut bits = FixedBitSet::with_capacity(self.space.len());
        bits.extend(self.members.ones().filter(|&i| pred(self.space.perm(i))));
        Self::from_bits(self.space.clone(), bits)
    }

    pub fn is_subset(&self, other: &Family) -> bool {
        self.members.is_subset(&other.members)
    }

    /// One canonical permutation per line.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for p in self.perms() {
            writeln!(out, "{p}").unwrap();
        }
        out
    }

    /// Reads the line format. Blank lines and `#` comments are skipped;
    /// every permutation must belong to the space.
    pub fn from_lines(space: Arc<SnkSpace>, text: &str) -> Result<Family> {
        let mut ids = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let id = space
                .parse_member(line)
                .map_err(|e| Error::invalid(format!("line {}: {e}", lineno + 1)))?;
            ids.push(id);
        }
        Family::from_ids(space, ids)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&FamilyJson {
            n: self.n(),
            k: self.k(),
            ids: self.ids().collect(),
        })
        .expect("plain struct serializes")
    }

    pub fn from_json(space: Arc<SnkSpace>, text: &str) -> Result<Family> {
        let doc: FamilyJson =
            serde_json::from_str(text).map_err(|e| Error::invalid(format!("family json: {e}")))?;
        if doc.n != space.n() || doc.k != space.k() {
            return Err(Error::SpaceMismatch(doc.n, doc.k, space.n(), space.k()));
        }
        Family::from_ids(space, doc.ids)
    }
}

impl PartialEq for Family {
    fn eq(&self, other: &Self) -> bool {
        self.n() == other.n() && self.k() == other.k() && self.members == other.members
    }
}

impl Eq for Family {}

/// Id-list form of a family bound to its `(n, k)` header.
#[derive(Debug, Serialize, Deserialize)]
struct FamilyJson {
    n: usize,
    k: usize,
    ids: Vec<usize>,
}

/// Pairwise-distinct anchor cycles `b_1, ..., b_s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchorSpec {
    anchors: Vec<Cycle>,
}

impl AnchorSpec {
    pub fn new(anchors: Vec<Cycle>) -> Result<Self> {
        for (i, a) in anchors.iter().enumerate() {
            if anchors[..i].contains(a) {
                return Err(Error::invalid(format!("anchor {a} listed twice")));
            }
        }
        Ok(AnchorSpec { anchors })
    }

    /// Fixed-point anchors `(t)` for `t` in `T`.
    pub fn fixed_points(t_set: &[usize]) -> Result<Self> {
        if t_set.contains(&0) {
            return Err(Error::invalid("elements are 1-based"));
        }
        Self::new(t_set.iter().map(|&t| Cycle::fixed(t)).collect())
    }

    pub fn anchors(&self) -> &[Cycle] {
        &self.anchors
    }

    pub fn len(&self) -> usize {
        self.anchors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.anchors.is_empty()
    }

    pub fn supports_disjoint(&self) -> bool {
        self.anchors
            .iter()
            .enumerate()
            .all(|(i, a)| self.anchors[i + 1..].iter().all(|b| a.support_disjoint(b)))
    }
}

/// Size of the union of the anchored families, by inclusion-exclusion over
/// the Stirling table alone:
/// `sum_{V != {}} (-1)^{|V|-1} [n - sum_{v in V} |N(b_v)|, k - |V|]`.
///
/// The term formula needs pairwise-disjoint supports, which is checked.
pub fn union_size_pie(table: &StirlingTable, n: usize, k: usize, anchors: &AnchorSpec) -> Result<BigInt> {
    if k == 0 || k > n {
        return Err(Error::invalid(format!("S(n,k) needs 1 <= k <= n, got n={n} k={k}")));
    }
    if anchors.is_empty() {
        return Err(Error::invalid("no anchors"));
    }
    if anchors.len() > MAX_PIE_ANCHORS {
        return Err(Error::capacity("inclusion-exclusion anchors", anchors.len(), MAX_PIE_ANCHORS));
    }
    for b in anchors.anchors() {
        check_cycle_on(b, n)?;
    }
    if !anchors.supports_disjoint() {
        return Err(Error::precondition("anchor supports overlap"));
    }
    let lens: Vec<usize> = anchors.anchors().iter().map(Cycle::len).collect();
    let mut total = BigInt::zero();
    for mask in 1u32..(1u32 << lens.len()) {
        let size = mask.count_ones() as i64;
        let covered: usize = lens
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, l)| l)
            .sum();
        let term = BigInt::from(table.get(n - covered, k as i64 - size)?.clone());
        if size % 2 == 1 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total)
}

pub fn anchored_family(n: usize, k: usize, b: &Cycle) -> Result<Family> {
    Family::anchored(Arc::new(SnkSpace::new(n, k)?), b)
}

pub fn extremal_family(n: usize, k: usize, t_set: &[usize]) -> Result<Family> {
    Family::extremal(Arc::new(SnkSpace::new(n, k)?), t_set)
}

fn check_cycle_on(b: &Cycle, n: usize) -> Result<()> {
    if b.max() > n {
        return Err(Error::invalid(format!("cycle {b} is not on [1, {n}]")));
    }
    Ok(())
}

fn check_fixed_point_set(t_set: &[usize], n: usize) -> Result<()> {
    if t_set.is_empty() {
        return Err(Error::invalid("T must be non-empty"));
    }
    for (i, &t) in t_set.iter().enumerate() {
        if t == 0 || t > n {
            return Err(Error::invalid(format!("{t} is not in [1, {n}]")));
        }
        if t_set[..i].contains(&t) {
            return Err(Error::invalid(format!("{t} listed twice in T")));
        }
    }
    Ok(())
}
