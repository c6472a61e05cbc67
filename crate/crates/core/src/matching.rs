//! Matchings in a family: sets of permutations that pairwise share no cycle.
//!
//! The matching number is the clique number of the disjointness graph. It is
//! computed by [`clique::max_clique`] unless a greedy matching already meets
//! a greedy cycle cover (every matching member must own a distinct cover
//! cycle), in which case no search is needed.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::clique;
use crate::error::{Error, Result};
use crate::family::Family;
use crate::perm::{Cycle, CyclePerm};
use crate::space::SnkSpace;

pub const DEFAULT_NU_CAP: usize = 50_000;

/// Graph on the members of a family with an edge between cycle-disjoint members.
#[derive(Debug, Clone)]
pub struct DisjointnessGraph {
    vertices: Vec<usize>,
    rows: Vec<FixedBitSet>,
}

impl DisjointnessGraph {
    pub fn build(family: &Family) -> Self {
        let space = family.space();
        let vertices: Vec<usize> = family.ids().collect();
        let mut local = vec![u32::MAX; space.len()];
        for (i, &m) in vertices.iter().enumerate() {
            local[m] = i as u32;
        }
        let incidence = family.incidence();
        let width = vertices.len();
        let rows = vertices
            .par_iter()
            .map(|&m| {
                let mut row = FixedBitSet::with_capacity(width);
                row.insert_range(..);
                for c in space.perm_cycle_ids(m) {
                    for &other in &incidence[c] {
                        row.set(local[other as usize] as usize, false);
                    }
                }
                row
            })
            .collect();
        DisjointnessGraph { vertices, rows }
    }

    /// Member id of each vertex, ascending.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Adjacency rows indexed by vertex position.
    pub fn rows(&self) -> &[FixedBitSet] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Rows of the complement without loops: members that share a cycle.
    pub fn intersection_rows(&self) -> Vec<FixedBitSet> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut c = r.clone();
                c.toggle_range(..);
                c.set(i, false);
                c
            })
            .collect()
    }
}

/// Pairwise cycle-disjoint members of one `S(n,k)`, stored as ascending ids.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Matching {
    members: Vec<usize>,
}

impl Matching {
    pub fn empty() -> Self {
        Matching::default()
    }

    pub fn new(space: &SnkSpace, mut ids: Vec<usize>) -> Result<Self> {
        ids.sort_unstable();
        if let Some(&bad) = ids.iter().find(|&&i| i >= space.len()) {
            return Err(Error::invalid(format!("id {bad} out of range")));
        }
        if !is_matching_ids(space, &ids) {
            return Err(Error::invalid("members share a cycle"));
        }
        Ok(Matching { members: ids })
    }

    pub fn from_perms(space: &SnkSpace, perms: &[CyclePerm]) -> Result<Self> {
        let ids = perms
            .iter()
            .map(|p| {
                space.id_of(p).ok_or_else(|| {
                    Error::invalid(format!("{p} is not in S({},{})", space.n(), space.k()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, ids)
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn perms<'a>(&'a self, space: &'a SnkSpace) -> impl Iterator<Item = &'a CyclePerm> + 'a {
        self.members.iter().map(|&i| space.perm(i))
    }

    fn cycle_ids(&self, space: &SnkSpace) -> HashSet<u32> {
        self.members
            .iter()
            .flat_map(|&m| space.perm_cycle_ids(m).iter().copied())
            .collect()
    }
}

/// True iff the permutations pairwise share no cycle. Repeated entries share
/// every cycle, so they make the answer false.
pub fn is_matching(perms: &[CyclePerm]) -> bool {
    perms
        .iter()
        .enumerate()
        .all(|(i, a)| perms[i + 1..].iter().all(|b| !a.shares_cycle(b)))
}

pub fn is_matching_ids(space: &SnkSpace, ids: &[usize]) -> bool {
    ids.iter()
        .enumerate()
        .all(|(i, &a)| ids[i + 1..].iter().all(|&b| space.disjoint(a, b)))
}

/// Scans members in id order and keeps each one disjoint from those kept so far.
pub fn greedy_matching(family: &Family) -> Matching {
    let space = family.space();
    let mut used: HashSet<u32> = HashSet::new();
    let mut members = Vec::new();
    for m in family.ids() {
        let cycles = space.perm_cycle_ids(m);
        if cycles.iter().all(|c| !used.contains(c)) {
            used.extend(cycles.iter().copied());
            members.push(m);
        }
    }
    Matching { members }
}

/// Size of a greedy set of cycles such that every member contains one of
/// them, giving up once it exceeds `give_up_above`.
fn greedy_cycle_cover(family: &Family, give_up_above: usize) -> Option<usize> {
    let incidence = family.incidence();
    let mut cycles: Vec<u32> = incidence.keys().copied().collect();
    cycles.sort_unstable();
    let mut covered = FixedBitSet::with_capacity(family.space().len());
    let mut remaining = family.len();
    let mut used = 0;
    while remaining > 0 {
        if used == give_up_above {
            return None;
        }
        let (best, gain) = cycles
            .iter()
            .map(|&c| (c, incidence[&c].iter().filter(|&&m| !covered.contains(m as usize)).count()))
            .fold((0, 0), |acc, x| if x.1 > acc.1 { x } else { acc });
        for &m in &incidence[&best] {
            covered.insert(m as usize);
        }
        remaining -= gain;
        used += 1;
    }
    Some(used)
}

pub fn nu_p(family: &Family) -> Result<(usize, Matching)> {
    nu_p_capped(family, DEFAULT_NU_CAP)
}

/// Exact matching number with a witness matching.
pub fn nu_p_capped(family: &Family, cap: usize) -> Result<(usize, Matching)> {
    if family.is_empty() {
        return Ok((0, Matching::empty()));
    }
    if family.len() > cap {
        return Err(Error::capacity("matching-number solver vertices", family.len(), cap));
    }
    let greedy = greedy_matching(family);
    if greedy_cycle_cover(family, greedy.len()).is_some() {
        return Ok((greedy.len(), greedy));
    }
    let graph = DisjointnessGraph::build(family);
    let seed: Vec<usize> = greedy
        .members
        .iter()
        .map(|m| graph.vertices.binary_search(m).expect("greedy picks members"))
        .collect();
    let found = clique::max_clique(graph.rows(), seed);
    let members: Vec<usize> = found.clique.iter().map(|&i| graph.vertices[i]).collect();
    Ok((members.len(), Matching { members }))
}

/// First member (by id) that contains none of the forbidden cycles.
pub fn avoid_cycles(family: &Family, forbidden: &[Cycle]) -> Option<usize> {
    let space = family.space();
    let ids: HashSet<u32> = forbidden.iter().filter_map(|c| space.cycle_id(c)).collect();
    first_avoiding(family, &ids)
}

fn first_avoiding(family: &Family, forbidden: &HashSet<u32>) -> Option<usize> {
    let space = family.space();
    family
        .ids()
        .find(|&m| space.perm_cycle_ids(m).iter().all(|c| !forbidden.contains(c)))
}

fn check_anchored(family: &Family, b: &Cycle) -> Result<()> {
    if let Some(m) = family.perms().find(|p| !p.contains_cycle(b)) {
        return Err(Error::precondition(format!("member {m} does not contain anchor {b}")));
    }
    Ok(())
}

fn check_matching_avoids(space: &SnkSpace, h: &Matching, b: &Cycle) -> Result<()> {
    if let Some(p) = h.perms(space).find(|p| p.contains_cycle(b)) {
        return Err(Error::precondition(format!("matching member {p} contains anchor {b}")));
    }
    Ok(())
}

fn check_family_space(family: &Family, h: &Matching) -> Result<()> {
    if let Some(&bad) = h.members.iter().find(|&&m| m >= family.space().len()) {
        return Err(Error::invalid(format!("matching id {bad} out of range")));
    }
    Ok(())
}

/// A member `pi` of a family anchored at `b` with `{pi} + H` a matching.
/// `Ok(None)` means no such member exists.
pub fn extend_matching(family: &Family, b: &Cycle, h: &Matching) -> Result<Option<usize>> {
    check_family_space(family, h)?;
    check_anchored(family, b)?;
    check_matching_avoids(family.space(), h, b)?;
    Ok(first_avoiding(family, &h.cycle_ids(family.space())))
}

/// One member from each anchored family so that together with `H` they form
/// a matching. Families are filled from the last to the first, each pick
/// avoiding the cycles of `H`, of earlier picks, and of the anchors still to
/// be served; dead ends backtrack, so `Ok(None)` means no choice exists.
///
/// All families must live in the same `S(n,k)`.
pub fn extend_matching_multi(families: &[(Cycle, Family)], h: &Matching) -> Result<Option<Vec<usize>>> {
    let Some((_, first)) = families.first() else {
        return Ok(Some(Vec::new()));
    };
    let space = first.space().clone();
    for (i, (b, f)) in families.iter().enumerate() {
        if f.n() != space.n() || f.k() != space.k() {
            return Err(Error::SpaceMismatch(f.n(), f.k(), space.n(), space.k()));
        }
        if families[..i].iter().any(|(other, _)| other == b) {
            return Err(Error::precondition(format!("anchor {b} listed twice")));
        }
        check_family_space(f, h)?;
        check_anchored(f, b)?;
        check_matching_avoids(&space, h, b)?;
    }
    let mut forbidden: Vec<u32> = h.cycle_ids(&space).into_iter().collect();
    let mut picks = vec![usize::MAX; families.len()];
    if fill(&space, families, families.len(), &mut forbidden, &mut picks) {
        Ok(Some(picks))
    } else {
        Ok(None)
    }
}

fn fill(
    space: &SnkSpace,
    families: &[(Cycle, Family)],
    todo: usize,
    forbidden: &mut Vec<u32>,
    picks: &mut [usize],
) -> bool {
    if todo == 0 {
        return true;
    }
    let idx = todo - 1;
    let mut blocked: HashSet<u32> = forbidden.iter().copied().collect();
    blocked.extend(families[..idx].iter().filter_map(|(b, _)| space.cycle_id(b)));
    let candidates: Vec<usize> = families[idx]
        .1
        .ids()
        .filter(|&m| space.perm_cycle_ids(m).iter().all(|c| !blocked.contains(c)))
        .collect();
    for m in candidates {
        let mark = forbidden.len();
        forbidden.extend_from_slice(space.perm_cycle_ids(m));
        picks[idx] = m;
        if fill(space, families, idx, forbidden, picks) {
            return true;
        }
        forbidden.truncate(mark);
    }
    false
}

/// All matchings of exactly `size` members, as ascending id lists in
/// lexicographic order. Errors once more than `cap` would be returned.
pub fn enumerate_matchings(family: &Family, size: usize, cap: usize) -> Result<Vec<Matching>> {
    if size == 0 {
        return Err(Error::invalid("matching size must be at least 1"));
    }
    if family.len() > DEFAULT_NU_CAP {
        return Err(Error::capacity("matching enumeration vertices", family.len(), DEFAULT_NU_CAP));
    }
    let graph = DisjointnessGraph::build(family);
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    let mut all = FixedBitSet::with_capacity(graph.len());
    all.insert_range(..);
    collect_cliques(&graph, size, cap, all, &mut current, &mut out)?;
    Ok(out)
}

fn collect_cliques(
    graph: &DisjointnessGraph,
    size: usize,
    cap: usize,
    candidates: FixedBitSet,
    current: &mut Vec<usize>,
    out: &mut Vec<Matching>,
) -> Result<()> {
    if current.len() == size {
        if out.len() == cap {
            return Err(Error::capacity("matchings", format!("more than {cap}"), cap));
        }
        out.push(Matching {
            members: current.iter().map(|&i| graph.vertices[i]).collect(),
        });
        return Ok(());
    }
    let need = size - current.len();
    let cands: Vec<usize> = candidates.ones().collect();
    for (pos, &v) in cands.iter().enumerate() {
        if cands.len() - pos < need {
            break;
        }
        let mut next = candidates.clone();
        next.intersect_with(&graph.rows[v]);
        next.set_range(..v + 1, false);
        current.push(v);
        collect_cliques(graph, size, cap, next, current, out)?;
        current.pop();
    }
    Ok(())
}
