//! Largest vertex set of a uniform hypergraph containing no hyperedge.
//!
//! This is the complement of a minimum hitting set. Vertices are decided in
//! or out; once all but one member of a hyperedge is in, the last member is
//! forced out. The bound partitions the undecided vertices into groups in
//! which every `size`-subset is a hyperedge, so each group contributes at
//! most `size - 1` vertices. For the matching hypergraph those groups are
//! pairwise-disjoint permutations, read off the disjointness rows.

use fixedbitset::FixedBitSet;

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    /// Best feasible vertex set found, ascending.
    pub best: Vec<usize>,
    /// False when the node limit stopped the search.
    pub optimal: bool,
    /// Certified upper bound on the optimum; equals `best.len()` when optimal.
    pub upper: usize,
    pub nodes: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Undecided,
    In,
    Out,
}

/// `edges` must all have `edge_size` distinct members. `group_rows[v]` must
/// hold every `u` such that any `edge_size` pairwise-related vertices form a
/// hyperedge. `incumbent` must be feasible.
pub fn max_edge_free_set(
    vertex_count: usize,
    edge_size: usize,
    edges: &[Vec<u32>],
    group_rows: &[FixedBitSet],
    incumbent: Vec<usize>,
    node_limit: u64,
) -> SolveOutcome {
    assert!(edge_size >= 1);
    let mut vertex_edges = vec![Vec::new(); vertex_count];
    for (e, members) in edges.iter().enumerate() {
        debug_assert_eq!(members.len(), edge_size);
        for &v in members {
            vertex_edges[v as usize].push(e as u32);
        }
    }
    let mut solver = Solver {
        edges,
        vertex_edges,
        rows: group_rows,
        per_group: edge_size - 1,
        status: vec![Status::Undecided; vertex_count],
        in_count: vec![0; edges.len()],
        chosen: Vec::new(),
        best: incumbent,
        nodes: 0,
        node_limit,
        open_upper: 0,
    };
    // Vertices lying in a single-vertex hyperedge can never be chosen.
    if edge_size == 1 {
        for e in edges {
            solver.status[e[0] as usize] = Status::Out;
        }
    }
    let optimal = solver.search();
    let mut best = solver.best;
    best.sort_unstable();
    let upper = if optimal {
        best.len()
    } else {
        solver.open_upper.max(best.len())
    };
    SolveOutcome {
        best,
        optimal,
        upper,
        nodes: solver.nodes,
    }
}

struct Solver<'a> {
    edges: &'a [Vec<u32>],
    vertex_edges: Vec<Vec<u32>>,
    rows: &'a [FixedBitSet],
    per_group: usize,
    status: Vec<Status>,
    in_count: Vec<u32>,
    chosen: Vec<usize>,
    best: Vec<usize>,
    nodes: u64,
    node_limit: u64,
    open_upper: usize,
}

impl Solver<'_> {
    /// Returns false if the node limit was hit somewhere below this node.
    fn search(&mut self) -> bool {
        self.nodes += 1;
        let (extra, branch) = self.group_bound();
        let bound = self.chosen.len() + extra;
        if bound <= self.best.len() {
            return true;
        }
        let Some(v) = branch else {
            self.best = self.chosen.clone();
            return true;
        };
        if self.nodes > self.node_limit {
            self.open_upper = self.open_upper.max(bound);
            return false;
        }

        let forced = self.include(v);
        let done = self.search();
        self.exclude_undo(v, &forced);
        if !done {
            self.open_upper = self.open_upper.max(bound);
            return false;
        }

        self.status[v] = Status::Out;
        let done = self.search();
        self.status[v] = Status::Undecided;
        if !done {
            self.open_upper = self.open_upper.max(bound);
            return false;
        }
        true
    }

    fn include(&mut self, v: usize) -> Vec<usize> {
        self.status[v] = Status::In;
        self.chosen.push(v);
        let mut forced = Vec::new();
        for &e in &self.vertex_edges[v] {
            let e = e as usize;
            self.in_count[e] += 1;
            if self.in_count[e] as usize == self.per_group {
                for &u in &self.edges[e] {
                    let u = u as usize;
                    if self.status[u] == Status::Undecided {
                        self.status[u] = Status::Out;
                        forced.push(u);
                    }
                }
            }
        }
        forced
    }

    fn exclude_undo(&mut self, v: usize, forced: &[usize]) {
        for &e in &self.vertex_edges[v] {
            self.in_count[e as usize] -= 1;
        }
        for &u in forced {
            self.status[u] = Status::Undecided;
        }
        self.status[v] = Status::Undecided;
        self.chosen.pop();
    }

    /// Greedy grouping of the undecided vertices. Returns the bound on how
    /// many of them can still be chosen and the vertex to branch on.
    fn group_bound(&self) -> (usize, Option<usize>) {
        let mut groups: Vec<(FixedBitSet, usize, usize)> = Vec::new();
        for u in 0..self.status.len() {
            if self.status[u] != Status::Undecided {
                continue;
            }
            match groups.iter_mut().find(|(compat, _, _)| compat.contains(u)) {
                Some((compat, count, last)) => {
                    compat.intersect_with(&self.rows[u]);
                    *count += 1;
                    *last = u;
                }
                None => groups.push((self.rows[u].clone(), 1, u)),
            }
        }
        let extra = groups.iter().map(|(_, c, _)| (*c).min(self.per_group)).sum();
        (extra, groups.last().map(|g| g.2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(n: usize, edges: &[Vec<u32>]) -> usize {
        (0u32..1 << n)
            .filter(|&mask| edges.iter().all(|e| !e.iter().all(|&v| mask & (1 << v) != 0)))
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap()
    }

    // The empty relation is always a valid grouping.
    fn no_groups(n: usize) -> Vec<FixedBitSet> {
        vec![FixedBitSet::with_capacity(n); n]
    }

    #[test]
    fn graph_independent_set() {
        // path 0-1-2-3: independence number 2
        let edges = vec![vec![0, 1], vec![1, 2], vec![2, 3]];
        let out = max_edge_free_set(4, 2, &edges, &no_groups(4), vec![], u64::MAX);
        assert!(out.optimal);
        assert_eq!(out.best.len(), 2);
    }

    #[test]
    fn random_hypergraphs_match_brute_force() {
        use rand::{seq::index::sample, Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..150 {
            let n = rng.gen_range(3..13);
            let size = rng.gen_range(2..4usize).min(n);
            let m = rng.gen_range(0..25);
            let mut edges: Vec<Vec<u32>> = (0..m)
                .map(|_| {
                    let mut e: Vec<u32> = sample(&mut rng, n, size).iter().map(|v| v as u32).collect();
                    e.sort_unstable();
                    e
                })
                .collect();
            edges.sort();
            edges.dedup();
            let out = max_edge_free_set(n, size, &edges, &no_groups(n), vec![], u64::MAX);
            assert!(out.optimal);
            assert_eq!(out.best.len(), brute(n, &edges));
            let chosen: u32 = out.best.iter().map(|&v| 1 << v).sum();
            assert!(edges.iter().all(|e| !e.iter().all(|&v| chosen & (1 << v) != 0)));
        }
    }

    #[test]
    fn node_limit_gives_sound_bounds() {
        // complete graph on 12 vertices: optimum 1
        let mut edges = Vec::new();
        let mut rows = vec![FixedBitSet::with_capacity(12); 12];
        for a in 0..12u32 {
            for b in a + 1..12 {
                edges.push(vec![a, b]);
                rows[a as usize].insert(b as usize);
                rows[b as usize].insert(a as usize);
            }
        }
        let out = max_edge_free_set(12, 2, &edges, &no_groups(12), vec![], 3);
        assert!(!out.optimal);
        assert!(out.upper >= 1 && out.best.len() <= 1);
        let exact = max_edge_free_set(12, 2, &edges, &rows, vec![], u64::MAX);
        assert!(exact.optimal);
        assert_eq!(exact.best.len(), 1);
        // with the clique grouping the root bound is already tight
        assert!(exact.nodes <= 3);
    }
}
