//! Branch-and-bound maximum clique over bit-set adjacency rows.
//!
//! Candidates are greedily colored at every node and expanded from the
//! highest color down; a branch is cut once `|clique| + color` cannot beat
//! the incumbent. The initial order is by descending degree, ties to the
//! lower vertex, so results are reproducible.

use fixedbitset::FixedBitSet;

#[derive(Debug, Clone)]
pub struct CliqueResult {
    /// Vertices of the best clique found, ascending.
    pub clique: Vec<usize>,
    pub nodes: u64,
}

/// Maximum clique of the graph whose symmetric, irreflexive rows are `adj`.
///
/// `incumbent` seeds the search with a known clique; the search then only
/// looks for strictly larger ones.
pub fn max_clique(adj: &[FixedBitSet], incumbent: Vec<usize>) -> CliqueResult {
    let n = adj.len();
    let mut order: Vec<usize> = (0..n).collect();
    let degree: Vec<usize> = adj.iter().map(|r| r.count_ones(..)).collect();
    order.sort_by(|&a, &b| degree[b].cmp(&degree[a]).then(a.cmp(&b)));

    let mut search = Search {
        adj,
        best: incumbent,
        current: Vec::new(),
        nodes: 0,
    };
    search.expand(order);
    let mut clique = search.best;
    clique.sort_unstable();
    CliqueResult {
        clique,
        nodes: search.nodes,
    }
}

struct Search<'a> {
    adj: &'a [FixedBitSet],
    best: Vec<usize>,
    current: Vec<usize>,
    nodes: u64,
}

impl Search<'_> {
    fn expand(&mut self, candidates: Vec<usize>) {
        self.nodes += 1;
        let (ordered, colors) = color_sort(self.adj, &candidates);
        for i in (0..ordered.len()).rev() {
            if self.current.len() + colors[i] <= self.best.len() {
                return;
            }
            let v = ordered[i];
            let next: Vec<usize> = ordered[..i]
                .iter()
                .copied()
                .filter(|&u| self.adj[v].contains(u))
                .collect();
            self.current.push(v);
            if next.is_empty() {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
        }
    }
}

/// Greedy sequential coloring. Returns the candidates regrouped by color
/// class (ascending) together with the 1-based color of each position.
fn color_sort(adj: &[FixedBitSet], candidates: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let width = adj.len();
    let mut classes: Vec<(FixedBitSet, Vec<usize>)> = Vec::new();
    for &v in candidates {
        match classes.iter_mut().find(|(bits, _)| adj[v].is_disjoint(bits)) {
            Some((bits, members)) => {
                bits.insert(v);
                members.push(v);
            }
            None => {
                let mut bits = FixedBitSet::with_capacity(width);
                bits.insert(v);
                classes.push((bits, vec![v]));
            }
        }
    }
    let mut ordered = Vec::with_capacity(candidates.len());
    let mut colors = Vec::with_capacity(candidates.len());
    for (c, (_, members)) in classes.into_iter().enumerate() {
        for v in members {
            ordered.push(v);
            colors.push(c + 1);
        }
    }
    (ordered, colors)
}

/// Upper bound on the clique number from one greedy coloring of all vertices.
pub fn coloring_bound(adj: &[FixedBitSet]) -> usize {
    let all: Vec<usize> = (0..adj.len()).collect();
    color_sort(adj, &all).1.last().copied().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Vec<FixedBitSet> {
        let mut rows = vec![FixedBitSet::with_capacity(n); n];
        for &(a, b) in edges {
            rows[a].insert(b);
            rows[b].insert(a);
        }
        rows
    }

    fn brute(adj: &[FixedBitSet]) -> usize {
        let n = adj.len();
        (0u32..1 << n)
            .filter(|&mask| {
                (0..n).all(|a| {
                    mask & (1 << a) == 0
                        || (a + 1..n).all(|b| mask & (1 << b) == 0 || adj[a].contains(b))
                })
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn small_graphs() {
        assert!(max_clique(&[], vec![]).clique.is_empty());
        assert_eq!(max_clique(&graph(3, &[]), vec![]).clique.len(), 1);
        let k4_plus = graph(6, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4), (4, 5)]);
        assert_eq!(max_clique(&k4_plus, vec![]).clique, vec![0, 1, 2, 3]);
        // C5 has clique number 2
        let c5 = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert_eq!(max_clique(&c5, vec![]).clique.len(), 2);
        assert!(coloring_bound(&c5) >= 3);
    }

    #[test]
    fn random_graphs_match_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..14);
            let p = rng.gen_range(0.1..0.9);
            let mut edges = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(p) {
                        edges.push((a, b));
                    }
                }
            }
            let g = graph(n, &edges);
            let res = max_clique(&g, vec![]);
            assert_eq!(res.clique.len(), brute(&g));
            for (i, &a) in res.clique.iter().enumerate() {
                for &b in &res.clique[i + 1..] {
                    assert!(g[a].contains(b));
                }
            }
        }
    }
}
