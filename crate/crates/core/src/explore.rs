//! Exhaustive ground truth: enumerate all triangulations of the `n`-gon,
//! build degree-bounded flip graphs, find components and frozen
//! triangulations, and compute exact flip distances by BFS.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::triangulation::{Diagonal, Triangulation};

/// Enumeration limits. Full enumeration touches Catalan(n-2) triangulations,
/// so the defaults keep exhaustive work at interactive sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_enumeration_n: usize,
    pub max_all_pairs_n: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_enumeration_n: 16,
            max_all_pairs_n: 12,
        }
    }
}

impl Budget {
    pub fn with_max_n(max_n: usize) -> Budget {
        Budget {
            max_enumeration_n: max_n,
            ..Budget::default()
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.max_enumeration_n {
            return Err(Error::BudgetExceeded {
                n,
                max_n: self.max_enumeration_n,
                estimate: catalan_estimate(n.saturating_sub(2)),
            });
        }
        Ok(())
    }
}

/// Catalan numbers by the standard convolution recurrence,
/// `C(0) = 1, C(m+1) = sum C(i) C(m-i)`. Independent of the enumerator.
pub fn catalan(m: usize) -> u64 {
    let mut c = vec![0u64; m + 1];
    c[0] = 1;
    for i in 1..=m {
        for j in 0..i {
            c[i] += c[j] * c[i - 1 - j];
        }
    }
    c[m]
}

fn catalan_estimate(m: usize) -> u128 {
    let mut c = vec![0u128; m + 1];
    c[0] = 1;
    for i in 1..=m {
        for j in 0..i {
            c[i] = c[i].saturating_add(c[j].saturating_mul(c[i - 1 - j]));
        }
    }
    c[m]
}

/// Streams every triangulation of the `n`-gon exactly once, in the
/// deterministic order produced by recursing on the apex of the triangle
/// closing each open sub-polygon, starting from hull edge `(0, n-1)`.
/// Returns the number visited.
pub fn enumerate_with<F: FnMut(&Triangulation)>(
    n: usize,
    budget: &Budget,
    mut f: F,
) -> Result<u64> {
    if n < 3 {
        return Err(Error::PolygonTooSmall { n });
    }
    budget.check(n)?;
    // Worklist of sub-polygon ranges (a, b) still to triangulate; each range
    // stands for the contiguous polygon a..=b closed by the edge (a, b).
    let mut work: Vec<(usize, usize)> = vec![(0, n - 1)];
    let mut diags: Vec<Diagonal> = Vec::with_capacity(n - 3);
    let mut count = 0u64;
    go(n, &mut work, &mut diags, &mut count, &mut f);
    return Ok(count);

    fn go<F: FnMut(&Triangulation)>(
        n: usize,
        work: &mut Vec<(usize, usize)>,
        diags: &mut Vec<Diagonal>,
        count: &mut u64,
        f: &mut F,
    ) {
        let Some((a, b)) = work.pop() else {
            *count += 1;
            f(&Triangulation::from_parts(n, diags.clone()));
            return;
        };
        debug_assert!(b - a >= 2);
        let base_work = work.len();
        let base_diags = diags.len();
        for m in a + 1..b {
            if m - a >= 2 {
                diags.push(Diagonal::new(a, m));
                work.push((a, m));
            }
            if b - m >= 2 {
                diags.push(Diagonal::new(m, b));
                work.push((m, b));
            }
            go(n, work, diags, count, f);
            work.truncate(base_work);
            diags.truncate(base_diags);
        }
        work.push((a, b));
    }
}

/// Convenience: all triangulations of the `n`-gon in enumeration order.
pub fn enumerate(n: usize, budget: &Budget) -> Result<Vec<Triangulation>> {
    let mut out = Vec::new();
    enumerate_with(n, budget, |t| out.push(t.clone()))?;
    Ok(out)
}

/// Counts without storing; checked against [`catalan`] in tests.
pub fn enumerate_count(n: usize, budget: &Budget) -> Result<u64> {
    enumerate_with(n, budget, |_| {})
}

/// The flip graph restricted to triangulations with maximum degree at most
/// `k`. Nodes are canonical codes; an edge is a flip whose result stays in
/// the class, which is exactly the `legal_flips` rule.
pub struct FlipGraph {
    pub n: usize,
    pub k: usize,
    nodes: Vec<Triangulation>,
    codes: Vec<String>,
    index: HashMap<String, u32>,
    adj: Vec<Vec<u32>>,
    edge_count: usize,
}

impl FlipGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn nodes(&self) -> &[Triangulation] {
        &self.nodes
    }

    pub fn codes(&self) -> &[String] {
        &self.codes
    }

    pub fn neighbors(&self, id: usize) -> &[u32] {
        &self.adj[id]
    }

    pub fn index_of(&self, t: &Triangulation) -> Option<usize> {
        self.index.get(&t.canonical_code()).map(|&i| i as usize)
    }

    /// Undirected edges as (small id, large id), sorted.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (i, nbrs) in self.adj.iter().enumerate() {
            for &j in nbrs {
                if (i as u32) < j {
                    out.push((i as u32, j));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// BFS distances from `start` to every node; `u32::MAX` marks unreachable.
    pub fn bfs(&self, start: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.nodes.len()];
        let mut queue = std::collections::VecDeque::new();
        dist[start] = 0;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                let w = w as usize;
                if dist[w] == u32::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

/// Builds the degree-`k` flip graph of the `n`-gon.
pub fn build_flip_graph(n: usize, k: usize, budget: &Budget) -> Result<FlipGraph> {
    let mut nodes = Vec::new();
    enumerate_with(n, budget, |t| {
        if t.max_degree() <= k {
            nodes.push(t.clone());
        }
    })?;
    let mut order: Vec<usize> = (0..nodes.len()).collect();
    let codes: Vec<String> = nodes.iter().map(Triangulation::canonical_code).collect();
    order.sort_by(|&i, &j| codes[i].cmp(&codes[j]));
    let nodes: Vec<Triangulation> = order.iter().map(|&i| nodes[i].clone()).collect();
    let codes: Vec<String> = nodes.iter().map(Triangulation::canonical_code).collect();
    let index: HashMap<String, u32> = codes
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i as u32))
        .collect();

    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); nodes.len()];
    let mut edge_count = 0usize;
    for (i, t) in nodes.iter().enumerate() {
        for d in t.legal_flips(k) {
            let (t2, _) = t.flip(d).expect("legal flip");
            let j = *index
                .get(&t2.canonical_code())
                .expect("flip result stays in the degree class");
            if (i as u32) < j {
                adj[i].push(j);
                adj[j as usize].push(i as u32);
                edge_count += 1;
            }
        }
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    Ok(FlipGraph {
        n,
        k,
        nodes,
        codes,
        index,
        adj,
        edge_count,
    })
}

/// Connected components of a flip graph.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ComponentReport {
    pub n: usize,
    pub k: usize,
    pub count: usize,
    /// Component sizes, largest first.
    pub sizes: Vec<usize>,
    /// Smallest canonical code in each component, aligned with `sizes`.
    pub representatives: Vec<String>,
}

pub fn components(graph: &FlipGraph) -> ComponentReport {
    let nn = graph.node_count();
    let mut comp = vec![usize::MAX; nn];
    let mut comps: Vec<(usize, String)> = Vec::new();
    for start in 0..nn {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut size = 0usize;
        let mut representative = graph.codes()[start].clone();
        let mut stack = vec![start];
        comp[start] = id;
        while let Some(v) = stack.pop() {
            size += 1;
            if graph.codes()[v] < representative {
                representative = graph.codes()[v].clone();
            }
            for &w in graph.neighbors(v) {
                let w = w as usize;
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    stack.push(w);
                }
            }
        }
        comps.push((size, representative));
    }
    comps.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    ComponentReport {
        n: graph.n,
        k: graph.k,
        count: comps.len(),
        sizes: comps.iter().map(|c| c.0).collect(),
        representatives: comps.into_iter().map(|c| c.1).collect(),
    }
}

/// Class members with no legal flip at all: isolated flip-graph nodes.
pub fn frozen(graph: &FlipGraph) -> Vec<Triangulation> {
    (0..graph.node_count())
        .filter(|&i| graph.neighbors(i).is_empty())
        .map(|i| graph.nodes()[i].clone())
        .collect()
}

/// Exact flip distance inside the degree-`k` class, or `None` when the two
/// triangulations are in different components.
pub fn exact_distance(
    graph: &FlipGraph,
    from: &Triangulation,
    to: &Triangulation,
) -> Result<Option<u32>> {
    let a = graph
        .index_of(from)
        .ok_or(Error::DegreeBoundExceeded {
            max_degree: from.max_degree(),
            k: graph.k,
        })?;
    let b = graph
        .index_of(to)
        .ok_or(Error::DegreeBoundExceeded {
            max_degree: to.max_degree(),
            k: graph.k,
        })?;
    let dist = graph.bfs(a);
    Ok(if dist[b] == u32::MAX {
        None
    } else {
        Some(dist[b])
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalan_small_values() {
        assert_eq!(catalan(0), 1);
        assert_eq!(catalan(2), 2);
        assert_eq!(catalan(4), 14);
        assert_eq!(catalan(10), 16796);
        assert_eq!(catalan(14), 2674440);
    }

    #[test]
    fn enumerate_counts_match_catalan() {
        let budget = Budget::default();
        for n in 3..=12 {
            assert_eq!(
                enumerate_count(n, &budget).unwrap(),
                catalan(n - 2),
                "n={n}"
            );
        }
    }

    #[test]
    fn enumerate_square() {
        let ts = enumerate(4, &Budget::default()).unwrap();
        assert_eq!(ts.len(), 2);
    }

    #[test]
    fn enumerate_is_duplicate_free() {
        let ts = enumerate(8, &Budget::default()).unwrap();
        let mut codes: Vec<String> = ts.iter().map(Triangulation::canonical_code).collect();
        codes.sort();
        codes.dedup();
        assert_eq!(codes.len(), catalan(6) as usize);
    }

    #[test]
    fn enumerate_respects_budget() {
        let err = enumerate_count(17, &Budget::default()).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn flip_graph_square_k3() {
        let g = build_flip_graph(4, 3, &Budget::default()).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(components(&g).count, 1);
    }

    #[test]
    fn flip_graph_heptagon_k4_is_frozen_zigzags() {
        let g = build_flip_graph(7, 4, &Budget::default()).unwrap();
        assert_eq!(g.node_count(), 7);
        assert_eq!(g.edge_count(), 0);
        let report = components(&g);
        assert_eq!(report.count, 7);
        assert!(report.sizes.iter().all(|&s| s == 1));
        assert_eq!(frozen(&g).len(), 7);
    }

    #[test]
    fn unbounded_graph_is_connected() {
        for n in 4..=9 {
            let g = build_flip_graph(n, n - 1, &Budget::default()).unwrap();
            assert_eq!(g.node_count() as u64, catalan(n - 2));
            assert_eq!(components(&g).count, 1, "n={n}");
        }
    }

    #[test]
    fn distance_examples() {
        let g = build_flip_graph(4, 3, &Budget::default()).unwrap();
        let a = Triangulation::new(4, vec![Diagonal::new(0, 2)]).unwrap();
        let b = Triangulation::new(4, vec![Diagonal::new(1, 3)]).unwrap();
        assert_eq!(exact_distance(&g, &a, &a).unwrap(), Some(0));
        assert_eq!(exact_distance(&g, &a, &b).unwrap(), Some(1));

        let g7 = build_flip_graph(7, 4, &Budget::default()).unwrap();
        let z0 = Triangulation::zigzag(7, 0, false);
        let z1 = Triangulation::zigzag(7, 1, false);
        assert_eq!(exact_distance(&g7, &z0, &z1).unwrap(), None);
    }

    #[test]
    fn node_monotonicity_in_k() {
        for n in 4..=9 {
            let mut prev = 0usize;
            for k in 3..=n - 1 {
                let g = build_flip_graph(n, k, &Budget::default()).unwrap();
                assert!(g.node_count() >= prev);
                prev = g.node_count();
            }
        }
    }
}
