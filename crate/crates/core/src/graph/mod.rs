//! Undirected graphs and set systems.
//!
//! Vertex ids are dense indices in `0..n`. Edges are stored normalized with
//! `u < v`; an edge's position in [`Graph::edges`] is its stable index, which
//! prediction tables use to key their bits.

mod generate;
mod io;

pub use generate::{
    gen_er_graph, gen_planted_mis, gen_planted_set_cover, gen_planted_vc, named,
    random_vertex_weights,
};
pub use io::{
    load_edge_list, load_set_system, load_vertex_weights, write_edge_list, write_remap_csv,
    write_set_system, LabeledGraph,
};

use std::collections::{HashSet, VecDeque};

use crate::error::{domain, Error, Result};

pub type VertexId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub w: f64,
}

impl Edge {
    /// The endpoint that is not `x`.
    #[inline]
    pub fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }

    #[inline]
    pub fn endpoints(&self) -> [VertexId; 2] {
        [self.u, self.v]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    vertex_weights: Option<Vec<f64>>,
    /// `adj[v]` lists `(neighbor, edge index)` in edge-index order.
    adj: Vec<Vec<(VertexId, usize)>>,
}

impl Graph {
    /// Unit-weight graph. Duplicate undirected edges are collapsed.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Result<Self> {
        Self::with_edge_weights(n, edges.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    /// Weighted graph. Duplicates are collapsed keeping the first weight.
    pub fn with_edge_weights(
        n: usize,
        edges: impl IntoIterator<Item = (VertexId, VertexId, f64)>,
    ) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (a, b, w) in edges {
            if a >= n || b >= n {
                return domain(format!("edge ({a}, {b}) out of range for n = {n}"));
            }
            if a == b {
                return domain(format!("self-loop at vertex {a}"));
            }
            if !(w >= 0.0) || !w.is_finite() {
                return domain(format!("edge ({a}, {b}) has invalid weight {w}"));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if seen.insert((u, v)) {
                out.push(Edge { u, v, w });
            }
        }
        let mut adj = vec![Vec::new(); n];
        for (i, e) in out.iter().enumerate() {
            adj[e.u].push((e.v, i));
            adj[e.v].push((e.u, i));
        }
        Ok(Self {
            n,
            edges: out,
            vertex_weights: None,
            adj,
        })
    }

    /// Attaches strictly positive vertex weights.
    pub fn with_vertex_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.n {
            return domain(format!(
                "expected {} vertex weights, got {}",
                self.n,
                weights.len()
            ));
        }
        if let Some((v, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(**w > 0.0) || !w.is_finite())
        {
            return domain(format!("vertex {v} has nonpositive weight {w}"));
        }
        self.vertex_weights = Some(weights);
        Ok(self)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    /// `(neighbor, edge index)` pairs incident to `v`. Panics if `v >= n`.
    #[inline]
    pub fn incident(&self, v: VertexId) -> &[(VertexId, usize)] {
        &self.adj[v]
    }

    #[inline]
    pub(crate) fn deg(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    fn check(&self, v: VertexId) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            domain(format!("vertex {v} out of range for n = {}", self.n))
        }
    }

    pub fn degree(&self, v: VertexId) -> Result<usize> {
        self.check(v)?;
        Ok(self.deg(v))
    }

    pub fn neighbors(&self, v: VertexId) -> Result<Vec<VertexId>> {
        self.check(v)?;
        Ok(self.adj[v].iter().map(|&(u, _)| u).collect())
    }

    /// Sum of incident edge weights, `W_v`.
    pub fn weighted_degree(&self, v: VertexId) -> Result<f64> {
        self.check(v)?;
        Ok(self.wdeg(v))
    }

    #[inline]
    pub(crate) fn wdeg(&self, v: VertexId) -> f64 {
        self.adj[v].iter().map(|&(_, e)| self.edges[e].w).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn total_edge_weight(&self) -> f64 {
        self.edges.iter().fold(0.0, |a, e| a + e.w)
    }

    pub fn has_vertex_weights(&self) -> bool {
        self.vertex_weights.is_some()
    }

    pub fn vertex_weights(&self) -> Option<&[f64]> {
        self.vertex_weights.as_deref()
    }

    /// `w(v)`; 1 when the graph carries no vertex weights.
    #[inline]
    pub fn vertex_weight(&self, v: VertexId) -> f64 {
        self.vertex_weights.as_ref().map_or(1.0, |w| w[v])
    }

    pub fn set_weight(&self, set: &[VertexId]) -> f64 {
        set.iter().fold(0.0, |a, &v| a + self.vertex_weight(v))
    }

    /// `G[keep]` with ids re-densified in ascending order of `keep`.
    /// Returns the subgraph and the map from new id to original id.
    pub fn induced_subgraph(&self, keep: &[VertexId]) -> Result<(Graph, Vec<VertexId>)> {
        let mut back: Vec<VertexId> = keep.to_vec();
        back.sort_unstable();
        back.dedup();
        if let Some(&v) = back.last() {
            self.check(v)?;
        }
        let mut fwd = vec![usize::MAX; self.n];
        for (i, &v) in back.iter().enumerate() {
            fwd[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| fwd[e.u] != usize::MAX && fwd[e.v] != usize::MAX)
            .map(|e| (fwd[e.u], fwd[e.v], e.w));
        let mut sub = Graph::with_edge_weights(back.len(), edges)?;
        if let Some(w) = &self.vertex_weights {
            sub.vertex_weights = Some(back.iter().map(|&v| w[v]).collect());
        }
        Ok((sub, back))
    }

    /// Same vertex set, keeping only the listed edges.
    pub fn edge_subgraph(&self, edge_ids: impl IntoIterator<Item = usize>) -> Graph {
        let edges = edge_ids.into_iter().map(|i| {
            let e = self.edges[i];
            (e.u, e.v, e.w)
        });
        let mut sub = Graph::with_edge_weights(self.n, edges)
            .expect("edges of a valid graph form a valid graph");
        sub.vertex_weights = self.vertex_weights.clone();
        sub
    }

    /// Caro-Wei lower bound on the independence number: `Σ_v 1/(1+d_v)`.
    pub fn caro_wei_bound(&self) -> f64 {
        self.adj.iter().map(|a| 1.0 / (1.0 + a.len() as f64)).sum()
    }

    pub fn is_vertex_cover(&self, set: &[VertexId]) -> bool {
        let mask = mask(self.n, set);
        self.edges.iter().all(|e| mask[e.u] || mask[e.v])
    }

    pub fn is_independent(&self, set: &[VertexId]) -> bool {
        let mask = mask(self.n, set);
        self.edges.iter().all(|e| !(mask[e.u] && mask[e.v]))
    }

    /// `(1/4) Σ_{i,j} A_ij (x_i − x_j)²` over ordered pairs, i.e. the weight of
    /// edges whose endpoints have different signs.
    pub fn cut_value(&self, x: &[i8]) -> f64 {
        self.edges
            .iter()
            .filter(|e| x[e.u] != x[e.v])
            .fold(0.0, |a, e| a + e.w)
    }

    /// Keeps the `k` vertices first reached by BFS from the maximum-degree
    /// vertex (lowest id on ties), continuing from the next unvisited
    /// highest-degree vertex when a component is exhausted.
    pub fn prune_bfs_ball(&self, k: usize) -> Result<(Graph, Vec<VertexId>)> {
        let mut order: Vec<VertexId> = (0..self.n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(self.deg(v)), v));
        let mut seen = vec![false; self.n];
        let mut keep = Vec::with_capacity(k.min(self.n));
        let mut queue = VecDeque::new();
        for &root in &order {
            if keep.len() >= k {
                break;
            }
            if seen[root] {
                continue;
            }
            seen[root] = true;
            queue.push_back(root);
            while let Some(v) = queue.pop_front() {
                if keep.len() >= k {
                    break;
                }
                keep.push(v);
                for &(u, _) in &self.adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                }
            }
            queue.clear();
        }
        self.induced_subgraph(&keep)
    }
}

/// Boolean membership mask of `set` over `0..n`.
pub fn mask(n: usize, set: &[VertexId]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in set {
        m[v] = true;
    }
    m
}

/// Sorted vertex list from a mask.
pub fn members(mask: &[bool]) -> Vec<VertexId> {
    mask.iter()
        .enumerate()
        .filter_map(|(v, &b)| b.then_some(v))
        .collect()
}

/// A universe `0..m` and a family of subsets. Set indices play the role of
/// vertices and elements the role of (hyper)edges.
#[derive(Debug, Clone, PartialEq)]
pub struct SetSystem {
    m: usize,
    sets: Vec<Vec<usize>>,
}

impl SetSystem {
    /// Sets are sorted and deduplicated. The union must be the whole universe.
    pub fn new(m: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut covered = vec![false; m];
        let mut norm = Vec::with_capacity(sets.len());
        for (j, mut s) in sets.into_iter().enumerate() {
            s.sort_unstable();
            s.dedup();
            if let Some(&x) = s.last() {
                if x >= m {
                    return domain(format!("set {j} contains element {x} >= m = {m}"));
                }
            }
            for &x in &s {
                covered[x] = true;
            }
            norm.push(s);
        }
        let missing: Vec<usize> = members(&covered.iter().map(|c| !c).collect::<Vec<_>>());
        if !missing.is_empty() {
            return Err(Error::Infeasible(format!(
                "elements not covered by any set: {missing:?}"
            )));
        }
        Ok(Self { m, sets: norm })
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of sets.
    #[inline]
    pub fn n(&self) -> usize {
        self.sets.len()
    }

    #[inline]
    pub fn set(&self, j: usize) -> &[usize] {
        &self.sets[j]
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.sets.iter().map(Vec::len).collect()
    }

    pub fn max_set_size(&self) -> usize {
        self.sets.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Total number of (element, containing set) incidences.
    pub fn incidences(&self) -> usize {
        self.sets.iter().map(Vec::len).sum()
    }

    pub fn is_cover(&self, chosen: &[usize]) -> bool {
        let mut covered = vec![false; self.m];
        for &j in chosen {
            for &x in &self.sets[j] {
                covered[x] = true;
            }
        }
        covered.into_iter().all(|c| c)
    }
}
