use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Graph, SetSystem, VertexId};
use crate::error::{domain, Result};

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        domain(format!("probability {p} outside [0, 1]"))
    }
}

/// Erdős–Rényi `G(n, p)`.
pub fn gen_er_graph(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return domain("n must be at least 1");
    }
    check_p(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

/// Graph with a planted cover `C = 0..n_cover` whose complement is independent.
///
/// Every free vertex is attached to one uniformly chosen cover vertex; each
/// remaining C–C and C–I pair is added with probability `extra_p`. `C` is a
/// valid cover but not necessarily minimum.
pub fn gen_planted_vc(
    n_cover: usize,
    n_free: usize,
    extra_p: f64,
    seed: u64,
) -> Result<(Graph, Vec<VertexId>)> {
    if n_cover == 0 {
        return domain("n_cover must be at least 1");
    }
    check_p(extra_p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = n_cover + n_free;
    let mut edges = Vec::new();
    for f in n_cover..n {
        edges.push((rng.gen_range(0..n_cover), f));
    }
    for c in 0..n_cover {
        for v in c + 1..n {
            if rng.gen_bool(extra_p) {
                edges.push((c, v));
            }
        }
    }
    Ok((Graph::new(n, edges)?, (0..n_cover).collect()))
}

/// Graph with a planted independent set `I = 0..n_indep`.
///
/// Each vertex of `I` is joined to `attach` distinct vertices of the rest
/// (clamped to `n_rest`), and rest–rest pairs are joined with probability
/// `rest_p`. With `attach` above the rest's typical degree, a min-degree
/// greedy is drawn into the rest while the planted side is heavy.
pub fn gen_planted_mis(
    n_indep: usize,
    n_rest: usize,
    attach: usize,
    rest_p: f64,
    seed: u64,
) -> Result<(Graph, Vec<VertexId>)> {
    if n_indep == 0 {
        return domain("n_indep must be at least 1");
    }
    check_p(rest_p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = n_indep + n_rest;
    let rest: Vec<VertexId> = (n_indep..n).collect();
    let mut edges = Vec::new();
    for i in 0..n_indep {
        for &r in rest.choose_multiple(&mut rng, attach.min(n_rest)) {
            edges.push((i, r));
        }
    }
    for a in n_indep..n {
        for b in a + 1..n {
            if rng.gen_bool(rest_p) {
                edges.push((a, b));
            }
        }
    }
    Ok((Graph::new(n, edges)?, (0..n_indep).collect()))
}

/// Set system whose universe is partitioned into `blocks` planted sets of
/// near-equal size, plus `n_extra` random sets with sizes drawn uniformly from
/// `min_extra..=max_extra`. Set order is shuffled; returns the planted indices.
pub fn gen_planted_set_cover(
    m: usize,
    blocks: usize,
    n_extra: usize,
    min_extra: usize,
    max_extra: usize,
    seed: u64,
) -> Result<(SetSystem, Vec<usize>)> {
    if blocks == 0 || blocks > m {
        return domain(format!("need 1 <= blocks <= m, got blocks = {blocks}, m = {m}"));
    }
    if min_extra > max_extra || max_extra > m {
        return domain("extra set sizes must satisfy min <= max <= m");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut universe: Vec<usize> = (0..m).collect();
    universe.shuffle(&mut rng);
    let mut sets: Vec<(bool, Vec<usize>)> = (0..blocks)
        .map(|b| {
            let lo = b * m / blocks;
            let hi = (b + 1) * m / blocks;
            (true, universe[lo..hi].to_vec())
        })
        .collect();
    for _ in 0..n_extra {
        let k = rng.gen_range(min_extra..=max_extra);
        sets.push((false, rand::seq::index::sample(&mut rng, m, k).into_vec()));
    }
    sets.shuffle(&mut rng);
    let planted = sets
        .iter()
        .enumerate()
        .filter_map(|(j, (p, _))| p.then_some(j))
        .collect();
    let ss = SetSystem::new(m, sets.into_iter().map(|(_, s)| s).collect())?;
    Ok((ss, planted))
}

/// Independent uniform vertex weights in `[lo, hi]`.
pub fn random_vertex_weights(g: Graph, lo: f64, hi: f64, seed: u64) -> Result<Graph> {
    if !(lo > 0.0 && lo <= hi) {
        return domain(format!("weight range [{lo}, {hi}] must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = (0..g.n()).map(|_| rng.gen_range(lo..=hi)).collect();
    g.with_vertex_weights(w)
}

/// Small fixed graphs.
pub mod named {
    use crate::graph::Graph;

    pub fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    /// `K_{1,k}` with center 0.
    pub fn star(k: usize) -> Graph {
        Graph::new(k + 1, (1..=k).map(|l| (0, l))).unwrap()
    }

    /// Complete bipartite `K_{a,b}` with sides `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        Graph::new(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)))).unwrap()
    }

    /// Outer cycle 0..5, inner pentagram 5..10, spokes i–(i+5).
    pub fn petersen() -> Graph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((5 + i, 5 + (i + 2) % 5));
            e.push((i, i + 5));
        }
        Graph::new(10, e).unwrap()
    }
}
