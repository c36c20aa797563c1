//! Prediction-free approximation algorithms. They double as the subroutines
//! the learned algorithms hand their residual instances to.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Error, Result};
use crate::graph::{members, Graph, SetSystem, VertexId};
use crate::learned_mis::mis_cleanup;
use crate::predictions::{vertex_votes, PredictionTable};

/// The guarantee a pluggable solver declares.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Guarantee {
    /// Cover of size at most twice the optimum.
    CoverFactor2,
    /// Cover of weight at most twice the optimum weight.
    WeightedCoverFactor2,
    /// Independent set of size at least `Σ_v 1/(1+d_v)`.
    CaroWei,
    Other(&'static str),
}

/// A prediction-free solver for the low-degree part of an instance. Returns a
/// vertex set feasible for its problem (a cover or an independent set).
pub trait BoundedDegreeSolver: Sync {
    fn solve(&self, g: &Graph) -> Vec<VertexId>;
    fn guarantee(&self) -> Guarantee;
}

/// [`vc_2approx_matching`].
#[derive(Debug, Clone, Copy, Default)]
pub struct MatchingCover;

impl BoundedDegreeSolver for MatchingCover {
    fn solve(&self, g: &Graph) -> Vec<VertexId> {
        vc_2approx_matching(g)
    }
    fn guarantee(&self) -> Guarantee {
        Guarantee::CoverFactor2
    }
}

/// [`weighted_vc_2approx`].
#[derive(Debug, Clone, Copy, Default)]
pub struct LocalRatioCover;

impl BoundedDegreeSolver for LocalRatioCover {
    fn solve(&self, g: &Graph) -> Vec<VertexId> {
        weighted_vc_2approx(g).expect("graph vertex weights are validated positive")
    }
    fn guarantee(&self) -> Guarantee {
        Guarantee::WeightedCoverFactor2
    }
}

/// [`greedy_mis_min_degree`].
#[derive(Debug, Clone, Copy, Default)]
pub struct MinDegreeGreedy;

impl BoundedDegreeSolver for MinDegreeGreedy {
    fn solve(&self, g: &Graph) -> Vec<VertexId> {
        greedy_mis_min_degree(g)
    }
    fn guarantee(&self) -> Guarantee {
        Guarantee::CaroWei
    }
}

/// Wraps a plain function as a solver.
pub struct FnSolver<F> {
    pub f: F,
    pub guarantee: Guarantee,
}

impl<F: Fn(&Graph) -> Vec<VertexId> + Sync> BoundedDegreeSolver for FnSolver<F> {
    fn solve(&self, g: &Graph) -> Vec<VertexId> {
        (self.f)(g)
    }
    fn guarantee(&self) -> Guarantee {
        self.guarantee
    }
}

/// Both endpoints of a maximal matching built greedily in edge order.
pub fn vc_2approx_matching(g: &Graph) -> Vec<VertexId> {
    let mut taken = vec![false; g.n()];
    for e in g.edges() {
        if !taken[e.u] && !taken[e.v] {
            taken[e.u] = true;
            taken[e.v] = true;
        }
    }
    members(&taken)
}

/// Local-ratio 2-approximation for weighted vertex cover: for each edge in
/// order with both residual weights positive, subtract the smaller residual
/// from both endpoints; vertices whose residual reaches zero form the cover.
pub fn weighted_vc_2approx(g: &Graph) -> Result<Vec<VertexId>> {
    let mut r: Vec<f64> = (0..g.n()).map(|v| g.vertex_weight(v)).collect();
    if let Some(v) = r.iter().position(|&w| !(w > 0.0)) {
        return domain(format!("vertex {v} has nonpositive weight"));
    }
    for e in g.edges() {
        if r[e.u] > 0.0 && r[e.v] > 0.0 {
            let d = r[e.u].min(r[e.v]);
            r[e.u] -= d;
            r[e.v] -= d;
            // `x - x` is exactly zero, but guard the other endpoint too.
            if r[e.u] <= 0.0 {
                r[e.u] = 0.0;
            }
            if r[e.v] <= 0.0 {
                r[e.v] = 0.0;
            }
        }
    }
    Ok(members(&r.iter().map(|&x| x == 0.0).collect::<Vec<_>>()))
}

/// Classical greedy set cover restricted to covering `subset` with sets from
/// `allowed`: repeatedly takes the set covering the most uncovered elements,
/// lowest index on ties. Returns sets in pick order.
pub fn greedy_set_cover(ss: &SetSystem, subset: &[usize], allowed: &[usize]) -> Result<Vec<usize>> {
    let mut need = vec![false; ss.m()];
    let mut left = 0usize;
    for &x in subset {
        if x >= ss.m() {
            return domain(format!("element {x} >= m = {}", ss.m()));
        }
        if !need[x] {
            need[x] = true;
            left += 1;
        }
    }
    let mut allowed: Vec<usize> = allowed.to_vec();
    allowed.sort_unstable();
    allowed.dedup();
    if let Some(&j) = allowed.last() {
        if j >= ss.n() {
            return domain(format!("set index {j} >= n = {}", ss.n()));
        }
    }
    let mut picked = Vec::new();
    while left > 0 {
        let mut best = (0usize, usize::MAX);
        for &j in &allowed {
            let gain = ss.set(j).iter().filter(|&&x| need[x]).count();
            if gain > best.0 {
                best = (gain, j);
            }
        }
        if best.0 == 0 {
            return Err(Error::Infeasible(format!(
                "{left} elements cannot be covered by the allowed sets"
            )));
        }
        let j = best.1;
        for &x in ss.set(j) {
            if need[x] {
                need[x] = false;
                left -= 1;
            }
        }
        picked.push(j);
    }
    Ok(picked)
}

/// Repeatedly selects a minimum-degree vertex of the remaining graph (lowest
/// id on ties) and deletes it with its neighbors.
pub fn greedy_mis_min_degree(g: &Graph) -> Vec<VertexId> {
    let mut deg = g.degrees();
    let mut alive = vec![true; g.n()];
    let mut queue: BTreeSet<(usize, VertexId)> = (0..g.n()).map(|v| (deg[v], v)).collect();
    let mut out = Vec::new();
    while let Some((_, v)) = queue.pop_first() {
        out.push(v);
        let mut removed = vec![v];
        alive[v] = false;
        for &(u, _) in g.incident(v) {
            if alive[u] {
                alive[u] = false;
                queue.remove(&(deg[u], u));
                removed.push(u);
            }
        }
        for r in removed {
            for &(x, _) in g.incident(r) {
                if alive[x] {
                    queue.remove(&(deg[x], x));
                    deg[x] -= 1;
                    queue.insert((deg[x], x));
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Starting point for [`maxcut_local_search`].
#[derive(Debug, Clone, PartialEq)]
pub enum LocalSearchStart {
    /// Place vertices in id order on the side opposite the heavier
    /// already-placed neighborhood.
    Greedy,
    /// Uniform random signs from the given seed.
    Random,
    Assignment(Vec<i8>),
}

/// Single-flip local search: flips any vertex whose flip strictly increases
/// the cut, in id order, until none does. The result cuts at least half the
/// total edge weight.
pub fn maxcut_local_search(g: &Graph, start: &LocalSearchStart, seed: u64) -> (f64, Vec<i8>) {
    let n = g.n();
    let mut x: Vec<i8> = match start {
        LocalSearchStart::Greedy => {
            let mut x = vec![0i8; n];
            for v in 0..n {
                let (mut plus, mut minus) = (0.0, 0.0);
                for &(u, e) in g.incident(v) {
                    match x[u] {
                        1 => plus += g.edge(e).w,
                        -1 => minus += g.edge(e).w,
                        _ => {}
                    }
                }
                x[v] = if plus > minus { -1 } else { 1 };
            }
            x
        }
        LocalSearchStart::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect()
        }
        LocalSearchStart::Assignment(a) => {
            assert_eq!(a.len(), n, "start assignment has wrong length");
            a.iter().map(|&s| if s < 0 { -1 } else { 1 }).collect()
        }
    };
    loop {
        let mut improved = false;
        for v in 0..n {
            let (mut same, mut other, mut total) = (0.0, 0.0, 0.0);
            for &(u, e) in g.incident(v) {
                let w = g.edge(e).w;
                total += w;
                if x[u] == x[v] {
                    same += w;
                } else {
                    other += w;
                }
            }
            if same - other > 1e-12 * (1.0 + total) {
                x[v] = -x[v];
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    (g.cut_value(&x), x)
}

/// Majority vote over every non-isolated vertex regardless of degree, then
/// the same clean-up as the learned algorithm; isolated vertices are added.
pub fn mis_predictions_only(g: &Graph, preds: &PredictionTable) -> Result<Vec<VertexId>> {
    let votes = vertex_votes(g, preds)?;
    let voted: Vec<VertexId> = (0..g.n()).filter(|&v| votes[v] == Some(1)).collect();
    let (mut kept, _) = mis_cleanup(g, &voted);
    kept.extend((0..g.n()).filter(|&v| votes[v].is_none()));
    kept.sort_unstable();
    debug_assert!(g.is_independent(&kept));
    Ok(kept)
}
