//! Learning-augmented vertex cover, unweighted and weighted.
//!
//! Three stages:
//! 1. every vertex of degree ≥ Δ is classified by majority vote and either
//!    joins `S0` itself or contributes its (light or voted-out) neighborhood;
//! 2. a 2-approximation covers heavy-incident edges `S0` missed (`S1`);
//! 3. the pluggable solver covers what is left, all light-light (`S2`).
//!
//! Heavy/light uses degrees of the input graph, fixed before any removal.

use crate::baselines::{vc_2approx_matching, weighted_vc_2approx, BoundedDegreeSolver};
use crate::error::{domain, Error, Result};
use crate::graph::{mask, members, Graph, VertexId};
use crate::predictions::{check_epsilon, vertex_votes, PredictionTable};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VcParams {
    pub epsilon: f64,
    /// Fixed threshold instead of `⌈100 ln(1/ε) / ε²⌉`.
    pub delta_override: Option<usize>,
}

impl VcParams {
    pub fn new(epsilon: f64) -> Self {
        Self {
            epsilon,
            delta_override: None,
        }
    }

    pub fn with_delta(mut self, delta: usize) -> Self {
        self.delta_override = Some(delta);
        self
    }

    pub fn delta(&self) -> usize {
        self.delta_override.unwrap_or_else(|| {
            let e = self.epsilon;
            ((100.0 * (1.0 / e).ln() / (e * e)).ceil() as usize).max(1)
        })
    }

    fn validate(&self) -> Result<()> {
        check_epsilon(self.epsilon)?;
        if self.delta_override == Some(0) {
            return domain("delta must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeClass {
    HeavyHeavy,
    HeavyLight,
    LightLight,
}

/// Per-edge class. With `deg(u) ≤ deg(v)`: heavy-heavy iff `deg(u) ≥ Δ`,
/// heavy-light iff `deg(v) ≥ Δ > deg(u)`, light-light iff `deg(v) < Δ`.
pub fn classify_edges(g: &Graph, delta: usize) -> Vec<EdgeClass> {
    g.edges()
        .iter()
        .map(|e| {
            let (lo, hi) = {
                let (a, b) = (g.deg(e.u), g.deg(e.v));
                (a.min(b), a.max(b))
            };
            if lo >= delta {
                EdgeClass::HeavyHeavy
            } else if hi >= delta {
                EdgeClass::HeavyLight
            } else {
                EdgeClass::LightLight
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct VcSolution {
    pub s0: Vec<VertexId>,
    pub s1: Vec<VertexId>,
    pub s2: Vec<VertexId>,
    /// `S0 ∪ S1 ∪ S2`, sorted.
    pub cover: Vec<VertexId>,
    /// Majority vote `m_v` for heavy vertices, `None` for light ones.
    pub votes: Vec<Option<i8>>,
    pub delta: usize,
    /// `|S|` or `w(S)`.
    pub value: f64,
}

/// How stage 1 treats a heavy vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stage1 {
    Skip,
    AddSelf,
    AddNeighbors,
}

struct Context<'a> {
    g: &'a Graph,
    delta: usize,
    votes: Vec<Option<i8>>,
}

impl<'a> Context<'a> {
    fn new(g: &'a Graph, preds: &PredictionTable, params: &VcParams) -> Result<Self> {
        params.validate()?;
        let delta = params.delta();
        let all = vertex_votes(g, preds)?;
        let votes = (0..g.n())
            .map(|v| if g.deg(v) >= delta { all[v] } else { None })
            .collect();
        Ok(Self { g, delta, votes })
    }

    fn heavy(&self, v: VertexId) -> bool {
        self.g.deg(v) >= self.delta
    }

    /// Every neighbor is heavy and voted 1.
    fn all_neighbors_voted_in(&self, v: VertexId) -> bool {
        self.g
            .incident(v)
            .iter()
            .all(|&(u, _)| self.heavy(u) && self.votes[u] == Some(1))
    }

    /// Stages 2 and 3 given `S0`; verifies the final cover.
    fn finish(
        self,
        s0_mask: Vec<bool>,
        fix: impl Fn(&Graph) -> Vec<VertexId>,
        s2_solver: &dyn BoundedDegreeSolver,
        weighted: bool,
    ) -> Result<VcSolution> {
        let g = self.g;
        let classes = classify_edges(g, self.delta);
        let heavy_uncovered = (0..g.m()).filter(|&i| {
            let e = g.edge(i);
            classes[i] != EdgeClass::LightLight && !s0_mask[e.u] && !s0_mask[e.v]
        });
        let s1 = fix(&g.edge_subgraph(heavy_uncovered));

        let mut covered = s0_mask.clone();
        for &v in &s1 {
            covered[v] = true;
        }
        let rest: Vec<usize> = (0..g.m())
            .filter(|&i| {
                let e = g.edge(i);
                !covered[e.u] && !covered[e.v]
            })
            .collect();
        if let Some(&i) = rest.iter().find(|&&i| classes[i] != EdgeClass::LightLight) {
            return Err(Error::Invariant(format!(
                "heavy-incident edge {i} survived stage 2"
            )));
        }
        let residual = g.edge_subgraph(rest);
        debug_assert!(residual.max_degree() < self.delta);
        let s2 = s2_solver.solve(&residual);
        for &v in &s2 {
            covered[v] = true;
        }

        let cover = members(&covered);
        if !g.is_vertex_cover(&cover) {
            return Err(Error::Invariant("S0 ∪ S1 ∪ S2 is not a vertex cover".into()));
        }
        let value = if weighted {
            g.set_weight(&cover)
        } else {
            cover.len() as f64
        };
        let mut s1 = s1;
        s1.sort_unstable();
        let mut s2 = s2;
        s2.sort_unstable();
        Ok(VcSolution {
            s0: members(&s0_mask),
            s1,
            s2,
            cover,
            votes: self.votes,
            delta: self.delta,
            value,
        })
    }
}

/// Unweighted learned vertex cover. `S1` comes from the matching
/// 2-approximation; `S2` from `s2_solver`.
pub fn learned_vc(
    g: &Graph,
    preds: &PredictionTable,
    params: &VcParams,
    s2_solver: &dyn BoundedDegreeSolver,
) -> Result<VcSolution> {
    let cx = Context::new(g, preds, params)?;
    let mut s0 = vec![false; g.n()];
    for v in (0..g.n()).filter(|&v| cx.heavy(v)) {
        let action = match cx.votes[v] {
            Some(1) if cx.all_neighbors_voted_in(v) => Stage1::Skip,
            Some(1) => Stage1::AddSelf,
            _ => Stage1::AddNeighbors,
        };
        match action {
            Stage1::Skip => {}
            Stage1::AddSelf => s0[v] = true,
            Stage1::AddNeighbors => {
                for &(u, _) in g.incident(v) {
                    s0[u] = true;
                }
            }
        }
    }
    cx.finish(s0, vc_2approx_matching, s2_solver, false)
}

/// `a · ε¹⁰ < b` evaluated without forming `1/ε¹⁰`.
fn lt_scaled(a: f64, eps: f64, b: f64) -> bool {
    a * eps.powi(10) < b
}

/// Weighted learned vertex cover. A heavy vertex only enters `S0` when it is
/// not much heavier than its neighbors that are light or voted out (`N⁻`);
/// otherwise `N⁻` enters instead.
pub fn learned_weighted_vc(
    g: &Graph,
    preds: &PredictionTable,
    params: &VcParams,
    s2_solver: &dyn BoundedDegreeSolver,
) -> Result<VcSolution> {
    if let Some(w) = g.vertex_weights() {
        if let Some(v) = w.iter().position(|&x| !(x > 0.0)) {
            return domain(format!("vertex {v} has nonpositive weight"));
        }
    }
    let eps = params.epsilon;
    let cx = Context::new(g, preds, params)?;
    let mut s0 = vec![false; g.n()];
    for v in (0..g.n()).filter(|&v| cx.heavy(v)) {
        let n_minus: Vec<VertexId> = g
            .incident(v)
            .iter()
            .map(|&(u, _)| u)
            .filter(|&u| cx.votes[u] == Some(0) || !cx.heavy(u))
            .collect();
        let w_v = g.vertex_weight(v);
        let w_minus = g.set_weight(&n_minus);
        let action = if cx.votes[v] == Some(1) {
            if cx.all_neighbors_voted_in(v) {
                Stage1::Skip
            } else if lt_scaled(w_v, eps, w_minus) {
                // w(v) < w(N⁻) / ε¹⁰
                Stage1::AddSelf
            } else {
                Stage1::AddNeighbors
            }
        } else if w_v < eps.powi(10) * w_minus {
            Stage1::AddSelf
        } else {
            Stage1::AddNeighbors
        };
        match action {
            Stage1::Skip => {}
            Stage1::AddSelf => s0[v] = true,
            Stage1::AddNeighbors => {
                for u in n_minus {
                    s0[u] = true;
                }
            }
        }
    }
    let fix = |h: &Graph| weighted_vc_2approx(h).expect("weights validated above");
    cx.finish(s0, fix, s2_solver, true)
}

/// Sizes (or weights) of the solution parts relative to a known optimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VcPartReport {
    pub s0_in_opt: f64,
    pub s0_not_opt: f64,
    pub s1: f64,
    pub s2: f64,
    pub total: f64,
    pub opt: f64,
}

/// With `weighted`, parts are measured by vertex weight, otherwise by count.
pub fn vc_part_report(g: &Graph, sol: &VcSolution, opt: &[VertexId], weighted: bool) -> VcPartReport {
    let in_opt = mask(g.n(), opt);
    let measure = |s: &mut dyn Iterator<Item = VertexId>| -> f64 {
        s.map(|v| if weighted { g.vertex_weight(v) } else { 1.0 })
            .sum()
    };
    VcPartReport {
        s0_in_opt: measure(&mut sol.s0.iter().copied().filter(|&v| in_opt[v])),
        s0_not_opt: measure(&mut sol.s0.iter().copied().filter(|&v| !in_opt[v])),
        s1: measure(&mut sol.s1.iter().copied()),
        s2: measure(&mut sol.s2.iter().copied()),
        total: measure(&mut sol.cover.iter().copied()),
        opt: measure(&mut opt.iter().copied()),
    }
}
