//! Learning-augmented maximum independent set.
//!
//! Vertices of degree at most Δ go to a prediction-free solver; vertices of
//! degree above Δ are kept when their majority vote says so, after which any
//! edge left inside the voted set loses both endpoints. The larger of the two
//! independent sets wins.

use crate::baselines::BoundedDegreeSolver;
use crate::error::{domain, Error, Result};
use crate::graph::{mask, Graph, VertexId};
use crate::predictions::{check_epsilon, vertex_votes, PredictionTable};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MisParams {
    pub epsilon: f64,
    /// Fixed degree threshold instead of `⌈3 ln(1/ε) / ε²⌉`.
    pub delta_override: Option<usize>,
    /// Accept ε above 1/4, where the approximation guarantee no longer applies.
    pub allow_large_epsilon: bool,
}

impl MisParams {
    pub fn new(epsilon: f64) -> Self {
        Self {
            epsilon,
            delta_override: None,
            allow_large_epsilon: false,
        }
    }

    pub fn with_delta(mut self, delta: usize) -> Self {
        self.delta_override = Some(delta);
        self
    }

    pub fn allow_large_epsilon(mut self) -> Self {
        self.allow_large_epsilon = true;
        self
    }

    pub fn delta(&self) -> usize {
        self.delta_override.unwrap_or_else(|| {
            let e = self.epsilon;
            ((3.0 * (1.0 / e).ln() / (e * e)).ceil() as usize).max(1)
        })
    }

    fn validate(&self) -> Result<()> {
        check_epsilon(self.epsilon)?;
        if self.epsilon > 0.25 && !self.allow_large_epsilon {
            return domain(format!(
                "epsilon {} exceeds 1/4; set allow_large_epsilon to run anyway",
                self.epsilon
            ));
        }
        if self.delta_override == Some(0) {
            return domain("delta must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MisBranch {
    /// Solver output on the low-degree part.
    LowDegree,
    /// Voted high-degree vertices after clean-up.
    Voted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MisSolution {
    pub c1: Vec<VertexId>,
    pub c2: Vec<VertexId>,
    pub chosen: MisBranch,
    /// Pairs removed by the clean-up, in removal order.
    pub removed_pairs: Vec<(VertexId, VertexId)>,
    /// Isolated vertices appended to the chosen part (only when it is `c2`;
    /// `c1` already contains them).
    pub isolated_added: Vec<VertexId>,
    /// Final independent set.
    pub set: Vec<VertexId>,
    pub delta: usize,
}

impl MisSolution {
    pub fn value(&self) -> usize {
        self.set.len()
    }
}

/// Deletes both endpoints of an edge inside `s` until `s` is independent,
/// always choosing the lexicographically smallest remaining `(u, v)`, `u < v`.
/// Returns the surviving set (sorted) and the removed pairs.
pub fn mis_cleanup(g: &Graph, s: &[VertexId]) -> (Vec<VertexId>, Vec<(VertexId, VertexId)>) {
    let mut inside = mask(g.n(), s);
    let mut edges: Vec<(VertexId, VertexId)> = g
        .edges()
        .iter()
        .filter(|e| inside[e.u] && inside[e.v])
        .map(|e| (e.u, e.v))
        .collect();
    edges.sort_unstable();
    // Removals never create induced edges, so the smallest surviving edge only
    // moves forward: one ascending pass realizes the rule.
    let mut removed = Vec::new();
    for (u, v) in edges {
        if inside[u] && inside[v] {
            inside[u] = false;
            inside[v] = false;
            removed.push((u, v));
        }
    }
    let mut kept: Vec<VertexId> = s.iter().copied().filter(|&v| inside[v]).collect();
    kept.sort_unstable();
    kept.dedup();
    (kept, removed)
}

pub fn learned_mis(
    g: &Graph,
    preds: &PredictionTable,
    params: &MisParams,
    low_solver: &dyn BoundedDegreeSolver,
) -> Result<MisSolution> {
    params.validate()?;
    let votes = vertex_votes(g, preds)?;
    let delta = params.delta();
    let low: Vec<VertexId> = (0..g.n()).filter(|&v| g.deg(v) <= delta).collect();

    let (g1, back) = g.induced_subgraph(&low)?;
    let mut c1: Vec<VertexId> = low_solver.solve(&g1).into_iter().map(|v| back[v]).collect();
    c1.sort_unstable();

    let voted: Vec<VertexId> = (0..g.n())
        .filter(|&v| g.deg(v) > delta && votes[v] == Some(1))
        .collect();
    let (c2, removed_pairs) = mis_cleanup(g, &voted);

    let chosen = if c2.len() >= c1.len() {
        MisBranch::Voted
    } else {
        MisBranch::LowDegree
    };
    let (set, isolated_added) = match chosen {
        MisBranch::LowDegree => (c1.clone(), Vec::new()),
        MisBranch::Voted => {
            let iso: Vec<VertexId> = (0..g.n()).filter(|&v| g.deg(v) == 0).collect();
            let mut s = c2.clone();
            s.extend(&iso);
            s.sort_unstable();
            (s, iso)
        }
    };
    for (part, name) in [(&c1, "C1"), (&c2, "C2"), (&set, "output")] {
        if !g.is_independent(part) {
            return Err(Error::Invariant(format!("{name} is not independent")));
        }
    }
    Ok(MisSolution {
        c1,
        c2,
        chosen,
        removed_pairs,
        isolated_added,
        set,
        delta,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MisQuality {
    pub value: usize,
    pub c1: usize,
    pub c2: usize,
    /// `value / α`, absent when α is unknown.
    pub ratio: Option<f64>,
}

pub fn mis_quality_report(sol: &MisSolution, alpha: Option<usize>) -> MisQuality {
    MisQuality {
        value: sol.value(),
        c1: sol.c1.len(),
        c2: sol.c2.len(),
        ratio: alpha.map(|a| {
            if a == 0 {
                1.0
            } else {
                sol.value() as f64 / a as f64
            }
        }),
    }
}
