//! Learning-augmented set cover.

use crate::baselines::greedy_set_cover;
use crate::error::{domain, Error, Result};
use crate::graph::{mask, SetSystem};
use crate::predictions::{check_epsilon, majority, PredictionTable};

#[derive(Debug, Clone, PartialEq)]
pub struct ScSolution {
    /// Heavy sets voted in, in processing order.
    pub j_learned: Vec<usize>,
    /// Greedy cover of what light sets can reach beyond `j_learned`.
    pub j_approx: Vec<usize>,
    /// Greedy fix-up over all sets for anything still uncovered.
    pub j_fix: Vec<usize>,
    /// Union of the three parts, sorted.
    pub sets: Vec<usize>,
    pub covered_learned: Vec<usize>,
    pub covered_approx: Vec<usize>,
    pub covered_fix: Vec<usize>,
    pub delta: usize,
}

impl ScSolution {
    pub fn value(&self) -> usize {
        self.sets.len()
    }
}

/// `⌈100 ln(1/ε) / ε²⌉`, at least 1.
pub fn sc_delta(eps: f64) -> usize {
    ((100.0 * (1.0 / eps).ln() / (eps * eps)).ceil() as usize).max(1)
}

/// Sets of size ≥ Δ are visited by decreasing size (ascending index on ties)
/// and kept when their majority bit is 1 and they add at least one new
/// element. Light sets then greedily cover the elements they can reach, and
/// a final greedy pass over all sets covers the rest.
pub fn learned_set_cover(
    ss: &SetSystem,
    preds: &PredictionTable,
    eps: f64,
    delta_override: Option<usize>,
) -> Result<ScSolution> {
    check_epsilon(eps)?;
    preds.check_sets(ss)?;
    let delta = match delta_override {
        Some(0) => return domain("delta must be at least 1"),
        Some(d) => d,
        None => sc_delta(eps),
    };

    let mut order: Vec<usize> = (0..ss.n()).filter(|&j| ss.set(j).len() >= delta).collect();
    order.sort_by_key(|&j| (std::cmp::Reverse(ss.set(j).len()), j));

    let mut in_learned = vec![false; ss.m()];
    let mut j_learned = Vec::new();
    for j in order {
        let vote = majority(preds.set_bits(j).iter().copied())?;
        if vote == 1 && ss.set(j).iter().any(|&x| !in_learned[x]) {
            j_learned.push(j);
            for &x in ss.set(j) {
                in_learned[x] = true;
            }
        }
    }

    let light: Vec<usize> = (0..ss.n()).filter(|&j| ss.set(j).len() < delta).collect();
    let mut reach = vec![false; ss.m()];
    for &j in &light {
        for &x in ss.set(j) {
            reach[x] = true;
        }
    }
    let covered_approx: Vec<usize> = (0..ss.m()).filter(|&x| reach[x] && !in_learned[x]).collect();
    let j_approx = greedy_set_cover(ss, &covered_approx, &light)?;

    let covered_learned: Vec<usize> = (0..ss.m()).filter(|&x| in_learned[x]).collect();
    let covered_fix: Vec<usize> = (0..ss.m()).filter(|&x| !in_learned[x] && !reach[x]).collect();
    let all: Vec<usize> = (0..ss.n()).collect();
    let j_fix = greedy_set_cover(ss, &covered_fix, &all)?;

    let mut chosen = mask(ss.n(), &j_learned);
    for &j in j_approx.iter().chain(&j_fix) {
        chosen[j] = true;
    }
    let sets: Vec<usize> = (0..ss.n()).filter(|&j| chosen[j]).collect();
    if !ss.is_cover(&sets) {
        return Err(Error::Invariant("learned set cover misses elements".into()));
    }
    Ok(ScSolution {
        j_learned,
        j_approx,
        j_fix,
        sets,
        covered_learned,
        covered_approx,
        covered_fix,
        delta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScPartReport {
    /// `|J_l \ OPT_heavy|`.
    pub false_positives: usize,
    /// `Σ_{j ∈ OPT_heavy \ J_l} |S_j|`.
    pub false_negative_mass: usize,
    pub approx: usize,
    pub fix: usize,
    pub total: usize,
    pub opt: usize,
}

pub fn sc_part_report(ss: &SetSystem, sol: &ScSolution, opt: &[usize]) -> ScPartReport {
    let heavy = |j: usize| ss.set(j).len() >= sol.delta;
    let opt_heavy = mask(ss.n(), &opt.iter().copied().filter(|&j| heavy(j)).collect::<Vec<_>>());
    let learned = mask(ss.n(), &sol.j_learned);
    ScPartReport {
        false_positives: sol.j_learned.iter().filter(|&&j| !opt_heavy[j]).count(),
        false_negative_mass: (0..ss.n())
            .filter(|&j| opt_heavy[j] && !learned[j])
            .map(|j| ss.set(j).len())
            .sum(),
        approx: sol.j_approx.len(),
        fix: sol.j_fix.len(),
        total: sol.value(),
        opt: opt.len(),
    }
}
