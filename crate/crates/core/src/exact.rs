//! Exact optima for small instances.
//!
//! Every search runs under an [`ExactBudget`]; running out of budget yields
//! [`Exact::Unknown`], never a possibly-suboptimal answer.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use crate::baselines::{greedy_set_cover, vc_2approx_matching, weighted_vc_2approx};
use crate::error::{Error, Result};
use crate::graph::{members, Graph, SetSystem, VertexId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactBudget {
    pub node_limit: u64,
    pub time_limit: Duration,
}

impl Default for ExactBudget {
    fn default() -> Self {
        Self {
            node_limit: 50_000_000,
            time_limit: Duration::from_secs(60),
        }
    }
}

impl ExactBudget {
    pub fn new(node_limit: u64, time_limit: Duration) -> Result<Self> {
        if node_limit == 0 || time_limit.is_zero() {
            return Err(Error::Domain("budget limits must be positive".into()));
        }
        Ok(Self {
            node_limit,
            time_limit,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Exact<T> {
    Optimal(T),
    Unknown,
}

impl<T> Exact<T> {
    pub fn optimal(self) -> Option<T> {
        match self {
            Exact::Optimal(t) => Some(t),
            Exact::Unknown => None,
        }
    }

    pub fn is_known(&self) -> bool {
        matches!(self, Exact::Optimal(_))
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Exact<U> {
        match self {
            Exact::Optimal(t) => Exact::Optimal(f(t)),
            Exact::Unknown => Exact::Unknown,
        }
    }
}

struct Meter {
    budget: ExactBudget,
    start: Instant,
    nodes: u64,
    exhausted: bool,
}

impl Meter {
    fn new(budget: ExactBudget) -> Self {
        Self {
            budget,
            start: Instant::now(),
            nodes: 0,
            exhausted: false,
        }
    }

    /// Counts one node; false once the budget is gone.
    #[inline]
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget.node_limit
            || (self.nodes & 0x3ff == 0 && self.start.elapsed() > self.budget.time_limit)
        {
            self.exhausted = true;
        }
        !self.exhausted
    }
}

struct VcSearch<'a> {
    g: &'a Graph,
    w: Vec<f64>,
    unit: bool,
    best_cost: f64,
    best: Vec<VertexId>,
    chosen: Vec<VertexId>,
    meter: Meter,
}

impl VcSearch<'_> {
    fn alive_degree(&self, alive: &[bool], v: VertexId) -> usize {
        self.g.incident(v).iter().filter(|&&(u, _)| alive[u]).count()
    }

    fn take(&mut self, alive: &mut [bool], v: VertexId, cost: &mut f64) {
        alive[v] = false;
        self.chosen.push(v);
        *cost += self.w[v];
    }

    /// Greedy maximal matching on the alive graph; any cover pays at least
    /// the lighter endpoint of every matched edge.
    fn matching_bound(&self, alive: &[bool]) -> f64 {
        let mut used = vec![false; self.g.n()];
        let mut lb = 0.0;
        for e in self.g.edges() {
            if alive[e.u] && alive[e.v] && !used[e.u] && !used[e.v] {
                used[e.u] = true;
                used[e.v] = true;
                lb += self.w[e.u].min(self.w[e.v]);
            }
        }
        lb
    }

    fn search(&mut self, mut alive: Vec<bool>, mut cost: f64) {
        if !self.meter.tick() {
            return;
        }
        let mark = self.chosen.len();
        // Degree-0 and degree-1 reductions to a fixpoint.
        loop {
            let mut changed = false;
            for v in 0..self.g.n() {
                if !alive[v] {
                    continue;
                }
                match self.alive_degree(&alive, v) {
                    0 => {
                        alive[v] = false;
                        changed = true;
                    }
                    1 => {
                        let u = self
                            .g
                            .incident(v)
                            .iter()
                            .find(|&&(u, _)| alive[u])
                            .unwrap()
                            .0;
                        if self.w[u] <= self.w[v] {
                            self.take(&mut alive, u, &mut cost);
                            changed = true;
                        }
                    }
                    _ => {}
                }
            }
            if !changed {
                break;
            }
        }
        let tol = if self.unit { 0.5 } else { 1e-9 };
        let pick = (0..self.g.n())
            .filter(|&v| alive[v])
            .map(|v| (self.alive_degree(&alive, v), v))
            .max_by_key(|&(d, v)| (d, std::cmp::Reverse(v)));
        match pick {
            None => {
                if cost < self.best_cost - tol {
                    self.best_cost = cost;
                    self.best = self.chosen.clone();
                }
            }
            Some((_, v)) => {
                if cost + self.matching_bound(&alive) < self.best_cost - tol {
                    let base = self.chosen.len();
                    let mut a = alive.clone();
                    let mut c = cost;
                    self.take(&mut a, v, &mut c);
                    self.search(a, c);
                    self.chosen.truncate(base);

                    let mut c = cost;
                    alive[v] = false;
                    let nbrs: Vec<VertexId> = self
                        .g
                        .incident(v)
                        .iter()
                        .map(|&(u, _)| u)
                        .filter(|&u| alive[u])
                        .collect();
                    for u in nbrs {
                        self.take(&mut alive, u, &mut c);
                    }
                    self.search(alive, c);
                    self.chosen.truncate(base);
                }
            }
        }
        self.chosen.truncate(mark);
    }
}

fn vc_search(g: &Graph, budget: ExactBudget, weighted: bool) -> Exact<Vec<VertexId>> {
    let (w, incumbent) = if weighted {
        let w: Vec<f64> = (0..g.n()).map(|v| g.vertex_weight(v)).collect();
        (w, weighted_vc_2approx(g).expect("positive weights"))
    } else {
        (vec![1.0; g.n()], vc_2approx_matching(g))
    };
    let best_cost = incumbent.iter().map(|&v| w[v]).sum();
    let mut s = VcSearch {
        g,
        w,
        unit: !weighted,
        best_cost,
        best: incumbent,
        chosen: Vec::new(),
        meter: Meter::new(budget),
    };
    s.search(vec![true; g.n()], 0.0);
    if s.meter.exhausted {
        return Exact::Unknown;
    }
    let mut best = s.best;
    best.sort_unstable();
    assert!(g.is_vertex_cover(&best), "exact vertex cover failed its certificate");
    Exact::Optimal(best)
}

/// Minimum-cardinality vertex cover by branch and bound (vertex weights ignored).
pub fn exact_vc(g: &Graph, budget: ExactBudget) -> Exact<Vec<VertexId>> {
    vc_search(g, budget, false)
}

/// Minimum-weight vertex cover; unweighted graphs use unit weights.
pub fn exact_weighted_vc(g: &Graph, budget: ExactBudget) -> Exact<(f64, Vec<VertexId>)> {
    vc_search(g, budget, true).map(|c| (g.set_weight(&c), c))
}

/// Maximum independent set as the complement of a minimum vertex cover.
pub fn exact_mis(g: &Graph, budget: ExactBudget) -> Exact<Vec<VertexId>> {
    exact_vc(g, budget).map(|c| {
        let mut in_cover = vec![false; g.n()];
        for v in c {
            in_cover[v] = true;
        }
        let s = members(&in_cover.iter().map(|b| !b).collect::<Vec<_>>());
        assert!(g.is_independent(&s));
        s
    })
}

/// Universe sizes up to this use bitmask memoization.
pub const SET_COVER_DP_MAX_M: usize = 24;

/// Minimum-cardinality set cover.
pub fn exact_set_cover(ss: &SetSystem, budget: ExactBudget) -> Exact<Vec<usize>> {
    let out = if ss.m() <= SET_COVER_DP_MAX_M {
        set_cover_dp(ss, budget)
    } else {
        set_cover_bnb(ss, budget)
    };
    if let Exact::Optimal(j) = &out {
        assert!(ss.is_cover(j), "exact set cover failed its certificate");
    }
    out
}

fn set_cover_dp(ss: &SetSystem, budget: ExactBudget) -> Exact<Vec<usize>> {
    let m = ss.m();
    let full: u32 = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
    let masks: Vec<u32> = ss
        .sets()
        .iter()
        .map(|s| s.iter().fold(0u32, |acc, &x| acc | (1 << x)))
        .collect();
    let containing: Vec<Vec<usize>> = (0..m)
        .map(|x| (0..ss.n()).filter(|&j| masks[j] >> x & 1 == 1).collect())
        .collect();

    struct Dp<'a> {
        full: u32,
        masks: &'a [u32],
        containing: &'a [Vec<usize>],
        memo: HashMap<u32, u8>,
        meter: Meter,
    }
    impl Dp<'_> {
        /// Fewest sets covering everything outside `covered`; branches on
        /// the lowest uncovered element.
        fn cost(&mut self, covered: u32) -> u8 {
            if covered == self.full {
                return 0;
            }
            if let Some(&c) = self.memo.get(&covered) {
                return c;
            }
            if !self.meter.tick() {
                return u8::MAX;
            }
            let x = (!covered).trailing_zeros() as usize;
            let mut best = u8::MAX;
            for i in 0..self.containing[x].len() {
                let j = self.containing[x][i];
                let c = self.cost(covered | self.masks[j]);
                if self.meter.exhausted {
                    return u8::MAX;
                }
                best = best.min(c.saturating_add(1));
            }
            self.memo.insert(covered, best);
            best
        }
    }

    let mut dp = Dp {
        full,
        masks: &masks,
        containing: &containing,
        memo: HashMap::new(),
        meter: Meter::new(budget),
    };
    let total = dp.cost(0);
    if dp.meter.exhausted {
        return Exact::Unknown;
    }
    // Walk the memo to recover one optimal choice.
    let mut chosen = Vec::with_capacity(total as usize);
    let mut covered = 0u32;
    while covered != full {
        let need = dp.memo[&covered];
        let x = (!covered).trailing_zeros() as usize;
        let j = *containing[x]
            .iter()
            .find(|&&j| {
                let next = covered | masks[j];
                let c = if next == full { 0 } else { dp.memo[&next] };
                c.saturating_add(1) == need
            })
            .expect("memo is consistent");
        chosen.push(j);
        covered |= masks[j];
    }
    chosen.sort_unstable();
    Exact::Optimal(chosen)
}

fn set_cover_bnb(ss: &SetSystem, budget: ExactBudget) -> Exact<Vec<usize>> {
    let m = ss.m();
    let words = m.div_ceil(64);
    let bits: Vec<Vec<u64>> = ss
        .sets()
        .iter()
        .map(|s| {
            let mut b = vec![0u64; words];
            for &x in s {
                b[x / 64] |= 1 << (x % 64);
            }
            b
        })
        .collect();
    let containing: Vec<Vec<usize>> = {
        let mut c = vec![Vec::new(); m];
        for (j, s) in ss.sets().iter().enumerate() {
            for &x in s {
                c[x].push(j);
            }
        }
        c
    };
    let all: Vec<usize> = (0..m).collect();
    let sets: Vec<usize> = (0..ss.n()).collect();
    let incumbent = greedy_set_cover(ss, &all, &sets).expect("instance is coverable");

    struct Bnb<'a> {
        bits: &'a [Vec<u64>],
        containing: &'a [Vec<usize>],
        m: usize,
        best: Vec<usize>,
        chosen: Vec<usize>,
        meter: Meter,
    }
    impl Bnb<'_> {
        fn gain(&self, covered: &[u64], j: usize) -> u32 {
            self.bits[j]
                .iter()
                .zip(covered)
                .map(|(s, c)| (s & !c).count_ones())
                .sum()
        }

        fn search(&mut self, covered: &mut Vec<u64>, n_covered: usize) {
            if !self.meter.tick() {
                return;
            }
            let left = self.m - n_covered;
            if left == 0 {
                if self.chosen.len() < self.best.len() {
                    self.best = self.chosen.clone();
                }
                return;
            }
            let max_gain = (0..self.bits.len())
                .map(|j| self.gain(covered, j))
                .max()
                .unwrap_or(0) as usize;
            if max_gain == 0 || self.chosen.len() + left.div_ceil(max_gain) >= self.best.len() {
                return;
            }
            // Branch on the uncovered element with the fewest candidate sets.
            let x = (0..self.m)
                .filter(|&x| covered[x / 64] >> (x % 64) & 1 == 0)
                .min_by_key(|&x| self.containing[x].len())
                .unwrap();
            let mut cands: Vec<usize> = self.containing[x].clone();
            cands.sort_by_key(|&j| std::cmp::Reverse(self.gain(covered, j)));
            for j in cands {
                let g = self.gain(covered, j) as usize;
                let saved = covered.clone();
                for (c, s) in covered.iter_mut().zip(&self.bits[j]) {
                    *c |= s;
                }
                self.chosen.push(j);
                self.search(covered, n_covered + g);
                self.chosen.pop();
                *covered = saved;
                if self.meter.exhausted {
                    return;
                }
            }
        }
    }

    let mut b = Bnb {
        bits: &bits,
        containing: &containing,
        m,
        best: incumbent,
        chosen: Vec::new(),
        meter: Meter::new(budget),
    };
    b.search(&mut vec![0u64; words], 0);
    if b.meter.exhausted {
        return Exact::Unknown;
    }
    let mut best = b.best;
    best.sort_unstable();
    Exact::Optimal(best)
}

/// Largest `n` accepted by [`exact_maxcut`].
pub const MAXCUT_MAX_N: usize = 26;

/// Maximum cut by Gray-code enumeration with vertex 0 fixed to +1.
pub fn exact_maxcut(g: &Graph, budget: ExactBudget) -> Exact<(f64, Vec<i8>)> {
    let n = g.n();
    if n > MAXCUT_MAX_N {
        return Exact::Unknown;
    }
    if n <= 1 {
        return Exact::Optimal((0.0, vec![1; n]));
    }
    let steps = 1u64 << (n - 1);
    if steps > budget.node_limit {
        return Exact::Unknown;
    }
    let start = Instant::now();
    let mut x = vec![1i8; n];
    let mut value = 0.0;
    let (mut best, mut best_k) = (0.0, 0u64);
    for k in 1..steps {
        if k & 0xffff == 0 && start.elapsed() > budget.time_limit {
            return Exact::Unknown;
        }
        let i = k.trailing_zeros() as usize + 1;
        let delta: f64 = g
            .incident(i)
            .iter()
            .map(|&(j, e)| {
                let w = g.edge(e).w;
                if x[i] == x[j] {
                    w
                } else {
                    -w
                }
            })
            .sum();
        x[i] = -x[i];
        value += delta;
        if value > best + 1e-9 {
            best = value;
            best_k = k;
        }
    }
    let gray = best_k ^ (best_k >> 1);
    let assignment: Vec<i8> = (0..n)
        .map(|v| {
            if v > 0 && gray >> (v - 1) & 1 == 1 {
                -1
            } else {
                1
            }
        })
        .collect();
    Exact::Optimal((g.cut_value(&assignment), assignment))
}
