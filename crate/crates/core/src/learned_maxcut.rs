//! Learning-augmented max-cut.
//!
//! Pipeline: classify vertices as wide or narrow, truncate the adjacency
//! matrix, aggregate the sign predictions into the unbiased estimate `z`,
//! minimize `xᵀÃz + ‖Ãz − Ãx‖₁` over the box `[-1, 1]ⁿ`, and round
//! coordinate by coordinate without increasing `xᵀÃx`. The rounded cut is
//! compared on the original weights against a flip local search and the
//! better of the two is returned.

use crate::baselines::{maxcut_local_search, LocalSearchStart};
use crate::error::{domain, Error, Result};
use crate::graph::Graph;
use crate::predictions::{aggregate_z, check_epsilon, PredictionTable};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSchedule {
    /// Step at iteration `t` is `scale · 2√n / √t` along the normalized
    /// subgradient.
    pub scale: f64,
}

impl Default for StepSchedule {
    fn default() -> Self {
        Self { scale: 0.25 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxcutParams {
    pub epsilon: f64,
    pub eta: f64,
    /// Prefix length; defaults to `⌈1/ε⌉`.
    pub delta: Option<usize>,
    pub iterations: usize,
    pub schedule: StepSchedule,
    /// Seed for the local-search candidate (only used by random starts).
    pub seed: u64,
}

impl MaxcutParams {
    pub fn new(epsilon: f64) -> Self {
        Self {
            epsilon,
            eta: 0.1,
            delta: None,
            iterations: 2000,
            schedule: StepSchedule::default(),
            seed: 0,
        }
    }

    pub fn delta(&self) -> usize {
        self.delta
            .unwrap_or_else(|| (1.0 / self.epsilon).ceil() as usize)
            .max(1)
    }

    fn validate(&self) -> Result<()> {
        check_epsilon(self.epsilon)?;
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return domain(format!("eta {} must lie in (0, 1)", self.eta));
        }
        if self.delta == Some(0) {
            return domain("delta must be at least 1");
        }
        if !(self.schedule.scale > 0.0) {
            return domain("step scale must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WideNarrow {
    /// Per-vertex: true when the Δ heaviest incident edges carry at most
    /// `η · W_i`.
    pub wide: Vec<bool>,
    pub weighted_degree: Vec<f64>,
    /// `Σ_{narrow i} W_i`.
    pub narrow_weight: f64,
    /// `W = Σ_i W_i`.
    pub total_weight: f64,
    /// Graph is wide when `narrow_weight ≤ η · W`.
    pub graph_wide: bool,
}

/// Weight of the Δ heaviest edges at `i` (ties by edge index, which cannot
/// change the sum).
fn prefix_weight(g: &Graph, i: usize, delta: usize) -> f64 {
    let mut w: Vec<(f64, usize)> = g
        .incident(i)
        .iter()
        .map(|&(_, e)| (g.edge(e).w, e))
        .collect();
    w.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    w.iter().take(delta).map(|p| p.0).sum()
}

pub fn classify_wide_narrow(g: &Graph, delta: usize, eta: f64) -> WideNarrow {
    let weighted_degree: Vec<f64> = (0..g.n()).map(|i| g.wdeg(i)).collect();
    let wide: Vec<bool> = (0..g.n())
        .map(|i| prefix_weight(g, i, delta) <= eta * weighted_degree[i])
        .collect();
    let total_weight: f64 = weighted_degree.iter().sum();
    let narrow_weight: f64 = (0..g.n())
        .filter(|&i| !wide[i])
        .map(|i| weighted_degree[i])
        .sum();
    WideNarrow {
        graph_wide: narrow_weight <= eta * total_weight,
        wide,
        weighted_degree,
        narrow_weight,
        total_weight,
    }
}

/// Nonnegative `n × n` matrix with zero diagonal in compressed-row form,
/// with a compressed-column copy for transposed products.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    row_col: Vec<usize>,
    row_val: Vec<f64>,
    col_ptr: Vec<usize>,
    col_row: Vec<usize>,
    col_val: Vec<f64>,
}

impl TruncatedMatrix {
    /// From `(row, col, value)` triplets; zero values are dropped.
    pub fn from_triplets(n: usize, mut t: Vec<(usize, usize, f64)>) -> Result<Self> {
        for &(i, j, v) in &t {
            if i >= n || j >= n {
                return domain(format!("entry ({i}, {j}) out of range"));
            }
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Numeric(format!("entry ({i}, {j}) = {v}")));
            }
            if i == j && v != 0.0 {
                return domain("diagonal entries must be zero");
            }
        }
        t.retain(|&(_, _, v)| v != 0.0);
        t.sort_by_key(|&(i, j, _)| (i, j));
        t.dedup_by_key(|e| (e.0, e.1));
        let build = |t: &[(usize, usize, f64)], key: fn(&(usize, usize, f64)) -> (usize, usize)| {
            let mut sorted: Vec<(usize, usize, f64)> = t.to_vec();
            sorted.sort_by_key(key);
            let mut ptr = vec![0; n + 1];
            for e in &sorted {
                ptr[key(e).0 + 1] += 1;
            }
            for i in 0..n {
                ptr[i + 1] += ptr[i];
            }
            let idx = sorted.iter().map(|e| key(e).1).collect();
            let val = sorted.iter().map(|e| e.2).collect();
            (ptr, idx, val)
        };
        let (row_ptr, row_col, row_val) = build(&t, |e| (e.0, e.1));
        let (col_ptr, col_row, col_val) = build(&t, |e| (e.1, e.0));
        Ok(Self {
            n,
            row_ptr,
            row_col,
            row_val,
            col_ptr,
            col_row,
            col_val,
        })
    }

    /// Row-major dense input of length `n²`.
    pub fn from_dense(n: usize, a: &[f64]) -> Result<Self> {
        if a.len() != n * n {
            return domain(format!("dense matrix needs {} entries", n * n));
        }
        let t = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j, a[i * n + j])))
            .collect();
        Self::from_triplets(n, t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.row_val.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.row_col[r.clone()].iter().copied().zip(self.row_val[r].iter().copied())
    }

    pub fn col(&self, j: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.col_ptr[j]..self.col_ptr[j + 1];
        self.col_row[r.clone()].iter().copied().zip(self.col_val[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|&(c, _)| c == j).map_or(0.0, |p| p.1)
    }

    /// `Ãx`.
    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).map(|(j, a)| a * x[j]).sum())
            .collect()
    }

    /// `Ãᵀy`.
    pub fn mul_t(&self, y: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|j| self.col(j).map(|(i, a)| a * y[i]).sum())
            .collect()
    }

    /// `xᵀÃx`.
    pub fn quad(&self, x: &[f64]) -> f64 {
        (0..self.n)
            .map(|i| x[i] * self.row(i).map(|(j, a)| a * x[j]).sum::<f64>())
            .sum()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            for (j, a) in self.row(i) {
                d[i * self.n + j] = a;
            }
        }
        d
    }
}

/// Narrow rows are zero; wide rows are capped entrywise at `η · W_i / Δ`.
/// The result need not be symmetric.
pub fn truncate_matrix(g: &Graph, tags: &WideNarrow, delta: usize, eta: f64) -> TruncatedMatrix {
    let mut t = Vec::with_capacity(2 * g.m());
    for i in (0..g.n()).filter(|&i| tags.wide[i]) {
        let cap = eta * tags.weighted_degree[i] / delta as f64;
        for &(j, e) in g.incident(i) {
            t.push((i, j, g.edge(e).w.min(cap)));
        }
    }
    TruncatedMatrix::from_triplets(g.n(), t).expect("graph weights are finite and nonnegative")
}

/// `xᵀ(Ãz) + ‖Ãz − Ãx‖₁`, given `b = Ãz`.
fn objective_with(a: &TruncatedMatrix, b: &[f64], x: &[f64]) -> f64 {
    let ax = a.mul(x);
    let lin: f64 = x.iter().zip(b).map(|(x, b)| x * b).sum();
    lin + b.iter().zip(&ax).map(|(b, y)| (b - y).abs()).sum::<f64>()
}

pub fn box_objective(a: &TruncatedMatrix, z: &[f64], x: &[f64]) -> f64 {
    objective_with(a, &a.mul(z), x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxSolution {
    pub x: Vec<f64>,
    pub objective: f64,
}

fn clamp_box(x: &mut [f64]) {
    for v in x {
        *v = v.clamp(-1.0, 1.0);
    }
}

fn sign0(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Exact minimization along each coordinate in turn. Along coordinate `i`
/// the objective is `b_i t + Σ_k Ã_ki |t − τ_k| + const`, minimized at a
/// weighted median of the breakpoints `τ_k`, clamped to the box.
fn coordinate_polish(a: &TruncatedMatrix, b: &[f64], x: &mut [f64], sweeps: usize) {
    let mut r: Vec<f64> = b.iter().zip(a.mul(x)).map(|(b, y)| b - y).collect();
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for _ in 0..sweeps {
        let mut moved = 0.0f64;
        for i in 0..a.n() {
            pts.clear();
            let mut total = 0.0;
            for (k, w) in a.col(i) {
                // r_k with coordinate i removed, over Ã_ki.
                pts.push(((r[k] + w * x[i]) / w, w));
                total += w;
            }
            pts.sort_by(|p, q| p.0.total_cmp(&q.0));
            let mut slope = b[i] - total;
            let mut t = -1.0;
            if slope < 0.0 {
                t = 1.0;
                for &(tau, w) in &pts {
                    slope += 2.0 * w;
                    if slope >= 0.0 {
                        t = tau;
                        break;
                    }
                }
            }
            let t = t.clamp(-1.0, 1.0);
            let d = t - x[i];
            if d != 0.0 {
                for (k, w) in a.col(i) {
                    r[k] -= w * d;
                }
                x[i] = t;
                moved = moved.max(d.abs());
            }
        }
        if moved < 1e-12 {
            break;
        }
    }
}

/// Projected subgradient descent on `f(x) = xᵀÃz + ‖Ãz − Ãx‖₁` over the box,
/// from the starts `clamp(z)`, `sign(z)` and `0`, followed by exact
/// coordinate polishing of the best iterate. Returns the best point seen, so
/// `f(x_out)` never exceeds `f` at any start.
pub fn solve_box_convex(
    a: &TruncatedMatrix,
    z: &[f64],
    iterations: usize,
    schedule: StepSchedule,
) -> Result<BoxSolution> {
    let n = a.n();
    if z.len() != n {
        return domain(format!("z has length {}, matrix is {n} × {n}", z.len()));
    }
    if let Some(v) = z.iter().find(|v| !v.is_finite()) {
        return Err(Error::Numeric(format!("non-finite entry {v} in z")));
    }
    let b = a.mul(z);
    let mut starts = vec![z.to_vec(), z.iter().map(|&v| sign0(v)).collect(), vec![0.0; n]];
    for s in &mut starts {
        clamp_box(s);
    }

    let radius = 2.0 * (n.max(1) as f64).sqrt();
    let mut best_x = starts[0].clone();
    let mut best_f = objective_with(a, &b, &best_x);
    for start in starts {
        let mut x = start;
        for t in 1..=iterations {
            let ax = a.mul(&x);
            let f = x.iter().zip(&b).map(|(x, b)| x * b).sum::<f64>()
                + b.iter().zip(&ax).map(|(b, y)| (b - y).abs()).sum::<f64>();
            if !f.is_finite() {
                return Err(Error::Numeric("objective diverged".into()));
            }
            if f < best_f {
                best_f = f;
                best_x.clone_from(&x);
            }
            let s: Vec<f64> = b.iter().zip(&ax).map(|(b, y)| sign0(b - y)).collect();
            let at_s = a.mul_t(&s);
            let g: Vec<f64> = b.iter().zip(&at_s).map(|(b, v)| b - v).collect();
            let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 {
                break;
            }
            let step = schedule.scale * radius / (t as f64).sqrt() / norm;
            for (xi, gi) in x.iter_mut().zip(&g) {
                *xi = (*xi - step * gi).clamp(-1.0, 1.0);
            }
        }
        let f = objective_with(a, &b, &x);
        if f < best_f {
            best_f = f;
            best_x = x;
        }
    }

    let mut polished = best_x.clone();
    coordinate_polish(a, &b, &mut polished, 100);
    let f = objective_with(a, &b, &polished);
    if f < best_f {
        best_f = f;
        best_x = polished;
    }
    Ok(BoxSolution {
        x: best_x,
        objective: best_f,
    })
}

/// Chooses `y_i ∈ {−1, +1}` in index order to minimize the quadratic form
/// of `(y_1..y_i, x_{i+1}..x_n)`; ties go to +1. Never increases `xᵀÃx`.
pub fn sequential_rounding(a: &TruncatedMatrix, x: &[f64]) -> Vec<i8> {
    let mut v = x.to_vec();
    let mut y = vec![0i8; x.len()];
    for i in 0..a.n() {
        // With a zero diagonal the form is linear in v_i with this slope.
        let slope: f64 = a.row(i).map(|(j, w)| w * v[j]).sum::<f64>()
            + a.col(i).map(|(k, w)| w * v[k]).sum::<f64>();
        y[i] = if slope > 0.0 { -1 } else { 1 };
        v[i] = f64::from(y[i]);
    }
    y
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Learned,
    LocalSearch,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutSolution {
    pub assignment: Vec<i8>,
    pub value: f64,
    pub provenance: Provenance,
    pub learned_value: f64,
    pub local_search_value: f64,
    pub graph_wide: bool,
    /// Box solution the learned candidate was rounded from.
    pub relaxed: Vec<f64>,
}

pub fn learned_maxcut(g: &Graph, preds: &PredictionTable, params: &MaxcutParams) -> Result<CutSolution> {
    params.validate()?;
    let z = aggregate_z(g, preds, params.epsilon)?;
    let delta = params.delta();
    let tags = classify_wide_narrow(g, delta, params.eta);
    let a = truncate_matrix(g, &tags, delta, params.eta);
    let relaxed = solve_box_convex(&a, &z, params.iterations, params.schedule)?;
    let y = sequential_rounding(&a, &relaxed.x);
    let learned_value = g.cut_value(&y);

    let (ls_value, ls) = maxcut_local_search(g, &LocalSearchStart::Greedy, params.seed);
    let (assignment, value, provenance) = if learned_value >= ls_value {
        (y, learned_value, Provenance::Learned)
    } else {
        (ls, ls_value, Provenance::LocalSearch)
    };
    if (g.cut_value(&assignment) - value).abs() > 1e-9 * (1.0 + value) {
        return Err(Error::Invariant("cut value does not match assignment".into()));
    }
    Ok(CutSolution {
        assignment,
        value,
        provenance,
        learned_value,
        local_search_value: ls_value,
        graph_wide: tags.graph_wide,
        relaxed: relaxed.x,
    })
}
