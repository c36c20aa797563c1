//! Brute-force reference solvers and helpers shared by integration tests.
#![allow(dead_code)]

use std::io::Write;

use predgraph::{Graph, SetSystem};

/// Prints straight to the process stdout so the line survives test capture.
pub fn report(id: u32, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "[acceptance {id:02}] {verdict} {name}: {detail}");
    let _ = out.flush();
}

fn subset_members(n: usize, bits: u32) -> impl Iterator<Item = usize> {
    (0..n).filter(move |&i| bits >> i & 1 == 1)
}

fn covers(g: &Graph, bits: u32) -> bool {
    g.edges().iter().all(|e| bits >> e.u & 1 == 1 || bits >> e.v & 1 == 1)
}

pub fn brute_vc(g: &Graph) -> usize {
    assert!(g.n() <= 20);
    (0u32..1 << g.n())
        .filter(|&b| covers(g, b))
        .map(|b| b.count_ones() as usize)
        .min()
        .unwrap()
}

pub fn brute_weighted_vc(g: &Graph) -> f64 {
    assert!(g.n() <= 20);
    (0u32..1 << g.n())
        .filter(|&b| covers(g, b))
        .map(|b| subset_members(g.n(), b).map(|v| g.vertex_weight(v)).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

pub fn brute_mis(g: &Graph) -> usize {
    assert!(g.n() <= 20);
    (0u32..1 << g.n())
        .filter(|&b| g.edges().iter().all(|e| !(b >> e.u & 1 == 1 && b >> e.v & 1 == 1)))
        .map(|b| b.count_ones() as usize)
        .max()
        .unwrap()
}

pub fn brute_set_cover(ss: &SetSystem) -> usize {
    assert!(ss.n() <= 20);
    (0u32..1 << ss.n())
        .filter(|&b| {
            let mut hit = vec![false; ss.m()];
            for j in subset_members(ss.n(), b) {
                for &x in ss.set(j) {
                    hit[x] = true;
                }
            }
            hit.iter().all(|&h| h)
        })
        .map(|b| b.count_ones() as usize)
        .min()
        .unwrap()
}

pub fn brute_maxcut(g: &Graph) -> f64 {
    assert!(g.n() <= 20);
    (0u32..1 << g.n())
        .map(|b| {
            g.edges()
                .iter()
                .filter(|e| (b >> e.u & 1) != (b >> e.v & 1))
                .map(|e| e.w)
                .sum::<f64>()
        })
        .fold(0.0, f64::max)
}

/// `x·(Az) + ‖Az − Ax‖₁` for a dense row-major `a`.
pub fn dense_objective(n: usize, a: &[f64], z: &[f64], x: &[f64]) -> f64 {
    let mul = |v: &[f64]| -> Vec<f64> {
        (0..n).map(|i| (0..n).map(|j| a[i * n + j] * v[j]).sum()).collect()
    };
    let b = mul(z);
    let ax = mul(x);
    (0..n).map(|i| x[i] * b[i] + (b[i] - ax[i]).abs()).sum()
}

/// Minimum of [`dense_objective`] over the grid `{-1, -1 + step, ..., 1}ⁿ`.
pub fn grid_minimum(n: usize, a: &[f64], z: &[f64], step: f64) -> f64 {
    let k = (2.0 / step).round() as usize + 1;
    let pts: Vec<f64> = (0..k).map(|i| -1.0 + i as f64 * step).collect();
    let total = k.pow(n as u32);
    let mut best = f64::INFINITY;
    let mut x = vec![0.0; n];
    for mut idx in 0..total {
        for xi in x.iter_mut() {
            *xi = pts[idx % k];
            idx /= k;
        }
        best = best.min(dense_objective(n, a, z, &x));
    }
    best
}
