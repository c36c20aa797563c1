//! Acceptance suite. Each test prints one `[acceptance NN] PASS|FAIL` line.

mod common;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use common::*;
use predgraph::baselines::{
    greedy_mis_min_degree, maxcut_local_search, mis_predictions_only, vc_2approx_matching,
    weighted_vc_2approx, LocalRatioCover, LocalSearchStart, MatchingCover, MinDegreeGreedy,
};
use predgraph::exact::{exact_maxcut, exact_mis, exact_set_cover, exact_vc, exact_weighted_vc};
use predgraph::graph::{
    gen_er_graph, gen_planted_mis, gen_planted_set_cover, gen_planted_vc, random_vertex_weights,
};
use predgraph::harness::{
    run_experiment, write_records_csv, Algorithm, ExperimentConfig, InstanceSource, Problem,
};
use predgraph::learned_maxcut::{
    box_objective, classify_wide_narrow, learned_maxcut, sequential_rounding, solve_box_convex,
    truncate_matrix, StepSchedule, TruncatedMatrix,
};
use predgraph::learned_mis::learned_mis;
use predgraph::learned_sc::learned_set_cover;
use predgraph::learned_vc::{learned_vc, learned_weighted_vc};
use predgraph::predictions::{
    derive_seed, gen_maxcut_predictions, gen_mis_predictions, gen_sc_predictions,
    gen_vc_predictions, vertex_votes,
};
use predgraph::stats::{binomial_cdf, bootstrap_lower, bootstrap_upper, mean, DEFAULT_RESAMPLES};
use predgraph::{
    ExactBudget, Graph, GroundTruth, MaxcutParams, MisParams, SetSystem, VcParams,
};

fn budget() -> ExactBudget {
    ExactBudget::default()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn a01_feasibility_suite() {
    let start = Instant::now();
    let per_problem = 1000u64;
    let failures: usize = (0..per_problem)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(derive_seed(101, &[i]));
            let n = r.gen_range(2..=60);
            let p = r.gen_range(0.02..0.5);
            let eps = r.gen_range(0.01..0.49);
            let delta = r.gen_range(1..=12);
            let seed = derive_seed(102, &[i]);
            let g = gen_er_graph(n, p, seed).unwrap();
            let mut bad = 0;

            let c = vc_2approx_matching(&g);
            let pr = gen_vc_predictions(&g, &GroundTruth::VertexCover(c.clone()), eps, seed).unwrap();
            let params = VcParams::new(eps).with_delta(delta);
            bad += !g.is_vertex_cover(&learned_vc(&g, &pr, &params, &MatchingCover).unwrap().cover) as usize;

            let gw = random_vertex_weights(g.clone(), 1.0, 10.0, seed).unwrap();
            let wc = weighted_vc_2approx(&gw).unwrap();
            let pr = gen_vc_predictions(&gw, &GroundTruth::VertexCover(wc), eps, seed).unwrap();
            let sol = learned_weighted_vc(&gw, &pr, &params, &LocalRatioCover).unwrap();
            bad += !gw.is_vertex_cover(&sol.cover) as usize;

            let s = greedy_mis_min_degree(&g);
            let pr = gen_mis_predictions(&g, &GroundTruth::IndependentSet(s), eps, seed).unwrap();
            let mp = MisParams::new(eps).with_delta(delta).allow_large_epsilon();
            bad += !g.is_independent(&learned_mis(&g, &pr, &mp, &MinDegreeGreedy).unwrap().set) as usize;

            let m = r.gen_range(1..=24);
            let (ss, planted) = gen_planted_set_cover(m, r.gen_range(1..=m), r.gen_range(0..12), 1, m, seed).unwrap();
            let pr = gen_sc_predictions(&ss, &GroundTruth::SetCover(planted), eps, seed).unwrap();
            let sol = learned_set_cover(&ss, &pr, eps, Some(r.gen_range(1..=m))).unwrap();
            bad += !ss.is_cover(&sol.sets) as usize;

            let x: Vec<i8> = (0..n).map(|_| if r.gen_bool(0.5) { 1 } else { -1 }).collect();
            let pr = gen_maxcut_predictions(&g, &GroundTruth::Cut(x), eps, seed).unwrap();
            let mut mp = MaxcutParams::new(eps);
            mp.delta = Some(delta);
            mp.iterations = 300;
            let sol = learned_maxcut(&g, &pr, &mp).unwrap();
            let valid = sol.assignment.len() == n && sol.assignment.iter().all(|&s| s == 1 || s == -1);
            bad += !(valid && g.cut_value(&sol.assignment) == sol.value) as usize;
            bad
        })
        .sum();
    let secs = start.elapsed().as_secs_f64();
    let pass = failures == 0 && secs < 120.0;
    report(1, "feasibility", pass, &format!("{failures} infeasible outputs over 5x{per_problem} instances in {secs:.1}s"));
    assert!(pass);
}

#[test]
fn a02_majority_vote_concentration() {
    let start = Instant::now();
    let trials = 100_000u64;
    let mut ok = true;
    let mut detail = Vec::new();
    for (d, eps) in [(50usize, 0.1), (100, 0.15), (200, 0.2)] {
        let g = predgraph::graph::named::star(d);
        let truth = GroundTruth::VertexCover(vec![0]);
        let wrong: u64 = (0..trials)
            .into_par_iter()
            .map(|t| {
                let p = gen_vc_predictions(&g, &truth, eps, derive_seed(200 + d as u64, &[t])).unwrap();
                (vertex_votes(&g, &p).unwrap()[0] != Some(1)) as u64
            })
            .sum();
        let rate = wrong as f64 / trials as f64;
        // A member is misclassified when at most half of its bits are correct.
        let exact = binomial_cdf(d as u64, 0.5 + eps, d as u64 / 2);
        let sigma = (exact * (1.0 - exact) / trials as f64).sqrt();
        let chernoff = (-2.0 * d as f64 * eps * eps).exp();
        let cell_ok = (rate - exact).abs() <= 3.0 * sigma + 1e-12 && rate < chernoff;
        ok &= cell_ok;
        detail.push(format!("d={d} eps={eps}: rate {rate:.5} vs exact {exact:.5} (3sd {:.5}), bound {chernoff:.4}", 3.0 * sigma));
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 60.0;
    report(2, "majority-vote concentration", ok, &format!("{}; {secs:.1}s", detail.join("; ")));
    assert!(ok);
}

#[test]
fn a03_prediction_calibration() {
    let z = 3.890_591_886_4; // two-sided 99.99% normal quantile
    let g = gen_er_graph(400, 0.63, 3).unwrap();
    let cover = vc_2approx_matching(&g);
    let member = predgraph::graph::mask(g.n(), &cover);
    let mut ok = true;
    let mut detail = Vec::new();
    for eps in [0.05, 0.2, 0.45] {
        let p = gen_vc_predictions(&g, &GroundTruth::VertexCover(cover.clone()), eps, 31).unwrap();
        let mut n = 0u64;
        let mut correct = 0u64;
        'outer: for (ei, e) in g.edges().iter().enumerate() {
            for (slot, v) in e.endpoints().into_iter().enumerate() {
                if n == 100_000 {
                    break 'outer;
                }
                n += 1;
                correct += (p.edge_bit(ei, slot) == member[v] as i8) as u64;
            }
        }
        assert_eq!(n, 100_000);
        let q = 0.5 + eps;
        let half = z * (q * (1.0 - q) / n as f64).sqrt();
        let acc = correct as f64 / n as f64;
        ok &= (acc - q).abs() <= half;
        detail.push(format!("eps={eps}: {acc:.4} in [{:.4}, {:.4}]", q - half, q + half));
    }
    report(3, "prediction calibration", ok, &detail.join("; "));
    assert!(ok);
}

/// Per-instance ratios `(learned, baseline)` for the vertex-cover protocol.
fn vc_protocol(weighted: bool) -> (Vec<f64>, Vec<f64>, f64) {
    let eps = 0.35;
    let trials = 200u64;
    let start = Instant::now();
    let per_instance: Vec<(Vec<f64>, Vec<f64>)> = (0..50u64)
        .into_par_iter()
        .map(|i| {
            let seed = derive_seed(if weighted { 500 } else { 400 }, &[i]);
            let (mut g, _) = gen_planted_vc(8, 47, 0.15, seed).unwrap();
            if weighted {
                g = random_vertex_weights(g, 1.0, 10.0, seed ^ 1).unwrap();
            }
            let (opt, cover) = if weighted {
                exact_weighted_vc(&g, budget()).optimal().unwrap()
            } else {
                let c = exact_vc(&g, budget()).optimal().unwrap();
                (c.len() as f64, c)
            };
            let base = if weighted {
                g.set_weight(&weighted_vc_2approx(&g).unwrap())
            } else {
                vc_2approx_matching(&g).len() as f64
            };
            let truth = GroundTruth::VertexCover(cover);
            let params = VcParams::new(eps).with_delta(10);
            let mut learned = Vec::new();
            let mut baseline = Vec::new();
            for t in 0..trials {
                let p = gen_vc_predictions(&g, &truth, eps, derive_seed(seed, &[t])).unwrap();
                let value = if weighted {
                    learned_weighted_vc(&g, &p, &params, &LocalRatioCover).unwrap().value
                } else {
                    learned_vc(&g, &p, &params, &MatchingCover).unwrap().value
                };
                learned.push(value / opt);
                baseline.push(base / opt);
            }
            (learned, baseline)
        })
        .collect();
    let (l, b): (Vec<Vec<f64>>, Vec<Vec<f64>>) = per_instance.into_iter().unzip();
    (l.concat(), b.concat(), start.elapsed().as_secs_f64())
}

fn paired_diff(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[test]
fn a04_learned_vc_ratio() {
    let (l, b, secs) = vc_protocol(false);
    let upper = bootstrap_upper(&l, 0.95, DEFAULT_RESAMPLES, 4).unwrap();
    let diff_upper = bootstrap_upper(&paired_diff(&l, &b), 0.95, DEFAULT_RESAMPLES, 5).unwrap();
    let pass = upper <= 1.9 && diff_upper <= 0.0 && secs < 300.0;
    report(
        4,
        "learned vertex cover ratio",
        pass,
        &format!(
            "mean {:.4} (95% upper {upper:.4}) vs matching {:.4}; paired diff upper {diff_upper:.4}; {secs:.1}s",
            mean(&l).unwrap(),
            mean(&b).unwrap()
        ),
    );
    assert!(pass);
}

#[test]
fn a05_learned_weighted_vc_ratio() {
    let (l, b, secs) = vc_protocol(true);
    let upper = bootstrap_upper(&l, 0.95, DEFAULT_RESAMPLES, 6).unwrap();
    let diff_upper = bootstrap_upper(&paired_diff(&l, &b), 0.95, DEFAULT_RESAMPLES, 7).unwrap();
    let pass = upper <= 2.0 && diff_upper <= 0.0 && secs < 300.0;
    report(
        5,
        "learned weighted vertex cover ratio",
        pass,
        &format!(
            "mean {:.4} (95% upper {upper:.4}) vs local ratio {:.4}; paired diff upper {diff_upper:.4}; {secs:.1}s",
            mean(&l).unwrap(),
            mean(&b).unwrap()
        ),
    );
    assert!(pass);
}

fn heavy_opt(ss: &SetSystem, opt: &[usize], delta: usize) -> Vec<usize> {
    let mut h: Vec<usize> = opt.iter().copied().filter(|&j| ss.set(j).len() >= delta).collect();
    h.sort_unstable();
    h
}

#[test]
fn a06_learned_set_cover() {
    let delta = 8;
    let instances: Vec<(SetSystem, Vec<usize>)> = (0..10u64)
        .map(|i| {
            let (ss, _) = gen_planted_set_cover(24, 3, 12, 2, 9, derive_seed(600, &[i])).unwrap();
            let opt = exact_set_cover(&ss, budget()).optimal().unwrap();
            (ss, opt)
        })
        .collect();
    let mut sizes = Vec::new();
    let mut opts = Vec::new();
    let mut exact_hits = 0;
    let mut total = 0;
    for (i, (ss, opt)) in instances.iter().enumerate() {
        let truth = GroundTruth::SetCover(opt.clone());
        let want = heavy_opt(ss, opt, delta);
        for t in 0..20u64 {
            let seed = derive_seed(601, &[i as u64, t]);
            let p = gen_sc_predictions(ss, &truth, 0.25, seed).unwrap();
            let sol = learned_set_cover(ss, &p, 0.25, Some(delta)).unwrap();
            sizes.push(sol.value() as f64);
            opts.push(opt.len() as f64);

            let p = gen_sc_predictions(ss, &truth, 0.49, seed).unwrap();
            let sol = learned_set_cover(ss, &p, 0.49, Some(delta)).unwrap();
            let mut got = sol.j_learned.clone();
            got.sort_unstable();
            exact_hits += (got == want) as usize;
            total += 1;
        }
    }
    let bound = (1.1 + (delta as f64).ln()) * mean(&opts).unwrap();
    let m = mean(&sizes).unwrap();
    let hit_rate = exact_hits as f64 / total as f64;
    let pass = m <= bound && hit_rate >= 0.95;
    report(
        6,
        "learned set cover",
        pass,
        &format!("mean |J| {m:.3} <= {bound:.3}; heavy part exact in {:.1}% of {total} near-perfect trials", 100.0 * hit_rate),
    );
    assert!(pass);
}

#[test]
fn a07_learned_mis_against_baselines() {
    let start = Instant::now();
    let eps_grid = [0.10, 0.15, 0.20, 0.25, 0.30, 0.35];
    let instances: Vec<(Graph, Vec<usize>)> = (0..10u64)
        .map(|i| {
            let (g, _) = gen_planted_mis(20, 30, 12, 0.25, derive_seed(700, &[i])).unwrap();
            let s = exact_mis(&g, budget()).optimal().unwrap();
            (g, s)
        })
        .collect();
    let mut ok = true;
    let mut detail = Vec::new();
    for (ei, &eps) in eps_grid.iter().enumerate() {
        let mut learned = Vec::new();
        let mut pred_only = Vec::new();
        let mut greedy = Vec::new();
        for (i, (g, alpha)) in instances.iter().enumerate() {
            let truth = GroundTruth::IndependentSet(alpha.clone());
            let a = alpha.len() as f64;
            let params = MisParams::new(eps).with_delta(10).allow_large_epsilon();
            let gr = greedy_mis_min_degree(g).len() as f64 / a;
            for t in 0..10u64 {
                let p = gen_mis_predictions(g, &truth, eps, derive_seed(701, &[i as u64, ei as u64, t])).unwrap();
                learned.push(learned_mis(g, &p, &params, &MinDegreeGreedy).unwrap().value() as f64 / a);
                pred_only.push(mis_predictions_only(g, &p).unwrap().len() as f64 / a);
                greedy.push(gr);
            }
        }
        // Learned must not be significantly worse: the one-sided 95% upper
        // bound of the paired difference has to reach zero.
        let vs_pred = bootstrap_upper(&paired_diff(&learned, &pred_only), 0.95, DEFAULT_RESAMPLES, 70 + ei as u64).unwrap();
        let mut cell = vs_pred >= 0.0;
        let mut line = format!(
            "eps={eps:.2}: learned {:.3} pred-only {:.3}",
            mean(&learned).unwrap(),
            mean(&pred_only).unwrap()
        );
        if eps == 0.35 {
            let vs_greedy = bootstrap_upper(&paired_diff(&learned, &greedy), 0.95, DEFAULT_RESAMPLES, 79).unwrap();
            cell &= vs_greedy >= 0.0;
            line.push_str(&format!(" greedy {:.3}", mean(&greedy).unwrap()));
        }
        ok &= cell;
        detail.push(line);
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 300.0;
    report(7, "learned independent set vs baselines", ok, &format!("{}; {secs:.1}s", detail.join("; ")));
    assert!(ok);
}

#[test]
fn a08_cleanup_charging() {
    let target = 10_000;
    let mut removals = 0usize;
    let mut violations = 0usize;
    let mut run = 0u64;
    while removals < target {
        let (g, planted) = gen_planted_mis(20, 30, 12, 0.25, derive_seed(800, &[run])).unwrap();
        let inside = predgraph::graph::mask(g.n(), &planted);
        let truth = GroundTruth::IndependentSet(planted);
        let p = gen_mis_predictions(&g, &truth, 0.1, derive_seed(801, &[run])).unwrap();
        let sol = learned_mis(&g, &p, &MisParams::new(0.1).with_delta(10), &MinDegreeGreedy).unwrap();
        for &(u, v) in &sol.removed_pairs {
            removals += 1;
            violations += (inside[u] && inside[v]) as usize;
        }
        run += 1;
    }
    let pass = violations == 0;
    report(8, "clean-up charging", pass, &format!("{violations} violations over {removals} removed pairs ({run} runs)"));
    assert!(pass);
}

/// Random `n × n` matrix with dyadic entries in `[0, 4]` and zero diagonal,
/// about a third of entries zero.
fn dyadic_matrix(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j && r.gen_bool(0.66) {
                a[i * n + j] = r.gen_range(0..=32) as f64 / 8.0;
            }
        }
    }
    a
}

#[test]
fn a09_rounding_never_increases_quadratic_form() {
    let start = Instant::now();
    let mut r = rng(900);
    let mut violations = 0;
    let cases = 10_000;
    for _ in 0..cases {
        let n = r.gen_range(1..=12);
        let a = TruncatedMatrix::from_dense(n, &dyadic_matrix(&mut r, n)).unwrap();
        let x: Vec<f64> = (0..n).map(|_| r.gen_range(-16..=16) as f64 / 16.0).collect();
        let y = sequential_rounding(&a, &x);
        let yf: Vec<f64> = y.iter().map(|&v| f64::from(v)).collect();
        violations += (a.quad(&yf) > a.quad(&x)) as usize;
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = violations == 0 && secs < 30.0;
    report(9, "rounding monotonicity", pass, &format!("{violations} violations over {cases} pairs in {secs:.2}s"));
    assert!(pass);
}

#[test]
fn a10_truncation_bound() {
    let mut r = rng(1000);
    let mut found = 0;
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    while found < 1000 {
        let n = r.gen_range(20..=60);
        let g = gen_er_graph(n, r.gen_range(0.4..0.9), r.gen()).unwrap();
        let w: Vec<(usize, usize, f64)> = g
            .edges()
            .iter()
            .map(|e| (e.u, e.v, r.gen_range(1.0..3.0)))
            .collect();
        let g = Graph::with_edge_weights(n, w).unwrap();
        let eta = r.gen_range(0.1..0.6);
        let delta = r.gen_range(1..=4);
        let tags = classify_wide_narrow(&g, delta, eta);
        if !tags.graph_wide {
            continue;
        }
        found += 1;
        let at = truncate_matrix(&g, &tags, delta, eta);
        let mut gap = 0.0;
        for e in g.edges() {
            gap += (e.w - at.get(e.u, e.v)) + (e.w - at.get(e.v, e.u));
        }
        let slack = gap - 2.0 * eta * tags.total_weight;
        worst = worst.max(slack);
        violations += (slack > 1e-9) as usize;
    }
    let pass = violations == 0;
    report(10, "truncation bound", pass, &format!("{violations} violations over {found} wide graphs; max slack {worst:.3}"));
    assert!(pass);
}

#[test]
fn a11_convex_solve_quality() {
    let mut r = rng(1100);
    let cases: Vec<(usize, Vec<f64>, Vec<f64>)> = (0..200)
        .map(|_| {
            let n = r.gen_range(1..=3);
            let mut a = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..n {
                    if i != j && r.gen_bool(0.8) {
                        a[i * n + j] = r.gen_range(0.0..2.0);
                    }
                }
            }
            let z = (0..n).map(|_| r.gen_range(-3.0..3.0)).collect();
            (n, a, z)
        })
        .collect();
    let grid_gaps: Vec<f64> = cases
        .par_iter()
        .map(|(n, a, z)| {
            let m = TruncatedMatrix::from_dense(*n, a).unwrap();
            let s = solve_box_convex(&m, z, 2000, StepSchedule::default()).unwrap();
            s.objective - grid_minimum(*n, a, z, 0.01)
        })
        .collect();
    let grid_fail = grid_gaps.iter().filter(|&&g| g > 1e-3).count();
    let worst = grid_gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let mut start_fail = 0;
    let mut count = 0;
    for k in 0..300u64 {
        let n = r.gen_range(1..=25);
        let a = TruncatedMatrix::from_dense(n, &dyadic_matrix(&mut r, n)).unwrap();
        let z: Vec<f64> = (0..n).map(|_| r.gen_range(-4.0..4.0)).collect();
        let iters = if k % 2 == 0 { 50 } else { 2000 };
        let s = solve_box_convex(&a, &z, iters, StepSchedule::default()).unwrap();
        let clamp: Vec<f64> = z.iter().map(|v| v.clamp(-1.0, 1.0)).collect();
        let sign: Vec<f64> = z.iter().map(|&v| if v > 0.0 { 1.0 } else if v < 0.0 { -1.0 } else { 0.0 }).collect();
        let floor = [clamp, sign, vec![0.0; n]]
            .iter()
            .map(|x| box_objective(&a, &z, x))
            .fold(f64::INFINITY, f64::min);
        start_fail += (s.objective > floor) as usize;
        count += 1;
    }
    for (n, a, z) in &cases {
        let m = TruncatedMatrix::from_dense(*n, a).unwrap();
        let s = solve_box_convex(&m, z, 2000, StepSchedule::default()).unwrap();
        let clamp: Vec<f64> = z.iter().map(|v| v.clamp(-1.0, 1.0)).collect();
        start_fail += (s.objective > box_objective(&m, z, &clamp)) as usize;
        count += 1;
    }
    let pass = grid_fail == 0 && start_fail == 0;
    report(
        11,
        "convex solve quality",
        pass,
        &format!("{grid_fail}/200 above grid optimum + 1e-3 (worst gap {worst:.2e}); {start_fail}/{count} above a start point"),
    );
    assert!(pass);
}

#[test]
fn a12_learned_maxcut_comparison() {
    let eps = 0.3;
    let rows: Vec<(f64, f64, bool, bool)> = (0..100u64)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(derive_seed(1200, &[i]));
            let n = r.gen_range(8..=20);
            let g = gen_er_graph(n, r.gen_range(0.3..0.9), r.gen()).unwrap();
            let (opt, x) = exact_maxcut(&g, budget()).optimal().unwrap();
            let p = gen_maxcut_predictions(&g, &GroundTruth::Cut(x), eps, r.gen()).unwrap();
            let mut params = MaxcutParams::new(eps);
            params.seed = i;
            let sol = learned_maxcut(&g, &p, &params).unwrap();
            let (ls, _) = maxcut_local_search(&g, &LocalSearchStart::Greedy, i);
            let o = if opt > 0.0 { opt } else { 1.0 };
            let half = sol.value >= g.total_edge_weight() / 2.0;
            (sol.value / o, ls / o, half, sol.learned_value > ls)
        })
        .collect();
    let best: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let ls: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let lower = bootstrap_lower(&paired_diff(&best, &ls), 0.95, DEFAULT_RESAMPLES, 12).unwrap();
    let all_half = rows.iter().all(|r| r.2);
    let learned_wins = rows.iter().filter(|r| r.3).count();
    let pass = lower >= 0.0 && all_half;
    report(
        12,
        "learned max-cut vs local search",
        pass,
        &format!(
            "best-of {:.4} vs local search {:.4} (paired lower bound {lower:.4}); learned candidate strictly better on {learned_wins}/100; >= W/2 on all: {all_half}",
            mean(&best).unwrap(),
            mean(&ls).unwrap()
        ),
    );
    assert!(pass);
}

#[test]
fn a13_harness_determinism() {
    let text = "problem = mis\n\
                generator = planted-mis:indep=15,rest=25,attach=11,p=0.2,seed=5\n\
                algorithms = learned-mis,pred-only-mis,greedy-mis\n\
                epsilons = 0.10:0.35:0.05\n\
                delta = 10\n\
                trials = 10\n\
                seed = 13\n\
                allow_large_epsilon = true\n";
    let csv = |threads: usize| {
        let mut cfg = ExperimentConfig::parse(text, std::path::Path::new(".")).unwrap();
        cfg.threads = Some(threads);
        let out = run_experiment(&cfg).unwrap();
        let mut buf = Vec::new();
        write_records_csv(&mut buf, &out.records).unwrap();
        buf
    };
    let a = csv(1);
    let b = csv(4);
    let c = csv(4);
    let mut vc = ExperimentConfig::new(
        Problem::Maxcut,
        InstanceSource::Generator("er:n=14,p=0.5,seed=2".parse().unwrap()),
        vec![Algorithm::LearnedMaxcut, Algorithm::LsMaxcut],
    );
    vc.epsilons = vec![0.2, 0.3];
    vc.trials = 3;
    vc.iterations = 200;
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|_| {
            let mut buf = Vec::new();
            write_records_csv(&mut buf, &run_experiment(&vc).unwrap().records).unwrap();
            buf
        })
        .collect();
    let pass = a == b && b == c && runs[0] == runs[1];
    report(13, "determinism", pass, &format!("{} bytes, identical across runs and thread counts: {pass}", a.len()));
    assert!(pass);
}

#[test]
fn a14_oracle_cross_checks() {
    let start = Instant::now();
    let mut complement = 0;
    for i in 0..500u64 {
        let mut r = rng(derive_seed(1400, &[i]));
        let n = r.gen_range(1..=18);
        let g = gen_er_graph(n, r.gen_range(0.05..0.8), r.gen()).unwrap();
        let tau = exact_vc(&g, budget()).optimal().unwrap().len();
        let alpha = exact_mis(&g, budget()).optimal().unwrap().len();
        // Independent check of α against enumeration.
        let brute = brute_mis(&g);
        complement += (alpha + tau != n || alpha != brute) as usize;
    }
    let mut mismatches = 0;
    for i in 0..300u64 {
        let mut r = rng(derive_seed(1401, &[i]));
        let n = r.gen_range(1..=14);
        let g = gen_er_graph(n, r.gen_range(0.05..0.8), r.gen()).unwrap();
        mismatches += (exact_vc(&g, budget()).optimal().unwrap().len() != brute_vc(&g)) as usize;
        let gw = random_vertex_weights(g.clone(), 1.0, 10.0, r.gen()).unwrap();
        let (w, c) = exact_weighted_vc(&gw, budget()).optimal().unwrap();
        mismatches += ((w - brute_weighted_vc(&gw)).abs() > 1e-9 || !gw.is_vertex_cover(&c)) as usize;
        let wg: Vec<(usize, usize, f64)> = g.edges().iter().map(|e| (e.u, e.v, r.gen_range(0.5..3.0))).collect();
        let wg = Graph::with_edge_weights(n, wg).unwrap();
        let (cut, x) = exact_maxcut(&wg, budget()).optimal().unwrap();
        mismatches += ((cut - brute_maxcut(&wg)).abs() > 1e-9 || (wg.cut_value(&x) - cut).abs() > 1e-9) as usize;

        let m = r.gen_range(1..=12);
        let blocks = r.gen_range(1..=m.min(6));
        let (ss, _) = gen_planted_set_cover(m, blocks, r.gen_range(0..=12 - blocks), 1, m, r.gen()).unwrap();
        let opt = exact_set_cover(&ss, budget()).optimal().unwrap();
        mismatches += (opt.len() != brute_set_cover(&ss) || !ss.is_cover(&opt)) as usize;
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = complement == 0 && mismatches == 0;
    report(
        14,
        "oracle cross-checks",
        pass,
        &format!("{complement}/500 complement failures; {mismatches} enumeration mismatches over 300x4 instances; {secs:.1}s"),
    );
    assert!(pass);
}
