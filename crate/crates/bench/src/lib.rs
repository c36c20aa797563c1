//! Fixed instances shared by the benchmarks.

use predgraph::graph::{gen_planted_mis, gen_planted_vc};
use predgraph::learned_maxcut::{classify_wide_narrow, truncate_matrix, TruncatedMatrix};
use predgraph::predictions::{aggregate_z, gen_maxcut_predictions, gen_mis_predictions, gen_vc_predictions};
use predgraph::{Graph, GroundTruth, PredictionTable};

pub struct Fixture {
    pub graph: Graph,
    pub preds: PredictionTable,
}

pub fn vc_fixture(n_cover: usize, n_free: usize, eps: f64) -> Fixture {
    let p = (20.0 / (n_cover + n_free) as f64).min(1.0);
    let (graph, cover) = gen_planted_vc(n_cover, n_free, p, 1).unwrap();
    let preds = gen_vc_predictions(&graph, &GroundTruth::VertexCover(cover), eps, 2).unwrap();
    Fixture { graph, preds }
}

pub fn mis_fixture(n_indep: usize, n_rest: usize, eps: f64) -> Fixture {
    let (graph, set) = gen_planted_mis(n_indep, n_rest, 12, 0.2, 3).unwrap();
    let preds = gen_mis_predictions(&graph, &GroundTruth::IndependentSet(set), eps, 4).unwrap();
    Fixture { graph, preds }
}

pub fn er_graph(n: usize, p: f64) -> Graph {
    predgraph::graph::gen_er_graph(n, p, 7).unwrap()
}

/// Truncated matrix and aggregate of a dense random graph with a random
/// planted cut.
pub fn box_fixture(n: usize, eps: f64) -> (TruncatedMatrix, Vec<f64>) {
    let graph = predgraph::graph::gen_er_graph(n, 0.8, 5).unwrap();
    let x: Vec<i8> = (0..n).map(|i| if i % 3 == 0 { 1 } else { -1 }).collect();
    let preds = gen_maxcut_predictions(&graph, &GroundTruth::Cut(x), eps, 6).unwrap();
    let delta = (1.0 / eps).ceil() as usize;
    let tags = classify_wide_narrow(&graph, delta, 0.1);
    let a = truncate_matrix(&graph, &tags, delta, 0.1);
    (a, aggregate_z(&graph, &preds, eps).unwrap())
}
