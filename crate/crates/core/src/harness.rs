//! Experiment runner: ε sweeps with repeated seeded trials, CSV records and
//! per-cell summaries.
//!
//! A config is a flat `key = value` file:
//!
//! ```text
//! problem    = mis
//! generator  = planted-mis:indep=20,rest=40,attach=14,p=0.15,seed=1
//! algorithms = learned-mis,pred-only-mis,greedy-mis
//! epsilons   = 0.10:0.35:0.05
//! delta      = 10
//! trials     = 10
//! seed       = 7
//! output     = results.csv
//! ```
//!
//! Trial seeds depend only on the base seed, the ε index and the trial
//! index, so every algorithm in a cell sees the same predictions.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::baselines::{
    greedy_mis_min_degree, greedy_set_cover, maxcut_local_search, mis_predictions_only,
    vc_2approx_matching, weighted_vc_2approx, LocalRatioCover, LocalSearchStart, MatchingCover,
    MinDegreeGreedy,
};
use crate::error::{domain, Error, Result};
use crate::exact::{
    exact_maxcut, exact_mis, exact_set_cover, exact_vc, exact_weighted_vc, ExactBudget,
};
use crate::graph::{
    gen_er_graph, gen_planted_mis, gen_planted_set_cover, gen_planted_vc, load_edge_list,
    load_set_system, load_vertex_weights, mask, random_vertex_weights, Graph, SetSystem, VertexId,
};
use crate::learned_maxcut::{learned_maxcut, MaxcutParams};
use crate::learned_mis::{learned_mis, MisParams};
use crate::learned_sc::{learned_set_cover, sc_delta};
use crate::learned_vc::{learned_vc, learned_weighted_vc, VcParams};
use crate::predictions::{
    derive_seed, gen_maxcut_predictions, gen_mis_predictions, gen_sc_predictions,
    gen_vc_predictions, GroundTruth, PredictionTable,
};
use crate::stats;

pub const CSV_HEADER: &str = "problem,dataset,algorithm,epsilon,delta,trial,seed,value,opt,ratio,runtime_ms";
pub const THREADS_ENV: &str = "PREDGRAPH_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Problem {
    Vc,
    Wvc,
    Mis,
    Sc,
    Maxcut,
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::Vc => "vc",
            Problem::Wvc => "wvc",
            Problem::Mis => "mis",
            Problem::Sc => "sc",
            Problem::Maxcut => "maxcut",
        }
    }

    pub fn is_minimization(self) -> bool {
        matches!(self, Problem::Vc | Problem::Wvc | Problem::Sc)
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "vc" => Problem::Vc,
            "wvc" => Problem::Wvc,
            "mis" => Problem::Mis,
            "sc" => Problem::Sc,
            "maxcut" => Problem::Maxcut,
            _ => return domain(format!("unknown problem '{s}'")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    LearnedVc,
    Vc2,
    LearnedWvc,
    Wvc2,
    LearnedSc,
    GreedySc,
    LearnedMis,
    PredOnlyMis,
    GreedyMis,
    LearnedMaxcut,
    LsMaxcut,
}

impl Algorithm {
    pub const ALL: [Algorithm; 11] = [
        Algorithm::LearnedVc,
        Algorithm::Vc2,
        Algorithm::LearnedWvc,
        Algorithm::Wvc2,
        Algorithm::LearnedSc,
        Algorithm::GreedySc,
        Algorithm::LearnedMis,
        Algorithm::PredOnlyMis,
        Algorithm::GreedyMis,
        Algorithm::LearnedMaxcut,
        Algorithm::LsMaxcut,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::LearnedVc => "learned-vc",
            Algorithm::Vc2 => "vc2",
            Algorithm::LearnedWvc => "learned-wvc",
            Algorithm::Wvc2 => "wvc2",
            Algorithm::LearnedSc => "learned-sc",
            Algorithm::GreedySc => "greedy-sc",
            Algorithm::LearnedMis => "learned-mis",
            Algorithm::PredOnlyMis => "pred-only-mis",
            Algorithm::GreedyMis => "greedy-mis",
            Algorithm::LearnedMaxcut => "learned-maxcut",
            Algorithm::LsMaxcut => "ls-maxcut",
        }
    }

    pub fn problem(self) -> Problem {
        match self {
            Algorithm::LearnedVc | Algorithm::Vc2 => Problem::Vc,
            Algorithm::LearnedWvc | Algorithm::Wvc2 => Problem::Wvc,
            Algorithm::LearnedSc | Algorithm::GreedySc => Problem::Sc,
            Algorithm::LearnedMis | Algorithm::PredOnlyMis | Algorithm::GreedyMis => Problem::Mis,
            Algorithm::LearnedMaxcut | Algorithm::LsMaxcut => Problem::Maxcut,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .map_or_else(|| domain(format!("unknown algorithm '{s}'")), Ok)
    }
}

/// Synthetic instance family, written `kind:key=value,...`.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    Er { n: usize, p: f64, seed: u64 },
    PlantedVc { cover: usize, free: usize, p: f64, seed: u64 },
    PlantedMis { indep: usize, rest: usize, attach: usize, p: f64, seed: u64 },
    PlantedSc { m: usize, blocks: usize, extra: usize, min: usize, max: usize, seed: u64 },
}

impl GeneratorSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            GeneratorSpec::Er { .. } => "er",
            GeneratorSpec::PlantedVc { .. } => "planted-vc",
            GeneratorSpec::PlantedMis { .. } => "planted-mis",
            GeneratorSpec::PlantedSc { .. } => "planted-sc",
        }
    }
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::Domain(format!("bad value '{v}' for '{key}'")))
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut kv = BTreeMap::new();
        for part in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Domain(format!("expected key=value, got '{part}'")))?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        let mut take = |k: &str| {
            kv.remove(k)
                .ok_or_else(|| Error::Domain(format!("generator '{kind}' needs '{k}'")))
        };
        let seed = |kv: &mut BTreeMap<String, String>| -> Result<u64> {
            kv.remove("seed").map_or(Ok(0), |v| parse_num("seed", &v))
        };
        let spec = match kind.trim() {
            "er" => GeneratorSpec::Er {
                n: parse_num("n", &take("n")?)?,
                p: parse_num("p", &take("p")?)?,
                seed: 0,
            },
            "planted-vc" => GeneratorSpec::PlantedVc {
                cover: parse_num("cover", &take("cover")?)?,
                free: parse_num("free", &take("free")?)?,
                p: parse_num("p", &take("p")?)?,
                seed: 0,
            },
            "planted-mis" => GeneratorSpec::PlantedMis {
                indep: parse_num("indep", &take("indep")?)?,
                rest: parse_num("rest", &take("rest")?)?,
                attach: parse_num("attach", &take("attach")?)?,
                p: parse_num("p", &take("p")?)?,
                seed: 0,
            },
            "planted-sc" => GeneratorSpec::PlantedSc {
                m: parse_num("m", &take("m")?)?,
                blocks: parse_num("blocks", &take("blocks")?)?,
                extra: parse_num("extra", &take("extra")?)?,
                min: parse_num("min", &take("min")?)?,
                max: parse_num("max", &take("max")?)?,
                seed: 0,
            },
            other => return domain(format!("unknown generator '{other}'")),
        };
        let s = seed(&mut kv)?;
        if let Some(k) = kv.keys().next() {
            return domain(format!("unknown generator key '{k}'"));
        }
        Ok(match spec {
            GeneratorSpec::Er { n, p, .. } => GeneratorSpec::Er { n, p, seed: s },
            GeneratorSpec::PlantedVc { cover, free, p, .. } => {
                GeneratorSpec::PlantedVc { cover, free, p, seed: s }
            }
            GeneratorSpec::PlantedMis { indep, rest, attach, p, .. } => {
                GeneratorSpec::PlantedMis { indep, rest, attach, p, seed: s }
            }
            GeneratorSpec::PlantedSc { m, blocks, extra, min, max, .. } => {
                GeneratorSpec::PlantedSc { m, blocks, extra, min, max, seed: s }
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSource {
    /// Edge list (or set-system file for `sc`), optionally with a
    /// `label weight` file.
    File { path: PathBuf, weights: Option<PathBuf> },
    Generator(GeneratorSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problem: Problem,
    pub dataset: String,
    pub source: InstanceSource,
    pub algorithms: Vec<Algorithm>,
    pub epsilons: Vec<f64>,
    pub delta: Option<usize>,
    pub trials: usize,
    pub seed: u64,
    pub output: Option<PathBuf>,
    /// Uniform random vertex weights for `wvc` when the source has none.
    pub vertex_weights: Option<(f64, f64)>,
    /// Keep only a BFS ball of this many vertices around the max-degree vertex.
    pub prune: Option<usize>,
    pub eta: f64,
    pub iterations: usize,
    pub allow_large_epsilon: bool,
    pub exact_node_limit: u64,
    /// Fill `runtime_ms`. Off by default so that repeated runs are
    /// byte-identical.
    pub timing: bool,
    /// Worker count; falls back to `PREDGRAPH_THREADS`, then all cores.
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(problem: Problem, source: InstanceSource, algorithms: Vec<Algorithm>) -> Self {
        let dataset = match &source {
            InstanceSource::File { path, .. } => path
                .file_stem()
                .map_or_else(|| "input".into(), |s| s.to_string_lossy().into_owned()),
            InstanceSource::Generator(g) => g.kind().to_string(),
        };
        Self {
            problem,
            dataset,
            source,
            algorithms,
            epsilons: vec![0.1, 0.15, 0.2, 0.25, 0.3, 0.35],
            delta: None,
            trials: 10,
            seed: 0,
            output: None,
            vertex_weights: None,
            prune: None,
            eta: 0.1,
            iterations: 2000,
            allow_large_epsilon: false,
            exact_node_limit: ExactBudget::default().node_limit,
            timing: false,
            threads: None,
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    /// Parses config text; relative paths resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut kv: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: format!("expected key = value, got '{line}'"),
            })?;
            kv.insert(k.trim().to_string(), (i + 1, v.trim().to_string()));
        }
        let mut take = |k: &str| kv.remove(k).map(|p| p.1);
        let resolve = |p: String| {
            let p = PathBuf::from(p);
            if p.is_relative() {
                base.join(p)
            } else {
                p
            }
        };

        let problem: Problem = take("problem")
            .ok_or_else(|| Error::Domain("config needs 'problem'".into()))?
            .parse()?;
        let source = match (take("input"), take("generator")) {
            (Some(p), None) => InstanceSource::File {
                path: resolve(p),
                weights: take("weights_file").map(resolve),
            },
            (None, Some(g)) => InstanceSource::Generator(g.parse()?),
            _ => return domain("config needs exactly one of 'input' or 'generator'"),
        };
        let algorithms = take("algorithms")
            .ok_or_else(|| Error::Domain("config needs 'algorithms'".into()))?
            .split(',')
            .map(|a| a.trim().parse())
            .collect::<Result<Vec<_>>>()?;

        let mut cfg = Self::new(problem, source, algorithms);
        if let Some(d) = take("dataset") {
            cfg.dataset = d;
        }
        if let Some(e) = take("epsilons") {
            cfg.epsilons = parse_epsilons(&e)?;
        }
        if let Some(d) = take("delta") {
            cfg.delta = Some(parse_num("delta", &d)?);
        }
        if let Some(t) = take("trials") {
            cfg.trials = parse_num("trials", &t)?;
        }
        if let Some(s) = take("seed") {
            cfg.seed = parse_num("seed", &s)?;
        }
        cfg.output = take("output").map(resolve);
        if let Some(w) = take("vertex_weights") {
            let (lo, hi) = w
                .split_once(',')
                .ok_or_else(|| Error::Domain("vertex_weights expects 'lo,hi'".into()))?;
            cfg.vertex_weights = Some((parse_num("vertex_weights", lo)?, parse_num("vertex_weights", hi)?));
        }
        if let Some(p) = take("prune") {
            cfg.prune = Some(parse_num("prune", &p)?);
        }
        if let Some(e) = take("eta") {
            cfg.eta = parse_num("eta", &e)?;
        }
        if let Some(i) = take("iterations") {
            cfg.iterations = parse_num("iterations", &i)?;
        }
        if let Some(b) = take("allow_large_epsilon") {
            cfg.allow_large_epsilon = parse_bool("allow_large_epsilon", &b)?;
        }
        if let Some(n) = take("exact_node_limit") {
            cfg.exact_node_limit = parse_num("exact_node_limit", &n)?;
        }
        if let Some(t) = take("timing") {
            cfg.timing = parse_bool("timing", &t)?;
        }
        if let Some(t) = take("threads") {
            cfg.threads = Some(parse_num("threads", &t)?);
        }
        if let Some((k, (line, _))) = kv.into_iter().next() {
            return Err(Error::Parse {
                line,
                msg: format!("unknown key '{k}'"),
            });
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return domain("trials must be at least 1");
        }
        if self.algorithms.is_empty() {
            return domain("no algorithms configured");
        }
        if self.epsilons.is_empty() {
            return domain("epsilon grid is empty");
        }
        if self.delta == Some(0) {
            return domain("delta must be at least 1");
        }
        if self.threads == Some(0) {
            return domain("threads must be at least 1");
        }
        if self.exact_node_limit == 0 {
            return domain("exact_node_limit must be positive");
        }
        for a in &self.algorithms {
            if a.problem() != self.problem {
                return domain(format!("algorithm {a} does not solve {}", self.problem));
            }
        }
        for &e in &self.epsilons {
            if !(e > 0.0 && e < 0.5) {
                return domain(format!("epsilon {e} outside (0, 1/2)"));
            }
            if e > 0.25 && !self.allow_large_epsilon && self.algorithms.contains(&Algorithm::LearnedMis) {
                return domain(format!(
                    "epsilon {e} exceeds 1/4 for learned-mis; set allow_large_epsilon = true"
                ));
            }
        }
        if self.problem == Problem::Maxcut && !(self.eta > 0.0 && self.eta < 1.0) {
            return domain("eta must lie in (0, 1)");
        }
        Ok(())
    }
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "on" | "yes" | "1" => Ok(true),
        "false" | "off" | "no" | "0" => Ok(false),
        _ => domain(format!("bad boolean '{v}' for '{key}'")),
    }
}

/// Either a comma list or `start:stop:step` (inclusive, rounded to 1e-9).
pub fn parse_epsilons(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let start: f64 = parse_num("epsilons", parts[0])?;
        let stop: f64 = parse_num("epsilons", parts[1])?;
        let step: f64 = parse_num("epsilons", parts[2])?;
        if !(step > 0.0) || stop < start {
            return domain("epsilon range needs start <= stop and step > 0");
        }
        let k = ((stop - start) / step + 1e-9).floor() as usize;
        return Ok((0..=k)
            .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
            .collect());
    }
    s.split(',').map(|e| parse_num("epsilons", e)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum InstanceData {
    Graph(Graph),
    Sets(SetSystem),
}

/// A loaded instance with its cached optimum and the ground truth used to
/// generate predictions.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub dataset: String,
    pub data: InstanceData,
    /// Optimal value, when the exact oracle finished within budget.
    pub opt: Option<f64>,
    pub truth: GroundTruth,
    /// Where `truth` came from: `exact`, `planted` or `heuristic`.
    pub truth_source: &'static str,
}

fn load_graph(cfg: &ExperimentConfig) -> Result<(Graph, Option<Vec<usize>>)> {
    let (mut g, planted) = match &cfg.source {
        InstanceSource::File { path, weights } => {
            let lg = load_edge_list(BufReader::new(File::open(path)?), false)?;
            let lg = match weights {
                Some(w) => load_vertex_weights(BufReader::new(File::open(w)?), lg)?,
                None => lg,
            };
            (lg.graph, None)
        }
        InstanceSource::Generator(spec) => match *spec {
            GeneratorSpec::Er { n, p, seed } => (gen_er_graph(n, p, seed)?, None),
            GeneratorSpec::PlantedVc { cover, free, p, seed } => {
                let (g, c) = gen_planted_vc(cover, free, p, seed)?;
                (g, Some(c))
            }
            GeneratorSpec::PlantedMis { indep, rest, attach, p, seed } => {
                let (g, s) = gen_planted_mis(indep, rest, attach, p, seed)?;
                (g, Some(s))
            }
            GeneratorSpec::PlantedSc { .. } => {
                return domain("set-cover generator used for a graph problem")
            }
        },
    };
    let mut planted = planted;
    if let Some(k) = cfg.prune {
        let (pg, back) = g.prune_bfs_ball(k)?;
        planted = planted.map(|p: Vec<VertexId>| {
            let keep = mask(g.n(), &p);
            (0..back.len()).filter(|&i| keep[back[i]]).collect()
        });
        g = pg;
    }
    if cfg.problem == Problem::Wvc && !g.has_vertex_weights() {
        let (lo, hi) = cfg
            .vertex_weights
            .ok_or_else(|| Error::Domain("wvc needs vertex weights or 'vertex_weights'".into()))?;
        g = random_vertex_weights(g, lo, hi, derive_seed(cfg.seed, &[u64::MAX]))?;
    }
    Ok((g, planted))
}

/// Loads the instance and computes its optimum once.
pub fn prepare_instance(cfg: &ExperimentConfig) -> Result<Instance> {
    let budget = ExactBudget::new(cfg.exact_node_limit, Duration::MAX)?;
    let dataset = cfg.dataset.clone();
    if cfg.problem == Problem::Sc {
        let (ss, planted) = match &cfg.source {
            InstanceSource::File { path, .. } => {
                (load_set_system(BufReader::new(File::open(path)?))?, None)
            }
            InstanceSource::Generator(GeneratorSpec::PlantedSc { m, blocks, extra, min, max, seed }) => {
                let (ss, p) = gen_planted_set_cover(*m, *blocks, *extra, *min, *max, *seed)?;
                (ss, Some(p))
            }
            InstanceSource::Generator(_) => return domain("sc needs the planted-sc generator"),
        };
        let exact = exact_set_cover(&ss, budget).optimal();
        let opt = exact.as_ref().map(|s| s.len() as f64);
        let (truth, src) = match (exact, planted) {
            (Some(s), _) => (s, "exact"),
            (None, Some(p)) => (p, "planted"),
            (None, None) => {
                let all: Vec<usize> = (0..ss.m()).collect();
                let every: Vec<usize> = (0..ss.n()).collect();
                (greedy_set_cover(&ss, &all, &every)?, "heuristic")
            }
        };
        return Ok(Instance {
            dataset,
            data: InstanceData::Sets(ss),
            opt,
            truth: GroundTruth::SetCover(truth),
            truth_source: src,
        });
    }

    let (g, planted) = load_graph(cfg)?;
    let (opt, truth, src) = match cfg.problem {
        Problem::Vc => match exact_vc(&g, budget).optimal() {
            Some(c) => (Some(c.len() as f64), GroundTruth::VertexCover(c), "exact"),
            None => match planted {
                Some(c) => (None, GroundTruth::VertexCover(c), "planted"),
                None => (None, GroundTruth::VertexCover(vc_2approx_matching(&g)), "heuristic"),
            },
        },
        Problem::Wvc => match exact_weighted_vc(&g, budget).optimal() {
            Some((w, c)) => (Some(w), GroundTruth::VertexCover(c), "exact"),
            None => match planted {
                Some(c) => (None, GroundTruth::VertexCover(c), "planted"),
                None => (None, GroundTruth::VertexCover(weighted_vc_2approx(&g)?), "heuristic"),
            },
        },
        Problem::Mis => match exact_mis(&g, budget).optimal() {
            Some(s) => (Some(s.len() as f64), GroundTruth::IndependentSet(s), "exact"),
            None => match planted {
                Some(s) => (None, GroundTruth::IndependentSet(s), "planted"),
                None => (None, GroundTruth::IndependentSet(greedy_mis_min_degree(&g)), "heuristic"),
            },
        },
        Problem::Maxcut => match exact_maxcut(&g, budget).optimal() {
            Some((v, x)) => (Some(v), GroundTruth::Cut(x), "exact"),
            None => {
                let (_, x) = maxcut_local_search(&g, &LocalSearchStart::Greedy, cfg.seed);
                (None, GroundTruth::Cut(x), "heuristic")
            }
        },
        Problem::Sc => unreachable!(),
    };
    truth.check_graph(&g)?;
    Ok(Instance {
        dataset,
        data: InstanceData::Graph(g),
        opt,
        truth,
        truth_source: src,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub problem: Problem,
    pub dataset: String,
    pub algorithm: Algorithm,
    pub epsilon: f64,
    /// Degree threshold used, for learned algorithms.
    pub delta: Option<usize>,
    pub trial: usize,
    pub seed: u64,
    /// `None` when the trial failed; see `error`.
    pub value: Option<f64>,
    pub opt: Option<f64>,
    pub ratio: Option<f64>,
    pub runtime_ms: Option<f64>,
    pub error: Option<String>,
}

fn opt_str<T: fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(String::new, ToString::to_string)
}

/// Aggregates are printed at fixed precision; `-0` is normalised.
fn stat_str(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| {
        let s = format!("{x:.6}");
        if s.trim_start_matches('-').bytes().all(|b| b == b'0' || b == b'.') {
            "0.000000".into()
        } else {
            s
        }
    })
}

impl TrialRecord {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.problem,
            self.dataset,
            self.algorithm,
            self.epsilon,
            opt_str(&self.delta),
            self.trial,
            self.seed,
            opt_str(&self.value),
            opt_str(&self.opt),
            opt_str(&self.ratio),
            opt_str(&self.runtime_ms),
        )
    }
}

fn ratio(value: f64, opt: f64) -> f64 {
    if value == opt {
        1.0
    } else {
        value / opt
    }
}

fn predictions_for(inst: &Instance, eps: f64, seed: u64) -> Result<PredictionTable> {
    match (&inst.data, &inst.truth) {
        (InstanceData::Sets(ss), t) => gen_sc_predictions(ss, t, eps, seed),
        (InstanceData::Graph(g), t @ GroundTruth::VertexCover(_)) => gen_vc_predictions(g, t, eps, seed),
        (InstanceData::Graph(g), t @ GroundTruth::IndependentSet(_)) => gen_mis_predictions(g, t, eps, seed),
        (InstanceData::Graph(g), t @ GroundTruth::Cut(_)) => gen_maxcut_predictions(g, t, eps, seed),
        _ => domain("ground truth does not match the instance"),
    }
}

/// Runs one algorithm and re-verifies feasibility. Returns `(value, Δ)`.
fn run_algorithm(
    cfg: &ExperimentConfig,
    inst: &Instance,
    alg: Algorithm,
    eps: f64,
    preds: &PredictionTable,
    seed: u64,
) -> Result<(f64, Option<usize>)> {
    let infeasible = |what: &str| Err(Error::Invariant(format!("{alg} returned an infeasible {what}")));
    match &inst.data {
        InstanceData::Sets(ss) => {
            let (sets, delta) = match alg {
                Algorithm::LearnedSc => {
                    let s = learned_set_cover(ss, preds, eps, cfg.delta)?;
                    (s.sets, Some(cfg.delta.unwrap_or_else(|| sc_delta(eps))))
                }
                Algorithm::GreedySc => {
                    let all: Vec<usize> = (0..ss.m()).collect();
                    let every: Vec<usize> = (0..ss.n()).collect();
                    (greedy_set_cover(ss, &all, &every)?, None)
                }
                _ => return domain(format!("{alg} does not solve set cover")),
            };
            if !ss.is_cover(&sets) {
                return infeasible("set cover");
            }
            Ok((sets.len() as f64, delta))
        }
        InstanceData::Graph(g) => {
            let vc_params = || {
                let p = VcParams::new(eps);
                match cfg.delta {
                    Some(d) => p.with_delta(d),
                    None => p,
                }
            };
            match alg {
                Algorithm::LearnedVc | Algorithm::Vc2 | Algorithm::LearnedWvc | Algorithm::Wvc2 => {
                    let weighted = matches!(alg, Algorithm::LearnedWvc | Algorithm::Wvc2);
                    let (cover, delta) = match alg {
                        Algorithm::LearnedVc => {
                            let p = vc_params();
                            (learned_vc(g, preds, &p, &MatchingCover)?.cover, Some(p.delta()))
                        }
                        Algorithm::LearnedWvc => {
                            let p = vc_params();
                            (learned_weighted_vc(g, preds, &p, &LocalRatioCover)?.cover, Some(p.delta()))
                        }
                        Algorithm::Vc2 => (vc_2approx_matching(g), None),
                        _ => (weighted_vc_2approx(g)?, None),
                    };
                    if !g.is_vertex_cover(&cover) {
                        return infeasible("vertex cover");
                    }
                    let value = if weighted { g.set_weight(&cover) } else { cover.len() as f64 };
                    Ok((value, delta))
                }
                Algorithm::LearnedMis | Algorithm::PredOnlyMis | Algorithm::GreedyMis => {
                    let (set, delta) = match alg {
                        Algorithm::LearnedMis => {
                            let mut p = MisParams::new(eps);
                            if let Some(d) = cfg.delta {
                                p = p.with_delta(d);
                            }
                            if cfg.allow_large_epsilon {
                                p = p.allow_large_epsilon();
                            }
                            (learned_mis(g, preds, &p, &MinDegreeGreedy)?.set, Some(p.delta()))
                        }
                        Algorithm::PredOnlyMis => (mis_predictions_only(g, preds)?, None),
                        _ => (greedy_mis_min_degree(g), None),
                    };
                    if !g.is_independent(&set) {
                        return infeasible("independent set");
                    }
                    Ok((set.len() as f64, delta))
                }
                Algorithm::LearnedMaxcut | Algorithm::LsMaxcut => {
                    let (x, delta) = if alg == Algorithm::LearnedMaxcut {
                        let mut p = MaxcutParams::new(eps);
                        p.eta = cfg.eta;
                        p.delta = cfg.delta;
                        p.iterations = cfg.iterations;
                        p.seed = seed;
                        (learned_maxcut(g, preds, &p)?.assignment, Some(p.delta()))
                    } else {
                        (maxcut_local_search(g, &LocalSearchStart::Greedy, seed).1, None)
                    };
                    if x.len() != g.n() || x.iter().any(|&s| s != 1 && s != -1) {
                        return infeasible("cut assignment");
                    }
                    Ok((g.cut_value(&x), delta))
                }
                _ => domain(format!("{alg} does not run on graphs")),
            }
        }
    }
}

/// Worker count from `PREDGRAPH_THREADS`, else rayon's default.
pub fn thread_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(rayon::current_num_threads)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub instance: Instance,
    /// Ordered by algorithm (config order), then ε, then trial.
    pub records: Vec<TrialRecord>,
    pub summary: Vec<SummaryRow>,
}

/// Runs every `(algorithm, ε, trial)` cell on a worker pool. Per-trial
/// errors are recorded; only setup failures abort.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let inst = prepare_instance(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.unwrap_or_else(thread_count))
        .build()
        .map_err(|e| Error::Io(e.to_string()))?;

    let work: Vec<(usize, usize)> = (0..cfg.epsilons.len())
        .flat_map(|ei| (0..cfg.trials).map(move |t| (ei, t)))
        .collect();
    let per_trial: Vec<Vec<TrialRecord>> = pool.install(|| {
        work.par_iter()
            .map(|&(ei, t)| run_trial(cfg, &inst, ei, t))
            .collect()
    });

    let mut records: Vec<TrialRecord> = per_trial.into_iter().flatten().collect();
    let pos = |a: Algorithm| cfg.algorithms.iter().position(|&b| b == a).unwrap_or(usize::MAX);
    let eps_pos = |e: f64| cfg.epsilons.iter().position(|&x| x == e).unwrap_or(usize::MAX);
    records.sort_by_key(|r| (pos(r.algorithm), eps_pos(r.epsilon), r.trial));
    let summary = summarize(&records, cfg.seed);
    Ok(ExperimentOutput {
        instance: inst,
        records,
        summary,
    })
}

fn run_trial(cfg: &ExperimentConfig, inst: &Instance, ei: usize, t: usize) -> Vec<TrialRecord> {
    let eps = cfg.epsilons[ei];
    let seed = derive_seed(cfg.seed, &[ei as u64, t as u64]);
    let preds = predictions_for(inst, eps, seed);
    cfg.algorithms
        .iter()
        .map(|&alg| {
            let start = Instant::now();
            let outcome = preds
                .as_ref()
                .map_err(Clone::clone)
                .and_then(|p| run_algorithm(cfg, inst, alg, eps, p, seed));
            let elapsed = start.elapsed().as_secs_f64() * 1000.0;
            let (value, delta, error) = match outcome {
                Ok((v, d)) => (Some(v), d, None),
                Err(e) => (None, None, Some(e.to_string())),
            };
            TrialRecord {
                problem: cfg.problem,
                dataset: inst.dataset.clone(),
                algorithm: alg,
                epsilon: eps,
                delta,
                trial: t,
                seed,
                value,
                opt: inst.opt,
                ratio: value.zip(inst.opt).map(|(v, o)| ratio(v, o)),
                runtime_ms: cfg.timing.then_some(elapsed),
                error,
            }
        })
        .collect()
}

/// Aggregate of one `(problem, algorithm, ε)` cell. Statistics are over
/// ratios when the optimum is known, else over raw values.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub problem: Problem,
    pub algorithm: Algorithm,
    pub epsilon: f64,
    pub metric: &'static str,
    pub ok: usize,
    pub failed: usize,
    pub mean: Option<f64>,
    pub std: Option<f64>,
    pub ci: Option<(f64, f64)>,
}

pub const SUMMARY_HEADER: &str = "problem,algorithm,epsilon,metric,ok,failed,mean,std,ci_low,ci_high";

impl SummaryRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.problem,
            self.algorithm,
            self.epsilon,
            self.metric,
            self.ok,
            self.failed,
            stat_str(self.mean),
            stat_str(self.std),
            stat_str(self.ci.map(|c| c.0)),
            stat_str(self.ci.map(|c| c.1)),
        )
    }
}

/// Per-cell mean, standard deviation and 95% bootstrap interval, ordered by
/// `(problem, algorithm name, ε)`. Cells with no successful trial keep a row
/// with empty statistics.
pub fn summarize(records: &[TrialRecord], seed: u64) -> Vec<SummaryRow> {
    let mut cells: BTreeMap<(Problem, &'static str, u64), Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        cells
            .entry((r.problem, r.algorithm.name(), r.epsilon.to_bits()))
            .or_default()
            .push(r);
    }
    cells
        .into_values()
        .enumerate()
        .map(|(i, rs)| {
            let first = rs[0];
            let ok: Vec<&TrialRecord> = rs.iter().copied().filter(|r| r.value.is_some()).collect();
            let use_ratio = !ok.is_empty() && ok.iter().all(|r| r.ratio.is_some());
            let xs: Vec<f64> = ok
                .iter()
                .map(|r| if use_ratio { r.ratio } else { r.value }.unwrap())
                .collect();
            SummaryRow {
                problem: first.problem,
                algorithm: first.algorithm,
                epsilon: first.epsilon,
                metric: if use_ratio { "ratio" } else { "value" },
                ok: ok.len(),
                failed: rs.len() - ok.len(),
                mean: stats::mean(&xs),
                std: stats::std_dev(&xs),
                ci: stats::bootstrap_ci(&xs, 0.95, stats::DEFAULT_RESAMPLES, derive_seed(seed, &[i as u64])),
            }
        })
        .collect()
}

pub fn write_records_csv<W: Write>(mut out: W, records: &[TrialRecord]) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.csv_line())?;
    }
    Ok(())
}

pub fn write_summary_csv<W: Write>(mut out: W, rows: &[SummaryRow]) -> Result<()> {
    writeln!(out, "{SUMMARY_HEADER}")?;
    for r in rows {
        writeln!(out, "{}", r.csv_line())?;
    }
    Ok(())
}

/// One row per ε, one mean column per algorithm.
pub fn write_plot_table<W: Write>(mut out: W, rows: &[SummaryRow], algorithms: &[Algorithm]) -> Result<()> {
    let mut eps: Vec<f64> = rows.iter().map(|r| r.epsilon).collect();
    eps.sort_by(f64::total_cmp);
    eps.dedup();
    let names: Vec<&str> = algorithms.iter().map(|a| a.name()).collect();
    writeln!(out, "epsilon,{}", names.join(","))?;
    for e in eps {
        let cols: Vec<String> = algorithms
            .iter()
            .map(|&a| {
                rows.iter()
                    .find(|r| r.algorithm == a && r.epsilon == e)
                    .map_or_else(String::new, |r| stat_str(r.mean))
            })
            .collect();
        writeln!(out, "{e},{}", cols.join(","))?;
    }
    Ok(())
}
