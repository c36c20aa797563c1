use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use predgraph::baselines::{
    greedy_mis_min_degree, greedy_set_cover, maxcut_local_search, mis_predictions_only,
    vc_2approx_matching, weighted_vc_2approx, LocalRatioCover, LocalSearchStart, MatchingCover,
    MinDegreeGreedy,
};
use predgraph::exact::{exact_maxcut, exact_mis, exact_set_cover, exact_vc, exact_weighted_vc};
use predgraph::graph::{
    gen_er_graph, gen_planted_mis, gen_planted_set_cover, gen_planted_vc, load_edge_list,
    load_set_system, load_vertex_weights, write_edge_list, write_set_system,
};
use predgraph::harness::{
    run_experiment, write_plot_table, write_records_csv, write_summary_csv, GeneratorSpec,
};
use predgraph::learned_maxcut::{learned_maxcut, Provenance};
use predgraph::learned_mis::{learned_mis, MisBranch};
use predgraph::learned_sc::learned_set_cover;
use predgraph::learned_vc::{learned_vc, learned_weighted_vc};
use predgraph::predictions::{
    gen_maxcut_predictions, gen_mis_predictions, gen_sc_predictions, gen_vc_predictions,
};
use predgraph::{
    ExactBudget, ExperimentConfig, GroundTruth, LabeledGraph, MaxcutParams, MisParams,
    PredictionTable, SetSystem, VcParams,
};

/// Learning-augmented graph algorithms under noisy edge predictions.
#[derive(Parser)]
#[command(name = "predgraph", version, arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProblemArg {
    Vc,
    Wvc,
    Mis,
    Sc,
    Maxcut,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Baseline {
    Vc2,
    Wvc2,
    GreedySc,
    GreedyMis,
    LsMaxcut,
    PredOnlyMis,
}

#[derive(clap::Args)]
struct InputArgs {
    /// Edge list (`u v [w]`), or a set-system file for `sc`.
    #[arg(long)]
    input: PathBuf,
    /// `label weight` lines for weighted vertex cover.
    #[arg(long)]
    weights: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic graph as an edge list.
    GenGraph {
        /// e.g. `planted-mis:indep=20,rest=30,attach=12,p=0.25,seed=1`
        #[arg(long)]
        spec: String,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also write the planted solution, one vertex per line.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Write a synthetic set system.
    GenSetsystem {
        /// e.g. `planted-sc:m=24,blocks=3,extra=12,min=2,max=9,seed=1`
        #[arg(long)]
        spec: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Solve exactly and print `problem,value,assignment`.
    Exact {
        #[arg(long, value_enum)]
        problem: ProblemArg,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = ExactBudget::default().node_limit)]
        node_limit: u64,
    },
    /// Run a learned algorithm (or a baseline with `--algo`).
    Solve {
        #[arg(long, value_enum)]
        problem: ProblemArg,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        delta: Option<usize>,
        #[arg(long, default_value_t = 0.1)]
        eta: f64,
        #[arg(long, default_value_t = 2000)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        pred_seed: u64,
        /// Read predictions from a CSV written by `predict` instead of
        /// generating them.
        #[arg(long)]
        predictions: Option<PathBuf>,
        /// Ground truth for generated predictions, one vertex label (or set
        /// index) per line; defaults to the exact optimum.
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long, value_enum)]
        algo: Option<Baseline>,
        /// Accept ε above 1/4 for `mis`.
        #[arg(long)]
        allow_large_epsilon: bool,
    },
    /// Run an ε-sweep experiment from a config file.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Per-cell summary CSV.
        #[arg(long)]
        summary: Option<PathBuf>,
        /// ε × algorithm table of mean ratios.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Generate a prediction table as CSV.
    Predict {
        #[arg(long, value_enum)]
        problem: ProblemArg,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(
        File::open(path).with_context(|| format!("opening {}", path.display()))?,
    ))
}

enum Loaded {
    Graph(LabeledGraph),
    Sets(SetSystem),
}

fn load(problem: ProblemArg, input: &InputArgs) -> Result<Loaded> {
    if problem == ProblemArg::Sc {
        return Ok(Loaded::Sets(load_set_system(open(&input.input)?)?));
    }
    let mut lg = load_edge_list(open(&input.input)?, problem == ProblemArg::Maxcut)?;
    if let Some(w) = &input.weights {
        lg = load_vertex_weights(open(w)?, lg)?;
    }
    if problem == ProblemArg::Wvc && !lg.graph.has_vertex_weights() {
        bail!("weighted vertex cover needs --weights");
    }
    Ok(Loaded::Graph(lg))
}

fn budget(node_limit: u64) -> ExactBudget {
    ExactBudget {
        node_limit,
        ..ExactBudget::default()
    }
}

fn labels_of(lg: &LabeledGraph, set: &[usize]) -> String {
    set.iter().map(|&v| lg.labels[v].as_str()).collect::<Vec<_>>().join(" ")
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::GenGraph { spec, output: out, truth } => gen_graph(&spec, out.as_deref(), truth.as_deref()),
        Command::GenSetsystem { spec, output: out } => {
            let GeneratorSpec::PlantedSc { m, blocks, extra, min, max, seed } = spec.parse()? else {
                bail!("gen-setsystem needs a planted-sc spec");
            };
            let (ss, _) = gen_planted_set_cover(m, blocks, extra, min, max, seed)?;
            let mut w = output(out.as_deref())?;
            write_set_system(&mut w, &ss)?;
            w.flush()?;
            Ok(())
        }
        Command::Exact { problem, input, node_limit } => exact(problem, &input, node_limit),
        Command::Solve {
            problem,
            input,
            epsilon,
            delta,
            eta,
            iters,
            pred_seed,
            predictions,
            truth,
            algo,
            allow_large_epsilon,
        } => {
            let data = load(problem, &input)?;
            if let Some(algo) = algo {
                return baseline(problem, &data, algo, epsilon, pred_seed, predictions.as_deref(), truth.as_deref());
            }
            let eps = epsilon.ok_or_else(|| anyhow!("--epsilon is required for learned algorithms"))?;
            let preds = match &predictions {
                Some(p) => PredictionTable::read_csv(open(p)?)?,
                None => generate(problem, &data, eps, pred_seed, truth.as_deref())?,
            };
            solve(problem, &data, &preds, eps, delta, eta, iters, pred_seed, allow_large_epsilon)
        }
        Command::Experiment { config, summary, plot } => {
            let cfg = ExperimentConfig::from_file(&config)?;
            let out = run_experiment(&cfg)?;
            let mut w = output(cfg.output.as_deref())?;
            write_records_csv(&mut w, &out.records)?;
            w.flush()?;
            for r in out.records.iter().filter(|r| r.error.is_some()) {
                eprintln!(
                    "warning: {} eps={} trial={} failed: {}",
                    r.algorithm,
                    r.epsilon,
                    r.trial,
                    r.error.as_deref().unwrap_or("")
                );
            }
            for s in out.summary.iter().filter(|s| s.ok == 0) {
                eprintln!("warning: every trial failed for {} at eps={}", s.algorithm, s.epsilon);
            }
            if let Some(p) = summary {
                let mut w = output(Some(&p))?;
                write_summary_csv(&mut w, &out.summary)?;
                w.flush()?;
            }
            if let Some(p) = plot {
                let mut w = output(Some(&p))?;
                write_plot_table(&mut w, &out.summary, &cfg.algorithms)?;
                w.flush()?;
            }
            Ok(())
        }
        Command::Predict { problem, input, epsilon, seed, truth, output: out } => {
            let data = load(problem, &input)?;
            let preds = generate(problem, &data, epsilon, seed, truth.as_deref())?;
            let mut w = output(out.as_deref())?;
            preds.write_csv(&mut w)?;
            w.flush()?;
            Ok(())
        }
    }
}

fn gen_graph(spec: &str, out: Option<&Path>, truth: Option<&Path>) -> Result<()> {
    let (g, planted) = match spec.parse::<GeneratorSpec>()? {
        GeneratorSpec::Er { n, p, seed } => (gen_er_graph(n, p, seed)?, None),
        GeneratorSpec::PlantedVc { cover, free, p, seed } => {
            let (g, c) = gen_planted_vc(cover, free, p, seed)?;
            (g, Some(c))
        }
        GeneratorSpec::PlantedMis { indep, rest, attach, p, seed } => {
            let (g, s) = gen_planted_mis(indep, rest, attach, p, seed)?;
            (g, Some(s))
        }
        GeneratorSpec::PlantedSc { .. } => bail!("use gen-setsystem for set systems"),
    };
    let isolated = (0..g.n()).filter(|&v| g.degree(v).unwrap_or(0) == 0).count();
    if isolated > 0 {
        eprintln!("warning: {isolated} isolated vertices are not representable in an edge list");
    }
    let mut w = output(out)?;
    write_edge_list(&mut w, &g, None)?;
    w.flush()?;
    if let Some(t) = truth {
        let planted = planted.ok_or_else(|| anyhow!("this generator has no planted solution"))?;
        let mut w = output(Some(t))?;
        for v in planted {
            writeln!(w, "{v}")?;
        }
        w.flush()?;
    }
    Ok(())
}

fn exact(problem: ProblemArg, input: &InputArgs, node_limit: u64) -> Result<()> {
    let data = load(problem, input)?;
    let b = budget(node_limit);
    let unknown = || anyhow!("optimum not certified within the node budget");
    let line = match (&data, problem) {
        (Loaded::Sets(ss), _) => {
            let opt = exact_set_cover(ss, b).optimal().ok_or_else(unknown)?;
            format!("sc,{},{}", opt.len(), join(&opt))
        }
        (Loaded::Graph(lg), ProblemArg::Vc) => {
            let c = exact_vc(&lg.graph, b).optimal().ok_or_else(unknown)?;
            format!("vc,{},{}", c.len(), labels_of(lg, &c))
        }
        (Loaded::Graph(lg), ProblemArg::Wvc) => {
            let (w, c) = exact_weighted_vc(&lg.graph, b).optimal().ok_or_else(unknown)?;
            format!("wvc,{w},{}", labels_of(lg, &c))
        }
        (Loaded::Graph(lg), ProblemArg::Mis) => {
            let s = exact_mis(&lg.graph, b).optimal().ok_or_else(unknown)?;
            format!("mis,{},{}", s.len(), labels_of(lg, &s))
        }
        (Loaded::Graph(lg), _) => {
            let (v, x) = exact_maxcut(&lg.graph, b).optimal().ok_or_else(unknown)?;
            let sides: Vec<String> = x
                .iter()
                .enumerate()
                .map(|(i, &s)| format!("{}:{}", lg.labels[i], if s > 0 { "+1" } else { "-1" }))
                .collect();
            format!("maxcut,{v},{}", sides.join(" "))
        }
    };
    println!("{line}");
    Ok(())
}

/// One label (or set index) per line.
fn read_truth_ids(path: &Path, lookup: impl Fn(&str) -> Option<usize>) -> Result<Vec<usize>> {
    let mut ids = Vec::new();
    for line in open(path)?.lines() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        ids.push(lookup(t).ok_or_else(|| anyhow!("unknown truth entry '{t}'"))?);
    }
    Ok(ids)
}

/// Ground truth from `--truth`, else the exact optimum, else a heuristic
/// solution (with a warning).
fn ground_truth(problem: ProblemArg, data: &Loaded, truth: Option<&Path>) -> Result<GroundTruth> {
    let b = ExactBudget::default();
    let fallback = |what: &str| eprintln!("warning: optimum unknown, predictions follow the {what} solution");
    Ok(match (data, problem) {
        (Loaded::Sets(ss), _) => GroundTruth::SetCover(match truth {
            Some(p) => read_truth_ids(p, |t| t.parse().ok())?,
            None => match exact_set_cover(ss, b).optimal() {
                Some(s) => s,
                None => {
                    fallback("greedy");
                    let all: Vec<usize> = (0..ss.m()).collect();
                    let every: Vec<usize> = (0..ss.n()).collect();
                    greedy_set_cover(ss, &all, &every)?
                }
            },
        }),
        (Loaded::Graph(lg), ProblemArg::Maxcut) => {
            let g = &lg.graph;
            GroundTruth::Cut(match truth {
                Some(p) => {
                    let plus = read_truth_ids(p, |t| lg.id_of(t))?;
                    let mut x = vec![-1i8; g.n()];
                    for v in plus {
                        x[v] = 1;
                    }
                    x
                }
                None => match exact_maxcut(g, b).optimal() {
                    Some((_, x)) => x,
                    None => {
                        fallback("local-search");
                        maxcut_local_search(g, &LocalSearchStart::Greedy, 0).1
                    }
                },
            })
        }
        (Loaded::Graph(lg), p) => {
            let g = &lg.graph;
            let given = truth.map(|t| read_truth_ids(t, |s| lg.id_of(s))).transpose()?;
            match p {
                ProblemArg::Mis => GroundTruth::IndependentSet(match given {
                    Some(s) => s,
                    None => exact_mis(g, b).optimal().unwrap_or_else(|| {
                        fallback("greedy");
                        greedy_mis_min_degree(g)
                    }),
                }),
                ProblemArg::Wvc => GroundTruth::VertexCover(match given {
                    Some(s) => s,
                    None => match exact_weighted_vc(g, b).optimal() {
                        Some((_, c)) => c,
                        None => {
                            fallback("local-ratio");
                            weighted_vc_2approx(g)?
                        }
                    },
                }),
                _ => GroundTruth::VertexCover(match given {
                    Some(s) => s,
                    None => exact_vc(g, b).optimal().unwrap_or_else(|| {
                        fallback("matching");
                        vc_2approx_matching(g)
                    }),
                }),
            }
        }
    })
}

fn generate(problem: ProblemArg, data: &Loaded, eps: f64, seed: u64, truth: Option<&Path>) -> Result<PredictionTable> {
    let t = ground_truth(problem, data, truth)?;
    Ok(match (data, problem) {
        (Loaded::Sets(ss), _) => gen_sc_predictions(ss, &t, eps, seed)?,
        (Loaded::Graph(lg), ProblemArg::Maxcut) => gen_maxcut_predictions(&lg.graph, &t, eps, seed)?,
        (Loaded::Graph(lg), ProblemArg::Mis) => gen_mis_predictions(&lg.graph, &t, eps, seed)?,
        (Loaded::Graph(lg), _) => gen_vc_predictions(&lg.graph, &t, eps, seed)?,
    })
}

fn ms(start: Instant) -> String {
    format!("{:.3}", start.elapsed().as_secs_f64() * 1000.0)
}

#[allow(clippy::too_many_arguments)]
fn solve(
    problem: ProblemArg,
    data: &Loaded,
    preds: &PredictionTable,
    eps: f64,
    delta: Option<usize>,
    eta: f64,
    iters: usize,
    seed: u64,
    allow_large_epsilon: bool,
) -> Result<()> {
    let start = Instant::now();
    match (data, problem) {
        (Loaded::Sets(ss), _) => {
            let sol = learned_set_cover(ss, preds, eps, delta)?;
            println!("value,j_learned,j_approx,j_fix,runtime_ms");
            println!("{},{},{},{},{}", sol.value(), sol.j_learned.len(), sol.j_approx.len(), sol.j_fix.len(), ms(start));
        }
        (Loaded::Graph(lg), ProblemArg::Vc | ProblemArg::Wvc) => {
            let g = &lg.graph;
            let mut params = VcParams::new(eps);
            params.delta_override = delta;
            let (sol, weighted) = if problem == ProblemArg::Wvc {
                (learned_weighted_vc(g, preds, &params, &LocalRatioCover)?, true)
            } else {
                (learned_vc(g, preds, &params, &MatchingCover)?, false)
            };
            let measure = |s: &[usize]| if weighted { g.set_weight(s) } else { s.len() as f64 };
            println!("value,s0,s1,s2,runtime_ms");
            println!(
                "{},{},{},{},{}",
                sol.value,
                measure(&sol.s0),
                measure(&sol.s1),
                measure(&sol.s2),
                ms(start)
            );
        }
        (Loaded::Graph(lg), ProblemArg::Mis) => {
            let mut params = MisParams::new(eps);
            params.delta_override = delta;
            params.allow_large_epsilon = allow_large_epsilon;
            let sol = learned_mis(&lg.graph, preds, &params, &MinDegreeGreedy)?;
            let chosen = match sol.chosen {
                MisBranch::LowDegree => "c1",
                MisBranch::Voted => "c2",
            };
            println!("value,c1,c2,chosen,runtime_ms");
            println!("{},{},{},{chosen},{}", sol.value(), sol.c1.len(), sol.c2.len(), ms(start));
        }
        (Loaded::Graph(lg), _) => {
            let g = &lg.graph;
            let mut params = MaxcutParams::new(eps);
            params.eta = eta;
            params.delta = delta;
            params.iterations = iters;
            params.seed = seed;
            let sol = learned_maxcut(g, preds, &params)?;
            let elapsed = ms(start);
            let opt = exact_maxcut(g, ExactBudget::default()).optimal().map(|o| o.0);
            let source = match sol.provenance {
                Provenance::Learned => "learned",
                Provenance::LocalSearch => "local-search",
            };
            println!("value,opt,branch,learned_value,local_search_value,chosen,runtime_ms");
            println!(
                "{},{},{},{},{},{source},{elapsed}",
                sol.value,
                opt.map_or_else(String::new, |o| o.to_string()),
                if sol.graph_wide { "wide" } else { "narrow" },
                sol.learned_value,
                sol.local_search_value,
            );
        }
    }
    Ok(())
}

fn baseline(
    problem: ProblemArg,
    data: &Loaded,
    algo: Baseline,
    epsilon: Option<f64>,
    seed: u64,
    predictions: Option<&Path>,
    truth: Option<&Path>,
) -> Result<()> {
    let start = Instant::now();
    let value = match (data, algo) {
        (Loaded::Sets(ss), Baseline::GreedySc) => {
            let all: Vec<usize> = (0..ss.m()).collect();
            let every: Vec<usize> = (0..ss.n()).collect();
            greedy_set_cover(ss, &all, &every)?.len() as f64
        }
        (Loaded::Graph(lg), Baseline::Vc2) if problem == ProblemArg::Vc => vc_2approx_matching(&lg.graph).len() as f64,
        (Loaded::Graph(lg), Baseline::Wvc2) if problem == ProblemArg::Wvc => {
            lg.graph.set_weight(&weighted_vc_2approx(&lg.graph)?)
        }
        (Loaded::Graph(lg), Baseline::GreedyMis) if problem == ProblemArg::Mis => {
            greedy_mis_min_degree(&lg.graph).len() as f64
        }
        (Loaded::Graph(lg), Baseline::LsMaxcut) if problem == ProblemArg::Maxcut => {
            maxcut_local_search(&lg.graph, &LocalSearchStart::Greedy, seed).0
        }
        (Loaded::Graph(lg), Baseline::PredOnlyMis) if problem == ProblemArg::Mis => {
            let preds = match predictions {
                Some(p) => PredictionTable::read_csv(open(p)?)?,
                None => {
                    let eps = epsilon.ok_or_else(|| anyhow!("pred-only-mis needs --epsilon or --predictions"))?;
                    generate(problem, data, eps, seed, truth)?
                }
            };
            mis_predictions_only(&lg.graph, &preds)?.len() as f64
        }
        _ => bail!("--algo does not match --problem"),
    };
    println!("value,runtime_ms");
    println!("{value},{}", ms(start));
    Ok(())
}
