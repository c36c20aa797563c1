//! Learning-augmented approximation algorithms for NP-hard graph problems
//! under the ε-correlated edge-prediction model.
//!
//! Every edge `(u, v)` carries one noisy bit per endpoint, each equal to the
//! endpoint's membership in a fixed optimal solution with probability
//! `1/2 + ε`. High-degree vertices aggregate many independent bits and can be
//! classified reliably by majority vote; low-degree vertices are handed to a
//! prediction-free solver. The crate provides:
//!
//! * [`graph`]: graphs, set systems, generators and file loaders.
//! * [`predictions`]: seeded prediction tables, majority votes and the
//!   unbiased ±1 aggregate used by max-cut.
//! * [`exact`]: branch-and-bound / enumeration oracles for small instances.
//! * [`baselines`]: classical approximation algorithms.
//! * [`learned_vc`], [`learned_mis`], [`learned_sc`], [`learned_maxcut`]:
//!   the prediction-augmented algorithms.
//! * [`harness`]: ε-sweep experiment runner and CSV output.

pub mod baselines;
pub mod error;
pub mod exact;
pub mod graph;
pub mod harness;
pub mod learned_maxcut;
pub mod learned_mis;
pub mod learned_sc;
pub mod learned_vc;
pub mod predictions;
pub mod stats;

pub use baselines::{BoundedDegreeSolver, Guarantee};
pub use error::{Error, Result};
pub use exact::{ExactBudget, Exact};
pub use graph::{Edge, Graph, LabeledGraph, SetSystem, VertexId};
pub use harness::{ExperimentConfig, TrialRecord};
pub use learned_maxcut::{CutSolution, MaxcutParams};
pub use learned_mis::{MisParams, MisSolution};
pub use learned_sc::ScSolution;
pub use learned_vc::{VcParams, VcSolution};
pub use predictions::{GroundTruth, PredictionTable};
