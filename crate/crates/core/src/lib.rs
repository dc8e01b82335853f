//! Detachment of vertices from circles to limit information spread.
//!
//! Circles are groups whose members pass information to one another. The
//! network they induce carries an independent cascade, and the expected
//! proportional outside influence (EPOI) measures how far a cascade seeded by
//! a random circle reaches beyond it. A detachment removes one vertex from one
//! circle; the optimizers pick detachments that lower the EPOI.

pub mod bbn;
pub mod bench;
pub mod cascade;
pub mod epoi;
pub mod error;
pub mod exact;
mod flow;
pub mod generator;
pub mod io;
pub mod network;
pub mod optimizer;
pub mod rng;
pub mod stats;

pub use bbn::{build_bbn, enumerate_candidates, BridgeBlockNetwork};
pub use cascade::{estimate_influence, run_cascade, CascadeTrace, InfluenceEstimate};
pub use epoi::{estimate_epoi, exact_epoi, EpoiEstimate, Evaluator, SourceDistribution};
pub use error::{Error, Result};
pub use exact::{exact_influence, influenced_distribution, DEFAULT_EDGE_CAP};
pub use generator::{generate_circles, generate_instance, sample_weights, GeneratorParams, ProfileConfig};
pub use network::{
    apply_detachment, apply_detachment_set, induce_network, CircleCollection, CircleId, Detached, DetachmentPair,
    DetachmentSet, EdgeWeights, InducedNetwork, VertexId,
};
pub use optimizer::{
    compare_methods, exhaustive_detach, greedy_detach, min_cut_detach, plan_min_cut, CapacityPolicy, CompareConfig,
    Comparison, CutPlan, ExhaustiveConfig, Method, MinCutConfig, OptimizationResult, TerminalSelection,
};
pub use rng::RngSpec;
pub use stats::{graph_stats, StatsReport};
