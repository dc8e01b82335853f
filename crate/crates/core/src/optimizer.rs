//! Choosing detachments: greedy descent, a bridge-block min-cut heuristic and
//! an exhaustive oracle for small instances.

use std::time::{Duration, Instant};

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::bbn::BridgeBlockNetwork;
use crate::cascade::estimate_influence;
use crate::epoi::{estimate_epoi, exact_epoi_capped, EpoiEstimate, Evaluator, SourceDistribution};
use crate::error::{Error, Result};
use crate::exact::DEFAULT_EDGE_CAP;
use crate::flow::FlowNetwork;
use crate::network::{CircleCollection, CircleId, DetachmentPair, DetachmentSet, EdgeWeights, InducedNetwork, VertexId};
use crate::rng::RngSpec;

pub const DEFAULT_COMBINATION_CAP: u64 = 5_000;
pub const DEFAULT_TERMINAL_TRIALS: u64 = 1_000;
pub const DEFAULT_GREEDY_TRIALS: u64 = 200;
pub const DEFAULT_EVAL_TRIALS: u64 = 10_000;

// labels of the independent stream families used below
const SELECT: u64 = 1;
const EVAL: u64 = 2;
const TERMINALS: u64 = 3;
const GREEDY: u64 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Greedy,
    Mincut,
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimizationResult {
    pub method: Method,
    pub detachments: DetachmentSet,
    #[serde(skip)]
    pub final_circles: CircleCollection,
    /// Vertices that left the universe because they lost every membership.
    pub orphaned: Vec<VertexId>,
    /// Baseline first, then one estimate per step. Min-cut applies its whole
    /// cut as a single step.
    pub epoi_trace: Vec<EpoiEstimate>,
    /// Min-cut only.
    pub terminals: Option<(CircleId, CircleId)>,
    #[serde(rename = "wall_time_ms", serialize_with = "as_millis")]
    pub wall_time: Duration,
}

fn as_millis<S: Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}

impl OptimizationResult {
    pub fn final_epoi(&self) -> &EpoiEstimate {
        self.epoi_trace.last().expect("trace holds at least the baseline")
    }
}

/// Greedy descent: at every step evaluate each bridge-block link as a
/// detachment and commit the best. Monte Carlo evaluation gives all
/// candidates of a step the same random streams, so their differences are not
/// masked by sampling noise. Ties go to the first candidate in
/// (circle, vertex) order.
pub fn greedy_detach(
    circles: &CircleCollection,
    weights: &EdgeWeights,
    p: &SourceDistribution,
    m: usize,
    evaluator: Evaluator,
    rng: RngSpec,
) -> Result<OptimizationResult> {
    if m == 0 {
        return Err(Error::InvalidInput("number of detachments must be at least 1".into()));
    }
    let start = Instant::now();
    let select = rng.child(SELECT);
    let mut trace = vec![evaluator.evaluate(circles, weights, p, select.child(0))?];
    let mut current = circles.clone();
    let mut chosen = DetachmentSet::default();
    let mut orphaned = Vec::new();

    for step in 0..m {
        let candidates = BridgeBlockNetwork::build(&current).candidates();
        if candidates.is_empty() {
            return Err(Error::NoCandidates { completed: step, requested: m });
        }
        // every step gets a fresh minimum; see the notes on the reset
        let stream = select.child(step as u64 + 1);
        let scored = candidates
            .par_iter()
            .map(|pair| {
                let next = current.detach(pair)?;
                let est = evaluator.evaluate(&next.circles, weights, p, stream)?;
                Ok((next, est))
            })
            .collect::<Result<Vec<_>>>()?;
        let best = scored
            .iter()
            .enumerate()
            .min_by(|(i, a), (j, b)| a.1.value.total_cmp(&b.1.value).then(i.cmp(j)))
            .map(|(i, _)| i)
            .expect("candidates are non-empty");
        let (next, est) = scored.into_iter().nth(best).expect("index from enumerate");
        log::debug!("greedy step {}: {} -> {:.6}", step + 1, candidates[best], est.value);
        chosen.push(candidates[best].clone());
        orphaned.extend(next.orphaned);
        current = next.circles;
        trace.push(est);
    }

    Ok(OptimizationResult {
        method: Method::Greedy,
        detachments: chosen,
        final_circles: current,
        orphaned,
        epoi_trace: trace,
        terminals: None,
        wall_time: start.elapsed(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhaustiveConfig {
    pub combination_cap: u64,
    pub edge_cap: usize,
}

impl Default for ExhaustiveConfig {
    fn default() -> Self {
        Self {
            combination_cap: DEFAULT_COMBINATION_CAP,
            edge_cap: DEFAULT_EDGE_CAP,
        }
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Exact EPOI of every m-subset of bridge-block links. Subsets are visited in
/// lexicographic order of the sorted links and only a strictly better value
/// replaces the incumbent, so ties go to the lexicographically smallest.
pub fn exhaustive_detach(
    circles: &CircleCollection,
    weights: &EdgeWeights,
    p: &SourceDistribution,
    m: usize,
    config: ExhaustiveConfig,
) -> Result<OptimizationResult> {
    if m == 0 {
        return Err(Error::InvalidInput("number of detachments must be at least 1".into()));
    }
    let start = Instant::now();
    let links = BridgeBlockNetwork::build(circles).candidates();
    if m > links.len() {
        return Err(Error::NoCandidates { completed: 0, requested: m });
    }
    let combos = binomial(links.len() as u64, m as u64);
    if combos > config.combination_cap {
        return Err(Error::TooLarge(format!(
            "C({}, {m}) = {combos} subsets exceed the cap of {}",
            links.len(),
            config.combination_cap
        )));
    }
    let baseline = exact_epoi_capped(circles, weights, p, config.edge_cap)?;

    let mut best: Option<(f64, Vec<DetachmentPair>)> = None;
    for subset in links.iter().cloned().combinations(m) {
        let set = DetachmentSet::new(subset.clone())?;
        let after = circles.detach_all(&set)?;
        let value = exact_epoi_capped(&after.circles, weights, p, config.edge_cap)?.value;
        if best.as_ref().is_none_or(|(v, _)| value < *v) {
            best = Some((value, subset));
        }
    }
    let (_, pairs) = best.expect("at least one subset");

    // replay the winner one pair at a time for the trace
    let mut trace = vec![baseline];
    let mut current = circles.clone();
    let mut orphaned = Vec::new();
    for pair in &pairs {
        let next = current.detach(pair)?;
        trace.push(exact_epoi_capped(&next.circles, weights, p, config.edge_cap)?);
        orphaned.extend(next.orphaned);
        current = next.circles;
    }

    Ok(OptimizationResult {
        method: Method::Exhaustive,
        detachments: DetachmentSet::new(pairs)?,
        final_circles: current,
        orphaned,
        epoi_trace: trace,
        terminals: None,
        wall_time: start.elapsed(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalSelection {
    /// The two circles of the largest bridge-block component whose members,
    /// as a source set, reach the most vertices.
    #[default]
    LargestInfluence,
    /// The two largest circles of the largest bridge-block component.
    LargestSize,
    Explicit(CircleId, CircleId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapacityPolicy {
    /// Every link costs 1, so the cut value is the number of detachments.
    #[default]
    Unit,
    /// Link (I, v) costs |I| times the mean weight of v's edges into I.
    Weighted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinCutConfig {
    pub terminal_selection: TerminalSelection,
    pub capacity_policy: CapacityPolicy,
    /// Cascades per circle when ranking circles by influence.
    pub terminal_trials: u64,
}

impl Default for MinCutConfig {
    fn default() -> Self {
        Self {
            terminal_selection: TerminalSelection::default(),
            capacity_policy: CapacityPolicy::default(),
            terminal_trials: DEFAULT_TERMINAL_TRIALS,
        }
    }
}

/// Detachments of a minimum cut between two terminal circles, before any
/// EPOI evaluation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutPlan {
    pub terminals: (CircleId, CircleId),
    pub detachments: DetachmentSet,
    pub cut_value: f64,
}

fn select_terminals(
    circles: &CircleCollection,
    weights: &EdgeWeights,
    bbn: &BridgeBlockNetwork,
    selection: &TerminalSelection,
    trials: u64,
    rng: RngSpec,
) -> Result<(CircleId, CircleId)> {
    let top_two = |mut ranked: Vec<(f64, CircleId)>| -> Result<(CircleId, CircleId)> {
        // highest score first, ids break ties
        ranked.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        match ranked.as_slice() {
            [(_, a), (_, b), ..] => Ok((a.clone(), b.clone())),
            _ => Err(Error::NoBridges),
        }
    };
    let component = || bbn.largest_component().unwrap_or_default();
    match selection {
        TerminalSelection::Explicit(a, b) => {
            for c in [a, b] {
                if circles.members(c).is_none() {
                    return Err(Error::UnknownCircle(c.clone()));
                }
            }
            if a == b {
                return Err(Error::InvalidInput(format!("terminal circles must differ (got `{a}` twice)")));
            }
            Ok((a.clone(), b.clone()))
        }
        TerminalSelection::LargestSize => top_two(
            component()
                .into_iter()
                .map(|c| (circles.members(&c).map_or(0, |m| m.len()) as f64, c))
                .collect(),
        ),
        TerminalSelection::LargestInfluence => {
            let network = InducedNetwork::induce(circles, weights)?;
            let ranked = component()
                .into_par_iter()
                .map(|c| {
                    let members = circles.members(&c).expect("component blocks are circles");
                    let sigma = estimate_influence(&network, members, trials, rng.child_str(c.as_str()))?;
                    Ok((sigma.mean, c))
                })
                .collect::<Result<Vec<_>>>()?;
            top_two(ranked)
        }
    }
}

fn link_capacity(circles: &CircleCollection, weights: &EdgeWeights, circle: &CircleId, v: &VertexId, policy: CapacityPolicy) -> Result<f64> {
    match policy {
        CapacityPolicy::Unit => Ok(1.0),
        CapacityPolicy::Weighted => {
            let members = circles.members(circle).expect("link circles exist");
            let mut sum = 0.0;
            for u in members.iter().filter(|u| *u != v) {
                sum += weights
                    .get(v.as_str(), u.as_str())
                    .ok_or_else(|| Error::MissingWeight(v.clone(), u.clone()))?;
            }
            let others = members.len() - 1;
            Ok(if others == 0 { 0.0 } else { sum / others as f64 * members.len() as f64 })
        }
    }
}

/// Picks terminals and solves the cut on the bridge-block network. The
/// result is the canonical cut (smallest source side), and is checked to
/// separate the terminals.
pub fn plan_min_cut(
    circles: &CircleCollection,
    weights: &EdgeWeights,
    config: &MinCutConfig,
    rng: RngSpec,
) -> Result<CutPlan> {
    let bbn = BridgeBlockNetwork::build(circles);
    if bbn.links.is_empty() {
        return Err(Error::NoBridges);
    }
    let (t1, t2) = select_terminals(
        circles,
        weights,
        &bbn,
        &config.terminal_selection,
        config.terminal_trials,
        rng.child(TERMINALS),
    )?;
    if !bbn.connected(&t1, &t2) {
        return Err(Error::DisconnectedTerminals(t1, t2));
    }

    let blocks: Vec<&CircleId> = bbn.blocks.iter().collect();
    let bridges: Vec<&VertexId> = bbn.bridges.iter().collect();
    let block_at = |c: &CircleId| blocks.binary_search(&c).expect("link block");
    let bridge_at = |v: &VertexId| blocks.len() + bridges.binary_search(&v).expect("link bridge");
    let (s, t) = (blocks.len() + bridges.len(), blocks.len() + bridges.len() + 1);

    let mut flow = FlowNetwork::new(t + 1);
    let mut total = 0.0;
    let mut arcs = Vec::with_capacity(bbn.links.len());
    for (c, v) in &bbn.links {
        let cap = link_capacity(circles, weights, c, v, config.capacity_policy)?;
        total += cap;
        flow.add_undirected(block_at(c), bridge_at(v), cap);
        arcs.push((c, v));
    }
    // exceeds every finite cut, so the terminal arcs are never cut
    let large = match config.capacity_policy {
        CapacityPolicy::Unit => (bbn.links.len() + 1) as f64,
        CapacityPolicy::Weighted => total + 1.0,
    };
    flow.add_arc(s, block_at(&t1), large);
    flow.add_arc(block_at(&t2), t, large);
    let cut_value = flow.max_flow(s, t);
    let side = flow.source_side(s);

    let pairs: Vec<DetachmentPair> = arcs
        .into_iter()
        .filter(|(c, v)| side[block_at(c)] != side[bridge_at(v)])
        .map(|(c, v)| DetachmentPair::new(v.clone(), c.clone()))
        .collect();
    let detachments = DetachmentSet::new(pairs)?;

    let after = circles.detach_all(&detachments)?;
    if BridgeBlockNetwork::build(&after.circles).connected(&t1, &t2) {
        return Err(Error::CutNotSeparating(t1, t2));
    }
    Ok(CutPlan {
        terminals: (t1, t2),
        detachments,
        cut_value,
    })
}

/// Min-cut heuristic with Monte Carlo EPOI before and after the cut. Both
/// estimates use the same streams.
pub fn min_cut_detach(
    circles: &CircleCollection,
    weights: &EdgeWeights,
    p: &SourceDistribution,
    config: &MinCutConfig,
    mc_trials: u64,
    rng: RngSpec,
) -> Result<OptimizationResult> {
    let start = Instant::now();
    let plan = plan_min_cut(circles, weights, config, rng)?;
    let after = circles.detach_all(&plan.detachments)?;
    let eval = rng.child(EVAL);
    let before = estimate_epoi(circles, weights, p, mc_trials, eval)?;
    let final_epoi = estimate_epoi(&after.circles, weights, p, mc_trials, eval)?;
    Ok(OptimizationResult {
        method: Method::Mincut,
        detachments: plan.detachments,
        final_circles: after.circles,
        orphaned: after.orphaned,
        epoi_trace: vec![before, final_epoi],
        terminals: Some(plan.terminals),
        wall_time: start.elapsed(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompareConfig {
    pub min_cut: MinCutConfig,
    /// Cascades per circle for the three reported EPOI values.
    pub eval_trials: u64,
    /// Cascades per circle for each greedy candidate.
    pub greedy_trials: u64,
}

impl Default for CompareConfig {
    fn default() -> Self {
        Self {
            min_cut: MinCutConfig::default(),
            eval_trials: DEFAULT_EVAL_TRIALS,
            greedy_trials: DEFAULT_GREEDY_TRIALS,
        }
    }
}

/// Min-cut against greedy with the same number of detachments.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub terminals: (CircleId, CircleId),
    pub mincut_size: usize,
    pub cut: DetachmentSet,
    pub greedy: DetachmentSet,
    pub epoi_base: EpoiEstimate,
    pub epoi_cut: EpoiEstimate,
    pub epoi_greedy: EpoiEstimate,
    #[serde(serialize_with = "as_millis")]
    pub cut_time: Duration,
    #[serde(serialize_with = "as_millis")]
    pub greedy_time: Duration,
}

impl Comparison {
    /// Largest standard error among the three EPOI estimates.
    pub fn max_std_error(&self) -> f64 {
        self.epoi_base
            .std_error
            .max(self.epoi_cut.std_error)
            .max(self.epoi_greedy.std_error)
    }
}

/// Runs the min-cut heuristic, then greedy with as many detachments as the
/// cut has. The three final EPOI values share one set of streams, separate
/// from those greedy used to choose.
pub fn compare_methods(
    circles: &CircleCollection,
    weights: &EdgeWeights,
    p: &SourceDistribution,
    config: &CompareConfig,
    rng: RngSpec,
) -> Result<Comparison> {
    let start = Instant::now();
    let plan = plan_min_cut(circles, weights, &config.min_cut, rng)?;
    let cut_time = start.elapsed();

    let start = Instant::now();
    let greedy = greedy_detach(
        circles,
        weights,
        p,
        plan.detachments.len(),
        Evaluator::MonteCarlo { trials: config.greedy_trials },
        rng.child(GREEDY),
    )?;
    let greedy_time = start.elapsed();

    let eval = rng.child(EVAL);
    let cut_circles = circles.detach_all(&plan.detachments)?.circles;
    Ok(Comparison {
        mincut_size: plan.detachments.len(),
        epoi_base: estimate_epoi(circles, weights, p, config.eval_trials, eval)?,
        epoi_cut: estimate_epoi(&cut_circles, weights, p, config.eval_trials, eval)?,
        epoi_greedy: estimate_epoi(&greedy.final_circles, weights, p, config.eval_trials, eval)?,
        terminals: plan.terminals,
        cut: plan.detachments,
        greedy: greedy.detachments,
        cut_time,
        greedy_time,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epoi::exact_epoi;
    use crate::network::fixtures::*;

    fn flat(c: &CircleCollection, w: f64) -> EdgeWeights {
        EdgeWeights::flat(c, w).unwrap()
    }

    fn exact_after(c: &CircleCollection, pairs: &[DetachmentPair]) -> f64 {
        let after = c.detach_all(&DetachmentSet::new(pairs.to_vec()).unwrap()).unwrap().circles;
        exact_epoi(&after, &flat(c, 0.5), &SourceDistribution::uniform(c)).unwrap().value
    }

    #[test]
    fn greedy_one_step_on_t2_finds_the_oracle_minimum() {
        let c = t2();
        let (w, p) = (flat(&c, 0.5), SourceDistribution::uniform(&c));
        // oracle: score every single link directly
        let cands = BridgeBlockNetwork::build(&c).candidates();
        let values: Vec<f64> = cands.iter().map(|x| exact_after(&c, std::slice::from_ref(x))).collect();
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let first = cands[values.iter().position(|&v| v == min).unwrap()].clone();

        let r = greedy_detach(&c, &w, &p, 1, Evaluator::exact(), RngSpec::from_seed(0)).unwrap();
        assert_eq!(r.detachments.pairs(), std::slice::from_ref(&first));
        assert_eq!(first, pair("b", "I2"));
        assert!((r.final_epoi().value - 1.0 / 18.0).abs() < 1e-12);
        assert!((r.epoi_trace[0].value - 1.25 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn greedy_on_t1_separates_the_circles() {
        let c = t1();
        let r = greedy_detach(&c, &flat(&c, 0.5), &SourceDistribution::uniform(&c), 1, Evaluator::exact(), RngSpec::from_seed(0))
            .unwrap();
        assert_eq!(r.final_epoi().value, 0.0);
    }

    #[test]
    fn greedy_runs_out_of_candidates() {
        let c = t1();
        let err = greedy_detach(&c, &flat(&c, 0.5), &SourceDistribution::uniform(&c), 3, Evaluator::exact(), RngSpec::from_seed(0))
            .unwrap_err();
        assert!(matches!(err, Error::NoCandidates { completed: 1, requested: 3 }), "{err}");
    }

    #[test]
    fn greedy_monte_carlo_is_deterministic() {
        let c = t2();
        let (w, p) = (flat(&c, 0.4), SourceDistribution::uniform(&c));
        let ev = Evaluator::MonteCarlo { trials: 300 };
        let a = greedy_detach(&c, &w, &p, 2, ev, RngSpec::from_seed(17)).unwrap();
        let b = greedy_detach(&c, &w, &p, 2, ev, RngSpec::from_seed(17)).unwrap();
        assert_eq!((a.detachments, a.epoi_trace), (b.detachments, b.epoi_trace));
    }

    #[test]
    fn exhaustive_pairs_on_t2_match_enumeration() {
        let c = t2();
        let (w, p) = (flat(&c, 0.5), SourceDistribution::uniform(&c));
        let cands = BridgeBlockNetwork::build(&c).candidates();
        let mut best = (f64::INFINITY, Vec::new());
        for i in 0..cands.len() {
            for j in i + 1..cands.len() {
                let v = exact_after(&c, &[cands[i].clone(), cands[j].clone()]);
                if v < best.0 {
                    best = (v, vec![cands[i].clone(), cands[j].clone()]);
                }
            }
        }
        let r = exhaustive_detach(&c, &w, &p, 2, ExhaustiveConfig::default()).unwrap();
        assert_eq!(r.detachments.pairs(), best.1.as_slice());
        assert!((r.final_epoi().value - best.0).abs() < 1e-12);
        assert_eq!(r.epoi_trace.len(), 3);
    }

    #[test]
    fn exhaustive_with_every_link_removes_all_bridges() {
        let c = t2();
        let (w, p) = (flat(&c, 0.5), SourceDistribution::uniform(&c));
        let r = exhaustive_detach(&c, &w, &p, 4, ExhaustiveConfig::default()).unwrap();
        let mut bare = c.clone();
        for pair in BridgeBlockNetwork::build(&c).candidates() {
            bare = bare.detach(&pair).unwrap().circles;
        }
        assert_eq!(r.final_epoi().value, exact_epoi(&bare, &w, &p).unwrap().value);
        assert_eq!(r.final_epoi().value, 0.0);
    }

    #[test]
    fn exhaustive_limits() {
        let c = t2();
        let (w, p) = (flat(&c, 0.5), SourceDistribution::uniform(&c));
        assert!(matches!(exhaustive_detach(&c, &w, &p, 99, ExhaustiveConfig::default()), Err(Error::NoCandidates { .. })));
        let tight = ExhaustiveConfig { combination_cap: 5, ..Default::default() };
        assert!(matches!(exhaustive_detach(&c, &w, &p, 2, tight), Err(Error::TooLarge(_))));
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn min_cut_on_t2_ends_to_ends() {
        let c = t2();
        let config = MinCutConfig {
            terminal_selection: TerminalSelection::Explicit(cid("I1"), cid("I3")),
            ..Default::default()
        };
        let plan = plan_min_cut(&c, &flat(&c, 0.5), &config, RngSpec::from_seed(0)).unwrap();
        assert_eq!(plan.detachments.len(), 1);
        assert_eq!(plan.cut_value, 1.0);
        // canonical cut: smallest source side, i.e. the link at I1
        assert_eq!(plan.detachments.pairs(), &[pair("b", "I1")]);
    }

    #[test]
    fn min_cut_on_a_star_cuts_one_link() {
        let c = CircleCollection::from_pairs([
            ("A", vec!["hub", "a1", "a2"]),
            ("B", vec!["hub", "b1"]),
            ("C", vec!["hub", "c1", "c2", "c3"]),
            ("D", vec!["hub"]),
        ])
        .unwrap();
        for selection in [TerminalSelection::LargestSize, TerminalSelection::LargestInfluence] {
            let config = MinCutConfig { terminal_selection: selection, ..Default::default() };
            let plan = plan_min_cut(&c, &flat(&c, 0.3), &config, RngSpec::from_seed(1)).unwrap();
            assert_eq!(plan.detachments.len(), 1);
            let (t1, t2) = &plan.terminals;
            assert_ne!(t1, t2);
        }
        let config = MinCutConfig { terminal_selection: TerminalSelection::LargestSize, ..Default::default() };
        let plan = plan_min_cut(&c, &flat(&c, 0.3), &config, RngSpec::from_seed(1)).unwrap();
        assert_eq!(plan.terminals, (cid("C"), cid("A")));
    }

    #[test]
    fn weighted_capacities_prefer_weak_links() {
        // I1 -b- I2 -c- I3 where only c passes little into I2
        let c = t2();
        let mut w = flat(&c, 0.9);
        w.insert(vid("c"), vid("b"), 0.1).unwrap();
        let config = MinCutConfig {
            terminal_selection: TerminalSelection::Explicit(cid("I1"), cid("I3")),
            capacity_policy: CapacityPolicy::Weighted,
            ..Default::default()
        };
        let plan = plan_min_cut(&c, &w, &config, RngSpec::from_seed(0)).unwrap();
        assert_eq!(plan.detachments.pairs(), &[pair("c", "I2")]);
        assert!((plan.cut_value - 0.2).abs() < 1e-12);
    }

    #[test]
    fn min_cut_errors() {
        let disjoint = CircleCollection::from_pairs([("I1", vec!["a", "b"]), ("I2", vec!["c", "d"])]).unwrap();
        let w = flat(&disjoint, 0.5);
        assert!(matches!(plan_min_cut(&disjoint, &w, &MinCutConfig::default(), RngSpec::from_seed(0)), Err(Error::NoBridges)));

        let two_parts = CircleCollection::from_pairs([
            ("I1", vec!["a", "b"]),
            ("I2", vec!["b", "c"]),
            ("I3", vec!["x", "y"]),
            ("I4", vec!["y", "z"]),
        ])
        .unwrap();
        let config = MinCutConfig {
            terminal_selection: TerminalSelection::Explicit(cid("I1"), cid("I4")),
            ..Default::default()
        };
        let err = plan_min_cut(&two_parts, &flat(&two_parts, 0.5), &config, RngSpec::from_seed(0)).unwrap_err();
        assert!(matches!(err, Error::DisconnectedTerminals(..)));
    }

    #[test]
    fn compare_on_t2() {
        let c = t2();
        let config = CompareConfig { eval_trials: 2000, greedy_trials: 200, ..Default::default() };
        let r = compare_methods(&c, &flat(&c, 0.5), &SourceDistribution::uniform(&c), &config, RngSpec::from_seed(3)).unwrap();
        assert_eq!(r.mincut_size, 1);
        assert_eq!(r.greedy.len(), 1);
        let slack = 3.0 * r.max_std_error();
        assert!(r.epoi_cut.value <= r.epoi_base.value + slack);
        assert!(r.epoi_greedy.value <= r.epoi_base.value + slack);
        assert!((r.epoi_base.value - 1.25 / 3.0).abs() < 4.0 * r.epoi_base.std_error);
    }
}
