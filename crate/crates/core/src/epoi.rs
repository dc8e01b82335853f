//! Expected proportional outside influence (EPOI).
//!
//! A circle drawn from the source distribution seeds a cascade; the EPOI is
//! the expected fraction of vertices outside that circle that end up
//! influenced.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cascade::{summarize, Simulator};
use crate::error::{Error, Result};
use crate::exact::{exact_influence, DEFAULT_EDGE_CAP};
use crate::network::{CircleCollection, CircleId, EdgeWeights, InducedNetwork, VertexId};
use crate::rng::RngSpec;

const SUM_TOLERANCE: f64 = 1e-9;

/// Probability of each circle being the source of a cascade.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SourceDistribution {
    probs: BTreeMap<CircleId, f64>,
}

impl SourceDistribution {
    pub fn new(probs: BTreeMap<CircleId, f64>) -> Result<Self> {
        if let Some((c, p)) = probs.iter().find(|(_, p)| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidDistribution(format!("p({c}) = {p} is negative or not finite")));
        }
        let total: f64 = probs.values().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}, not 1")));
        }
        Ok(Self { probs })
    }

    pub fn uniform(circles: &CircleCollection) -> Self {
        let k = circles.len() as f64;
        Self {
            probs: circles.circle_ids().map(|c| (c.clone(), 1.0 / k)).collect(),
        }
    }

    pub fn get(&self, circle: &CircleId) -> f64 {
        self.probs.get(circle).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CircleId, f64)> {
        self.probs.iter().map(|(c, &p)| (c, p))
    }

    /// The support must name circles of the collection.
    pub fn validate_for(&self, circles: &CircleCollection) -> Result<()> {
        match self.probs.iter().find(|(c, p)| **p > 0.0 && circles.members(c).is_none()) {
            Some((c, _)) => Err(Error::InvalidDistribution(format!("circle `{c}` is not in the collection"))),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpoiEstimate {
    pub value: f64,
    pub std_error: f64,
    /// Zero for exact evaluations.
    pub trials_per_circle: u64,
    pub exact: bool,
    /// (sigma(I) - |I|) / |V \ I| for every circle with p(I) > 0.
    pub per_circle_terms: BTreeMap<CircleId, f64>,
}

struct Term {
    circle: CircleId,
    p: f64,
    value: f64,
    std_error: f64,
}

fn combine(terms: Vec<Term>, trials_per_circle: u64, exact: bool) -> EpoiEstimate {
    let mut value = 0.0;
    let mut var = 0.0;
    let mut per_circle_terms = BTreeMap::new();
    for t in terms {
        value += t.p * t.value;
        var += (t.p * t.std_error).powi(2);
        per_circle_terms.insert(t.circle, t.value);
    }
    EpoiEstimate {
        value,
        std_error: var.sqrt(),
        trials_per_circle,
        exact,
        per_circle_terms,
    }
}

/// A source circle, its probability and, unless its term is trivially zero,
/// its members and outside size.
type SourceCircle<'a> = (&'a CircleId, f64, Option<(&'a BTreeSet<VertexId>, usize)>);

/// Source circles with positive probability, in id order, with their
/// members and the size of their outside. Circles with no members or no
/// outside contribute a zero term and are flagged with `None`.
fn source_circles<'a>(
    circles: &'a CircleCollection,
    p: &SourceDistribution,
    universe: usize,
) -> Result<Vec<SourceCircle<'a>>> {
    p.validate_for(circles)?;
    Ok(circles
        .circles()
        .iter()
        .filter_map(|(c, members)| {
            let prob = p.get(c);
            if prob <= 0.0 {
                return None;
            }
            let outside = universe - members.len();
            let active = (!members.is_empty() && outside > 0).then_some((members, outside));
            Some((c, prob, active))
        })
        .collect())
}

/// Monte Carlo EPOI. Circle `I` runs its trials on streams
/// `rng.child_str(I) + t`, so estimates for different collections that share
/// circle ids use common random numbers.
pub fn estimate_epoi(
    circles: &CircleCollection,
    weights: &EdgeWeights,
    p: &SourceDistribution,
    trials_per_circle: u64,
    rng: RngSpec,
) -> Result<EpoiEstimate> {
    let network = InducedNetwork::induce(circles, weights)?;
    estimate_epoi_on(circles, &network, p, trials_per_circle, rng)
}

pub(crate) fn estimate_epoi_on(
    circles: &CircleCollection,
    network: &InducedNetwork,
    p: &SourceDistribution,
    trials_per_circle: u64,
    rng: RngSpec,
) -> Result<EpoiEstimate> {
    if trials_per_circle == 0 {
        return Err(Error::InvalidInput("trials per circle must be at least 1".into()));
    }
    let sources = source_circles(circles, p, network.vertex_count())?;
    let terms = sources
        .par_iter()
        .map_init(
            || Simulator::new(network),
            |sim, &(c, prob, active)| -> Result<Term> {
                let Some((members, outside)) = active else {
                    return Ok(Term { circle: c.clone(), p: prob, value: 0.0, std_error: 0.0 });
                };
                let idx = network.indices_of(members)?;
                let (sum, sum_sq) = sim.sample_sizes(&idx, trials_per_circle, rng.child_str(c.as_str()));
                let sigma = summarize(sum, sum_sq, trials_per_circle);
                let outside = outside as f64;
                Ok(Term {
                    circle: c.clone(),
                    p: prob,
                    value: (sigma.mean - members.len() as f64) / outside,
                    std_error: sigma.std_error / outside,
                })
            },
        )
        .collect::<Result<Vec<_>>>()?;
    Ok(combine(terms, trials_per_circle, false))
}

/// EPOI by live-edge enumeration. Fails with `TooLarge` when the induced
/// network has more than `edge_cap` directed edges.
pub fn exact_epoi(circles: &CircleCollection, weights: &EdgeWeights, p: &SourceDistribution) -> Result<EpoiEstimate> {
    exact_epoi_capped(circles, weights, p, DEFAULT_EDGE_CAP)
}

pub fn exact_epoi_capped(
    circles: &CircleCollection,
    weights: &EdgeWeights,
    p: &SourceDistribution,
    edge_cap: usize,
) -> Result<EpoiEstimate> {
    let network = InducedNetwork::induce(circles, weights)?;
    if network.edge_count() > edge_cap {
        return Err(Error::TooLarge(format!(
            "{} directed edges exceed the exact-oracle cap of {edge_cap}",
            network.edge_count()
        )));
    }
    let sources = source_circles(circles, p, network.vertex_count())?;
    let terms = sources
        .into_iter()
        .map(|(c, prob, active)| {
            let value = match active {
                None => 0.0,
                Some((members, outside)) => {
                    let sigma = exact_influence(&network, members, edge_cap)?;
                    (sigma.mean - members.len() as f64) / outside as f64
                }
            };
            Ok(Term { circle: c.clone(), p: prob, value, std_error: 0.0 })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(combine(terms, 0, true))
}

/// How an optimizer scores a candidate collection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Evaluator {
    MonteCarlo { trials: u64 },
    Exact { edge_cap: usize },
}

impl Evaluator {
    pub fn exact() -> Self {
        Evaluator::Exact { edge_cap: DEFAULT_EDGE_CAP }
    }

    pub fn evaluate(
        &self,
        circles: &CircleCollection,
        weights: &EdgeWeights,
        p: &SourceDistribution,
        rng: RngSpec,
    ) -> Result<EpoiEstimate> {
        match *self {
            Evaluator::MonteCarlo { trials } => estimate_epoi(circles, weights, p, trials, rng),
            Evaluator::Exact { edge_cap } => exact_epoi_capped(circles, weights, p, edge_cap),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::fixtures::*;

    fn flat(c: &CircleCollection, w: f64) -> EdgeWeights {
        EdgeWeights::flat(c, w).unwrap()
    }

    #[test]
    fn t1_exact_and_mc() {
        let c = t1();
        let w = flat(&c, 0.5);
        let p = SourceDistribution::uniform(&c);
        let exact = exact_epoi(&c, &w, &p).unwrap();
        assert!((exact.value - 0.5).abs() < 1e-12);
        let mc = estimate_epoi(&c, &w, &p, 20_000, RngSpec::from_seed(2)).unwrap();
        assert!((mc.value - 0.5).abs() <= 3.0 * mc.std_error, "{mc:?}");
    }

    #[test]
    fn t2_terms_by_enumeration() {
        let c = t2();
        let w = flat(&c, 0.5);
        let e = exact_epoi(&c, &w, &SourceDistribution::uniform(&c)).unwrap();
        let terms: Vec<f64> = e.per_circle_terms.values().copied().collect();
        for (got, want) in terms.iter().zip([0.375, 0.5, 0.375]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!((e.value - 1.25 / 3.0).abs() < 1e-12);
        assert!(e.exact && e.std_error == 0.0);
    }

    #[test]
    fn t2_single_detachments_by_enumeration() {
        // (b,I1) and (c,I3) leave only one-sided spread: (0 + 1/4 + 1/4) / 3.
        // (b,I2) and (c,I2) split T2 into {a,b} and {c,d}; only the singleton
        // middle circle reaches one of three outsiders w.p. 1/2: (1/6) / 3.
        let c = t2();
        let w = flat(&c, 0.5);
        let p = SourceDistribution::uniform(&c);
        for (pr, want) in [
            (pair("b", "I1"), 1.0 / 6.0),
            (pair("b", "I2"), 1.0 / 18.0),
            (pair("c", "I2"), 1.0 / 18.0),
            (pair("c", "I3"), 1.0 / 6.0),
        ] {
            let after = c.detach(&pr).unwrap().circles;
            let e = exact_epoi(&after, &w, &p).unwrap();
            assert!((e.value - want).abs() < 1e-12, "{pr}: {}", e.value);
        }
    }

    #[test]
    fn degenerate_circles_contribute_zero() {
        let whole = CircleCollection::from_pairs([("I1", vec!["a", "b", "c"])]).unwrap();
        let w = flat(&whole, 0.9);
        let p = SourceDistribution::uniform(&whole);
        assert_eq!(exact_epoi(&whole, &w, &p).unwrap().value, 0.0);
        assert_eq!(estimate_epoi(&whole, &w, &p, 10, RngSpec::from_seed(0)).unwrap().value, 0.0);

        let c = t1();
        let set = crate::network::DetachmentSet::new(vec![pair("a", "I1"), pair("b", "I1")]).unwrap();
        let emptied = c.detach_all(&set).unwrap().circles;
        let e = exact_epoi(&emptied, &flat(&c, 0.5), &SourceDistribution::uniform(&c)).unwrap();
        assert_eq!(e.per_circle_terms[&cid("I1")], 0.0);
    }

    #[test]
    fn zero_weights_give_zero() {
        let c = t2();
        let w = flat(&c, 0.0);
        let p = SourceDistribution::uniform(&c);
        assert_eq!(estimate_epoi(&c, &w, &p, 100, RngSpec::from_seed(0)).unwrap().value, 0.0);
        assert_eq!(exact_epoi(&c, &w, &p).unwrap().value, 0.0);
    }

    #[test]
    fn value_is_weighted_sum_of_terms() {
        let c = t2();
        let mut probs = BTreeMap::new();
        probs.insert(cid("I1"), 0.2);
        probs.insert(cid("I2"), 0.8);
        let p = SourceDistribution::new(probs).unwrap();
        let e = estimate_epoi(&c, &flat(&c, 0.4), &p, 2000, RngSpec::from_seed(6)).unwrap();
        let recomputed: f64 = e.per_circle_terms.iter().map(|(c, t)| p.get(c) * t).sum();
        assert!((recomputed - e.value).abs() < 1e-12);
        assert_eq!(e.per_circle_terms.len(), 2);
        assert!(e.per_circle_terms.values().all(|t| (0.0..=1.0).contains(t)));
    }

    #[test]
    fn invalid_distributions() {
        let mut probs = BTreeMap::new();
        probs.insert(cid("I1"), 0.7);
        assert!(matches!(SourceDistribution::new(probs.clone()), Err(Error::InvalidDistribution(_))));
        probs.insert(cid("I2"), -0.3);
        probs.insert(cid("I3"), 0.6);
        assert!(SourceDistribution::new(probs).is_err());

        let mut probs = BTreeMap::new();
        probs.insert(cid("Z"), 1.0);
        let p = SourceDistribution::new(probs).unwrap();
        let c = t1();
        assert!(matches!(
            estimate_epoi(&c, &flat(&c, 0.5), &p, 10, RngSpec::from_seed(0)),
            Err(Error::InvalidDistribution(_))
        ));
    }

    #[test]
    fn estimates_are_deterministic() {
        let c = t2();
        let w = flat(&c, 0.35);
        let p = SourceDistribution::uniform(&c);
        let a = estimate_epoi(&c, &w, &p, 3000, RngSpec::new(1, 2)).unwrap();
        let b = estimate_epoi(&c, &w, &p, 3000, RngSpec::new(1, 2)).unwrap();
        assert_eq!(a, b);
    }
}
