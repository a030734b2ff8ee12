//! Synthetic anomaly injection and attribute camouflage.
//!
//! Structural anomalies are small groups of nodes wired into cliques.
//! Contextual anomalies take the attribute row of the most distant node among
//! a random candidate pool. Camouflage overwrites a share of each anomaly's
//! coordinates with the normal-class mean.

use ndarray::{Array1, Axis};
use rand::seq::index::sample;
use rand::Rng;

use crate::graph::{Adjacency, AnomalyKind, AttributedGraph};
use crate::seed::rng_for;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct InjectionConfig {
    /// Nodes per clique.
    pub clique_size: usize,
    pub num_cliques: usize,
    pub num_contextual: usize,
    /// Candidates drawn per contextual target.
    pub candidate_pool: usize,
    pub seed: u64,
}

impl Default for InjectionConfig {
    fn default() -> Self {
        Self {
            clique_size: 15,
            num_cliques: 1,
            num_contextual: 15,
            candidate_pool: 50,
            seed: 0,
        }
    }
}

impl InjectionConfig {
    /// Default clique size and pool, with equal structural and contextual
    /// counts of `per_type` anomalies (rounded to whole cliques).
    pub fn balanced(per_type: usize, seed: u64) -> Self {
        let clique_size = 15;
        let num_cliques = (per_type as f64 / clique_size as f64).round().max(1.0) as usize;
        Self {
            clique_size,
            num_cliques,
            num_contextual: num_cliques * clique_size,
            candidate_pool: 50,
            seed,
        }
    }

    pub fn validate(&self, num_nodes: usize) -> Result<()> {
        if self.clique_size < 2 {
            return Err(Error::Config("clique size must be at least 2".into()));
        }
        if self.candidate_pool < 1 {
            return Err(Error::Config("candidate pool must be at least 1".into()));
        }
        let needed = self.clique_size * self.num_cliques + self.num_contextual;
        if needed >= num_nodes {
            return Err(Error::InsufficientNodes {
                needed: needed + 1,
                available: num_nodes,
            });
        }
        if self.num_contextual > 0 && self.candidate_pool > num_nodes - 1 {
            return Err(Error::InsufficientNodes {
                needed: self.candidate_pool + 1,
                available: num_nodes,
            });
        }
        Ok(())
    }
}

/// One contextual replacement.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextualSwap {
    pub target: usize,
    pub pool: Vec<usize>,
    /// Pool member whose original attributes were copied.
    pub source: usize,
}

/// What an injection changed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct InjectionRecord {
    pub cliques: Vec<Vec<usize>>,
    pub swaps: Vec<ContextualSwap>,
}

fn ground_truth(g: &AttributedGraph) -> (Vec<bool>, Vec<Option<AnomalyKind>>) {
    let n = g.num_nodes();
    let labels = g.labels().map_or_else(|| vec![false; n], <[bool]>::to_vec);
    let kinds = g.kinds().map_or_else(|| vec![None; n], <[Option<AnomalyKind>]>::to_vec);
    (labels, kinds)
}

/// Draws `count` distinct nodes not yet labeled anomalous, in sampling order.
fn pick_unlabeled(labels: &[bool], count: usize, rng: &mut impl Rng) -> Result<Vec<usize>> {
    let free: Vec<usize> = (0..labels.len()).filter(|&i| !labels[i]).collect();
    if count > free.len() {
        return Err(Error::InsufficientNodes {
            needed: count,
            available: free.len(),
        });
    }
    Ok(sample(rng, free.len(), count).into_iter().map(|i| free[i]).collect())
}

/// Wires `num_cliques` disjoint groups of `clique_size` unlabeled nodes into
/// cliques and labels them structural anomalies.
pub fn inject_structural(
    g: &AttributedGraph,
    cfg: &InjectionConfig,
    rng: &mut impl Rng,
) -> Result<(AttributedGraph, Vec<Vec<usize>>)> {
    if cfg.clique_size < 2 {
        return Err(Error::Config("clique size must be at least 2".into()));
    }
    let (mut labels, mut kinds) = ground_truth(g);
    let chosen = pick_unlabeled(&labels, cfg.clique_size * cfg.num_cliques, rng)?;
    let cliques: Vec<Vec<usize>> = chosen.chunks(cfg.clique_size).map(<[usize]>::to_vec).collect();
    let mut edges: Vec<(usize, usize)> = g.adjacency().edges().collect();
    for clique in &cliques {
        for (a, &u) in clique.iter().enumerate() {
            labels[u] = true;
            kinds[u] = Some(AnomalyKind::Structural);
            edges.extend(clique[a + 1..].iter().map(|&v| (u, v)));
        }
    }
    let adjacency = Adjacency::from_edges(g.num_nodes(), edges);
    let out = AttributedGraph::from_parts(g.attributes().clone(), adjacency, Some(labels), Some(kinds));
    Ok((out, cliques))
}

/// For `num_contextual` unlabeled targets, copies the original attribute row
/// of the farthest node among `candidate_pool` sampled others.
pub fn inject_contextual(
    g: &AttributedGraph,
    cfg: &InjectionConfig,
    rng: &mut impl Rng,
) -> Result<(AttributedGraph, Vec<ContextualSwap>)> {
    let n = g.num_nodes();
    if cfg.candidate_pool < 1 {
        return Err(Error::Config("candidate pool must be at least 1".into()));
    }
    if cfg.num_contextual > 0 && cfg.candidate_pool > n.saturating_sub(1) {
        return Err(Error::InsufficientNodes {
            needed: cfg.candidate_pool + 1,
            available: n,
        });
    }
    let (mut labels, mut kinds) = ground_truth(g);
    let targets = pick_unlabeled(&labels, cfg.num_contextual, rng)?;
    let original = g.attributes();
    let mut attributes = original.clone();
    let mut swaps = Vec::with_capacity(targets.len());
    for target in targets {
        // Sample from the other n - 1 nodes by skipping over the target.
        let pool: Vec<usize> = sample(rng, n - 1, cfg.candidate_pool)
            .into_iter()
            .map(|i| if i >= target { i + 1 } else { i })
            .collect();
        let xt = original.row(target);
        let mut source = pool[0];
        let mut best = f64::NEG_INFINITY;
        for &c in &pool {
            let d: f64 = (&original.row(c) - &xt).mapv(|v| v * v).sum();
            if d > best {
                best = d;
                source = c;
            }
        }
        attributes.row_mut(target).assign(&original.row(source));
        labels[target] = true;
        kinds[target] = Some(AnomalyKind::Contextual);
        swaps.push(ContextualSwap {
            target,
            pool,
            source,
        });
    }
    let out = AttributedGraph::from_parts(attributes, g.adjacency().clone(), Some(labels), Some(kinds));
    Ok((out, swaps))
}

/// Structural then contextual injection, driven by `cfg.seed`.
pub fn inject(g: &AttributedGraph, cfg: &InjectionConfig) -> Result<(AttributedGraph, InjectionRecord)> {
    cfg.validate(g.num_nodes())?;
    let mut rng = rng_for(cfg.seed, "inject", 0);
    let (g, cliques) = inject_structural(g, cfg, &mut rng)?;
    let (g, swaps) = inject_contextual(&g, cfg, &mut rng)?;
    Ok((g, InjectionRecord { cliques, swaps }))
}

/// Replaced coordinates per anomalous node.
#[derive(Debug, Clone, PartialEq)]
pub struct CamouflageRecord {
    pub normal_mean: Array1<f64>,
    /// `(node, sorted coordinate indices)` for every anomaly.
    pub masks: Vec<(usize, Vec<usize>)>,
}

/// Sets `round(fraction · M)` uniformly chosen coordinates of every anomaly to
/// the mean of that coordinate over normal nodes.
pub fn camouflage(
    g: &AttributedGraph,
    fraction: f64,
    rng: &mut impl Rng,
) -> Result<(AttributedGraph, CamouflageRecord)> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::Config(format!("camouflage fraction {fraction} outside [0, 1]")));
    }
    let labels = g.require_labels()?;
    let anomalies: Vec<usize> = (0..labels.len()).filter(|&i| labels[i]).collect();
    let normals: Vec<usize> = (0..labels.len()).filter(|&i| !labels[i]).collect();
    if anomalies.is_empty() || normals.is_empty() {
        return Err(Error::DegenerateLabels {
            positives: anomalies.len(),
            negatives: normals.len(),
        });
    }
    let m = g.num_attributes();
    let normal_mean = g
        .attributes()
        .select(Axis(0), &normals)
        .mean_axis(Axis(0))
        .expect("at least one normal node");
    let count = (fraction * m as f64).round() as usize;
    let mut attributes = g.attributes().clone();
    let mut masks = Vec::with_capacity(anomalies.len());
    for node in anomalies {
        let mut coords = sample(rng, m, count).into_vec();
        coords.sort_unstable();
        for &c in &coords {
            attributes[[node, c]] = normal_mean[c];
        }
        masks.push((node, coords));
    }
    Ok((g.with_attributes(attributes)?, CamouflageRecord { normal_mean, masks }))
}
