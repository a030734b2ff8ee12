//! `T` independent truncation runs × `K` depths, one network per truncated
//! adjacency, with scores averaged over all members. Also hosts the ablation
//! variants, each of which swaps one piece of that pipeline.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::affinity::local_affinity;
use crate::graph::{edge_distances, Adjacency, AttributedGraph};
use crate::lamnet::{train, LamnetModel, TrainConfig};
use crate::nsgt::truncate_sequence;
use crate::score::{MemberId, ScoreVector};
use crate::seed::{derive_seed, rng_for};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleConfig {
    /// Independent truncation runs.
    pub runs: usize,
    /// Truncation depth.
    pub depth: usize,
    /// Per-model settings; `seed` is replaced by a derived seed per member.
    pub train: TrainConfig,
    pub master_seed: u64,
    /// Upper bound on concurrent trainings.
    pub jobs: usize,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self {
            runs: 3,
            depth: 4,
            train: TrainConfig::default(),
            master_seed: 0,
            jobs: 1,
        }
    }
}

impl EnsembleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.runs < 1 || self.depth < 1 {
            return Err(Error::Config("T and K must be at least 1".into()));
        }
        if self.jobs < 1 {
            return Err(Error::Config("jobs must be at least 1".into()));
        }
        self.train.validate()
    }

    fn member_seed(&self, id: MemberId) -> u64 {
        derive_seed(
            self.master_seed,
            "lamnet-init",
            (id.t * self.depth + id.k) as u64,
        )
    }
}

/// Which pipeline produces the scores.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Variant {
    /// Full method: networks on truncated graphs, affinity on the original.
    Tam,
    /// Negative local affinity of the raw attributes.
    RawAffinity,
    /// Negative node degree averaged over all truncated adjacencies.
    Degree,
    /// Full training, but affinity measured on each member's truncated graph.
    TamT,
    /// Only depth `k` (1-based) of each run.
    SingleScale(usize),
    /// Every member trained on the original graph.
    RawGraph,
    /// Per run, a uniform random share of edges dropped.
    EdgeDrop(f64),
    /// The given share of largest-distance edges removed.
    SimilarityCut(f64),
}

impl Variant {
    pub fn validate(&self, depth: usize) -> Result<()> {
        match *self {
            Variant::SingleScale(k) if k < 1 || k > depth => Err(Error::Config(format!(
                "single-scale depth {k} outside 1..={depth}"
            ))),
            Variant::EdgeDrop(r) | Variant::SimilarityCut(r) if !(0.0..=1.0).contains(&r) => {
                Err(Error::Config(format!("rate {r} outside [0, 1]")))
            }
            _ => Ok(()),
        }
    }

    pub fn trains(&self) -> bool {
        !matches!(self, Variant::RawAffinity | Variant::Degree)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Tam => write!(f, "tam"),
            Variant::RawAffinity => write!(f, "raw-affinity"),
            Variant::Degree => write!(f, "degree"),
            Variant::TamT => write!(f, "tam-t"),
            Variant::SingleScale(k) => write!(f, "single-scale:{k}"),
            Variant::RawGraph => write!(f, "raw-graph"),
            Variant::EdgeDrop(r) => write!(f, "edge-drop:{r}"),
            Variant::SimilarityCut(r) => write!(f, "similarity-cut:{r}"),
        }
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("unknown variant {s:?}"));
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let rate = |default: f64| -> Result<f64> {
            arg.map_or(Ok(default), |a| a.parse().map_err(|_| bad()))
        };
        Ok(match (name, arg) {
            ("tam", None) => Variant::Tam,
            ("raw-affinity", None) => Variant::RawAffinity,
            ("degree", None) => Variant::Degree,
            ("tam-t", None) => Variant::TamT,
            ("single-scale", Some(k)) => Variant::SingleScale(k.parse().map_err(|_| bad())?),
            ("raw-graph", None) => Variant::RawGraph,
            ("edge-drop", _) => Variant::EdgeDrop(rate(0.05)?),
            ("similarity-cut", _) => Variant::SimilarityCut(rate(0.05)?),
            _ => return Err(bad()),
        })
    }
}

/// Trained member networks, each paired with its `(t, k)` position.
#[derive(Debug, Clone, PartialEq)]
pub struct TamEnsemble {
    pub runs: usize,
    pub depth: usize,
    pub master_seed: u64,
    pub num_nodes: usize,
    pub members: Vec<(MemberId, LamnetModel)>,
}

/// Uniformly drops `round(rate · m)` edges.
fn drop_edges(adj: &Adjacency, rate: f64, seed: u64, run: usize) -> Adjacency {
    let m = adj.num_edges();
    let count = (rate * m as f64).round() as usize;
    let mut rng = rng_for(seed, "edge-drop", run as u64);
    let mut dropped = vec![false; m];
    for e in rand::seq::index::sample(&mut rng, m, count) {
        dropped[e] = true;
    }
    let mut id = 0;
    adj.retain_edges(|_, _| {
        id += 1;
        !dropped[id - 1]
    })
}

/// Removes the `round(rate · m)` edges with the largest attribute distance;
/// equal distances go in edge-id order.
pub fn similarity_cut(g: &AttributedGraph, rate: f64) -> Adjacency {
    let adj = g.adjacency();
    let dist = edge_distances(g.attributes().view(), adj);
    let edges: Vec<(usize, usize)> = adj.edges().collect();
    let count = (rate * edges.len() as f64).round() as usize;
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by(|&a, &b| {
        let (da, db) = (
            dist.distance(adj, edges[a].0, edges[a].1).unwrap(),
            dist.distance(adj, edges[b].0, edges[b].1).unwrap(),
        );
        db.total_cmp(&da).then(a.cmp(&b))
    });
    let mut cut = vec![false; edges.len()];
    for &e in &order[..count] {
        cut[e] = true;
    }
    let mut id = 0;
    adj.retain_edges(|_, _| {
        id += 1;
        !cut[id - 1]
    })
}

/// Message-passing structures for every member the variant needs.
pub fn member_structures(
    g: &AttributedGraph,
    variant: Variant,
    cfg: &EnsembleConfig,
) -> Result<Vec<(MemberId, Adjacency)>> {
    variant.validate(cfg.depth)?;
    let ids = (0..cfg.runs).flat_map(|t| (0..cfg.depth).map(move |k| MemberId { t, k }));
    let out = match variant {
        Variant::Tam | Variant::TamT | Variant::Degree | Variant::SingleScale(_) => {
            let mut out = Vec::new();
            for t in 0..cfg.runs {
                let set = truncate_sequence(g, cfg.depth, derive_seed(cfg.master_seed, "nsgt", t as u64))?;
                for (k, level) in set.levels.into_iter().enumerate() {
                    match variant {
                        Variant::SingleScale(depth) if depth != k + 1 => {}
                        _ => out.push((MemberId { t, k }, level)),
                    }
                }
            }
            out
        }
        Variant::RawAffinity | Variant::RawGraph => ids.map(|id| (id, g.adjacency().clone())).collect(),
        Variant::EdgeDrop(rate) => {
            let dropped: Vec<Adjacency> = (0..cfg.runs)
                .map(|t| drop_edges(g.adjacency(), rate, cfg.master_seed, t))
                .collect();
            ids.map(|id| (id, dropped[id.t].clone())).collect()
        }
        Variant::SimilarityCut(rate) => {
            let cut = similarity_cut(g, rate);
            ids.map(|id| (id, cut.clone())).collect()
        }
    };
    Ok(out)
}

/// Trains one network per structure, at most `cfg.jobs` at a time. Results
/// are collected in input order whatever the scheduling.
pub fn train_members(
    g: &AttributedGraph,
    structures: Vec<(MemberId, Adjacency)>,
    cfg: &EnsembleConfig,
) -> Result<TamEnsemble> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let members = pool.install(|| {
        structures
            .into_par_iter()
            .map(|(id, structure)| {
                let train_cfg = TrainConfig {
                    seed: cfg.member_seed(id),
                    ..cfg.train.clone()
                };
                train(g, &structure, &train_cfg)
                    .map(|model| (id, model))
                    .map_err(|e| Error::Member {
                        t: id.t,
                        k: id.k,
                        source: Box::new(e),
                    })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(TamEnsemble {
        runs: cfg.runs,
        depth: cfg.depth,
        master_seed: cfg.master_seed,
        num_nodes: g.num_nodes(),
        members,
    })
}

/// The full method: `T` truncation runs of depth `K`, one network per level.
pub fn train_tam(g: &AttributedGraph, cfg: &EnsembleConfig) -> Result<TamEnsemble> {
    cfg.validate()?;
    let structures = member_structures(g, Variant::Tam, cfg)?;
    train_members(g, structures, cfg)
}

fn average(per_member: Vec<Vec<f64>>, n: usize) -> Vec<f64> {
    let mut total = vec![0.0; n];
    for scores in &per_member {
        for (acc, s) in total.iter_mut().zip(scores) {
            *acc += s;
        }
    }
    let count = per_member.len() as f64;
    total.into_iter().map(|v| v / count).collect()
}

impl TamEnsemble {
    fn check(&self, g: &AttributedGraph) -> Result<()> {
        if g.num_nodes() != self.num_nodes {
            return Err(Error::GraphMismatch {
                expected: self.num_nodes,
                found: g.num_nodes(),
            });
        }
        Ok(())
    }

    fn member_ids(&self) -> Vec<MemberId> {
        self.members.iter().map(|(id, _)| *id).collect()
    }

    /// Mean over members of the negative original-graph affinity of their
    /// representations.
    pub fn score(&self, g: &AttributedGraph) -> Result<ScoreVector> {
        self.check(g)?;
        let per_member = self
            .members
            .par_iter()
            .map(|(_, model)| model.score(g).map(|s| s.scores))
            .collect::<Result<Vec<_>>>()?;
        let mut out = ScoreVector::new(average(per_member, g.num_nodes()), "tam");
        out.members = self.member_ids();
        Ok(out)
    }

    /// Like [`score`](Self::score), but each member measures affinity over the
    /// truncated adjacency it propagated on.
    pub fn score_on_structures(&self, g: &AttributedGraph) -> Result<ScoreVector> {
        self.check(g)?;
        let per_member = self
            .members
            .par_iter()
            .map(|(_, model)| {
                let h = model.representations(g)?;
                Ok(local_affinity(h.view(), &model.structure)?.anomaly_scores())
            })
            .collect::<Result<Vec<_>>>()?;
        let mut out = ScoreVector::new(average(per_member, g.num_nodes()), "tam-t");
        out.members = self.member_ids();
        Ok(out)
    }

    pub fn save(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let mut files = Vec::with_capacity(self.members.len());
        for (id, model) in &self.members {
            let name = format!("model-t{}-k{}.json", id.t, id.k);
            model.save(dir.join(&name))?;
            files.push(ManifestMember {
                t: id.t,
                k: id.k,
                seed: model.config.seed,
                file: name,
            });
        }
        let manifest = Manifest {
            format: MANIFEST_FORMAT.into(),
            version: MANIFEST_VERSION,
            runs: self.runs,
            depth: self.depth,
            master_seed: self.master_seed,
            num_nodes: self.num_nodes,
            config_hash: self.config_hash(),
            members: files,
        };
        let path = dir.join("manifest.json");
        let text = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Config(e.to_string()))?;
        fs::write(&path, text).map_err(|e| Error::io(&path, e))
    }

    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let path = dir.join("manifest.json");
        let bad = |message: String| Error::Model {
            path: path.clone(),
            message,
        };
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let manifest: Manifest = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
        if manifest.format != MANIFEST_FORMAT || manifest.version != MANIFEST_VERSION {
            return Err(bad(format!("unsupported format {} v{}", manifest.format, manifest.version)));
        }
        let mut members = Vec::with_capacity(manifest.members.len());
        for m in &manifest.members {
            let model = LamnetModel::load(dir.join(&m.file))?;
            if model.config.seed != m.seed || model.structure.num_nodes() != manifest.num_nodes {
                return Err(bad(format!("{} does not match the manifest", m.file)));
            }
            members.push((MemberId { t: m.t, k: m.k }, model));
        }
        let ens = Self {
            runs: manifest.runs,
            depth: manifest.depth,
            master_seed: manifest.master_seed,
            num_nodes: manifest.num_nodes,
            members,
        };
        if ens.config_hash() != manifest.config_hash {
            return Err(bad("configuration hash mismatch".into()));
        }
        Ok(ens)
    }

    /// SHA-256 over the shape, master seed and member training settings.
    pub fn config_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(format!("{} {} {} {}", self.runs, self.depth, self.master_seed, self.num_nodes));
        for (id, model) in &self.members {
            hasher.update(format!("{} {}", id.t, id.k));
            hasher.update(serde_json::to_vec(&model.config).expect("config serializes"));
        }
        hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

const MANIFEST_FORMAT: &str = "tam-ensemble";
const MANIFEST_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    format: String,
    version: u32,
    runs: usize,
    depth: usize,
    master_seed: u64,
    num_nodes: usize,
    config_hash: String,
    members: Vec<ManifestMember>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestMember {
    t: usize,
    k: usize,
    seed: u64,
    file: String,
}

/// Scores from one variant plus the networks it trained, if any.
#[derive(Debug, Clone)]
pub struct VariantOutcome {
    pub scores: ScoreVector,
    pub ensemble: Option<TamEnsemble>,
    /// Message-passing structures, in member order, for variants without
    /// training that still truncate.
    pub structures: Vec<(MemberId, Adjacency)>,
}

/// Runs `variant` end to end on `g`.
pub fn run_variant(g: &AttributedGraph, variant: Variant, cfg: &EnsembleConfig) -> Result<VariantOutcome> {
    cfg.validate()?;
    variant.validate(cfg.depth)?;
    let name = variant.to_string();
    match variant {
        Variant::RawAffinity => {
            let scores = local_affinity(g.attributes().view(), g.adjacency())?.anomaly_scores();
            Ok(VariantOutcome {
                scores: ScoreVector::new(scores, name),
                ensemble: None,
                structures: Vec::new(),
            })
        }
        Variant::Degree => {
            let structures = member_structures(g, variant, cfg)?;
            let per_member = structures
                .iter()
                .map(|(_, adj)| adj.degrees().into_iter().map(|d| -(d as f64)).collect())
                .collect();
            let mut scores = ScoreVector::new(average(per_member, g.num_nodes()), name);
            scores.members = structures.iter().map(|(id, _)| *id).collect();
            Ok(VariantOutcome {
                scores,
                ensemble: None,
                structures,
            })
        }
        _ => {
            let structures = member_structures(g, variant, cfg)?;
            let ensemble = train_members(g, structures, cfg)?;
            let mut scores = if variant == Variant::TamT {
                ensemble.score_on_structures(g)?
            } else {
                ensemble.score(g)?
            };
            scores.method = name;
            Ok(VariantOutcome {
                scores,
                ensemble: Some(ensemble),
                structures: Vec::new(),
            })
        }
    }
}

/// Scores from one variant.
pub fn score_variant(g: &AttributedGraph, variant: Variant, cfg: &EnsembleConfig) -> Result<ScoreVector> {
    Ok(run_variant(g, variant, cfg)?.scores)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lamnet::score_single;
    use ndarray::Array2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn quick(runs: usize, depth: usize, seed: u64) -> EnsembleConfig {
        EnsembleConfig {
            runs,
            depth,
            train: TrainConfig {
                epochs: 3,
                learning_rate: 1e-3,
                lambda: 1.0,
                hidden_dims: [6, 4],
                ..Default::default()
            },
            master_seed: seed,
            jobs: 1,
        }
    }

    fn random_graph(seed: u64, n: usize) -> AttributedGraph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = Array2::from_shape_fn((n, 4), |_| rng.random_range(-1.0..1.0));
        let mut pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        pairs.extend((0..2 * n).map(|_| (rng.random_range(0..n), rng.random_range(0..n))));
        AttributedGraph::new(x, Adjacency::from_edges(n, pairs)).unwrap()
    }

    #[test]
    fn variant_names_round_trip() {
        for v in [
            Variant::Tam,
            Variant::RawAffinity,
            Variant::Degree,
            Variant::TamT,
            Variant::SingleScale(2),
            Variant::RawGraph,
            Variant::EdgeDrop(0.1),
            Variant::SimilarityCut(0.05),
        ] {
            assert_eq!(v.to_string().parse::<Variant>().unwrap(), v);
        }
        assert_eq!("edge-drop".parse::<Variant>().unwrap(), Variant::EdgeDrop(0.05));
        assert!("tam:3".parse::<Variant>().is_err());
        assert!("nope".parse::<Variant>().is_err());
        assert!(Variant::SingleScale(5).validate(4).is_err());
        assert!(Variant::EdgeDrop(1.5).validate(4).is_err());
    }

    #[test]
    fn equal_distances_mean_no_truncation() {
        // Distances all equal the mean, so nothing is ever marked.
        let x = Array2::from_shape_fn((4, 2), |(i, j)| if j == 0 { i as f64 } else { 0.0 });
        let g = AttributedGraph::new(x, Adjacency::from_edges(4, [(0, 1), (1, 2), (2, 3)])).unwrap();
        let cfg = quick(1, 1, 5);
        let ens = train_tam(&g, &cfg).unwrap();
        assert_eq!(ens.members.len(), 1);
        let lone = &ens.members[0].1;
        assert_eq!(&lone.structure, g.adjacency());
        let direct = train(
            &g,
            g.adjacency(),
            &TrainConfig {
                seed: cfg.member_seed(MemberId { t: 0, k: 0 }),
                ..cfg.train.clone()
            },
        )
        .unwrap();
        assert_eq!(lone, &direct);
        assert_eq!(ens.score(&g).unwrap().scores, score_single(lone, &g).unwrap().scores);
    }

    #[test]
    fn member_count_and_average() {
        let g = random_graph(1, 20);
        let ens = train_tam(&g, &quick(2, 3, 7)).unwrap();
        assert_eq!(ens.members.len(), 6);
        let ids: Vec<_> = ens.members.iter().map(|(id, _)| (id.t, id.k)).collect();
        assert_eq!(ids, vec![(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]);
        for (id, model) in &ens.members {
            if id.k > 0 {
                let parent = &ens.members[id.t * 3 + id.k - 1].1.structure;
                assert!(model.structure.is_subgraph_of(parent));
            }
        }

        let small = train_tam(&g, &quick(2, 2, 8)).unwrap();
        let by_hand: Vec<Vec<f64>> = small.members.iter().map(|(_, m)| m.score(&g).unwrap().scores).collect();
        let got = small.score(&g).unwrap();
        for i in 0..20 {
            let mean = (by_hand[0][i] + by_hand[1][i] + by_hand[2][i] + by_hand[3][i]) / 4.0;
            assert!((got.scores[i] - mean).abs() <= 1e-12);
        }

        let mut reversed = small.clone();
        reversed.members.reverse();
        for (a, b) in reversed.score(&g).unwrap().scores.iter().zip(&got.scores) {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn identical_members_score_like_one() {
        let g = random_graph(2, 12);
        let ens = train_tam(&g, &quick(1, 1, 1)).unwrap();
        let mut copies = ens.clone();
        let only = copies.members[0].clone();
        copies.members = vec![only.clone(), only.clone(), only];
        let single = ens.score(&g).unwrap().scores;
        for (a, b) in copies.score(&g).unwrap().scores.iter().zip(&single) {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn determinism_across_jobs_and_persistence() {
        let g = random_graph(3, 25);
        let a = train_tam(&g, &quick(2, 2, 11)).unwrap();
        let b = train_tam(&g, &EnsembleConfig { jobs: 3, ..quick(2, 2, 11) }).unwrap();
        assert_eq!(a, b);
        let dir = tempfile::tempdir().unwrap();
        a.save(dir.path()).unwrap();
        let back = TamEnsemble::load(dir.path()).unwrap();
        assert_eq!(back, a);
        assert_eq!(back.score(&g).unwrap(), a.score(&g).unwrap());

        let other = random_graph(4, 10);
        assert!(matches!(a.score(&other), Err(Error::GraphMismatch { expected: 25, found: 10 })));
    }

    #[test]
    fn raw_affinity_on_identical_attributes() {
        let g = AttributedGraph::new(Array2::from_elem((4, 3), 2.0), Adjacency::from_edges(4, [(0, 1), (1, 2), (2, 3)]))
            .unwrap();
        let s = score_variant(&g, Variant::RawAffinity, &quick(1, 1, 0)).unwrap();
        for v in s.scores {
            assert!((v + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_edge_drop_equals_raw_graph() {
        let g = random_graph(5, 15);
        let cfg = quick(2, 2, 3);
        let drop = score_variant(&g, Variant::EdgeDrop(0.0), &cfg).unwrap();
        let raw = score_variant(&g, Variant::RawGraph, &cfg).unwrap();
        assert_eq!(drop.scores, raw.scores);
    }

    #[test]
    fn edge_drop_removes_the_requested_share() {
        let g = random_graph(6, 40);
        let m = g.num_edges();
        let structures = member_structures(&g, Variant::EdgeDrop(0.1), &quick(2, 2, 3)).unwrap();
        for (_, adj) in &structures {
            assert_eq!(adj.num_edges(), m - (0.1 * m as f64).round() as usize);
            assert!(adj.is_subgraph_of(g.adjacency()));
        }
        assert_eq!(structures[0].1, structures[1].1);
    }

    #[test]
    fn similarity_cut_matches_sort_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 40;
        let x = Array2::from_shape_fn((n, 3), |_| rng.random_range(0..4) as f64);
        let mut pairs = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        while seen.len() < 100 {
            let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
            if u != v && seen.insert((u.min(v), u.max(v))) {
                pairs.push((u, v));
            }
        }
        let g = AttributedGraph::new(x.clone(), Adjacency::from_edges(n, pairs)).unwrap();
        assert_eq!(g.num_edges(), 100);
        let cut = similarity_cut(&g, 0.05);
        assert_eq!(cut.num_edges(), 95);

        let mut ranked: Vec<(f64, usize, (usize, usize))> = g
            .adjacency()
            .edges()
            .enumerate()
            .map(|(id, (i, j))| {
                let d = (0..3).map(|c| (x[[i, c]] - x[[j, c]]).powi(2)).sum::<f64>().sqrt();
                (d, id, (i, j))
            })
            .collect();
        ranked.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        for (rank, &(_, _, (i, j))) in ranked.iter().enumerate() {
            assert_eq!(cut.contains(i, j), rank >= 5);
        }
    }

    #[test]
    fn degree_and_single_scale() {
        let g = random_graph(7, 20);
        let cfg = quick(2, 3, 4);
        let out = run_variant(&g, Variant::Degree, &cfg).unwrap();
        assert_eq!(out.structures.len(), 6);
        for i in 0..20 {
            let mean = out.structures.iter().map(|(_, a)| a.degree(i) as f64).sum::<f64>() / 6.0;
            assert!((out.scores.scores[i] + mean).abs() < 1e-12);
        }
        let single = run_variant(&g, Variant::SingleScale(2), &cfg).unwrap();
        let ens = single.ensemble.unwrap();
        assert_eq!(ens.members.iter().map(|(id, _)| (id.t, id.k)).collect::<Vec<_>>(), vec![(0, 1), (1, 1)]);
        // Same truncations as the full run.
        assert_eq!(ens.members[1].1.structure, out.structures[4].1);
    }

    #[test]
    fn tam_t_uses_member_structures() {
        let g = random_graph(8, 20);
        let cfg = quick(1, 2, 2);
        let out = run_variant(&g, Variant::TamT, &cfg).unwrap();
        let ens = out.ensemble.unwrap();
        let by_hand: Vec<Vec<f64>> = ens
            .members
            .iter()
            .map(|(_, m)| {
                let h = m.representations(&g).unwrap();
                local_affinity(h.view(), &m.structure).unwrap().anomaly_scores()
            })
            .collect();
        for i in 0..20 {
            assert!((out.scores.scores[i] - (by_hand[0][i] + by_hand[1][i]) / 2.0).abs() < 1e-12);
        }
    }
}
