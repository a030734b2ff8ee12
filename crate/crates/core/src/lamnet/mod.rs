//! The local-affinity-maximization network: a two-layer GCN whose message
//! passing runs on a truncated adjacency while its objective and scores use
//! the original one.
//!
//! ```text
//! H1 = ReLU(Â X W1),   H = ReLU(Â H1 W2),   Â = D^{-1/2} (Ã + I) D^{-1/2}
//! ```
//!
//! where `Ã` is the truncated adjacency and `D` its degree matrix including the
//! self-loops. The self-loops keep `Â` defined for nodes that truncation has
//! isolated.

mod adam;
mod objective;

use std::fs;
use std::path::Path;

use ndarray::{Array2, ArrayView2, Zip};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::affinity::local_affinity;
use crate::graph::{symmetric_normalize, Adjacency, AttributedGraph, SparseMatrix};
use crate::score::ScoreVector;
use crate::{Error, Result};

pub use adam::AdamConfig;
use adam::Adam;

/// Layer weights: `w1` is `M × h1`, `w2` is `h1 × h2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LamnetParams {
    pub w1: Array2<f64>,
    pub w2: Array2<f64>,
}

impl LamnetParams {
    /// Uniform in `[-1/√fan_in, 1/√fan_in]` per layer.
    pub fn init(input_dim: usize, hidden_dims: [usize; 2], seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut layer = |fan_in: usize, fan_out: usize| {
            let bound = 1.0 / (fan_in.max(1) as f64).sqrt();
            Array2::from_shape_fn((fan_in, fan_out), |_| rng.random_range(-bound..=bound))
        };
        let w1 = layer(input_dim, hidden_dims[0]);
        let w2 = layer(hidden_dims[0], hidden_dims[1]);
        Self { w1, w2 }
    }

    pub fn zeros(input_dim: usize, hidden_dims: [usize; 2]) -> Self {
        Self {
            w1: Array2::zeros((input_dim, hidden_dims[0])),
            w2: Array2::zeros((hidden_dims[0], hidden_dims[1])),
        }
    }

    fn check(&self, input_dim: usize) -> Result<()> {
        if self.w1.nrows() != input_dim || self.w1.ncols() != self.w2.nrows() {
            return Err(Error::Shape(format!(
                "weights {:?} and {:?} do not fit {input_dim} input attributes",
                self.w1.dim(),
                self.w2.dim()
            )));
        }
        if self.w1.iter().chain(self.w2.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Shape("weights contain non-finite values".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    /// Weight of the non-neighbor dissimilarity term.
    pub lambda: f64,
    pub hidden_dims: [usize; 2],
    pub adam: AdamConfig,
    /// Seed for weight initialization.
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 500,
            learning_rate: 1e-5,
            lambda: 0.0,
            hidden_dims: [128, 128],
            adam: AdamConfig::default(),
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::Config(msg.into()));
        if self.epochs < 1 {
            return fail("epochs must be at least 1");
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return fail("learning rate must be positive");
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return fail("lambda must be non-negative");
        }
        if self.hidden_dims.contains(&0) {
            return fail("hidden dimensions must be positive");
        }
        let AdamConfig {
            beta1,
            beta2,
            epsilon,
        } = self.adam;
        if !((0.0..1.0).contains(&beta1) && (0.0..1.0).contains(&beta2) && epsilon > 0.0) {
            return fail("adam betas must lie in [0, 1) and epsilon must be positive");
        }
        Ok(())
    }
}

/// Intermediate activations of one forward pass.
struct Activations {
    z1: Array2<f64>,
    h1: Array2<f64>,
    z2: Array2<f64>,
    h: Array2<f64>,
}

/// NaN passes through so that non-finite inputs surface in the loss.
fn relu(z: &Array2<f64>) -> Array2<f64> {
    z.mapv(|v| if v < 0.0 { 0.0 } else { v })
}

/// ReLU backward with subgradient 0 at 0.
fn relu_backward(upstream: &mut Array2<f64>, preactivation: &Array2<f64>) {
    Zip::from(upstream).and(preactivation).for_each(|g, &z| {
        if z <= 0.0 {
            *g = 0.0;
        }
    });
}

/// A network bound to one graph and one message-passing structure, with the
/// normalized propagation matrix and `Â X` precomputed.
pub struct Lamnet<'g> {
    graph: &'g AttributedGraph,
    propagation: SparseMatrix,
    propagated_input: Array2<f64>,
}

impl<'g> Lamnet<'g> {
    pub fn new(graph: &'g AttributedGraph, structure: &Adjacency) -> Result<Self> {
        if structure.num_nodes() != graph.num_nodes() {
            return Err(Error::Shape(format!(
                "structure has {} nodes, graph has {}",
                structure.num_nodes(),
                graph.num_nodes()
            )));
        }
        let propagation = symmetric_normalize(structure, true)?;
        let propagated_input = propagation.mul_dense(graph.attributes().view());
        Ok(Self {
            graph,
            propagation,
            propagated_input,
        })
    }

    fn activations(&self, params: &LamnetParams) -> Result<Activations> {
        params.check(self.graph.num_attributes())?;
        let z1 = self.propagated_input.dot(&params.w1);
        let h1 = relu(&z1);
        let z2 = self.propagation.mul_dense(h1.dot(&params.w2).view());
        let h = relu(&z2);
        Ok(Activations { z1, h1, z2, h })
    }

    /// Final-layer representations, one row per node.
    pub fn forward(&self, params: &LamnetParams) -> Result<Array2<f64>> {
        Ok(self.activations(params)?.h)
    }

    pub fn loss(&self, params: &LamnetParams, lambda: f64) -> Result<f64> {
        let h = self.forward(params)?;
        Ok(objective::objective(h.view(), self.graph.adjacency(), lambda).0)
    }

    /// Loss and its exact gradient with respect to both weight matrices.
    pub fn loss_and_gradient(&self, params: &LamnetParams, lambda: f64) -> Result<(f64, LamnetParams)> {
        let act = self.activations(params)?;
        let (loss, mut grad_z2) = objective::objective(act.h.view(), self.graph.adjacency(), lambda);
        relu_backward(&mut grad_z2, &act.z2);
        // Â is symmetric, so Âᵀ · dZ2 = Â · dZ2.
        let grad_p = self.propagation.mul_dense(grad_z2.view());
        let w2 = act.h1.t().dot(&grad_p);
        let mut grad_z1 = grad_p.dot(&params.w2.t());
        relu_backward(&mut grad_z1, &act.z1);
        let w1 = self.propagated_input.t().dot(&grad_z1);
        Ok((loss, LamnetParams { w1, w2 }))
    }
}

/// Representations of `g` under `params`, propagating over `structure`.
pub fn forward(params: &LamnetParams, g: &AttributedGraph, structure: &Adjacency) -> Result<Array2<f64>> {
    Lamnet::new(g, structure)?.forward(params)
}

/// Training objective: negative original-graph affinity plus `lambda` times
/// the mean similarity to non-neighbors, summed over nodes.
pub fn loss(params: &LamnetParams, g: &AttributedGraph, structure: &Adjacency, lambda: f64) -> Result<f64> {
    Lamnet::new(g, structure)?.loss(params, lambda)
}

pub fn gradient(
    params: &LamnetParams,
    g: &AttributedGraph,
    structure: &Adjacency,
    lambda: f64,
) -> Result<LamnetParams> {
    Ok(Lamnet::new(g, structure)?.loss_and_gradient(params, lambda)?.1)
}

/// A trained network together with the structure it propagates over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LamnetModel {
    pub params: LamnetParams,
    pub config: TrainConfig,
    pub structure: Adjacency,
    /// Loss before each update, followed by the loss after the last one.
    pub loss_history: Vec<f64>,
}

const MODEL_FORMAT: &str = "tam-lamnet";
const MODEL_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    format: String,
    version: u32,
    #[serde(flatten)]
    model: LamnetModel,
}

impl LamnetModel {
    pub fn representations(&self, g: &AttributedGraph) -> Result<Array2<f64>> {
        forward(&self.params, g, &self.structure)
    }

    /// Single-model anomaly scores: negative mean cosine similarity of each
    /// node's representation to its original-graph neighbors'.
    pub fn score(&self, g: &AttributedGraph) -> Result<ScoreVector> {
        let h = self.representations(g)?;
        Ok(score_representations(h.view(), g.adjacency(), "lamnet"))
    }

    pub fn to_json(&self) -> Result<String> {
        let file = ModelFile {
            format: MODEL_FORMAT.into(),
            version: MODEL_VERSION,
            model: self.clone(),
        };
        serde_json::to_string(&file).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_json(text: &str, origin: &Path) -> Result<Self> {
        let bad = |message: String| Error::Model {
            path: origin.into(),
            message,
        };
        let file: ModelFile = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        if file.format != MODEL_FORMAT || file.version != MODEL_VERSION {
            return Err(bad(format!(
                "unsupported format {} v{}",
                file.format, file.version
            )));
        }
        let model = file.model;
        model.structure.validate().map_err(|e| bad(e.to_string()))?;
        model.config.validate().map_err(|e| bad(e.to_string()))?;
        model
            .params
            .check(model.params.w1.nrows())
            .map_err(|e| bad(e.to_string()))?;
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text, path)
    }
}

pub(crate) fn score_representations(h: ArrayView2<'_, f64>, adj: &Adjacency, method: &str) -> ScoreVector {
    let affinity = local_affinity(h, adj).expect("representation rows match the graph");
    ScoreVector::new(affinity.anomaly_scores(), method)
}

/// Full-batch Adam training of one network on `structure`.
pub fn train(g: &AttributedGraph, structure: &Adjacency, config: &TrainConfig) -> Result<LamnetModel> {
    config.validate()?;
    let net = Lamnet::new(g, structure)?;
    let mut params = LamnetParams::init(g.num_attributes(), config.hidden_dims, config.seed);
    let mut adam = Adam::new(config.adam, &[params.w1.dim(), params.w2.dim()]);
    let mut loss_history = Vec::with_capacity(config.epochs + 1);
    for epoch in 0..config.epochs {
        let (loss, grad) = net.loss_and_gradient(&params, config.lambda)?;
        if !loss.is_finite() {
            return Err(Error::NonFiniteLoss { epoch });
        }
        loss_history.push(loss);
        adam.update(
            [&mut params.w1, &mut params.w2],
            [&grad.w1, &grad.w2],
            config.learning_rate,
        );
    }
    let final_loss = net.loss(&params, config.lambda)?;
    if !final_loss.is_finite() {
        return Err(Error::NonFiniteLoss {
            epoch: config.epochs,
        });
    }
    loss_history.push(final_loss);
    Ok(LamnetModel {
        params,
        config: config.clone(),
        structure: structure.clone(),
        loss_history,
    })
}

/// Scores of one trained model on the graph it was trained for.
pub fn score_single(model: &LamnetModel, g: &AttributedGraph) -> Result<ScoreVector> {
    model.score(g)
}
