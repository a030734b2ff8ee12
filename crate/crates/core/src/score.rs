use serde::{Deserialize, Serialize};

/// Identifies one member network: truncation run `t`, depth `k` (both 0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MemberId {
    pub t: usize,
    pub k: usize,
}

/// Per-node anomaly scores, higher = more anomalous, with the method and
/// member networks that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    pub scores: Vec<f64>,
    pub method: String,
    pub members: Vec<MemberId>,
}

impl ScoreVector {
    pub fn new(scores: Vec<f64>, method: impl Into<String>) -> Self {
        Self {
            scores,
            method: method.into(),
            members: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}
