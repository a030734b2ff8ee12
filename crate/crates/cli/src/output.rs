//! Output files. Every writer builds its text deterministically from its
//! inputs so repeated runs produce identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use tam_core::graph::{edge_class_counts, homophily_stats};
use tam_core::{Adjacency, Error, MemberId, Result};

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|source| Error::Io {
            path: parent.into(),
            source,
        })?;
    }
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.into(),
        source,
    })
}

/// `node_id,score` rows using the caller's (original) node ids.
pub fn scores_csv(node_ids: &[usize], scores: &[f64]) -> String {
    let mut text = String::from("node_id,score\n");
    for (id, s) in node_ids.iter().zip(scores) {
        writeln!(text, "{id},{s}").unwrap();
    }
    text
}

/// Reads a `node_id,score` file into `(node_id, score)` pairs.
pub fn read_scores(path: &Path) -> Result<Vec<(usize, f64)>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.into(),
        source,
    })?;
    let mut out = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || (index == 0 && line.starts_with("node_id")) {
            continue;
        }
        let parsed = line
            .split_once(',')
            .and_then(|(id, s)| Some((id.trim().parse().ok()?, s.trim().parse().ok()?)));
        match parsed {
            Some(pair) => out.push(pair),
            None => {
                return Err(Error::Parse {
                    path: path.into(),
                    line: index + 1,
                    what: "score row (expected node_id,score)",
                    text: line.into(),
                })
            }
        }
    }
    Ok(out)
}

pub const TRUNCATION_HEADER: &str = "seed,t,k,edges_remaining,mean_homophily_normal,na_edges_remaining\n";

/// One row per `(t, k)`; `k = 0` is the original graph. Homophily and
/// normal–anomaly counts are blank without labels.
pub fn truncation_rows(
    text: &mut String,
    seed: u64,
    original: &Adjacency,
    structures: &[(MemberId, Adjacency)],
    labels: Option<&[bool]>,
) -> Result<()> {
    let mut row = |t: usize, k: usize, adj: &Adjacency| -> Result<()> {
        let (homophily, na) = match labels {
            Some(labels) => {
                let h = homophily_stats(adj, labels)?
                    .mean_normal()
                    .map_or(String::new(), |v| v.to_string());
                (h, edge_class_counts(adj, labels).normal_anomaly.to_string())
            }
            None => (String::new(), String::new()),
        };
        writeln!(text, "{seed},{t},{k},{},{homophily},{na}", adj.num_edges()).unwrap();
        Ok(())
    };
    let mut last_t = None;
    for (id, adj) in structures {
        if last_t != Some(id.t) {
            row(id.t, 0, original)?;
            last_t = Some(id.t);
        }
        row(id.t, id.k + 1, adj)?;
    }
    Ok(())
}
