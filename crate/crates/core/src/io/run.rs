use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::training::{TaskConfig, TrainConfig};

/// A training run: optimizer settings plus the synthetic task.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainRunConfig {
    #[serde(flatten)]
    pub train: TrainConfig,
    pub task: TaskConfig,
}

impl TrainRunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.train.validate()?;
        if cfg.task.dim == 0 {
            return Err(Error::InvalidConfig("task.dim must be positive".into()));
        }
        Ok(cfg)
    }
}

pub fn load_train_config(path: impl AsRef<Path>) -> Result<TrainRunConfig> {
    TrainRunConfig::from_json(&std::fs::read_to_string(path)?)
}

/// `step,loss` CSV. Losses use Rust's shortest round-trip float formatting.
pub fn history_to_csv(losses: &[f64]) -> String {
    let mut out = String::from("step,loss\n");
    for (i, l) in losses.iter().enumerate() {
        out.push_str(&format!("{i},{l}\n"));
    }
    out
}

pub fn history_from_csv(text: &str) -> Result<Vec<f64>> {
    let mut lines = text.lines();
    if lines.next() != Some("step,loss") {
        return Err(Error::Parse("history CSV must start with `step,loss`".into()));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let (step, loss) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("line {}: expected two fields", i + 2)))?;
            if step.parse::<usize>().ok() != Some(i) {
                return Err(Error::Parse(format!("line {}: step out of sequence", i + 2)));
            }
            loss.parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", i + 2)))
        })
        .collect()
}
