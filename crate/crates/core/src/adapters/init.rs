use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};
use serde::{Deserialize, Serialize};

use crate::matrix::DenseMatrix;

/// Distribution for the randomly initialized (down) factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DownInit {
    /// `N(0, 1/a₂)` with `1/a₂` as the standard deviation, `a₂` being the factor's column count.
    #[default]
    NormalS1,
    /// `N(0, √min(d, h))`, std taken literally. Non-standard: entries are large
    /// for realistic layers. Only here to reproduce the initialization ablation.
    NormalS2,
    /// Kaiming uniform with negative slope `√5`: `U(±1/√fan_in)`.
    KaimingUniform,
    /// Xavier/Glorot uniform: `U(±√(6/(fan_in + fan_out)))`.
    XavierUniform,
}

/// Treatment of the up factor (B for KronA/LoRA, the last factor otherwise).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpInit {
    #[default]
    Zero,
    Same,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct InitScheme {
    #[serde(default)]
    pub down: DownInit,
    #[serde(default)]
    pub up: UpInit,
}

impl InitScheme {
    pub fn new(down: DownInit, up: UpInit) -> Self {
        Self { down, up }
    }

    pub fn is_nonstandard(&self) -> bool {
        self.down == DownInit::NormalS2
    }
}

/// Draws a `rows × cols` factor. `layer_min_dim` is `min(d, h)` of the host layer.
pub(crate) fn sample_factor(
    rng: &mut ChaCha8Rng,
    scheme: DownInit,
    rows: usize,
    cols: usize,
    layer_min_dim: usize,
) -> DenseMatrix {
    let fan_in = cols as f64;
    let fan_out = rows as f64;
    match scheme {
        DownInit::NormalS1 => normal(rng, rows, cols, 1.0 / fan_in),
        DownInit::NormalS2 => normal(rng, rows, cols, (layer_min_dim as f64).sqrt()),
        DownInit::KaimingUniform => uniform(rng, rows, cols, 1.0 / fan_in.sqrt()),
        DownInit::XavierUniform => uniform(rng, rows, cols, (6.0 / (fan_in + fan_out)).sqrt()),
    }
}

fn normal(rng: &mut ChaCha8Rng, rows: usize, cols: usize, std: f64) -> DenseMatrix {
    let dist = Normal::new(0.0, std).expect("std is positive and finite");
    DenseMatrix::from_fn(rows, cols, |_, _| dist.sample(rng))
}

fn uniform(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: f64) -> DenseMatrix {
    let dist = Uniform::new_inclusive(-bound, bound);
    DenseMatrix::from_fn(rows, cols, |_, _| rng.sample(dist))
}
