//! Denoising batches and the synthetic teacher-student task.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use serde::{Deserialize, Serialize};

use super::model::{Projection, ToyAttentionModel};
use crate::adapters::{build_adapter, AdapterSpec};
use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, DenseVector};

/// One batch of `(z_t, c, t, ε, w_t)` samples.
#[derive(Debug, Clone, PartialEq)]
pub struct DenoiseBatch {
    pub z_t: Vec<DenseVector>,
    pub eps: Vec<DenseVector>,
    pub c: Vec<DenseVector>,
    pub t: Vec<usize>,
    pub w_t: Vec<f64>,
}

impl DenoiseBatch {
    pub fn new(
        z_t: Vec<DenseVector>,
        eps: Vec<DenseVector>,
        c: Vec<DenseVector>,
        t: Vec<usize>,
        w_t: Vec<f64>,
    ) -> Result<Self> {
        let n = z_t.len();
        if n == 0 || [eps.len(), c.len(), t.len(), w_t.len()].iter().any(|&l| l != n) {
            return Err(Error::DimensionMismatch("batch arrays must share a positive length".into()));
        }
        if w_t.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidConfig("w_t must be positive and finite".into()));
        }
        let dim = z_t[0].len();
        if z_t.iter().chain(&eps).chain(&c).any(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch("batch vectors must share one width".into()));
        }
        Ok(Self { z_t, eps, c, t, w_t })
    }

    pub fn len(&self) -> usize {
        self.z_t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z_t.is_empty()
    }
}

/// Fixed sinusoidal embedding of timestep `t`.
pub fn timestep_embedding(t: usize, dim: usize) -> DenseVector {
    let data = (0..dim)
        .map(|k| {
            let freq = 10_000f64.powf(-((k / 2 * 2) as f64) / dim as f64);
            let angle = t as f64 * freq;
            if k % 2 == 0 {
                angle.sin()
            } else {
                angle.cos()
            }
        })
        .collect();
    DenseVector::new(data).expect("finite embedding")
}

/// Token matrix fed to the denoiser: `[z_t + e(t); c + e(t)]`.
pub fn denoiser_tokens(z_t: &DenseVector, c: &DenseVector, t: usize) -> Result<DenseMatrix> {
    let dim = z_t.len();
    let e = timestep_embedding(t, dim);
    let z = z_t.add(&e)?;
    let c = c.add(&e)?;
    Ok(DenseMatrix::from_fn(2, dim, |i, j| if i == 0 { z.get(j) } else { c.get(j) }))
}

/// Noise prediction `D(z_t | c, t)`: the attention output at the latent token.
pub fn predict_noise(
    model: &ToyAttentionModel,
    z_t: &DenseVector,
    c: &DenseVector,
    t: usize,
) -> Result<DenseVector> {
    let out = model.attention_forward(&denoiser_tokens(z_t, c, t)?)?;
    DenseVector::new((0..model.dim()).map(|j| out.get(0, j)).collect())
}

pub trait DataGenerator {
    fn next_batch(&mut self, batch_size: usize) -> Result<DenoiseBatch>;
}

/// How the hidden teacher adapters are chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TeacherKind {
    /// Teacher reuses each student adapter's initial factors and replaces the
    /// (zero) up factor with `U(±up_bound)` entries, so the target is exactly
    /// reachable by the student's parameterization.
    SharedDown { up_bound: f64 },
    /// Teacher adapters built independently from their own spec.
    Independent { spec: AdapterSpec },
}

impl Default for TeacherKind {
    fn default() -> Self {
        TeacherKind::SharedDown { up_bound: 0.5 }
    }
}

/// Settings for the teacher-student task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TaskConfig {
    /// Model width.
    pub dim: usize,
    pub num_timesteps: usize,
    /// Student adapter template; `d`, `h` and `seed` are overwritten per projection.
    pub student: AdapterSpec,
    pub teacher: TeacherKind,
}

impl Default for TaskConfig {
    fn default() -> Self {
        let dim = 16;
        Self {
            dim,
            num_timesteps: 1000,
            student: AdapterSpec::krona(dim, dim, 4, 4),
            teacher: TeacherKind::default(),
        }
    }
}

/// Targets are the noise predictions of a hidden adapted teacher that shares
/// the student's frozen base weights.
#[derive(Debug, Clone)]
pub struct TeacherStudentTask {
    teacher: ToyAttentionModel,
    rng: ChaCha8Rng,
    num_timesteps: usize,
}

impl TeacherStudentTask {
    pub fn new(teacher: ToyAttentionModel, num_timesteps: usize, seed: u64) -> Self {
        Self {
            teacher,
            rng: ChaCha8Rng::seed_from_u64(seed),
            num_timesteps: num_timesteps.max(1),
        }
    }

    pub fn teacher(&self) -> &ToyAttentionModel {
        &self.teacher
    }

    /// Builds the student and the task generator. All randomness derives from `seed`.
    pub fn setup(config: &TaskConfig, seed: u64) -> Result<(ToyAttentionModel, Self)> {
        if config.dim == 0 {
            return Err(Error::InvalidConfig("task dim must be positive".into()));
        }
        let base = ToyAttentionModel::random(config.dim, seed);
        let student = base.clone().with_adapters(&config.student, seed.wrapping_add(100))?;
        let mut teacher = base;
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(200));
        for (i, p) in Projection::ALL.into_iter().enumerate() {
            let state = match &config.teacher {
                TeacherKind::SharedDown { up_bound } => {
                    if !(*up_bound > 0.0 && up_bound.is_finite()) {
                        return Err(Error::InvalidConfig("up_bound must be positive".into()));
                    }
                    let dist = Uniform::new_inclusive(-up_bound, *up_bound);
                    let mut state = student.adapter(p).expect("student has all projections").clone();
                    let mut slots = state.factor_data_mut();
                    for v in slots.last_mut().expect("at least one factor").iter_mut() {
                        *v = dist.sample(&mut rng);
                    }
                    state
                }
                TeacherKind::Independent { spec } => build_adapter(
                    &spec
                        .for_layer(config.dim, config.dim)
                        .with_seed(seed.wrapping_add(200 + i as u64)),
                )?,
            };
            teacher.set_adapter(p, state)?;
        }
        let task = Self::new(teacher, config.num_timesteps, seed.wrapping_add(300));
        Ok((student, task))
    }

    /// Same teacher with an independent sample stream, for held-out evaluation.
    pub fn fork(&self, seed: u64) -> Self {
        Self::new(self.teacher.clone(), self.num_timesteps, seed)
    }

    fn gaussian(&mut self, dim: usize) -> DenseVector {
        let data = (0..dim).map(|_| StandardNormal.sample(&mut self.rng)).collect();
        DenseVector::new(data).expect("finite samples")
    }
}

impl DataGenerator for TeacherStudentTask {
    fn next_batch(&mut self, batch_size: usize) -> Result<DenoiseBatch> {
        let dim = self.teacher.dim();
        let mut z_t = Vec::with_capacity(batch_size);
        let mut c = Vec::with_capacity(batch_size);
        let mut t = Vec::with_capacity(batch_size);
        let mut eps = Vec::with_capacity(batch_size);
        for _ in 0..batch_size {
            let z = self.gaussian(dim);
            let cond = self.gaussian(dim);
            let step = self.rng.gen_range(0..self.num_timesteps);
            eps.push(predict_noise(&self.teacher, &z, &cond, step)?);
            z_t.push(z);
            c.push(cond);
            t.push(step);
        }
        DenoiseBatch::new(z_t, eps, c, t, vec![1.0; batch_size])
    }
}
