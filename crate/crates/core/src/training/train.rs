use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::data::{
    denoiser_tokens, predict_noise, DataGenerator, DenoiseBatch, TaskConfig, TeacherStudentTask,
};
use super::grad::FactorGrads;
use super::model::{Projection, ToyAttentionModel};
use crate::adapters::{module_delta, ModuleDelta};
use crate::error::{Error, Result};
use crate::matrix::DenseVector;
use crate::numeric::pairwise_mean;

/// Loss above which a run is declared divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OptimizerKind {
    Sgd,
    Adam {
        #[serde(default = "default_beta1")]
        beta1: f64,
        #[serde(default = "default_beta2")]
        beta2: f64,
        #[serde(default = "default_adam_eps")]
        eps: f64,
    },
}

fn default_beta1() -> f64 {
    0.9
}
fn default_beta2() -> f64 {
    0.999
}
fn default_adam_eps() -> f64 {
    1e-8
}

impl Default for OptimizerKind {
    fn default() -> Self {
        OptimizerKind::Adam {
            beta1: default_beta1(),
            beta2: default_beta2(),
            eps: default_adam_eps(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub steps: usize,
    pub optimizer: OptimizerKind,
    pub seed: u64,
    pub batch_size: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 5e-4,
            steps: 1000,
            optimizer: OptimizerKind::default(),
            seed: 0,
            batch_size: 16,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidConfig("learning_rate must be positive".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidConfig("batch_size must be positive".into()));
        }
        if let OptimizerKind::Adam { beta1, beta2, eps } = self.optimizer {
            if !(0.0..1.0).contains(&beta1) || !(0.0..1.0).contains(&beta2) || eps <= 0.0 {
                return Err(Error::InvalidConfig("adam needs beta in [0, 1) and eps > 0".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainHistory {
    /// Loss before the update at each step.
    pub losses: Vec<f64>,
    /// Relative change of each adapted projection, base vs merged weight.
    pub module_deltas: Vec<ModuleDelta>,
}

/// Mean over the batch of `w_t · ‖D(z_t | c, t) − ε‖²`.
pub fn denoise_loss(model: &ToyAttentionModel, batch: &DenoiseBatch) -> Result<f64> {
    let terms = (0..batch.len())
        .map(|i| {
            let pred = predict_noise(model, &batch.z_t[i], &batch.c[i], batch.t[i])?;
            let r = pred.sub(&batch.eps[i])?;
            Ok(batch.w_t[i] * r.dot(&r))
        })
        .collect::<Result<Vec<f64>>>()?;
    let loss = pairwise_mean(&terms);
    if loss.is_finite() {
        Ok(loss)
    } else {
        Err(Error::NonFinite("denoising loss".into()))
    }
}

/// Loss and its gradient with respect to every adapter factor.
pub fn loss_and_gradients(
    model: &ToyAttentionModel,
    batch: &DenoiseBatch,
) -> Result<(f64, BTreeMap<Projection, FactorGrads>)> {
    let n = batch.len() as f64;
    let mut terms = Vec::with_capacity(batch.len());
    let mut total: BTreeMap<Projection, FactorGrads> = BTreeMap::new();
    for i in 0..batch.len() {
        let tokens = denoiser_tokens(&batch.z_t[i], &batch.c[i], batch.t[i])?;
        let mut term = 0.0;
        let (_, grads) = model.forward_backward(&tokens, |outs| {
            let r = outs[0].sub(&batch.eps[i])?;
            term = batch.w_t[i] * r.dot(&r);
            let mut d_out = vec![DenseVector::zeros(model.dim()); outs.len()];
            d_out[0] = r.scaled(2.0 * batch.w_t[i] / n);
            Ok(d_out)
        })?;
        terms.push(term);
        for (p, g) in grads {
            match total.get_mut(&p) {
                Some(acc) => {
                    for (a, f) in acc.iter_mut().zip(g) {
                        *a = a.add(&f)?;
                    }
                }
                None => {
                    total.insert(p, g);
                }
            }
        }
    }
    let loss = pairwise_mean(&terms);
    if !loss.is_finite() {
        return Err(Error::NonFinite("denoising loss".into()));
    }
    Ok((loss, total))
}

struct AdamMoments {
    m: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
}

/// First-order optimizer over all adapter factors of a model.
struct Optimizer {
    kind: OptimizerKind,
    lr: f64,
    step: i32,
    moments: BTreeMap<Projection, AdamMoments>,
}

impl Optimizer {
    fn new(kind: OptimizerKind, lr: f64) -> Self {
        Self {
            kind,
            lr,
            step: 0,
            moments: BTreeMap::new(),
        }
    }

    fn update(&mut self, model: &mut ToyAttentionModel, grads: &BTreeMap<Projection, FactorGrads>) {
        self.step += 1;
        for (proj, state) in model.adapters_mut().iter_mut() {
            let Some(g) = grads.get(proj) else { continue };
            let slots = state.factor_data_mut();
            match self.kind {
                OptimizerKind::Sgd => {
                    for (slot, gf) in slots.into_iter().zip(g) {
                        for (p, gi) in slot.iter_mut().zip(gf.data()) {
                            *p -= self.lr * gi;
                        }
                    }
                }
                OptimizerKind::Adam { beta1, beta2, eps } => {
                    let mom = self.moments.entry(*proj).or_insert_with(|| AdamMoments {
                        m: g.iter().map(|f| vec![0.0; f.data().len()]).collect(),
                        v: g.iter().map(|f| vec![0.0; f.data().len()]).collect(),
                    });
                    let bc1 = 1.0 - beta1.powi(self.step);
                    let bc2 = 1.0 - beta2.powi(self.step);
                    for (k, (slot, gf)) in slots.into_iter().zip(g).enumerate() {
                        let (m, v) = (&mut mom.m[k], &mut mom.v[k]);
                        for (i, (p, &gi)) in slot.iter_mut().zip(gf.data()).enumerate() {
                            m[i] = beta1 * m[i] + (1.0 - beta1) * gi;
                            v[i] = beta2 * v[i] + (1.0 - beta2) * gi * gi;
                            let m_hat = m[i] / bc1;
                            let v_hat = v[i] / bc2;
                            *p -= self.lr * m_hat / (v_hat.sqrt() + eps);
                        }
                    }
                }
            }
        }
    }
}

/// Deterministic training loop. Only adapter factors change; base weights are
/// never written.
pub fn train(
    model: &mut ToyAttentionModel,
    data: &mut dyn DataGenerator,
    config: &TrainConfig,
) -> Result<TrainHistory> {
    config.validate()?;
    let mut opt = Optimizer::new(config.optimizer, config.learning_rate);
    let mut losses = Vec::with_capacity(config.steps);
    for step in 0..config.steps {
        let batch = data.next_batch(config.batch_size)?;
        let (loss, grads) = match loss_and_gradients(model, &batch) {
            Ok(r) => r,
            Err(Error::NonFinite(_)) => {
                return Err(Error::DivergenceDetected { step, loss: f64::NAN })
            }
            Err(e) => return Err(e),
        };
        if loss > DIVERGENCE_THRESHOLD {
            return Err(Error::DivergenceDetected { step, loss });
        }
        losses.push(loss);
        opt.update(model, &grads);
    }
    let module_deltas = model
        .adapters()
        .keys()
        .map(|&p| {
            let delta = module_delta(model.base(p), &model.merged_weight(p))?;
            Ok(ModuleDelta {
                layer_name: p.as_str().to_string(),
                delta,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TrainHistory {
        losses,
        module_deltas,
    })
}

/// Size of the held-out batch used to compare loss before and after training.
pub const EVAL_BATCH_SIZE: usize = 64;

/// Outcome of [`run_teacher_student`].
#[derive(Debug, Clone)]
pub struct TeacherStudentReport {
    pub history: TrainHistory,
    /// Held-out loss of the student before training.
    pub initial_eval_loss: f64,
    /// Held-out loss of the student after training.
    pub final_eval_loss: f64,
    pub student: ToyAttentionModel,
    pub base_before: ToyAttentionModel,
}

impl TeacherStudentReport {
    pub fn loss_ratio(&self) -> f64 {
        self.final_eval_loss / self.initial_eval_loss
    }
}

/// Sets up the teacher-student task from `config.seed`, trains, and scores the
/// student on a fixed held-out batch drawn from an independent stream.
pub fn run_teacher_student(task: &TaskConfig, config: &TrainConfig) -> Result<TeacherStudentReport> {
    config.validate()?;
    let (mut student, mut data) = TeacherStudentTask::setup(task, config.seed)?;
    let eval = data.fork(config.seed.wrapping_add(400)).next_batch(EVAL_BATCH_SIZE)?;
    let base_before = student.without_adapters();
    let initial_eval_loss = denoise_loss(&student, &eval)?;
    let history = train(&mut student, &mut data, config)?;
    let final_eval_loss = denoise_loss(&student, &eval)
        .map_err(|_| Error::DivergenceDetected { step: config.steps, loss: f64::NAN })?;
    Ok(TeacherStudentReport {
        history,
        initial_eval_loss,
        final_eval_loss,
        student,
        base_before,
    })
}
