//! Single-head attention block with adapters on the Q, K, V and O projections.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::grad::{adapter_gradients, FactorGrads};
use crate::adapters::{adapter_forward, build_adapter, merge_adapter, AdapterSpec, AdapterState};
use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, DenseVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Projection {
    Q,
    K,
    V,
    O,
}

impl Projection {
    pub const ALL: [Projection; 4] = [Projection::Q, Projection::K, Projection::V, Projection::O];

    fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Projection::Q => "Q",
            Projection::K => "K",
            Projection::V => "V",
            Projection::O => "O",
        }
    }
}

/// Frozen `dim × dim` projections plus optional adapters on each of them.
#[derive(Debug, Clone, PartialEq)]
pub struct ToyAttentionModel {
    dim: usize,
    base: [DenseMatrix; 4],
    adapters: BTreeMap<Projection, AdapterState>,
}

/// Intermediate values kept for the backward pass.
struct ForwardCache {
    x: Vec<DenseVector>,
    q: Vec<DenseVector>,
    k: Vec<DenseVector>,
    v: Vec<DenseVector>,
    probs: Vec<Vec<f64>>,
    heads: Vec<DenseVector>,
}

impl ToyAttentionModel {
    pub fn new(base: [DenseMatrix; 4]) -> Result<Self> {
        let dim = base[0].rows();
        if base.iter().any(|w| w.shape() != (dim, dim)) {
            return Err(Error::DimensionMismatch("base projections must all be dim x dim".into()));
        }
        Ok(Self {
            dim,
            base,
            adapters: BTreeMap::new(),
        })
    }

    /// Base projections with i.i.d. `N(0, 1/dim)` entries.
    pub fn random(dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dist = Normal::new(0.0, 1.0 / (dim as f64).sqrt()).expect("valid std");
        let mut draw = || DenseMatrix::from_fn(dim, dim, |_, _| dist.sample(&mut rng));
        Self::new([draw(), draw(), draw(), draw()]).expect("square projections")
    }

    /// Attaches one adapter per projection built from `template`, seeded
    /// `seed, seed + 1, ...` in Q, K, V, O order.
    pub fn with_adapters(mut self, template: &AdapterSpec, seed: u64) -> Result<Self> {
        for (i, p) in Projection::ALL.into_iter().enumerate() {
            let spec = template.for_layer(self.dim, self.dim).with_seed(seed.wrapping_add(i as u64));
            self.adapters.insert(p, build_adapter(&spec)?);
        }
        Ok(self)
    }

    pub fn set_adapter(&mut self, proj: Projection, state: AdapterState) -> Result<()> {
        if (state.d(), state.h()) != (self.dim, self.dim) {
            return Err(Error::DimensionMismatch(format!(
                "adapter is {}x{}, model width is {}",
                state.d(),
                state.h(),
                self.dim
            )));
        }
        self.adapters.insert(proj, state);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn base(&self, proj: Projection) -> &DenseMatrix {
        &self.base[proj.index()]
    }

    pub fn adapter(&self, proj: Projection) -> Option<&AdapterState> {
        self.adapters.get(&proj)
    }

    pub fn adapters(&self) -> &BTreeMap<Projection, AdapterState> {
        &self.adapters
    }

    pub(crate) fn adapters_mut(&mut self) -> &mut BTreeMap<Projection, AdapterState> {
        &mut self.adapters
    }

    /// Same base weights, no adapters.
    pub fn without_adapters(&self) -> Self {
        Self {
            dim: self.dim,
            base: self.base.clone(),
            adapters: BTreeMap::new(),
        }
    }

    /// Base weight with its adapter merged in.
    pub fn merged_weight(&self, proj: Projection) -> DenseMatrix {
        match self.adapters.get(&proj) {
            Some(a) => merge_adapter(a, self.base(proj)).expect("adapter shape checked on attach"),
            None => self.base(proj).clone(),
        }
    }

    /// Same model with every adapter folded into its base weight.
    pub fn merged(&self) -> Self {
        let base = Projection::ALL.map(|p| self.merged_weight(p));
        Self::new(base).expect("merged weights keep their shape")
    }

    fn project(&self, proj: Projection, x: &DenseVector) -> Result<DenseVector> {
        let w0 = self.base(proj);
        match self.adapters.get(&proj) {
            Some(a) => adapter_forward(a, w0, &DenseVector::zeros(self.dim), x),
            None => w0.matvec(x),
        }
    }

    /// `W_effᵀ · y` for the given projection.
    fn project_transpose(&self, proj: Projection, y: &DenseVector) -> Result<DenseVector> {
        let base = self.base(proj).transpose_matvec(y)?;
        match self.adapters.get(&proj) {
            Some(a) => base.add(&a.delta_transpose_matvec(y)?),
            None => Ok(base),
        }
    }

    fn forward_cached(&self, tokens: &DenseMatrix) -> Result<ForwardCache> {
        if tokens.cols() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "tokens have width {}, model width is {}",
                tokens.cols(),
                self.dim
            )));
        }
        let n = tokens.rows();
        let x: Vec<DenseVector> = (0..n)
            .map(|i| DenseVector::new((0..self.dim).map(|j| tokens.get(i, j)).collect()))
            .collect::<Result<_>>()?;
        let proj_all = |p| x.iter().map(|xi| self.project(p, xi)).collect::<Result<Vec<_>>>();
        let q = proj_all(Projection::Q)?;
        let k = proj_all(Projection::K)?;
        let v = proj_all(Projection::V)?;
        let inv_sqrt = 1.0 / (self.dim as f64).sqrt();
        let probs: Vec<Vec<f64>> = q
            .iter()
            .map(|qi| softmax(&k.iter().map(|kj| qi.dot(kj) * inv_sqrt).collect::<Vec<_>>()))
            .collect();
        let heads = probs
            .iter()
            .map(|row| {
                let mut h = vec![0.0; self.dim];
                for (p, vj) in row.iter().zip(&v) {
                    for (hk, vk) in h.iter_mut().zip(vj.data()) {
                        *hk += p * vk;
                    }
                }
                DenseVector::new(h)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ForwardCache { x, q, k, v, probs, heads })
    }

    /// `softmax(Q Kᵀ / √dim) V`, projected by O. Rows of `tokens` are tokens.
    pub fn attention_forward(&self, tokens: &DenseMatrix) -> Result<DenseMatrix> {
        let cache = self.forward_cached(tokens)?;
        let outs = cache
            .heads
            .iter()
            .map(|h| self.project(Projection::O, h))
            .collect::<Result<Vec<_>>>()?;
        Ok(DenseMatrix::from_fn(outs.len(), self.dim, |i, j| outs[i].get(j)))
    }

    /// Runs forward, then backpropagates `d_out` (tokens × dim, one row per
    /// output token) into the adapter factors. Returns the output and the
    /// factor gradients for every attached adapter.
    pub(crate) fn forward_backward(
        &self,
        tokens: &DenseMatrix,
        d_out_fn: impl FnOnce(&[DenseVector]) -> Result<Vec<DenseVector>>,
    ) -> Result<(Vec<DenseVector>, BTreeMap<Projection, FactorGrads>)> {
        let cache = self.forward_cached(tokens)?;
        let outs = cache
            .heads
            .iter()
            .map(|h| self.project(Projection::O, h))
            .collect::<Result<Vec<_>>>()?;
        let d_out = d_out_fn(&outs)?;
        let n = outs.len();
        let inv_sqrt = 1.0 / (self.dim as f64).sqrt();

        let mut grads: BTreeMap<Projection, FactorGrads> = BTreeMap::new();
        let mut accumulate = |p: Projection, x: &DenseVector, g: &DenseVector| -> Result<()> {
            if let Some(a) = self.adapters.get(&p) {
                let fresh = adapter_gradients(a, x, g)?;
                match grads.get_mut(&p) {
                    Some(acc) => {
                        for (acc_f, f) in acc.iter_mut().zip(fresh) {
                            *acc_f = acc_f.add(&f)?;
                        }
                    }
                    None => {
                        grads.insert(p, fresh);
                    }
                }
            }
            Ok(())
        };

        let mut dv = vec![DenseVector::zeros(self.dim); n];
        let mut dq = Vec::with_capacity(n);
        let mut dk = vec![DenseVector::zeros(self.dim); n];
        let mut ds_rows = Vec::with_capacity(n);
        for i in 0..n {
            accumulate(Projection::O, &cache.heads[i], &d_out[i])?;
            let dh = self.project_transpose(Projection::O, &d_out[i])?;
            let dp: Vec<f64> = cache.v.iter().map(|vj| dh.dot(vj)).collect();
            let p = &cache.probs[i];
            for j in 0..n {
                dv[j] = dv[j].add(&dh.scaled(p[j]))?;
            }
            let inner: f64 = p.iter().zip(&dp).map(|(a, b)| a * b).sum();
            let ds: Vec<f64> = p.iter().zip(&dp).map(|(pj, dpj)| pj * (dpj - inner)).collect();
            ds_rows.push(ds);
        }
        for i in 0..n {
            let mut dqi = DenseVector::zeros(self.dim);
            for j in 0..n {
                let s = ds_rows[i][j] * inv_sqrt;
                dqi = dqi.add(&cache.k[j].scaled(s))?;
                dk[j] = dk[j].add(&cache.q[i].scaled(s))?;
            }
            dq.push(dqi);
        }
        for i in 0..n {
            accumulate(Projection::Q, &cache.x[i], &dq[i])?;
            accumulate(Projection::K, &cache.x[i], &dk[i])?;
            accumulate(Projection::V, &cache.x[i], &dv[i])?;
        }
        Ok((outs, grads))
    }
}

fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

/// Free-function form of [`ToyAttentionModel::attention_forward`].
pub fn attention_forward(model: &ToyAttentionModel, tokens: &DenseMatrix) -> Result<DenseMatrix> {
    model.attention_forward(tokens)
}
