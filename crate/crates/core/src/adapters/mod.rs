//! Adapter families attached to a frozen `d × h` weight.
//!
//! A layer maps `x ∈ R^h` to `R^d` as `W·x`, so every adapter produces a
//! `d × h` update `ΔW`:
//!
//! | family | update | trainable scalars |
//! |--------|--------|-------------------|
//! | KronA  | `A ⊗ B`, `A: a₁×a₂`, `B: (d/a₁)×(h/a₂)` | `a₁a₂ + (d/a₁)(h/a₂)` |
//! | LoRA   | `A·B`, `A: d×r`, `B: r×h` | `r(d + h)` |
//! | LoKr   | `A ⊗ (B·C)` (or `A ⊗ B` without the inner split) | see [`param_count`] |
//! | LoHA   | `(A·B) ⊙ (C·D)` | `2r(d + h)` |
//!
//! Every update is multiplied by the adapter's `scale`.

mod factorize;
mod init;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use factorize::{enumerate_factor_pairs, lokr_factorization};
pub use init::{DownInit, InitScheme, UpInit};

use crate::error::{Error, Result};
use crate::io::LayerManifest;
use crate::kron::{kron_materialize_with_budget, kron_matvec};
use crate::matrix::{DenseMatrix, DenseVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdapterFamily {
    Krona,
    Lora,
    Lokr,
    Loha,
}

impl AdapterFamily {
    pub fn as_str(&self) -> &'static str {
        match self {
            AdapterFamily::Krona => "krona",
            AdapterFamily::Lora => "lora",
            AdapterFamily::Lokr => "lokr",
            AdapterFamily::Loha => "loha",
        }
    }
}

impl std::fmt::Display for AdapterFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for AdapterFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "krona" => Ok(AdapterFamily::Krona),
            "lora" => Ok(AdapterFamily::Lora),
            "lokr" => Ok(AdapterFamily::Lokr),
            "loha" => Ok(AdapterFamily::Loha),
            other => Err(Error::InvalidSpec(format!("unknown adapter family `{other}`"))),
        }
    }
}

fn default_scale() -> f64 {
    1.0
}

/// Everything needed to build an adapter for one `d × h` layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdapterSpec {
    pub family: AdapterFamily,
    pub d: usize,
    pub h: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a1: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a2: Option<usize>,
    /// LoRA/LoHA rank, or the inner rank of LoKr's second block.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    /// LoKr `factor` (`-1` picks the most balanced split).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor: Option<i64>,
    /// LoKr only: keep the second Kronecker block as one dense matrix.
    #[serde(default)]
    pub lokr_full_second_block: bool,
    #[serde(default)]
    pub init: InitScheme,
    #[serde(default = "default_scale")]
    pub scale: f64,
    pub seed: u64,
}

impl AdapterSpec {
    fn base(family: AdapterFamily, d: usize, h: usize) -> Self {
        Self {
            family,
            d,
            h,
            a1: None,
            a2: None,
            rank: None,
            factor: None,
            lokr_full_second_block: false,
            init: InitScheme::default(),
            scale: 1.0,
            seed: 0,
        }
    }

    pub fn krona(d: usize, h: usize, a1: usize, a2: usize) -> Self {
        Self {
            a1: Some(a1),
            a2: Some(a2),
            ..Self::base(AdapterFamily::Krona, d, h)
        }
    }

    pub fn lora(d: usize, h: usize, rank: usize) -> Self {
        Self {
            rank: Some(rank),
            ..Self::base(AdapterFamily::Lora, d, h)
        }
    }

    pub fn lokr(d: usize, h: usize, factor: i64, rank: usize) -> Self {
        Self {
            factor: Some(factor),
            rank: Some(rank),
            ..Self::base(AdapterFamily::Lokr, d, h)
        }
    }

    /// LoKr with an undecomposed second block.
    pub fn lokr_full(d: usize, h: usize, factor: i64) -> Self {
        Self {
            factor: Some(factor),
            lokr_full_second_block: true,
            ..Self::base(AdapterFamily::Lokr, d, h)
        }
    }

    pub fn loha(d: usize, h: usize, rank: usize) -> Self {
        Self {
            rank: Some(rank),
            ..Self::base(AdapterFamily::Loha, d, h)
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_init(mut self, init: InitScheme) -> Self {
        self.init = init;
        self
    }

    /// Same hyperparameters on a different layer shape.
    pub fn for_layer(&self, d: usize, h: usize) -> Self {
        Self { d, h, ..self.clone() }
    }

    /// Checks the spec and resolves every factor shape, in canonical factor order.
    pub fn factor_shapes(&self) -> Result<Vec<(usize, usize)>> {
        let (d, h) = (self.d, self.h);
        if d == 0 || h == 0 {
            return Err(Error::InvalidSpec(format!("layer dims must be positive, got {d}x{h}")));
        }
        if !self.scale.is_finite() {
            return Err(Error::InvalidSpec("scale must be finite".into()));
        }
        let need_rank = |max: usize| -> Result<usize> {
            let rank = self
                .rank
                .ok_or_else(|| Error::InvalidSpec(format!("{} requires a rank", self.family)))?;
            if rank == 0 || rank > max {
                return Err(Error::InvalidRank { rank, max });
            }
            Ok(rank)
        };
        match self.family {
            AdapterFamily::Krona => {
                let (a1, a2) = match (self.a1, self.a2) {
                    (Some(a1), Some(a2)) => (a1, a2),
                    _ => return Err(Error::InvalidSpec("krona requires a1 and a2".into())),
                };
                if a1 == 0 || d % a1 != 0 {
                    return Err(Error::InvalidFactorization(format!("a1 = {a1} does not divide d = {d}")));
                }
                if a2 == 0 || h % a2 != 0 {
                    return Err(Error::InvalidFactorization(format!("a2 = {a2} does not divide h = {h}")));
                }
                Ok(vec![(a1, a2), (d / a1, h / a2)])
            }
            AdapterFamily::Lora => {
                let r = need_rank(d.min(h))?;
                Ok(vec![(d, r), (r, h)])
            }
            AdapterFamily::Lokr => {
                let factor = self.factor.unwrap_or(-1);
                if factor == 0 {
                    return Err(Error::InvalidSpec("lokr factor must be positive or -1".into()));
                }
                let (md, nd) = lokr_factorization(d, factor);
                let (mh, nh) = lokr_factorization(h, factor);
                if self.lokr_full_second_block {
                    Ok(vec![(md, mh), (nd, nh)])
                } else {
                    let r = need_rank(nd.min(nh))?;
                    Ok(vec![(md, mh), (nd, r), (r, nh)])
                }
            }
            AdapterFamily::Loha => {
                let r = need_rank(d.min(h))?;
                Ok(vec![(d, r), (r, h), (d, r), (r, h)])
            }
        }
    }
}

/// Fields shared by every adapter state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdapterMeta {
    pub d: usize,
    pub h: usize,
    pub scale: f64,
    pub seed: u64,
}

/// `ΔW = scale · (A ⊗ B)` with `A: a₁×a₂`, `B: b₁×b₂`, `a₁b₁ = d`, `a₂b₂ = h`.
#[derive(Debug, Clone, PartialEq)]
pub struct KronAdapterState {
    meta: AdapterMeta,
    a: DenseMatrix,
    b: DenseMatrix,
}

impl KronAdapterState {
    pub fn new(meta: AdapterMeta, a: DenseMatrix, b: DenseMatrix) -> Result<Self> {
        if a.rows() * b.rows() != meta.d || a.cols() * b.cols() != meta.h {
            return Err(Error::InvalidFactorization(format!(
                "{}x{} ⊗ {}x{} is not {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols(),
                meta.d,
                meta.h
            )));
        }
        Ok(Self { meta, a, b })
    }

    pub fn a(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn b(&self) -> &DenseMatrix {
        &self.b
    }

    /// `(a₁, a₂, b₁, b₂)`
    pub fn factor_dims(&self) -> (usize, usize, usize, usize) {
        (self.a.rows(), self.a.cols(), self.b.rows(), self.b.cols())
    }
}

/// `ΔW = scale · A·B` with `A: d×r`, `B: r×h`.
#[derive(Debug, Clone, PartialEq)]
pub struct LoraAdapterState {
    meta: AdapterMeta,
    a: DenseMatrix,
    b: DenseMatrix,
}

impl LoraAdapterState {
    pub fn new(meta: AdapterMeta, a: DenseMatrix, b: DenseMatrix) -> Result<Self> {
        let r = a.cols();
        if a.rows() != meta.d || b.cols() != meta.h || b.rows() != r {
            return Err(Error::DimensionMismatch(format!(
                "lora factors {}x{} · {}x{} do not form {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols(),
                meta.d,
                meta.h
            )));
        }
        if r > meta.d.min(meta.h) {
            return Err(Error::InvalidRank { rank: r, max: meta.d.min(meta.h) });
        }
        Ok(Self { meta, a, b })
    }

    pub fn rank(&self) -> usize {
        self.a.cols()
    }

    pub fn a(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn b(&self) -> &DenseMatrix {
        &self.b
    }
}

/// Second Kronecker block of a LoKr adapter.
#[derive(Debug, Clone, PartialEq)]
pub enum LokrBlock {
    Full(DenseMatrix),
    LowRank { b: DenseMatrix, c: DenseMatrix },
}

/// `ΔW = scale · A ⊗ (B·C)`, or `scale · A ⊗ B` with a full second block.
#[derive(Debug, Clone, PartialEq)]
pub struct LokrAdapterState {
    meta: AdapterMeta,
    a: DenseMatrix,
    second: LokrBlock,
}

impl LokrAdapterState {
    pub fn new(meta: AdapterMeta, a: DenseMatrix, second: LokrBlock) -> Result<Self> {
        let (sr, sc) = match &second {
            LokrBlock::Full(m) => m.shape(),
            LokrBlock::LowRank { b, c } => {
                if b.cols() != c.rows() {
                    return Err(Error::DimensionMismatch(format!(
                        "lokr inner factors {}x{} · {}x{}",
                        b.rows(),
                        b.cols(),
                        c.rows(),
                        c.cols()
                    )));
                }
                (b.rows(), c.cols())
            }
        };
        if a.rows() * sr != meta.d || a.cols() * sc != meta.h {
            return Err(Error::InvalidFactorization(format!(
                "lokr {}x{} ⊗ {}x{} is not {}x{}",
                a.rows(),
                a.cols(),
                sr,
                sc,
                meta.d,
                meta.h
            )));
        }
        Ok(Self { meta, a, second })
    }

    pub fn a(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn second(&self) -> &LokrBlock {
        &self.second
    }

    /// The second Kronecker block, `B·C` when decomposed.
    pub fn second_block(&self) -> DenseMatrix {
        match &self.second {
            LokrBlock::Full(m) => m.clone(),
            LokrBlock::LowRank { b, c } => b.matmul(c).expect("inner shapes checked at construction"),
        }
    }
}

/// `ΔW = scale · (A·B) ⊙ (C·D)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LohaAdapterState {
    meta: AdapterMeta,
    a: DenseMatrix,
    b: DenseMatrix,
    c: DenseMatrix,
    d: DenseMatrix,
}

impl LohaAdapterState {
    pub fn new(
        meta: AdapterMeta,
        a: DenseMatrix,
        b: DenseMatrix,
        c: DenseMatrix,
        d: DenseMatrix,
    ) -> Result<Self> {
        let ok = |x: &DenseMatrix, y: &DenseMatrix| {
            x.rows() == meta.d && y.cols() == meta.h && x.cols() == y.rows()
        };
        if !ok(&a, &b) || !ok(&c, &d) {
            return Err(Error::DimensionMismatch(format!(
                "loha factors do not form two {}x{} products",
                meta.d, meta.h
            )));
        }
        Ok(Self { meta, a, b, c, d })
    }

    pub fn rank(&self) -> usize {
        self.a.cols()
    }

    pub fn factors(&self) -> [&DenseMatrix; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub(crate) fn products(&self) -> (DenseMatrix, DenseMatrix) {
        let p = self.a.matmul(&self.b).expect("shapes checked at construction");
        let q = self.c.matmul(&self.d).expect("shapes checked at construction");
        (p, q)
    }
}

/// A built adapter of any family.
#[derive(Debug, Clone, PartialEq)]
pub enum AdapterState {
    Krona(KronAdapterState),
    Lora(LoraAdapterState),
    Lokr(LokrAdapterState),
    Loha(LohaAdapterState),
}

impl AdapterState {
    pub fn family(&self) -> AdapterFamily {
        match self {
            AdapterState::Krona(_) => AdapterFamily::Krona,
            AdapterState::Lora(_) => AdapterFamily::Lora,
            AdapterState::Lokr(_) => AdapterFamily::Lokr,
            AdapterState::Loha(_) => AdapterFamily::Loha,
        }
    }

    pub fn meta(&self) -> &AdapterMeta {
        match self {
            AdapterState::Krona(s) => &s.meta,
            AdapterState::Lora(s) => &s.meta,
            AdapterState::Lokr(s) => &s.meta,
            AdapterState::Loha(s) => &s.meta,
        }
    }

    pub fn d(&self) -> usize {
        self.meta().d
    }

    pub fn h(&self) -> usize {
        self.meta().h
    }

    pub fn scale(&self) -> f64 {
        self.meta().scale
    }

    pub fn seed(&self) -> u64 {
        self.meta().seed
    }

    pub fn set_scale(&mut self, scale: f64) {
        match self {
            AdapterState::Krona(s) => s.meta.scale = scale,
            AdapterState::Lora(s) => s.meta.scale = scale,
            AdapterState::Lokr(s) => s.meta.scale = scale,
            AdapterState::Loha(s) => s.meta.scale = scale,
        }
    }

    /// Factor names in canonical order, matching [`AdapterState::factors`].
    pub fn factor_names(&self) -> &'static [&'static str] {
        match self {
            AdapterState::Krona(_) | AdapterState::Lora(_) => &["A", "B"],
            AdapterState::Lokr(s) => match s.second {
                LokrBlock::Full(_) => &["A", "B"],
                LokrBlock::LowRank { .. } => &["A", "B", "C"],
            },
            AdapterState::Loha(_) => &["A", "B", "C", "D"],
        }
    }

    /// Trainable factors in canonical order.
    pub fn factors(&self) -> Vec<&DenseMatrix> {
        match self {
            AdapterState::Krona(s) => vec![&s.a, &s.b],
            AdapterState::Lora(s) => vec![&s.a, &s.b],
            AdapterState::Lokr(s) => match &s.second {
                LokrBlock::Full(m) => vec![&s.a, m],
                LokrBlock::LowRank { b, c } => vec![&s.a, b, c],
            },
            AdapterState::Loha(s) => vec![&s.a, &s.b, &s.c, &s.d],
        }
    }

    /// Mutable factor entries in canonical order. Shapes cannot change through this view.
    pub fn factor_data_mut(&mut self) -> Vec<&mut [f64]> {
        match self {
            AdapterState::Krona(s) => vec![s.a.data_mut(), s.b.data_mut()],
            AdapterState::Lora(s) => vec![s.a.data_mut(), s.b.data_mut()],
            AdapterState::Lokr(s) => match &mut s.second {
                LokrBlock::Full(m) => vec![s.a.data_mut(), m.data_mut()],
                LokrBlock::LowRank { b, c } => vec![s.a.data_mut(), b.data_mut(), c.data_mut()],
            },
            AdapterState::Loha(s) => vec![
                s.a.data_mut(),
                s.b.data_mut(),
                s.c.data_mut(),
                s.d.data_mut(),
            ],
        }
    }

    /// Rebuilds a state from factors in canonical order, validating shapes.
    pub fn from_factors(
        family: AdapterFamily,
        meta: AdapterMeta,
        factors: Vec<DenseMatrix>,
    ) -> Result<Self> {
        let n = factors.len();
        let mut it = factors.into_iter();
        let mut next = || it.next().expect("length checked");
        let bad = |expected: &str| {
            Err(Error::InvalidSpec(format!("{family} expects {expected} factors, got {n}")))
        };
        match family {
            AdapterFamily::Krona if n == 2 => {
                Ok(AdapterState::Krona(KronAdapterState::new(meta, next(), next())?))
            }
            AdapterFamily::Lora if n == 2 => {
                Ok(AdapterState::Lora(LoraAdapterState::new(meta, next(), next())?))
            }
            AdapterFamily::Lokr if n == 2 => {
                let a = next();
                Ok(AdapterState::Lokr(LokrAdapterState::new(meta, a, LokrBlock::Full(next()))?))
            }
            AdapterFamily::Lokr if n == 3 => {
                let a = next();
                let (b, c) = (next(), next());
                Ok(AdapterState::Lokr(LokrAdapterState::new(meta, a, LokrBlock::LowRank { b, c })?))
            }
            AdapterFamily::Loha if n == 4 => {
                let (a, b, c, d) = (next(), next(), next(), next());
                Ok(AdapterState::Loha(LohaAdapterState::new(meta, a, b, c, d)?))
            }
            AdapterFamily::Lokr => bad("2 or 3"),
            AdapterFamily::Loha => bad("4"),
            _ => bad("2"),
        }
    }

    pub fn param_count(&self) -> usize {
        self.factors().iter().map(|f| f.rows() * f.cols()).sum()
    }

    /// Unscaled `ΔW` as a dense `d × h` matrix.
    fn raw_delta(&self) -> DenseMatrix {
        let unbounded = usize::MAX;
        match self {
            AdapterState::Krona(s) => kron_materialize_with_budget(&s.a, &s.b, unbounded)
                .expect("unbounded budget"),
            AdapterState::Lora(s) => s.a.matmul(&s.b).expect("shapes checked at construction"),
            AdapterState::Lokr(s) => kron_materialize_with_budget(&s.a, &s.second_block(), unbounded)
                .expect("unbounded budget"),
            AdapterState::Loha(s) => {
                let (p, q) = s.products();
                p.hadamard(&q).expect("both products are d x h")
            }
        }
    }

    /// `scale · ΔW`, shape `d × h`.
    pub fn delta_weight(&self) -> DenseMatrix {
        self.raw_delta().scaled(self.scale())
    }

    /// `scale · ΔW · x` without materializing Kronecker products.
    pub fn delta_matvec(&self, x: &DenseVector) -> Result<DenseVector> {
        if x.len() != self.h() {
            return Err(Error::DimensionMismatch(format!(
                "adapter expects input of length {}, got {}",
                self.h(),
                x.len()
            )));
        }
        let y = match self {
            AdapterState::Krona(s) => kron_matvec(&s.a, &s.b, x)?,
            AdapterState::Lora(s) => s.a.matvec(&s.b.matvec(x)?)?,
            AdapterState::Lokr(s) => match &s.second {
                LokrBlock::Full(m) => kron_matvec(&s.a, m, x)?,
                LokrBlock::LowRank { b, c } => kron_matvec(&s.a, &b.matmul(c)?, x)?,
            },
            AdapterState::Loha(_) => self.raw_delta().matvec(x)?,
        };
        Ok(y.scaled(self.scale()))
    }

    /// `scale · ΔWᵀ · y`, using `(A ⊗ B)ᵀ = Aᵀ ⊗ Bᵀ` for Kronecker families.
    pub fn delta_transpose_matvec(&self, y: &DenseVector) -> Result<DenseVector> {
        if y.len() != self.d() {
            return Err(Error::DimensionMismatch(format!(
                "adapter transpose expects length {}, got {}",
                self.d(),
                y.len()
            )));
        }
        let out = match self {
            AdapterState::Krona(s) => kron_matvec(&s.a.transpose(), &s.b.transpose(), y)?,
            AdapterState::Lora(s) => s.b.transpose_matvec(&s.a.transpose_matvec(y)?)?,
            AdapterState::Lokr(s) => {
                kron_matvec(&s.a.transpose(), &s.second_block().transpose(), y)?
            }
            AdapterState::Loha(_) => self.raw_delta().transpose_matvec(y)?,
        };
        Ok(out.scaled(self.scale()))
    }
}

/// Builds and initializes an adapter. Deterministic in `spec.seed`.
pub fn build_adapter(spec: &AdapterSpec) -> Result<AdapterState> {
    let shapes = spec.factor_shapes()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let min_dim = spec.d.min(spec.h);
    let last = shapes.len() - 1;
    let factors = shapes
        .iter()
        .enumerate()
        .map(|(k, &(rows, cols))| {
            if k == last && spec.init.up == UpInit::Zero {
                DenseMatrix::zeros(rows, cols)
            } else {
                init::sample_factor(&mut rng, spec.init.down, rows, cols, min_dim)
            }
        })
        .collect();
    let meta = AdapterMeta {
        d: spec.d,
        h: spec.h,
        scale: spec.scale,
        seed: spec.seed,
    };
    AdapterState::from_factors(spec.family, meta, factors)
}

pub fn delta_weight(state: &AdapterState) -> DenseMatrix {
    state.delta_weight()
}

fn check_base(state: &AdapterState, w0: &DenseMatrix) -> Result<()> {
    if w0.shape() != (state.d(), state.h()) {
        return Err(Error::DimensionMismatch(format!(
            "base weight is {}x{}, adapter is {}x{}",
            w0.rows(),
            w0.cols(),
            state.d(),
            state.h()
        )));
    }
    Ok(())
}

/// `W₀x + ΔWx + b₀`, with the KronA term applied in structured form.
pub fn adapter_forward(
    state: &AdapterState,
    w0: &DenseMatrix,
    b0: &DenseVector,
    x: &DenseVector,
) -> Result<DenseVector> {
    check_base(state, w0)?;
    if b0.len() != state.d() {
        return Err(Error::DimensionMismatch(format!(
            "bias has length {}, expected {}",
            b0.len(),
            state.d()
        )));
    }
    w0.matvec(x)?.add(&state.delta_matvec(x)?)?.add(b0)
}

/// `W₀ + ΔW`.
pub fn merge_adapter(state: &AdapterState, w0: &DenseMatrix) -> Result<DenseMatrix> {
    check_base(state, w0)?;
    w0.add(&state.delta_weight())
}

/// Exact trainable-scalar count for a spec.
pub fn param_count(spec: &AdapterSpec) -> Result<usize> {
    Ok(spec.factor_shapes()?.iter().map(|(r, c)| r * c).sum())
}

/// Per-layer counts for `template` applied to every manifest layer, plus their sum.
pub fn manifest_param_breakdown(
    manifest: &LayerManifest,
    template: &AdapterSpec,
) -> Result<(usize, Vec<usize>)> {
    let per_layer = manifest
        .layers
        .iter()
        .map(|layer| {
            param_count(&template.for_layer(layer.d, layer.h)).map_err(|e| match e {
                Error::InvalidFactorization(msg) => {
                    Error::InvalidFactorization(format!("layer `{}`: {msg}", layer.layer_name))
                }
                Error::InvalidRank { .. } | Error::InvalidSpec(_) => {
                    Error::InvalidSpec(format!("layer `{}`: {e}", layer.layer_name))
                }
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((per_layer.iter().sum(), per_layer))
}

pub fn manifest_param_count(manifest: &LayerManifest, template: &AdapterSpec) -> Result<usize> {
    manifest_param_breakdown(manifest, template).map(|(total, _)| total)
}

/// Relative change of one module's parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModuleDelta {
    pub layer_name: String,
    pub delta: f64,
}

/// `‖θ' − θ‖_F / ‖θ‖_F`.
pub fn module_delta(before: &DenseMatrix, after: &DenseMatrix) -> Result<f64> {
    let base = before.frobenius_norm();
    if base == 0.0 {
        return Err(Error::ZeroBaseNorm);
    }
    Ok(after.sub(before)?.frobenius_norm() / base)
}
