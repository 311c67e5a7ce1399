//! Alignment scores over precomputed embeddings.
//!
//! Image alignment (CLIP-I, and DINO when fed DINO embeddings) averages cosine
//! similarity over every (reference, generated) pair. Text alignment (CLIP-T)
//! averages over index-aligned (generated, prompt) pairs only.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::pairwise_mean;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingRole {
    ReferenceImages,
    GeneratedImages,
    Prompts,
}

/// A labeled, non-empty set of equal-length embeddings with positive norms.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSet {
    label: String,
    role: EmbeddingRole,
    dim: usize,
    vectors: Vec<Vec<f64>>,
}

impl EmbeddingSet {
    pub fn new(label: impl Into<String>, role: EmbeddingRole, vectors: Vec<Vec<f64>>) -> Result<Self> {
        let label = label.into();
        let dim = match vectors.first() {
            Some(v) => v.len(),
            None => return Err(Error::EmptySet(label)),
        };
        if dim == 0 {
            return Err(Error::DimensionMismatch(format!("set `{label}` has zero-length vectors")));
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "set `{label}`: vector {i} has length {}, expected {dim}",
                    v.len()
                )));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite(format!("set `{label}`, vector {i}")));
            }
            if norm(v) == 0.0 {
                return Err(Error::ZeroNorm);
            }
        }
        Ok(Self { label, role, dim, vectors })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn role(&self) -> EmbeddingRole {
        self.role
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `x·y / (‖x‖‖y‖)`, clamped to `[-1, 1]`.
pub fn cosine_sim(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch(format!(
            "cosine_sim: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    let (nx, ny) = (norm(x), norm(y));
    if nx == 0.0 || ny == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    Ok((dot / (nx * ny)).clamp(-1.0, 1.0))
}

fn same_dim(a: &EmbeddingSet, b: &EmbeddingSet) -> Result<()> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch(format!(
            "`{}` has dim {}, `{}` has dim {}",
            a.label, a.dim, b.label, b.dim
        )));
    }
    Ok(())
}

/// Mean cosine similarity over all `|real| × |gen|` pairs.
pub fn image_alignment_score(real: &EmbeddingSet, gen: &EmbeddingSet) -> Result<f64> {
    same_dim(real, gen)?;
    let sims = real
        .vectors
        .iter()
        .flat_map(|r| gen.vectors.iter().map(move |g| cosine_sim(r, g)))
        .collect::<Result<Vec<_>>>()?;
    Ok(pairwise_mean(&sims))
}

/// Mean cosine similarity of `gen[i]` with `prompts[i]`.
pub fn text_alignment_score(gen: &EmbeddingSet, prompts: &EmbeddingSet) -> Result<f64> {
    if gen.len() != prompts.len() {
        return Err(Error::LengthMismatch {
            left: gen.len(),
            right: prompts.len(),
        });
    }
    same_dim(gen, prompts)?;
    let sims = gen
        .vectors
        .iter()
        .zip(&prompts.vectors)
        .map(|(g, p)| cosine_sim(g, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(pairwise_mean(&sims))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(role: EmbeddingRole, vs: &[&[f64]]) -> EmbeddingSet {
        EmbeddingSet::new("t", role, vs.iter().map(|v| v.to_vec()).collect()).unwrap()
    }

    #[test]
    fn cosine_examples() {
        assert!((cosine_sim(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(cosine_sim(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        assert_eq!(cosine_sim(&[1.0, 0.0], &[-2.0, 0.0]).unwrap(), -1.0);
        assert_eq!(cosine_sim(&[0.0, 0.0], &[1.0, 0.0]), Err(Error::ZeroNorm));
        assert!(matches!(cosine_sim(&[1.0], &[1.0, 0.0]), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn image_examples() {
        let r = set(EmbeddingRole::ReferenceImages, &[&[0.3, 0.4]]);
        let g = set(EmbeddingRole::GeneratedImages, &[&[0.3, 0.4]]);
        assert_eq!(image_alignment_score(&r, &g).unwrap(), 1.0);
        let r = set(EmbeddingRole::ReferenceImages, &[&[1.0, 0.0]]);
        let g = set(EmbeddingRole::GeneratedImages, &[&[1.0, 0.0], &[0.0, 1.0]]);
        assert_eq!(image_alignment_score(&r, &g).unwrap(), 0.5);
    }

    #[test]
    fn text_examples() {
        let g = set(EmbeddingRole::GeneratedImages, &[&[1.0, 0.0], &[0.0, 2.0]]);
        assert_eq!(text_alignment_score(&g, &g).unwrap(), 1.0);
        let p = set(EmbeddingRole::Prompts, &[&[3.0, 0.0], &[1.0, 0.0]]);
        assert_eq!(text_alignment_score(&g, &p).unwrap(), 0.5);
        let short = set(EmbeddingRole::Prompts, &[&[1.0, 0.0]]);
        assert_eq!(
            text_alignment_score(&g, &short),
            Err(Error::LengthMismatch { left: 2, right: 1 })
        );
    }

    #[test]
    fn set_validation() {
        assert!(matches!(
            EmbeddingSet::new("e", EmbeddingRole::Prompts, vec![]),
            Err(Error::EmptySet(_))
        ));
        assert_eq!(
            EmbeddingSet::new("z", EmbeddingRole::Prompts, vec![vec![0.0, 0.0]]),
            Err(Error::ZeroNorm)
        );
        assert!(matches!(
            EmbeddingSet::new("r", EmbeddingRole::Prompts, vec![vec![1.0], vec![1.0, 2.0]]),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
