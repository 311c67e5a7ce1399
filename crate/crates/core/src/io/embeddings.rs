//! Embedding files: JSON `{label, role, dim, vectors}` or the binary `EMB1`
//! layout (magic, u32 dim, u32 count, little-endian f64 row-major payload).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{EmbeddingRole, EmbeddingSet};

pub const EMBEDDING_MAGIC: &[u8; 4] = b"EMB1";

#[derive(Serialize, Deserialize)]
struct EmbeddingFile {
    label: String,
    role: EmbeddingRole,
    dim: usize,
    vectors: Vec<Vec<f64>>,
}

pub fn embeddings_to_json(set: &EmbeddingSet) -> String {
    let file = EmbeddingFile {
        label: set.label().to_string(),
        role: set.role(),
        dim: set.dim(),
        vectors: set.vectors().to_vec(),
    };
    serde_json::to_string(&file).expect("embeddings serialize")
}

pub fn embeddings_from_json(text: &str) -> Result<EmbeddingSet> {
    let file: EmbeddingFile = serde_json::from_str(text)?;
    let set = EmbeddingSet::new(file.label, file.role, file.vectors)?;
    if set.dim() != file.dim {
        return Err(Error::Parse(format!(
            "header says dim {}, vectors have dim {}",
            file.dim,
            set.dim()
        )));
    }
    Ok(set)
}

pub fn embeddings_to_binary(set: &EmbeddingSet) -> Vec<u8> {
    let mut out = Vec::with_capacity(12 + set.len() * set.dim() * 8);
    out.extend_from_slice(EMBEDDING_MAGIC);
    out.extend_from_slice(&(set.dim() as u32).to_le_bytes());
    out.extend_from_slice(&(set.len() as u32).to_le_bytes());
    for v in set.vectors() {
        for x in v {
            out.extend_from_slice(&x.to_le_bytes());
        }
    }
    out
}

/// Binary files carry no label or role, so the caller supplies them.
pub fn embeddings_from_binary(bytes: &[u8], label: &str, role: EmbeddingRole) -> Result<EmbeddingSet> {
    if bytes.len() < 12 || &bytes[..4] != EMBEDDING_MAGIC {
        return Err(Error::Parse("missing EMB1 header".into()));
    }
    let dim = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes")) as usize;
    let count = u32::from_le_bytes(bytes[8..12].try_into().expect("4 bytes")) as usize;
    let payload = &bytes[12..];
    if dim == 0 || payload.len() != dim * count * 8 {
        return Err(Error::Parse(format!(
            "payload has {} bytes, header implies {}",
            payload.len(),
            dim * count * 8
        )));
    }
    let vectors = payload
        .chunks_exact(dim * 8)
        .map(|row| {
            row.chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
                .collect()
        })
        .collect();
    EmbeddingSet::new(label, role, vectors)
}

/// Loads either format, detected by the `EMB1` magic. JSON files must carry `role`.
pub fn load_embeddings(path: impl AsRef<Path>, role: EmbeddingRole) -> Result<EmbeddingSet> {
    let path = path.as_ref();
    let bytes = std::fs::read(path)?;
    let set = if bytes.starts_with(EMBEDDING_MAGIC) {
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        embeddings_from_binary(&bytes, &label, role)?
    } else {
        let text = String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))?;
        embeddings_from_json(&text)?
    };
    if set.role() != role {
        return Err(Error::Parse(format!(
            "{}: role is {:?}, expected {:?}",
            path.display(),
            set.role(),
            role
        )));
    }
    Ok(set)
}
