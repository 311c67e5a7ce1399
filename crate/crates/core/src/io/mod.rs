//! On-disk formats: layer manifests, adapter checkpoints, embedding sets and
//! training run configs/histories.

mod checkpoint;
mod embeddings;
mod manifest;
mod run;

pub use checkpoint::{
    checkpoint_from_json, checkpoint_to_json, load_checkpoint, save_checkpoint,
    CHECKPOINT_SCHEMA_VERSION,
};
pub use embeddings::{
    embeddings_from_binary, embeddings_from_json, embeddings_to_binary, embeddings_to_json,
    load_embeddings, EMBEDDING_MAGIC,
};
pub use manifest::{load_manifest, LayerGroup, LayerManifest, LayerSpec};
pub use run::{history_from_csv, history_to_csv, load_train_config, TrainRunConfig};
