//! Kronecker-product adapters (KronA) for linear and attention layers, with
//! LoRA, LoKr and LoHA baselines.
//!
//! * [`kron`]: Kronecker algebra, the structured matvec and numerical rank.
//! * [`adapters`]: adapter construction, merging, parameter counting.
//! * [`training`]: a toy attention block trained on a denoising objective.
//! * [`metrics`]: embedding alignment scores.
//! * [`io`]: file formats.
//! * [`cli`]: the `kronadapt` command-line tool.

pub mod adapters;
pub mod cli;
pub mod error;
pub mod io;
pub mod kron;
pub mod matrix;
pub mod metrics;
pub mod numeric;
pub mod training;

pub use error::{Error, Result};
pub use matrix::{DenseMatrix, DenseVector};
