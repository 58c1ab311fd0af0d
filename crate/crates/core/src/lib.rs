//! Reference models for social network analysis.
//!
//! The crate builds weighted networks from raw observation data
//! (group-by-individual matrices and interaction records), computes test
//! statistics on them, and generates reference distributions from four
//! families of randomization:
//!
//! * [`permute`]: swap kernels run as Markov chains (node labels, edge
//!   directions, edge weights, endpoint rewiring, checkerboard swaps on
//!   group-by-individual matrices, actor swaps on interaction records);
//! * [`resample`]: sampling with and without replacement from networks and
//!   raw data;
//! * [`dist`]: samplers fitted to network summaries (Poisson degrees,
//!   Chung-Lu, mixture edge weights);
//! * [`generate`]: generative models, from Erdős–Rényi and small-world graphs
//!   to an agent-based simulator of a fission-fusion society.
//!
//! [`infer`] turns an observed value and its reference values into p-values,
//! quantile intervals and a verdict. [`io`] and [`pipeline`] implement the
//! file formats and the end-to-end commands used by the `refnet` binary.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod dist;
pub mod error;
pub mod generate;
pub mod graph;
pub mod infer;
pub mod io;
pub mod permute;
pub mod pipeline;
pub mod resample;
pub mod stats;

pub use error::{Error, Result};
pub use graph::{
    GroupByIndividual, GroupNetwork, Interaction, InteractionEvents, InteractionKind, LabeledGraph, Matrix,
    StrengthMode,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used everywhere a seed is accepted.
pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}
