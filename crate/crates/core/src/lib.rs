//! Importance-aided neural networks (IANN).
//!
//! A single-hidden-layer sigmoid classifier whose first layer is guided by
//! feature relative importance (FRI): expert-supplied weights in `[0, 1]`
//! saying how much each input feature matters. FRI enters in two places:
//!
//! - [`init::init_iann`] gives every hidden unit a random subset of features
//!   whose connections start at `±I_k`, with the rest drawn from a narrower
//!   uniform range;
//! - [`train::iann_update`] scales each first-layer weight change by the
//!   importance of its input, `Δw_ij = α δ_j x_i I_i`.
//!
//! With FRI ≡ 1 and standard initialization the model is ordinary online
//! backpropagation, which serves as the baseline in [`experiment`].
//!
//! The [`data`] and [`theory`] modules cover the DNA promoter and
//! splice-junction benchmarks, including FRI derived from the published
//! domain rules; [`importance`] holds diagnostics for inspecting trained
//! networks.

pub mod data;
pub mod error;
pub mod experiment;
pub mod fri;
pub mod importance;
pub mod init;
pub mod net;
pub mod theory;
pub mod train;

pub use data::{Dataset, Instance};
pub use error::{Error, Result};
pub use experiment::{EvalReport, Method, RunConfig};
pub use fri::FriVector;
pub use net::{Activations, Network, Topology};
pub use train::{TrainConfig, TrainTrace};
