//! Reed-Muller codes and their bit-frozen subcodes (polar codes).
//!
//! Every code of length `n = 2^m` is described by a set of binary paths
//! `(i_1, ..., i_m)`, one per monomial `x_1^{i_1} ... x_m^{i_m}`. A code keeps
//! a subset of those paths as information paths and freezes the rest to zero.
//! Encoding is the recursive Plotkin construction `(c0, c0 + c1)` and decoding
//! walks the same path tree: successive cancellation ([`sc_decode`]) or
//! successive cancellation list decoding ([`list_decode`]).
//!
//! ```
//! use rmpolar::{encode, freeze_rm, list_decode, modulate, posteriors, ChannelModel, InfoWord};
//!
//! let spec = freeze_rm(1, 3).unwrap();
//! let word = InfoWord::new(vec![1, 0, 1, 1]).unwrap();
//! let codeword = encode(&spec, &word).unwrap();
//! let channel = ChannelModel::bsc(0.0).unwrap();
//! let beliefs = posteriors(&channel, &modulate(&codeword));
//! let result = list_decode(&spec, &beliefs, 4).unwrap();
//! assert_eq!(result.best().info, word);
//! ```

pub mod channel;
pub mod code_model;
pub mod decoder;
pub mod encoder;
mod error;
pub mod ml;
pub mod sim;

pub use channel::{modulate, posteriors, transmit, ChannelModel, ChannelParam, SoftVector, LLR_CLAMP};
pub use code_model::{
    freeze_bec, freeze_montecarlo, freeze_rm, index_path, monomial_codeword, path_error_counts, path_index,
    path_weight, read_frozen_set, rm_dimension, write_frozen_set, CodeSpec, Codeword, Path,
};
pub use decoder::list::{list_decode, ListConfig, ListDecoder, ListResult, StateSharing};
pub use decoder::sc::{sc_decode, sc_decode_genie, DecodeResult, GenieResult, ScDecoder};
pub use decoder::{combine_u, combine_v, FrozenMetric, OpCounts};
pub use encoder::{encode, encode_counted, encode_reference, InfoWord};
pub use error::{Error, Result};
pub use ml::{codeword_loglik, ml_decode, LikelihoodTable, MlDecision};
pub use sim::{complexity_probe, run_simulation, write_csv, ComplexityReport, ProbeCode, TrialConfig, TrialResult};
