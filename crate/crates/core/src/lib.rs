//! Polar codes with successive-cancellation (SC) and successive-cancellation
//! list (SCL) decoding.
//!
//! The list decoder shares per-layer arrays between paths and copies them
//! only on demand, giving `O(L n)` space and `O(L n log n)` time. Likelihoods
//! are rescaled at every layer so long codes decode without underflow.
//!
//! ```
//! use polarlist::{bhattacharyya_construct, encode, scl_decode, ChannelModel};
//!
//! let spec = bhattacharyya_construct(16, 8, 0.5).unwrap();
//! let info = [1, 0, 1, 1, 0, 0, 1, 0];
//! let c = encode(&info, &spec).unwrap();
//! let model = ChannelModel::bsc(0.0).unwrap();
//! let y = model.transmit(&c, &mut polarlist::stream_rng(1, 0));
//! let out = scl_decode(&spec, &model.prob_pairs(&y).unwrap(), 4, None).unwrap();
//! assert_eq!(out.info_hat.as_slice(), &info);
//! ```

mod cells;
pub mod channel;
pub mod construction;
pub mod encoder;
mod error;
pub mod exec;
pub mod likelihood;
pub mod list;
pub mod sc;
pub mod sim;
pub mod types;

pub use cells::{BitPairArray, Cells};
pub use channel::{snr_db_to_sigma, stream_rng, ChannelModel, ReceivedVec, Symbol};
pub use construction::{
    bhattacharyya_construct, load_spec, monte_carlo_construct, parse_spec, save_spec, spec_to_string,
};
pub use encoder::{build_u, encode, encode_with, polar_inverse, polar_transform, Crc, OuterCode, ParityCheck};
pub use error::{Error, Result};
pub use exec::Execution;
pub use likelihood::Likelihood;
pub use list::{scl_decode, ListDecoder, ListOutcome, PathManager};
pub use sc::{sc_decode, sc_decode_reference, sc_decode_reference_with, ScDecoder, ScOutcome};
pub use types::{child_branches, phase_branch_index, BitPair, BitVec, CodeSpec, ProbPair};
