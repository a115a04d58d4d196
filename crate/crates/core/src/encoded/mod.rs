//! The Reed-Muller encoded history of Korten's reduction and the randomized
//! selector that recovers its bits from two candidates.

mod history;
mod params;
mod select;

pub use history::{enc_history_build, enc_input, enc_output, EncodedHistory, EncodedLayout};
pub use params::{enc_params, EncParams, Profile};
pub use select::{select_bit, Candidate, Reason, SelectConfig, SelectOutcome};
