//! Range avoidance toolkit.
//!
//! The crate is organised bottom-up: Boolean circuits and bit strings, NP
//! oracle backends answering preimage queries, GGM trees, Korten's reduction
//! with its computational history, Reed-Muller machinery, the encoded history
//! with its randomized selector, and the iterative pipelines built on top.

pub mod bits;
pub mod circuit;
pub mod encoded;
pub mod error;
pub mod ggm;
pub mod korten;
pub mod oracle;
pub mod pipeline;
pub mod rm;
pub mod stats;

pub use bits::BitString;
pub use circuit::{Circuit, Gate, Wire};
pub use error::{Error, Result};
