//! Recompression-robust JPEG steganography.
//!
//! The crate works on grayscale JPEG images at the quantized-coefficient
//! level. The pipeline is:
//!
//! 1. [`preprocess`] removes spatial overflow from the cover while leaving
//!    block boundaries alone wherever it can, producing the robust cover and
//!    a fully de-overflowed reference cover.
//! 2. [`cost`] computes J-UNIWARD distortions and biases the `+1`/`-1`
//!    directions toward the reference cover.
//! 3. [`embed`] extracts the parity (dither modulation) cover sequence and
//!    runs syndrome-trellis embedding over it.
//! 4. [`codes`] wraps the message in RS(31, k) over GF(32) and picks `k`
//!    adaptively by simulating the recompression channel from [`jpeg`].
//!
//! [`harness`] holds the image-quality metrics, the synthetic corpus
//! generator and the bench runner used by the CLI.

pub mod codes;
pub mod cost;
pub mod embed;
mod error;
pub mod harness;
pub mod jpeg;
pub mod pipeline;
pub mod preprocess;

pub use error::{Result, StegoError};
pub use pipeline::{EmbedParams, EmbedOutcome};

/// Number of coefficients (or pixels) in one 8x8 block.
pub const BLOCK_LEN: usize = 64;
