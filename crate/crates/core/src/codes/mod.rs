//! Error correction: GF(32) arithmetic, RS(31, k) and the adaptive `k`
//! controller.

pub mod adaptive;
pub mod gf32;
pub mod rs;

pub use adaptive::{error_rate, select_k, AdaptiveResult, TraceEntry, Trial};
pub use rs::{coded_bit_len, rs_decode, rs_encode, RsConfig, K_SCHEDULE};

use crate::embed::StegoRecord;
use crate::error::Result;
use crate::jpeg::{Channel, CoeffImage};
use crate::pipeline::{embed_at_k, EmbedParams, PreparedCover};

/// Sweeps RS rates against `channel` and returns the best stego found.
///
/// `robust` must already be preprocessed; the reference cover and costs are
/// derived from it.
pub fn adaptive_embed(
    robust: &CoeffImage,
    msg: &[u8],
    threshold: f64,
    channel: &dyn Channel,
    params: &EmbedParams,
) -> Result<(CoeffImage, AdaptiveResult, StegoRecord)> {
    let prepared = PreparedCover::new(robust, params)?;
    adaptive_embed_prepared(&prepared, msg, threshold, channel, params)
}

pub fn adaptive_embed_prepared(
    prepared: &PreparedCover,
    msg: &[u8],
    threshold: f64,
    channel: &dyn Channel,
    params: &EmbedParams,
) -> Result<(CoeffImage, AdaptiveResult, StegoRecord)> {
    if msg.is_empty() {
        return Err(crate::error::invalid("message must not be empty"));
    }
    let schedule: Vec<usize> = match params.fixed_k {
        Some(k) => vec![k],
        None => K_SCHEDULE.to_vec(),
    };
    let ((stego, record), result) = select_k(&schedule, threshold, |cfg| {
        let Some((stego, record)) = embed_at_k(prepared, msg, cfg, params)? else {
            return Ok(Trial::Skipped {
                needed: coded_bit_len(msg.len(), cfg.k()),
                available: prepared.capacity(),
            });
        };
        let received = channel.transmit(&stego);
        let decoded = crate::pipeline::extract(&received, &record)?;
        let r_error = error_rate(msg, &decoded)?;
        log::debug!("k={} r_error={r_error}", cfg.k());
        Ok(Trial::Evaluated { value: (stego, record), r_error })
    })?;
    Ok((stego, result, record))
}
