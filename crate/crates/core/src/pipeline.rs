//! End-to-end sender and receiver paths.

use crate::codes::{adaptive_embed_prepared, rs_decode, rs_encode, AdaptiveResult, RsConfig};
use crate::cost::{asymmetric_costs, juniward_costs, modification_costs, CostMaps};
use crate::embed::{
    apply_stego_changes, distance_maps, extract_cover_sequence, stc_embed, stc_extract, CoverSequence,
    StcParams, StegoRecord,
};
use crate::error::{invalid, Result, StegoError};
use crate::jpeg::{ChannelModel, CoeffImage, QuantTable};
use crate::preprocess::{build_reference_cover, preprocess_cover, PreprocessParams, Preprocessed, ReferenceCover};

/// Every tunable of the sender.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbedParams {
    pub preprocess: PreprocessParams,
    /// Cost multiplier for the direction favoured by the reference cover.
    pub mu: f64,
    /// Trellis constraint height.
    pub h: usize,
    /// Relative payload in bits per non-zero AC coefficient of the original cover.
    pub payload: f64,
    /// Stop the RS sweep once the simulated error rate is at or below this.
    pub threshold: f64,
    pub seed: u64,
    /// Quality the sender assumes the channel recompresses at.
    pub q_channel: u8,
    /// Cap on clamp passes when building the reference cover.
    pub reference_rounds: usize,
    /// Use one RS(31, k) instead of the adaptive sweep.
    pub fixed_k: Option<usize>,
}

impl Default for EmbedParams {
    fn default() -> Self {
        Self {
            preprocess: PreprocessParams::default(),
            mu: 0.5,
            h: 10,
            payload: 0.1,
            threshold: 1e-4,
            seed: 0,
            q_channel: 85,
            reference_rounds: crate::preprocess::DEFAULT_REFERENCE_ROUNDS,
            fixed_k: None,
        }
    }
}

impl EmbedParams {
    pub fn validate(&self) -> Result<()> {
        self.preprocess.validate()?;
        if !(self.mu > 0.0 && self.mu <= 1.0) {
            return Err(invalid(format!("mu must lie in (0, 1], got {}", self.mu)));
        }
        if !(1..=20).contains(&self.h) {
            return Err(invalid(format!("h must lie in 1..=20, got {}", self.h)));
        }
        if !(self.payload > 0.0 && self.payload.is_finite()) {
            return Err(invalid(format!("payload must be positive, got {}", self.payload)));
        }
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(invalid(format!("threshold must lie in [0, 1], got {}", self.threshold)));
        }
        QuantTable::for_quality(self.q_channel)?;
        if let Some(k) = self.fixed_k {
            RsConfig::new(k)?;
        }
        Ok(())
    }
}

/// Message length in bits for a relative payload on the original cover.
pub fn message_budget(original: &CoeffImage, payload: f64) -> Result<usize> {
    let nzac = original.nonzero_ac();
    if nzac == 0 {
        return Err(StegoError::DegenerateInput("cover has no non-zero AC coefficients".into()));
    }
    Ok((payload * nzac as f64).round() as usize)
}

/// Robust cover with everything the trellis needs, computed once per cover.
#[derive(Debug, Clone)]
pub struct PreparedCover {
    pub robust: CoeffImage,
    pub reference: ReferenceCover,
    pub costs: CostMaps,
    pub sequence: CoverSequence,
}

impl PreparedCover {
    pub fn new(robust: &CoeffImage, params: &EmbedParams) -> Result<Self> {
        let reference =
            build_reference_cover(robust, params.preprocess.t1, params.reference_rounds);
        if !reference.converged {
            log::debug!("reference cover still overflows after {} rounds", reference.rounds);
        }
        let rho = juniward_costs(robust);
        let (rho_plus, rho_minus) = asymmetric_costs(&rho, robust, &reference.image, params.mu)?;
        let (d_plus, d_minus) = distance_maps(robust);
        let mut costs = modification_costs(&rho_plus, &rho_minus, robust.qtable(), &d_plus, &d_minus)?;
        costs.mark_wet(robust);
        let sequence = extract_cover_sequence(robust, params.seed);
        Ok(Self { robust: robust.clone(), reference, costs, sequence })
    }

    /// Cover symbols available to the trellis.
    pub fn capacity(&self) -> usize {
        self.sequence.len()
    }
}

/// Embeds `msg` under RS(31, k). `None` when the coded message is longer
/// than the cover sequence.
pub fn embed_at_k(
    prepared: &PreparedCover,
    msg: &[u8],
    cfg: &RsConfig,
    params: &EmbedParams,
) -> Result<Option<(CoeffImage, StegoRecord)>> {
    let coded = rs_encode(msg, cfg);
    if coded.len() > prepared.capacity() {
        return Ok(None);
    }
    let alpha = coded.len() as f64 / prepared.capacity() as f64;
    let flips = stc_embed(
        &prepared.sequence,
        &coded,
        &prepared.costs,
        &StcParams { h: params.h, payload_alpha: alpha },
    )?;
    let stego = apply_stego_changes(&prepared.robust, &prepared.sequence, &flips)?;
    let record = StegoRecord {
        perm_seed: params.seed,
        message_bits: msg.len(),
        rs_k: cfg.k(),
        payload_alpha: alpha,
        qf_cover: prepared.robust.qtable().qf(),
        t1: params.preprocess.t1,
        mu: params.mu,
        o1: params.preprocess.o1,
        o2: params.preprocess.o2,
        h: params.h,
    };
    Ok(Some((stego, record)))
}

/// Receiver: trellis syndrome then RS decoding, trimmed to the true length.
pub fn extract(received: &CoeffImage, rec: &StegoRecord) -> Result<Vec<u8>> {
    let coded = stc_extract(received, rec)?;
    let (mut bits, _) = rs_decode(&coded, &RsConfig::new(rec.rs_k)?)?;
    bits.truncate(rec.message_bits);
    Ok(bits)
}

#[derive(Debug, Clone)]
pub struct EmbedOutcome {
    pub stego: CoeffImage,
    pub record: StegoRecord,
    pub adaptive: AdaptiveResult,
    pub preprocess: Preprocessed,
    pub reference_converged: bool,
}

/// Full sender path on an original (unpreprocessed) cover.
pub fn embed(cover: &CoeffImage, msg: &[u8], params: &EmbedParams) -> Result<EmbedOutcome> {
    params.validate()?;
    let preprocess = preprocess_cover(cover, &params.preprocess);
    let prepared = PreparedCover::new(&preprocess.image, params)?;
    let channel = ChannelModel::new(params.q_channel)?;
    let (stego, adaptive, record) =
        adaptive_embed_prepared(&prepared, msg, params.threshold, &channel, params)?;
    Ok(EmbedOutcome {
        stego,
        record,
        adaptive,
        preprocess,
        reference_converged: prepared.reference.converged,
    })
}

/// Bytes to bits, most significant bit first.
pub fn bytes_to_bits(bytes: &[u8]) -> Vec<u8> {
    bytes.iter().flat_map(|b| (0..8).rev().map(move |i| (b >> i) & 1)).collect()
}

/// Inverse of [`bytes_to_bits`]; a trailing partial byte is zero-filled.
pub fn bits_to_bytes(bits: &[u8]) -> Vec<u8> {
    bits.chunks(8)
        .map(|c| c.iter().enumerate().fold(0u8, |acc, (i, b)| acc | ((b & 1) << (7 - i))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::synth_image;

    #[test]
    fn bit_packing() {
        assert_eq!(bytes_to_bits(&[0b1010_0001]), vec![1, 0, 1, 0, 0, 0, 0, 1]);
        assert_eq!(bits_to_bytes(&[1, 1]), vec![0b1100_0000]);
        let data = b"hello".to_vec();
        assert_eq!(bits_to_bytes(&bytes_to_bits(&data)), data);
    }

    #[test]
    fn budget_counts_original_cover() {
        let qt = QuantTable::for_quality(65).unwrap();
        let px = synth_image(32, 0.0, 1).unwrap();
        let c = CoeffImage::from_pixels(&px.data, 32, 32, qt).unwrap();
        let b = message_budget(&c, 0.1).unwrap();
        assert_eq!(b, (0.1 * c.nonzero_ac() as f64).round() as usize);
        assert!(message_budget(&CoeffImage::zeros(8, 8, qt).unwrap(), 0.1).is_err());
    }

    #[test]
    fn invalid_params_rejected() {
        let bad = [
            EmbedParams { mu: 0.0, ..Default::default() },
            EmbedParams { h: 0, ..Default::default() },
            EmbedParams { payload: -1.0, ..Default::default() },
            EmbedParams { q_channel: 0, ..Default::default() },
            EmbedParams { fixed_k: Some(8), ..Default::default() },
        ];
        for p in bad {
            assert!(p.validate().is_err(), "{p:?}");
        }
        assert!(EmbedParams::default().validate().is_ok());
    }

    #[test]
    fn no_channel_round_trip() {
        let qt = QuantTable::for_quality(65).unwrap();
        let px = synth_image(64, 0.3, 5).unwrap();
        let c = CoeffImage::from_pixels(&px.data, 64, 64, qt).unwrap();
        let n = message_budget(&c, 0.2).unwrap();
        let msg: Vec<u8> = (0..n).map(|i| (i % 3 == 0) as u8).collect();
        let out = embed(&c, &msg, &EmbedParams::default()).unwrap();
        assert_eq!(extract(&out.stego, &out.record).unwrap(), msg);
        assert_eq!(out.record.rs_k, out.adaptive.best_k);
    }
}
