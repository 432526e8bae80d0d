//! Parity-domain embedding: cover sequence extraction, trellis coding and
//! writing the chosen changes back into the coefficients.

pub mod dither;
pub mod record;
pub mod stc;

pub use dither::{distance_maps, embedding_path, extract_cover_sequence, lattice_point, CoverSequence};
pub use record::StegoRecord;
pub use stc::StcCode;

use crate::cost::CostMaps;
use crate::error::{invalid, Result, StegoError};
use crate::jpeg::{CoeffImage, QuantTable};
use crate::BLOCK_LEN;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StcParams {
    /// Constraint height.
    pub h: usize,
    /// Message bits per cover symbol.
    pub payload_alpha: f64,
}

/// What to do with one cover position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flip {
    Keep,
    Up,
    Down,
}

/// Direction-aware embedding: the trellis picks which parities change at cost
/// `min(xi+, xi-)` and each change then goes in its cheaper direction.
pub fn stc_embed(
    cover: &CoverSequence,
    message: &[u8],
    costs: &CostMaps,
    params: &StcParams,
) -> Result<Vec<Flip>> {
    if message.len() > cover.len() {
        return Err(StegoError::Capacity { needed: message.len(), available: cover.len() });
    }
    if message.is_empty() {
        return Ok(vec![Flip::Keep; cover.len()]);
    }
    let code = StcCode::new(params.h, cover.len(), message.len())?;
    let mut flip_costs = Vec::with_capacity(cover.len());
    for &p in &cover.positions {
        let (c, _) = costs.cheapest(p);
        flip_costs.push(if c >= costs.wet_threshold { f64::INFINITY } else { c });
    }
    let (stego, _) = code.embed(&cover.symbols, &flip_costs, message)?;
    Ok(stego
        .iter()
        .zip(&cover.symbols)
        .zip(&cover.positions)
        .map(|((&y, &x), &p)| {
            if y == x {
                Flip::Keep
            } else if costs.cheapest(p).1 {
                Flip::Up
            } else {
                Flip::Down
            }
        })
        .collect())
}

/// Moves each flipped coefficient to the adjacent opposite-parity lattice
/// point in the chosen direction.
pub fn apply_stego_changes(c: &CoeffImage, seq: &CoverSequence, flips: &[Flip]) -> Result<CoeffImage> {
    if flips.len() != seq.len() {
        return Err(invalid("flip decisions do not match the cover sequence"));
    }
    let qt = *c.qtable();
    let mut out = c.clone();
    for (&p, &f) in seq.positions.iter().zip(flips) {
        if f == Flip::Keep {
            continue;
        }
        let (b, k) = (p / BLOCK_LEN, p % BLOCK_LEN);
        let q = qt.step(k);
        let lp = lattice_point(f64::from(c.blocks()[b][k]) * q, q);
        let target = if f == Flip::Up { lp.index + 1 } else { lp.index - 1 };
        out.blocks_mut()[b][k] = i16::try_from(target)
            .map_err(|_| StegoError::EmbeddingFailure(format!("coefficient {p} would leave i16 range")))?;
    }
    Ok(out)
}

/// Parity symbols of a received image read on the cover's lattice.
pub fn received_symbols(received: &CoeffImage, cover_table: &QuantTable, positions: &[usize]) -> Vec<u8> {
    let rt = received.qtable();
    positions
        .iter()
        .map(|&p| {
            let (b, k) = (p / BLOCK_LEN, p % BLOCK_LEN);
            let dequantized = f64::from(received.blocks()[b][k]) * rt.step(k);
            lattice_point(dequantized, cover_table.step(k)).symbol
        })
        .collect()
}

/// Recovers the coded message bits from a (possibly recompressed) stego image.
pub fn stc_extract(stego: &CoeffImage, rec: &StegoRecord) -> Result<Vec<u8>> {
    let cover_table = QuantTable::for_quality(rec.qf_cover)?;
    let positions = embedding_path(stego.blocks().len(), rec.perm_seed);
    let symbols = received_symbols(stego, &cover_table, &positions);
    let code = StcCode::new(rec.h, symbols.len(), rec.coded_len())?;
    Ok(code.syndrome(&symbols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::modification_costs;

    fn cover() -> CoeffImage {
        let qt = QuantTable::for_quality(65).unwrap();
        let mut img = CoeffImage::zeros(16, 16, qt).unwrap();
        for (b, blk) in img.blocks_mut().iter_mut().enumerate() {
            for (k, v) in blk.iter_mut().enumerate() {
                *v = ((b * 13 + k * 7) % 9) as i16 - 4;
            }
        }
        img
    }

    fn uniform_costs(img: &CoeffImage) -> CostMaps {
        let n = img.blocks().len() * 64;
        let (dp, dm) = distance_maps(img);
        let mut m = modification_costs(&vec![1.0; n], &vec![1.0; n], img.qtable(), &dp, &dm).unwrap();
        m.mark_wet(img);
        m
    }

    #[test]
    fn flip_down_off_lattice() {
        let qt = QuantTable::from_entries([10; 64], 50).unwrap();
        let lp = lattice_point(27.0, 10.0);
        assert_eq!(lp.index - 1, 2);
        assert_eq!((lp.index - 1) as f64 * qt.step(1), 20.0);
    }

    #[test]
    fn no_flips_is_identity() {
        let img = cover();
        let seq = extract_cover_sequence(&img, 1);
        let same = apply_stego_changes(&img, &seq, &vec![Flip::Keep; seq.len()]).unwrap();
        assert_eq!(same, img);
    }

    #[test]
    fn round_trip_without_channel() {
        let img = cover();
        let seq = extract_cover_sequence(&img, 5);
        let costs = uniform_costs(&img);
        let msg: Vec<u8> = (0..155).map(|i| ((i * 31 + 7) % 5 % 2) as u8).collect();
        let flips = stc_embed(&seq, &msg, &costs, &StcParams { h: 7, payload_alpha: 0.6 }).unwrap();
        let stego = apply_stego_changes(&img, &seq, &flips).unwrap();
        let rec = StegoRecord {
            perm_seed: 5,
            message_bits: 155,
            rs_k: 31, // identity coding for this check: 155 bits = one "codeword"
            payload_alpha: 0.6,
            qf_cover: 65,
            t1: 8.0,
            mu: 0.5,
            o1: 0,
            o2: 18,
            h: 7,
        };
        assert_eq!(rec.coded_len(), 155);
        assert_eq!(stc_extract(&stego, &rec).unwrap(), msg);
        // Only flipped positions changed, each by exactly one lattice step.
        for ((&p, &f), _) in seq.positions.iter().zip(&flips).zip(0..) {
            let d = stego.blocks()[p / 64][p % 64] - img.blocks()[p / 64][p % 64];
            match f {
                Flip::Keep => assert_eq!(d, 0),
                Flip::Up => assert_eq!(d, 1),
                Flip::Down => assert_eq!(d, -1),
            }
        }
    }

    #[test]
    fn dc_never_changes() {
        let img = cover();
        let seq = extract_cover_sequence(&img, 2);
        let costs = uniform_costs(&img);
        let msg = vec![1u8; 200];
        let flips = stc_embed(&seq, &msg, &costs, &StcParams { h: 6, payload_alpha: 0.8 }).unwrap();
        let stego = apply_stego_changes(&img, &seq, &flips).unwrap();
        for (a, b) in stego.blocks().iter().zip(img.blocks()) {
            assert_eq!(a[0], b[0]);
        }
    }

    #[test]
    fn capacity_error() {
        let img = cover();
        let seq = extract_cover_sequence(&img, 2);
        let costs = uniform_costs(&img);
        let msg = vec![1u8; seq.len() + 1];
        assert!(matches!(
            stc_embed(&seq, &msg, &costs, &StcParams { h: 6, payload_alpha: 1.0 }),
            Err(StegoError::Capacity { .. })
        ));
    }
}
