//! Parity (dither modulation) view of the cover coefficients.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::jpeg::CoeffImage;
use crate::BLOCK_LEN;

/// Nearest lattice index of a dequantized value and the distances to the
/// nearest opposite-parity lattice points above and below it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticePoint {
    pub index: i64,
    pub symbol: u8,
    pub d_plus: f64,
    pub d_minus: f64,
}

/// Ties at `x.5` go to the even index.
pub fn lattice_point(dequantized: f64, q: f64) -> LatticePoint {
    let index = (dequantized / q).round_ties_even() as i64;
    LatticePoint {
        index,
        symbol: (index.rem_euclid(2)) as u8,
        d_plus: (index + 1) as f64 * q - dequantized,
        d_minus: dequantized - (index - 1) as f64 * q,
    }
}

/// Keyed pseudorandom order of all AC coefficients (flat `block * 64 + mode`
/// indices).
pub fn embedding_path(block_count: usize, seed: u64) -> Vec<usize> {
    let mut positions: Vec<usize> = (0..block_count)
        .flat_map(|b| (1..BLOCK_LEN).map(move |k| b * BLOCK_LEN + k))
        .collect();
    positions.shuffle(&mut ChaCha20Rng::seed_from_u64(seed));
    positions
}

/// Cover symbols along the embedding path.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverSequence {
    pub symbols: Vec<u8>,
    pub d_plus: Vec<f64>,
    pub d_minus: Vec<f64>,
    pub positions: Vec<usize>,
    pub perm_seed: u64,
}

impl CoverSequence {
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

pub fn extract_cover_sequence(c: &CoeffImage, seed: u64) -> CoverSequence {
    let positions = embedding_path(c.blocks().len(), seed);
    let qt = c.qtable();
    let mut symbols = Vec::with_capacity(positions.len());
    let mut d_plus = Vec::with_capacity(positions.len());
    let mut d_minus = Vec::with_capacity(positions.len());
    for &p in &positions {
        let (b, k) = (p / BLOCK_LEN, p % BLOCK_LEN);
        let q = qt.step(k);
        let lp = lattice_point(f64::from(c.blocks()[b][k]) * q, q);
        symbols.push(lp.symbol);
        d_plus.push(lp.d_plus);
        d_minus.push(lp.d_minus);
    }
    CoverSequence { symbols, d_plus, d_minus, positions, perm_seed: seed }
}

/// `d+` and `d-` for every coefficient in block layout.
pub fn distance_maps(c: &CoeffImage) -> (Vec<f64>, Vec<f64>) {
    let qt = c.qtable();
    let mut plus = Vec::with_capacity(c.blocks().len() * BLOCK_LEN);
    let mut minus = Vec::with_capacity(plus.capacity());
    for block in c.blocks() {
        for (k, &v) in block.iter().enumerate() {
            let q = qt.step(k);
            let lp = lattice_point(f64::from(v) * q, q);
            plus.push(lp.d_plus);
            minus.push(lp.d_minus);
        }
    }
    (plus, minus)
}
