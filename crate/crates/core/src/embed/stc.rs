//! Binary syndrome-trellis codes.
//!
//! The parity-check matrix `H` (m x n) is built by placing a fixed `h x w`
//! sub-matrix `Ĥ` along the diagonal, one copy per message bit, shifted down
//! one row each time; rows past `m` are cut off. Message bit `i` owns the
//! cover columns `floor(i n / m) .. floor((i + 1) n / m)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result, StegoError};

/// A concrete `H` for a given constraint height and (n, m).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StcCode {
    h: usize,
    n: usize,
    m: usize,
    columns: Vec<u32>,
}

impl StcCode {
    pub fn new(h: usize, n: usize, m: usize) -> Result<Self> {
        if !(1..=20).contains(&h) {
            return Err(invalid(format!("constraint height {h} outside 1..=20")));
        }
        if m == 0 {
            return Err(invalid("message must not be empty"));
        }
        if m > n {
            return Err(StegoError::Capacity { needed: m, available: n });
        }
        let w = n.div_ceil(m);
        Ok(Self { h, n, m, columns: hhat_columns(h, w) })
    }

    pub fn height(&self) -> usize {
        self.h
    }

    pub fn cover_len(&self) -> usize {
        self.n
    }

    pub fn message_len(&self) -> usize {
        self.m
    }

    /// Columns of `Ĥ`; bit `r` is row `r` (bit 0 lines up with the message
    /// bit that owns the column).
    pub fn hhat(&self) -> &[u32] {
        &self.columns
    }

    /// Cover index range owned by message bit `i`.
    pub fn block_range(&self, i: usize) -> std::ops::Range<usize> {
        (i * self.n / self.m)..((i + 1) * self.n / self.m)
    }

    /// `H · y` over GF(2).
    pub fn syndrome(&self, stego: &[u8]) -> Vec<u8> {
        let mut syn = vec![0u8; self.m];
        for i in 0..self.m {
            for (j, idx) in self.block_range(i).enumerate() {
                if stego[idx] & 1 == 0 {
                    continue;
                }
                let col = self.columns[j];
                for r in 0..self.h {
                    if (col >> r) & 1 == 1 && i + r < self.m {
                        syn[i + r] ^= 1;
                    }
                }
            }
        }
        syn
    }

    /// Viterbi search for the cheapest `y` with `H y = message`.
    ///
    /// `costs[j]` is the price of making `y[j] != cover[j]`; infinite costs
    /// are never paid. Returns the stego bits and their total cost.
    pub fn embed(&self, cover: &[u8], costs: &[f64], message: &[u8]) -> Result<(Vec<u8>, f64)> {
        if cover.len() != self.n || costs.len() != self.n {
            return Err(invalid("cover and cost lengths must equal the code length"));
        }
        if message.len() != self.m {
            return Err(invalid("message length does not match the code"));
        }
        let states = 1usize << self.h;
        let words = states.div_ceil(64);
        let mut cost = vec![f64::INFINITY; states];
        let mut next = vec![f64::INFINITY; states];
        cost[0] = 0.0;
        // choice bit per (column, state): whether y = 1 was taken
        let mut path = vec![0u64; self.n * words];

        for i in 0..self.m {
            for (j, idx) in self.block_range(i).enumerate() {
                let col = self.columns[j] as usize;
                let (c0, c1) = if cover[idx] & 1 == 0 { (0.0, costs[idx]) } else { (costs[idx], 0.0) };
                let bits = &mut path[idx * words..(idx + 1) * words];
                for s in 0..states {
                    let keep = cost[s] + c0;
                    let take = cost[s ^ col] + c1;
                    if take < keep {
                        next[s] = take;
                        bits[s / 64] |= 1 << (s % 64);
                    } else {
                        next[s] = keep;
                    }
                }
                std::mem::swap(&mut cost, &mut next);
            }
            // Row i is complete: keep states whose bottom bit matches the
            // message and shift the window down by one row.
            let bit = usize::from(message[i] & 1);
            for t in 0..states / 2 {
                next[t] = cost[(t << 1) | bit];
            }
            next[states / 2..].fill(f64::INFINITY);
            std::mem::swap(&mut cost, &mut next);
        }

        let (mut state, total) = cost
            .iter()
            .copied()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("at least one state");
        if !total.is_finite() {
            return Err(StegoError::EmbeddingFailure(
                "no stego sequence satisfies the syndrome without a wet change".into(),
            ));
        }

        let mask = states - 1;
        let mut stego = vec![0u8; self.n];
        for i in (0..self.m).rev() {
            state = ((state << 1) | usize::from(message[i] & 1)) & mask;
            let range = self.block_range(i);
            for (j, idx) in range.enumerate().rev() {
                let took = (path[idx * words + state / 64] >> (state % 64)) & 1 == 1;
                stego[idx] = u8::from(took);
                if took {
                    state ^= self.columns[j] as usize;
                }
            }
        }
        debug_assert_eq!(state, 0);
        Ok((stego, total))
    }
}

/// Deterministic `Ĥ` for height `h` and width `w`. Every column has its top
/// and bottom rows set so each message bit is reachable from every column
/// and every column influences the full constraint window.
pub fn hhat_columns(h: usize, w: usize) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5354_4300 ^ ((h as u64) << 32) ^ w as u64);
    let mask = if h == 32 { u32::MAX } else { (1u32 << h) - 1 };
    (0..w).map(|_| (rng.gen::<u32>() & mask) | 1 | (1 << (h - 1))).collect()
}
